"""Grover quantum walks on finite graphs with tails.

The walk is simulated on the internal graph only: tails enter through the
augmented degree ``d(u) + 1`` and a constant inflow on every arc.
"""

from .graph import (
    Digraph,
    build_circulant,
    build_complete,
    build_cycle,
    build_path,
    build_petersen,
    build_random_tree,
    build_star,
    from_edge_list,
    is_regular,
)
from .walk import (
    closed_form_psi,
    convergence_speed,
    dt_closed_form,
    evolve,
    qtv,
    speed_bounds,
    stationary_state,
    uniform_inflow,
    vertex_measure,
)

__version__ = "0.1.0"
