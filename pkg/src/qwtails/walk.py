"""Open-system dynamics on the internal graph and its convergence.

Arc fields (amplitudes ``psi_t``, the inflow) and vertex measures are plain
1-D float arrays indexed by the graph's arc order and by vertex respectively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
import math
from typing import NamedTuple

import numpy as np

from .graph import Digraph, is_regular
from .operators import build_E_GON, build_L, truncated_evolution

__all__ = [
    "DimensionError",
    "NoStationaryStateError",
    "NotConvergedError",
    "Trajectory",
    "SpeedBounds",
    "uniform_inflow",
    "step",
    "evolve",
    "closed_form_psi",
    "stationary_state",
    "vertex_measure",
    "comfortability",
    "qtv",
    "qtv_bruteforce",
    "dt_closed_form",
    "distance_sequence",
    "first_below",
    "convergence_speed",
    "speed_bounds",
    "psi_via_gon",
    "DEFAULT_T_MAX",
]

DEFAULT_T_MAX = 10_000
BRUTEFORCE_MAX_VERTICES = 20


class DimensionError(ValueError):
    pass


class NoStationaryStateError(RuntimeError):
    pass


class NotConvergedError(RuntimeError):
    pass


@lru_cache(maxsize=64)
def _evolution(graph: Digraph) -> np.ndarray:
    e = truncated_evolution(graph)
    e.setflags(write=False)
    return e


def _arc_field(graph: Digraph, values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (graph.num_arcs,):
        raise DimensionError(f"{name} has shape {arr.shape}, expected ({graph.num_arcs},)")
    return arr


def uniform_inflow(graph: Digraph) -> np.ndarray:
    """Amplitude entering each internal arc per step from the tails.

    The unit inflow on the tail arc into ``o(a)`` is transmitted to ``a`` with
    amplitude ``2/d~(o(a))``; on a kappa-regular graph that is ``2/(kappa+1)``
    everywhere.
    """
    return 2.0 / graph.augmented_degrees[graph.origins]


def step(graph: Digraph, psi, rho) -> np.ndarray:
    psi = _arc_field(graph, psi, "psi")
    rho = _arc_field(graph, rho, "rho")
    return _evolution(graph) @ psi + rho


@dataclass
class Trajectory:
    """States ``psi_0 .. psi_T`` and the sup-norm increments between them."""

    graph: Digraph
    states: list[np.ndarray] = field(default_factory=list)
    residuals: list[float] = field(default_factory=list)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.states)


def evolve(
    graph: Digraph,
    steps: int,
    stop_tol: float | None = None,
    evolution: np.ndarray | None = None,
) -> Trajectory:
    """Iterate from ``psi_0 = 0``.

    If ``stop_tol`` is given, stop early once an increment drops below it.
    ``evolution`` replaces the truncated evolution matrix (fault injection).
    """
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    e = _evolution(graph) if evolution is None else evolution
    rho = uniform_inflow(graph)
    psi = np.zeros(graph.num_arcs)
    traj = Trajectory(graph, [psi])
    for _ in range(steps):
        nxt = e @ psi + rho
        traj.residuals.append(float(np.max(np.abs(nxt - psi), initial=0.0)))
        traj.states.append(nxt)
        psi = nxt
        if stop_tol is not None and traj.residuals[-1] < stop_tol:
            break
    return traj


def closed_form_psi(kappa: int, t: int) -> float:
    """Common arc amplitude ``1 - ((kappa-1)/(kappa+1))^t`` on a regular graph."""
    if kappa < 2:
        raise ValueError(f"closed form needs kappa >= 2, got {kappa}")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return 1.0 - ((kappa - 1) / (kappa + 1)) ** t


def stationary_state(graph: Digraph, evolution: np.ndarray | None = None) -> np.ndarray:
    """Fixed point of :func:`step`.

    ``I - E`` is singular whenever the graph has a cycle: alternating flows
    around a cycle never reach a tail. The inflow is orthogonal to those
    modes, so the minimum-norm least-squares solution is the limit of the
    iteration.
    """
    e = _evolution(graph) if evolution is None else evolution
    a = np.eye(graph.num_arcs) - e
    rho = uniform_inflow(graph)
    psi, *_ = np.linalg.lstsq(a, rho, rcond=1e-10)
    residual = float(np.max(np.abs(a @ psi - rho), initial=0.0))
    if residual > 1e-9:
        raise NoStationaryStateError(f"no stationary state (residual {residual:.3e})")
    return psi


def vertex_measure(graph: Digraph, psi) -> np.ndarray:
    """``mu(u)``: squared amplitude summed over arcs entering ``u``."""
    psi = _arc_field(graph, psi, "psi")
    return np.bincount(graph.terminals, weights=psi * psi, minlength=graph.num_vertices)


def comfortability(mu) -> float:
    return float(np.sum(mu))


def qtv(mu, nu) -> float:
    """Quantum total variance via the half-sum identity."""
    mu = np.asarray(mu, dtype=float)
    nu = np.asarray(nu, dtype=float)
    if mu.shape != nu.shape:
        raise DimensionError("measures live on different vertex sets")
    return 0.5 * (float(np.sum(np.abs(mu - nu))) + abs(comfortability(mu) - comfortability(nu)))


def qtv_bruteforce(mu, nu, max_vertices: int = BRUTEFORCE_MAX_VERTICES) -> float:
    """``max |mu(V') - nu(V')|`` over all ``2^N`` vertex subsets."""
    diff = np.asarray(mu, dtype=float) - np.asarray(nu, dtype=float)
    n = diff.size
    if n > max_vertices:
        raise ValueError(f"subset enumeration limited to N <= {max_vertices}, got {n}")
    bits = np.arange(n)
    best = 0.0
    chunk = 1 << 14
    for start in range(0, 1 << n, chunk):
        masks = np.arange(start, min(start + chunk, 1 << n))
        members = (masks[:, None] >> bits) & 1
        best = max(best, float(np.max(np.abs(members @ diff))))
    return best


def dt_closed_form(kappa: int, n: int, t: int) -> float:
    r = ((kappa - 1) / (kappa + 1)) ** t
    return r * (2.0 - r) * kappa * n


def distance_sequence(
    graph: Digraph,
    t_max: int = DEFAULT_T_MAX,
    stop_below: float | None = None,
    min_length: int = 0,
    evolution: np.ndarray | None = None,
) -> np.ndarray:
    """Simulated ``d_t = qtv(mu_t, mu_inf)`` for ``t = 0, 1, ...``.

    Stops at ``t_max`` or, once ``min_length`` values exist, at the first
    ``d_t < stop_below``.
    """
    e = _evolution(graph) if evolution is None else evolution
    mu_inf = vertex_measure(graph, stationary_state(graph, e))
    rho = uniform_inflow(graph)
    psi = np.zeros(graph.num_arcs)
    out = [qtv(vertex_measure(graph, psi), mu_inf)]
    for _ in range(t_max):
        psi = e @ psi + rho
        out.append(qtv(vertex_measure(graph, psi), mu_inf))
        if stop_below is not None and out[-1] < stop_below and len(out) >= min_length:
            break
    return np.array(out)


def first_below(d: np.ndarray, theta: float) -> int | None:
    """Smallest ``t >= 1`` with ``d[t] < exp(-theta)``, if any."""
    hits = np.nonzero(d[1:] < math.exp(-theta))[0]
    return int(hits[0]) + 1 if hits.size else None


def convergence_speed(graph: Digraph, theta: float, t_max: int = DEFAULT_T_MAX) -> int:
    """``t_*(theta)``: first ``t >= 1`` with ``d_t < exp(-theta)``.

    ``d_t`` comes from simulation against the solved stationary measure, not
    from the closed form.
    """
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    d = distance_sequence(graph, t_max, stop_below=math.exp(-theta))
    t_star = first_below(d, theta)
    if t_star is None:
        raise NotConvergedError(
            f"d_t still {d[-1]:.3e} >= exp(-{theta}) after {t_max} steps"
        )
    return t_star


class SpeedBounds(NamedTuple):
    lower: float
    upper_stated: float
    upper_theta: float

    def admits(self, t_star: int) -> tuple[bool, bool]:
        """Integer forms of the real bounds: ``floor(lower)+1 <= t_star <= floor(upper_theta)+1``."""
        return (
            math.floor(self.lower) + 1 <= t_star,
            t_star <= math.floor(self.upper_theta) + 1,
        )


def speed_bounds(kappa: int, n: int, theta: float) -> SpeedBounds:
    """Bounds on ``t_*(theta)`` for a connected kappa-regular graph on ``n`` vertices.

    ``upper_stated`` omits ``theta`` as in the published statement;
    ``upper_theta`` adds it and is the form that follows from
    ``d_t < 2 kappa n ((kappa-1)/(kappa+1))^t``.
    """
    if kappa < 2:
        raise ValueError(f"bounds need kappa >= 2, got {kappa}")
    rate = math.log((kappa + 1) / (kappa - 1))
    return SpeedBounds(
        (math.log(kappa * n) + theta) / rate,
        math.log(2 * kappa * n) / rate,
        (math.log(2 * kappa * n) + theta) / rate,
    )


def psi_via_gon(graph: Digraph, t: int) -> np.ndarray:
    """``psi_t`` computed in the doubled vertex space and lifted by ``L``.

    Uses ``psi_t = L (I + E_GON + ... + E_GON^{t-1}) [0; q]`` with
    ``q = 2/sqrt(kappa+1) 1_V``; an independent route to :func:`evolve` on
    regular graphs.
    """
    kappa = is_regular(graph)
    if kappa is None:
        raise ValueError("psi_via_gon requires a regular graph")
    n = graph.num_vertices
    gon = build_E_GON(graph, kappa)
    x = np.concatenate([np.zeros(n), np.full(n, 2.0 / math.sqrt(kappa + 1))])
    acc = np.zeros(2 * n)
    for _ in range(t):
        acc += x
        x = gon @ x
    return build_L(graph, kappa) @ acc
