import math
from fractions import Fraction

import numpy as np
import pytest

from qwtails.graph import (
    build_complete,
    build_cycle,
    build_path,
    build_petersen,
    build_random_tree,
    build_star,
)
from qwtails.walk import (
    DimensionError,
    NotConvergedError,
    closed_form_psi,
    comfortability,
    convergence_speed,
    distance_sequence,
    dt_closed_form,
    evolve,
    psi_via_gon,
    qtv,
    speed_bounds,
    stationary_state,
    step,
    uniform_inflow,
    vertex_measure,
)

from oracles import full_walk_internal_states


def exact_dt(kappa, n, t):
    r = Fraction(kappa - 1, kappa + 1) ** t
    return r * (2 - r) * kappa * n


def test_uniform_inflow_regular():
    np.testing.assert_allclose(uniform_inflow(build_cycle(6)), 2 / 3)
    np.testing.assert_allclose(uniform_inflow(build_complete(5)), 2 / 5)


def test_uniform_inflow_path():
    g = build_path(4)
    rho = uniform_inflow(g)
    expected = [1.0 if g.degree[o] == 1 else 2 / 3 for o, _ in g.arcs]
    np.testing.assert_allclose(rho, expected)
    assert set(np.round(rho, 12)) == {1.0, round(2 / 3, 12)}


@pytest.mark.parametrize(
    "g", [build_path(4), build_star(5), build_cycle(5), build_petersen(), build_random_tree(9, seed=1)], ids=repr
)
def test_evolve_matches_explicit_tail_simulation(g):
    steps = 12
    ref = full_walk_internal_states(g.num_vertices, g.edges(), steps)
    traj = evolve(g, steps)
    for t in range(steps + 1):
        expected = np.array([ref[t][a] for a in g.arcs])
        assert np.max(np.abs(traj.states[t] - expected), initial=0.0) < 1e-12


def test_step_examples():
    g = build_cycle(6)
    rho = uniform_inflow(g)
    np.testing.assert_array_equal(step(g, np.zeros(12), rho), rho)
    np.testing.assert_allclose(step(g, step(g, np.zeros(12), rho), rho), 8 / 9, atol=1e-15)
    psi_inf = stationary_state(g)
    assert np.max(np.abs(step(g, psi_inf, rho) - psi_inf)) < 1e-10
    with pytest.raises(DimensionError):
        step(g, np.zeros(5), rho)


def test_evolve_basics():
    assert len(evolve(build_cycle(6), 0)) == 1
    assert not evolve(build_cycle(6), 0).final.any()
    k5 = evolve(build_complete(5), 3)
    np.testing.assert_allclose(k5.final, 0.784, atol=1e-14)


def test_residuals_decrease_on_cycle():
    res = evolve(build_cycle(6), 30).residuals
    assert all(b < a for a, b in zip(res, res[1:]))


def test_closed_form_psi_values():
    assert closed_form_psi(2, 0) == 0
    assert closed_form_psi(2, 1) == pytest.approx(2 / 3)
    assert closed_form_psi(4, 2) == pytest.approx(16 / 25)
    np.testing.assert_allclose(evolve(build_complete(5), 2).final, 16 / 25, atol=1e-14)
    with pytest.raises(ValueError):
        closed_form_psi(1, 3)


def test_closed_form_trajectory(regular_graph):
    kappa = regular_graph.degree[0]
    traj = evolve(regular_graph, 50)
    for t, psi in enumerate(traj.states):
        assert np.max(np.abs(psi - closed_form_psi(kappa, t))) < 1e-10


def test_psi_via_gon_matches_evolve(regular_graph):
    traj = evolve(regular_graph, 15)
    for t in (0, 1, 4, 15):
        assert np.max(np.abs(psi_via_gon(regular_graph, t) - traj.states[t]), initial=0.0) < 1e-12


def test_stationary_state_regular(regular_graph):
    assert np.max(np.abs(stationary_state(regular_graph) - 1.0)) < 1e-10
    np.testing.assert_allclose(stationary_state(build_cycle(3)), np.ones(6), atol=1e-10)


@pytest.mark.parametrize("g", [build_path(4), build_star(5), build_random_tree(12, seed=3)], ids=repr)
def test_stationary_state_trees(g):
    psi = stationary_state(g)
    assert np.max(np.abs(step(g, psi, uniform_inflow(g)) - psi)) < 1e-10
    traj = evolve(g, 10_000, stop_tol=1e-14)
    assert np.max(np.abs(traj.final - psi)) < 1e-10


def test_vertex_measure_and_comfortability():
    g = build_cycle(6)
    np.testing.assert_allclose(vertex_measure(g, np.ones(12)), 2.0)
    assert not vertex_measure(g, np.zeros(12)).any()
    mu1 = vertex_measure(g, evolve(g, 1).final)
    np.testing.assert_allclose(mu1, 8 / 9)
    assert comfortability(mu1) == pytest.approx(16 / 3)
    assert comfortability(np.zeros(4)) == 0
    p = build_petersen()
    assert comfortability(vertex_measure(p, stationary_state(p))) == pytest.approx(30)


def test_qtv_cycle_example():
    g = build_cycle(6)
    mu_inf = vertex_measure(g, stationary_state(g))
    mu1 = vertex_measure(g, evolve(g, 1).final)
    assert qtv(mu_inf, mu1) == pytest.approx(20 / 3, abs=1e-12)
    assert qtv(mu1, mu1) == 0


def test_dt_closed_form_values():
    assert dt_closed_form(2, 6, 0) == 12
    assert dt_closed_form(2, 6, 1) == pytest.approx(20 / 3)
    assert dt_closed_form(2, 6, 2) == pytest.approx(float(exact_dt(2, 6, 2)))
    assert float(exact_dt(2, 6, 2)) == pytest.approx(204 / 81)
    for kappa in (2, 4, 9):
        t = 30 * kappa + 1
        assert dt_closed_form(kappa, 10, t) < 1e-12 * kappa * 10


def test_simulated_distance_matches_closed_form(regular_graph):
    g = regular_graph
    kappa = g.degree[0]
    d = distance_sequence(g, 50)
    for t in range(51):
        assert abs(d[t] - dt_closed_form(kappa, g.num_vertices, t)) < 1e-9


def test_convergence_speed_examples():
    # frozen from exact rational evaluation of the closed form
    first = lambda kappa, n: next(t for t in range(1, 1000) if exact_dt(kappa, n, t) < 1)
    assert first(2, 6) == 3
    assert first(4, 5) == 8
    assert convergence_speed(build_cycle(6), 0) == 3
    assert convergence_speed(build_complete(5), 0) == 8


def test_convergence_speed_budget():
    with pytest.raises(NotConvergedError):
        convergence_speed(build_complete(6), 5.0, t_max=3)
    with pytest.raises(ValueError):
        convergence_speed(build_cycle(6), -1.0)


def test_convergence_speed_linear_in_theta():
    g = build_cycle(6)
    t0, t20 = convergence_speed(g, 0.0), convergence_speed(g, 20.0)
    assert (t20 - t0) / 20 == pytest.approx(1 / math.log(3), abs=2 / 20)


def test_speed_bounds():
    b = speed_bounds(2, 6, 0)
    assert b.lower == pytest.approx(math.log(12) / math.log(3))
    assert b.upper_stated == pytest.approx(math.log(24) / math.log(3))
    assert (round(b.lower, 4), round(b.upper_stated, 4)) == (2.2619, 2.8928)
    assert b.upper_theta == b.upper_stated
    for n in (3, 10, 100):
        b = speed_bounds(2, n, 0)
        assert b.upper_stated - b.lower == pytest.approx(math.log(2) / math.log(3))
    lowers = [speed_bounds(k, 12, 1.0).lower for k in range(2, 12)]
    assert lowers == sorted(lowers)
    assert speed_bounds(2, 6, 0).admits(3) == (True, True)
