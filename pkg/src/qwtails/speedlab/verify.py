"""Numerical checks of every operator identity and closed form on one graph."""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from ..graph import Digraph, is_regular
from ..operators import (
    adjacency_matrix,
    build_E_GON,
    build_L,
    incidence_K,
    lambda1_projections,
    lambda_block,
    shift_S,
    symmetric_eigendecomposition,
    truncated_evolution,
)
from ..walk import (
    NoStationaryStateError,
    closed_form_psi,
    distance_sequence,
    dt_closed_form,
    evolve,
    qtv,
    qtv_bruteforce,
    stationary_state,
    uniform_inflow,
)

__all__ = ["Check", "VerifyReport", "verify_suite"]

EXACT_TOL = 1e-12
SPECTRAL_TOL = 1e-8
TRAJECTORY_TOL = 1e-10
DISTANCE_TOL = 1e-9
HORIZON = 50


@dataclass
class Check:
    name: str
    passed: bool | None
    max_error: float | None
    tolerance: float | None = None

    @property
    def skipped(self) -> bool:
        return self.passed is None


@dataclass
class VerifyReport:
    graph: str
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "graph": self.graph,
            "checks": [
                {"name": c.name, "passed": c.passed, "max_error": c.max_error}
                for c in self.checks
            ],
        }

    def format_text(self) -> str:
        lines = [f"graph: {self.graph}"]
        for c in self.checks:
            if c.skipped:
                lines.append(f"  SKIP  {c.name}")
            else:
                status = "PASS" if c.passed else "FAIL"
                lines.append(f"  {status}  {c.name:<28s} max_error={c.max_error:.3e} (tol {c.tolerance:.0e})")
        lines.append("all checks passed" if self.ok else "verification FAILED")
        return "\n".join(lines)


def _maxabs(x) -> float:
    return float(np.max(np.abs(np.asarray(x, dtype=float)), initial=0.0))


class _Collector:
    def __init__(self, report: VerifyReport):
        self.report = report

    def add(self, name: str, error: float, tol: float) -> None:
        ok = bool(np.isfinite(error) and error < tol)
        self.report.checks.append(Check(name, ok, float(error), tol))

    def skip(self, name: str) -> None:
        self.report.checks.append(Check(name, None, None))


REGULAR_ONLY = (
    "evolution_factorization",
    "incidence_gram",
    "incidence_shift_adjacency",
    "inflow_factorization",
    "intertwining",
    "projection_algebra",
    "spectral_reconstruction",
    "perron_projection",
    "gon_block_decomposition",
    "lambda1_decomposition",
    "blowup_cancellation",
    "closed_form_trajectory",
    "gon_trajectory",
    "closed_form_distance",
)


def verify_suite(
    graph: Digraph,
    seed: int = 0,
    *,
    label: str | None = None,
    evolution: np.ndarray | None = None,
    qtv_pairs: int = 200,
) -> VerifyReport:
    """Run all identity checks; failures become report entries.

    ``evolution`` substitutes the truncated evolution matrix, which lets a
    caller confirm the checks notice a corrupted operator.
    """
    report = VerifyReport(label or repr(graph))
    col = _Collector(report)
    e = truncated_evolution(graph) if evolution is None else np.asarray(evolution, dtype=float)
    rho = uniform_inflow(graph)

    try:
        psi_inf = stationary_state(graph, e)
        col.add("fixed_point", _maxabs(e @ psi_inf + rho - psi_inf), TRAJECTORY_TOL)
    except NoStationaryStateError:
        col.add("fixed_point", math.inf, TRAJECTORY_TOL)

    n = graph.num_vertices
    if n <= 20:
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(qtv_pairs):
            mu, nu = rng.uniform(0.0, 10.0, size=(2, n))
            worst = max(worst, abs(qtv(mu, nu) - qtv_bruteforce(mu, nu)))
        col.add("qtv_identity", worst, EXACT_TOL)
    else:
        col.skip("qtv_identity")

    kappa = is_regular(graph)
    if kappa is None or kappa < 2:
        for name in REGULAR_ONLY:
            col.skip(name)
        return report

    m = adjacency_matrix(graph)
    k = incidence_K(graph, kappa)
    s = shift_S(graph)
    ell = build_L(graph, kappa)
    gon = build_E_GON(graph, kappa)
    eye_a = np.eye(graph.num_arcs)
    ones_v = np.ones(n)
    q = 2.0 / math.sqrt(kappa + 1) * ones_v
    r = (kappa - 1) / (kappa + 1)

    col.add("evolution_factorization", _maxabs(e - s @ (2 * k.T @ k - eye_a)), EXACT_TOL)
    col.add("incidence_gram", _maxabs(k @ k.T - kappa / (kappa + 1) * np.eye(n)), EXACT_TOL)
    col.add("incidence_shift_adjacency", _maxabs(k @ s @ k.T - m / (kappa + 1)), EXACT_TOL)
    col.add("inflow_factorization", _maxabs(rho - 2.0 / math.sqrt(kappa + 1) * s @ k.T @ ones_v), EXACT_TOL)
    col.add("intertwining", _maxabs(e @ ell - ell @ gon), EXACT_TOL)

    spec = symmetric_eigendecomposition(m)
    ps = spec.projections
    algebra = _maxabs(sum(ps) - np.eye(n))
    for i, p in enumerate(ps):
        algebra = max(algebra, _maxabs(p @ p - p))
        for pj in ps[i + 1:]:
            algebra = max(algebra, _maxabs(p @ pj))
    col.add("projection_algebra", algebra, SPECTRAL_TOL)
    col.add("spectral_reconstruction", _maxabs(spec.reconstruct() - m), SPECTRAL_TOL)

    perron = max(
        abs(spec.eigenvalues[0] - kappa),
        abs(spec.multiplicities[0] - 1),
        _maxabs(ps[0] @ q - q),
        *(_maxabs(p @ q) for p in ps[1:]),
    )
    col.add("perron_projection", perron, SPECTRAL_TOL)

    recon = sum(np.kron(lambda_block(kappa, lam), p) for lam, p in zip(spec.eigenvalues, ps))
    col.add("gon_block_decomposition", _maxabs(recon - gon), SPECTRAL_TOL)

    q1, q2 = lambda1_projections(kappa)
    lam1 = lambda_block(kappa, kappa)
    eye2 = np.eye(2)
    two_by_two = max(
        _maxabs(lam1 - (q1 + r * q2)),
        _maxabs(q1 + q2 - eye2),
        _maxabs(q1 @ q2),
        _maxabs(q2 @ q1),
        _maxabs(q1 @ q1 - q1),
        _maxabs(q2 @ q2 - q2),
    )
    col.add("lambda1_decomposition", two_by_two, EXACT_TOL)

    q1_exact, _ = lambda1_projections(kappa, exact=True)
    col.add("blowup_cancellation", abs(float(q1_exact[0, 1] + q1_exact[1, 1])), EXACT_TOL)

    traj = evolve(graph, HORIZON, evolution=e)
    col.add(
        "closed_form_trajectory",
        max(_maxabs(psi - closed_form_psi(kappa, t)) for t, psi in enumerate(traj.states)),
        TRAJECTORY_TOL,
    )

    # lift through the doubled space step by step, independent of the arc iteration
    x = np.concatenate([np.zeros(n), q])
    acc = np.zeros(2 * n)
    worst = 0.0
    for t in range(1, HORIZON + 1):
        acc += x
        x = gon @ x
        worst = max(worst, _maxabs(ell @ acc - traj.states[t]))
    col.add("gon_trajectory", worst, TRAJECTORY_TOL)

    try:
        d = distance_sequence(graph, HORIZON, evolution=e)
        err = max(abs(d[t] - dt_closed_form(kappa, n, t)) for t in range(len(d)))
    except NoStationaryStateError:
        err = math.inf
    col.add("closed_form_distance", err, DISTANCE_TOL)
    return report
