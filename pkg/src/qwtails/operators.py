"""Linear operators of the Grover walk with tails.

Arc-indexed matrices follow the arc order of :class:`~qwtails.graph.Digraph`.
Doubled vertex space ``R^{2N}`` is laid out as ``[block 0 | block 1]`` so that
``kron(two_by_two, vertex_matrix)`` acts on it directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .graph import Digraph, is_regular

__all__ = [
    "RegularityError",
    "SymmetryError",
    "EigenSolverError",
    "SpectralDecomposition",
    "grover_coin",
    "adjacency_matrix",
    "incidence_K",
    "shift_S",
    "truncated_evolution",
    "build_L",
    "build_E_GON",
    "jacobi_eigh",
    "symmetric_eigendecomposition",
    "lambda_block",
    "lambda1_projections",
    "format_matrix",
]


class RegularityError(ValueError):
    """Raised when an operator is only defined for regular graphs."""


class SymmetryError(ValueError):
    pass


class EigenSolverError(RuntimeError):
    pass


def grover_coin(d: int) -> np.ndarray:
    """``(2/d) J_d - I_d``."""
    if d < 1:
        raise ValueError(f"coin dimension must be >= 1, got {d}")
    return np.full((d, d), 2.0 / d) - np.eye(d)


def adjacency_matrix(graph: Digraph) -> np.ndarray:
    m = np.zeros((graph.num_vertices, graph.num_vertices))
    m[graph.terminals, graph.origins] = 1.0
    return m


def _regular_degree(graph: Digraph, kappa: int | None) -> int:
    k = is_regular(graph)
    if k is None:
        raise RegularityError("operator requires a regular graph")
    if kappa is not None and kappa != k:
        raise RegularityError(f"graph is {k}-regular, not {kappa}-regular")
    return k


def incidence_K(graph: Digraph, kappa: int | None = None) -> np.ndarray:
    """Weighted incidence ``K[u, a] = 1/sqrt(kappa+1)`` when ``t(a) = u``."""
    k = _regular_degree(graph, kappa)
    out = np.zeros((graph.num_vertices, graph.num_arcs))
    out[graph.terminals, np.arange(graph.num_arcs)] = 1.0 / math.sqrt(k + 1)
    return out


def shift_S(graph: Digraph) -> np.ndarray:
    """Arc reversal, ``(S psi)(a) = psi(a_bar)``."""
    s = np.zeros((graph.num_arcs, graph.num_arcs))
    s[np.arange(graph.num_arcs), graph.inverse_index] = 1.0
    return s


def truncated_evolution(graph: Digraph) -> np.ndarray:
    """One step of the walk restricted to internal arcs.

    Built from the local scattering rule: an arc ``a`` entering ``u`` feeds
    every arc leaving ``u`` with ``2/d~(u)``, minus one on its own reversal.
    The tail arc at ``u`` is part of the coin dimension but has no row or
    column here.
    """
    e = np.zeros((graph.num_arcs, graph.num_arcs))
    inv = graph.inverse_index
    for u, into in enumerate(graph.incoming):
        if not into:
            continue
        cols = np.asarray(into, dtype=np.intp)
        e[np.ix_(inv[cols], cols)] = 2.0 / graph.augmented_degrees[u]
    idx = np.arange(graph.num_arcs)
    e[inv, idx] -= 1.0
    return e


def build_L(graph: Digraph, kappa: int | None = None) -> np.ndarray:
    """``[K* | S K*]``, shape ``(|A|, 2N)``."""
    k_adj = incidence_K(graph, kappa).T
    return np.hstack([k_adj, shift_S(graph) @ k_adj])


def build_E_GON(graph: Digraph, kappa: int | None = None) -> np.ndarray:
    k = _regular_degree(graph, kappa)
    n = graph.num_vertices
    eye = np.eye(n)
    return np.block([
        [np.zeros((n, n)), -eye],
        [(k - 1) / (k + 1) * eye, 2.0 / (k + 1) * adjacency_matrix(graph)],
    ])


def _off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def jacobi_eigh(
    a: np.ndarray, tol: float = 1e-13, max_sweeps: int = 100
) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius norm drops to
    ``tol * ||a||_F``.

    Returns
    -------
    w : ndarray, shape (n,)
        Eigenvalues in descending order.
    v : ndarray, shape (n, n)
        Orthonormal eigenvectors, ``v[:, i]`` belonging to ``w[i]``.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    v = np.eye(n)
    threshold = tol * np.linalg.norm(a)

    for _ in range(max_sweeps):
        if _off_diagonal_norm(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                h = a[q, q] - a[p, p]
                if abs(h) + 100.0 * abs(apq) == abs(h):
                    # angle too small to form theta without overflow
                    t = apq / h
                else:
                    theta = h / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                a[:, p] = c * col_p - s * a[:, q]
                a[:, q] = s * col_p + c * a[:, q]
                row_p = a[p, :].copy()
                a[p, :] = c * row_p - s * a[q, :]
                a[q, :] = s * row_p + c * a[q, :]
                a[p, q] = a[q, p] = 0.0

                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
    else:
        if _off_diagonal_norm(a) > threshold:
            raise EigenSolverError(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct eigenvalues (descending) and their orthogonal projections."""

    eigenvalues: tuple[float, ...]
    projections: tuple[np.ndarray, ...]

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(int(round(np.trace(p))) for p in self.projections)

    def reconstruct(self) -> np.ndarray:
        return sum(lam * p for lam, p in zip(self.eigenvalues, self.projections))


def symmetric_eigendecomposition(
    a: np.ndarray, group_tol: float = 1e-8
) -> SpectralDecomposition:
    """Group Jacobi eigenpairs into eigenprojections.

    Eigenvalues closer than ``group_tol * max(1, max|lambda|)`` are merged;
    the group's value is their mean.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if a.size and np.max(np.abs(a - a.T)) > 1e-12:
        raise SymmetryError("matrix is not symmetric within 1e-12")

    w, v = jacobi_eigh(a)
    scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
    groups: list[list[int]] = []
    for i in range(len(w)):
        if groups and w[groups[-1][-1]] - w[i] <= group_tol * scale:
            groups[-1].append(i)
        else:
            groups.append([i])

    values, projections = [], []
    for g in groups:
        vecs = v[:, g]
        p = vecs @ vecs.T
        values.append(float(np.mean(w[g])))
        projections.append(0.5 * (p + p.T))
    return SpectralDecomposition(tuple(values), tuple(projections))


def lambda_block(kappa: int, lam: float) -> np.ndarray:
    """The 2x2 factor attached to eigenvalue ``lam`` of the adjacency matrix."""
    if kappa < 1:
        raise ValueError(f"kappa must be >= 1, got {kappa}")
    return np.array([
        [0.0, -1.0],
        [(kappa - 1) / (kappa + 1), 2.0 * lam / (kappa + 1)],
    ])


def lambda1_projections(kappa: int, exact: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Eigenprojections of the Perron block for eigenvalues 1 and (k-1)/(k+1).

    With ``exact=True`` the entries are :class:`fractions.Fraction`.
    """
    if kappa < 2:
        raise ValueError("kappa=1 is degenerate: the second eigenvalue vanishes")
    half = Fraction(1, 2) if exact else 0.5
    km, kp = kappa - 1, kappa + 1
    q1 = np.array([[-km * half, -kp * half], [km * half, kp * half]], dtype=object if exact else float)
    q2 = np.array([[kp * half, kp * half], [-km * half, -km * half]], dtype=object if exact else float)
    return q1, q2


def format_matrix(m: np.ndarray) -> str:
    """Rows of space-separated decimals, 17 significant digits (round-trips)."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    return "\n".join(" ".join(f"{x:.17g}" for x in row) for row in m)
