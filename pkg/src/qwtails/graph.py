"""Finite symmetric digraphs, the internal part of a graph with tails.

Every vertex carries exactly one (implicit) semi-infinite tail, so the only
trace of the tails inside this module is the augmented degree
``d~(u) = d(u) + 1``. Arcs are stored sorted by ``(origin, terminal)``; that
ordering fixes the layout of every arc-indexed vector and matrix downstream.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

__all__ = [
    "Digraph",
    "GraphError",
    "InvalidSizeError",
    "VertexRangeError",
    "SelfLoopError",
    "DuplicateEdgeError",
    "DisconnectedGraphError",
    "build_cycle",
    "build_complete",
    "build_circulant",
    "build_path",
    "build_star",
    "build_petersen",
    "build_random_tree",
    "from_edge_list",
    "is_regular",
    "parse_edge_list",
    "read_edge_list",
    "format_edge_list",
]


class GraphError(ValueError):
    """Base class for invalid graph input."""


class InvalidSizeError(GraphError):
    pass


class VertexRangeError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class DisconnectedGraphError(GraphError):
    pass


@dataclass(frozen=True)
class Digraph:
    """Connected simple symmetric digraph ``G = (V, A)``.

    Attributes
    ----------
    num_vertices : int
        ``N = |V|``; vertices are ``0 .. N-1``.
    arcs : tuple of (int, int)
        ``(origin, terminal)`` pairs, sorted lexicographically.
    inverse : tuple of int
        ``inverse[i]`` is the index of the reversed arc of ``arcs[i]``.
    degree : tuple of int
        ``degree[u]`` counts arcs terminating at ``u``.
    """

    num_vertices: int
    arcs: tuple[tuple[int, int], ...]
    inverse: tuple[int, ...]
    degree: tuple[int, ...]

    def __post_init__(self) -> None:
        n = self.num_vertices
        if n < 1:
            raise InvalidSizeError(f"graph needs at least one vertex, got {n}")
        if list(self.arcs) != sorted(self.arcs):
            raise GraphError("arcs must be sorted by (origin, terminal)")
        if len(set(self.arcs)) != len(self.arcs):
            raise DuplicateEdgeError("parallel arcs are not allowed")
        for o, t in self.arcs:
            if not (0 <= o < n and 0 <= t < n):
                raise VertexRangeError(f"arc ({o}, {t}) outside 0..{n - 1}")
            if o == t:
                raise SelfLoopError(f"self-loop at vertex {o}")
        if len(self.inverse) != len(self.arcs):
            raise GraphError("inverse map has wrong length")
        for i, j in enumerate(self.inverse):
            o, t = self.arcs[i]
            if self.arcs[j] != (t, o) or self.inverse[j] != i:
                raise GraphError(f"arc {i} has no consistent inverse")
        deg = [0] * n
        for _, t in self.arcs:
            deg[t] += 1
        if tuple(deg) != tuple(self.degree):
            raise GraphError("degree sequence does not match the arc set")
        if not _connected(n, self.arcs):
            raise DisconnectedGraphError("graph is not connected")

    @classmethod
    def from_arcs(cls, num_vertices: int, arcs: Iterable[tuple[int, int]]) -> Digraph:
        arcs = tuple(sorted((int(o), int(t)) for o, t in arcs))
        position = {a: i for i, a in enumerate(arcs)}
        try:
            inverse = tuple(position[(t, o)] for o, t in arcs)
        except KeyError as exc:
            raise GraphError(f"arc {exc.args[0][::-1]} has no inverse arc") from None
        deg = [0] * num_vertices
        for _, t in arcs:
            if 0 <= t < num_vertices:
                deg[t] += 1
        return cls(num_vertices, arcs, inverse, tuple(deg))

    @property
    def num_arcs(self) -> int:
        return len(self.arcs)

    @cached_property
    def origins(self) -> np.ndarray:
        return np.array([o for o, _ in self.arcs], dtype=np.intp)

    @cached_property
    def terminals(self) -> np.ndarray:
        return np.array([t for _, t in self.arcs], dtype=np.intp)

    @cached_property
    def inverse_index(self) -> np.ndarray:
        return np.array(self.inverse, dtype=np.intp)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array(self.degree, dtype=np.intp)

    @cached_property
    def augmented_degrees(self) -> np.ndarray:
        """``d~(u) = d(u) + 1``: each vertex has one tail attached."""
        return self.degrees + 1

    @cached_property
    def incoming(self) -> tuple[tuple[int, ...], ...]:
        """Arc indices terminating at each vertex."""
        buckets: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for i, (_, t) in enumerate(self.arcs):
            buckets[t].append(i)
        return tuple(tuple(b) for b in buckets)

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edges ``(u, v)`` with ``u < v``."""
        return [(o, t) for o, t in self.arcs if o < t]

    def __repr__(self) -> str:
        return f"Digraph(N={self.num_vertices}, |A|={self.num_arcs})"


def _connected(n: int, arcs: Sequence[tuple[int, int]]) -> bool:
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for o, t in arcs:
        nbrs[o].append(t)
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in nbrs[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == n


def from_edge_list(num_vertices: int, edges: Iterable[tuple[int, int]]) -> Digraph:
    """Build a digraph from undirected edges; each ``{u, v}`` becomes two arcs."""
    if num_vertices < 1:
        raise InvalidSizeError(f"graph needs at least one vertex, got {num_vertices}")
    seen: set[frozenset[int]] = set()
    arcs: list[tuple[int, int]] = []
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < num_vertices and 0 <= v < num_vertices):
            raise VertexRangeError(f"edge ({u}, {v}) outside 0..{num_vertices - 1}")
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}")
        key = frozenset((u, v))
        if key in seen:
            raise DuplicateEdgeError(f"edge ({u}, {v}) listed twice")
        seen.add(key)
        arcs.extend([(u, v), (v, u)])
    return Digraph.from_arcs(num_vertices, arcs)


def build_cycle(n: int) -> Digraph:
    if n < 3:
        raise InvalidSizeError(f"cycle needs N >= 3, got {n}")
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def build_complete(n: int) -> Digraph:
    if n < 2:
        raise InvalidSizeError(f"complete graph needs N >= 2, got {n}")
    return from_edge_list(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def build_circulant(n: int, k: int) -> Digraph:
    """Circulant graph: ``i ~ j`` iff ``i - j`` is in ``{±1, ..., ±k} (mod n)``.

    ``2k == n`` is rejected because the ``+k`` and ``-k`` offsets would name the
    same antipodal neighbour twice.
    """
    if n < 3:
        raise InvalidSizeError(f"circulant graph needs N >= 3, got {n}")
    if not 1 <= k <= n // 2:
        raise GraphError(f"need 1 <= k <= {n // 2}, got k={k}")
    if 2 * k == n:
        raise GraphError(f"k={k} with N={n} would create parallel arcs")
    edges = [(i, (i + s) % n) for i in range(n) for s in range(1, k + 1)]
    return from_edge_list(n, edges)


def build_path(n: int) -> Digraph:
    if n < 2:
        raise InvalidSizeError(f"path needs N >= 2, got {n}")
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def build_star(n: int) -> Digraph:
    """Star with centre 0 and ``n - 1`` leaves."""
    if n < 2:
        raise InvalidSizeError(f"star needs N >= 2, got {n}")
    return from_edge_list(n, [(0, i) for i in range(1, n)])


def build_petersen() -> Digraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return from_edge_list(10, outer + spokes + inner)


def build_random_tree(n: int, seed: int | None = None) -> Digraph:
    """Random recursive tree: vertex ``i`` attaches to a uniform earlier vertex."""
    if n < 2:
        raise InvalidSizeError(f"tree needs N >= 2, got {n}")
    rng = np.random.default_rng(seed)
    return from_edge_list(n, [(int(rng.integers(i)), i) for i in range(1, n)])


def is_regular(graph: Digraph) -> int | None:
    """Common degree of a regular graph, or ``None``."""
    first = graph.degree[0]
    return first if all(d == first for d in graph.degree) else None


def parse_edge_list(text: str) -> Digraph:
    """Parse ``N M`` followed by ``M`` lines ``u v``; ``#`` starts a comment line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphError("empty edge list")
    try:
        n, m = (int(x) for x in lines[0].split())
        edges = [tuple(int(x) for x in ln.split()) for ln in lines[1:]]
    except ValueError:
        raise GraphError("malformed edge list") from None
    if any(len(e) != 2 for e in edges):
        raise GraphError("each edge line needs exactly two vertex indices")
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}")
    return from_edge_list(n, edges)


def read_edge_list(path: str | Path) -> Digraph:
    return parse_edge_list(Path(path).read_text())


def format_edge_list(graph: Digraph) -> str:
    edges = graph.edges()
    rows = [f"{graph.num_vertices} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(rows) + "\n"
