"""Convergence-speed sweeps over graph families."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import io
import math

from ..graph import (
    Digraph,
    GraphError,
    build_circulant,
    build_complete,
    build_cycle,
    is_regular,
    read_edge_list,
)
from ..walk import (
    DEFAULT_T_MAX,
    NoStationaryStateError,
    distance_sequence,
    first_below,
    speed_bounds,
)

__all__ = [
    "FAMILIES",
    "CSV_HEADER",
    "ExperimentConfig",
    "SpeedRecord",
    "run_sweep",
    "format_csv",
    "parse_range",
]

FAMILIES = ("cycle", "complete", "circulant", "file")
CSV_HEADER = "N,kappa,theta,t_star,lower,upper_stated,upper_theta,lower_ok,upper_ok"
D_HEAD = 10


def parse_range(text: str) -> tuple[int, ...]:
    """``"6..30"`` (inclusive), ``"6,8,10"`` or a single integer."""
    text = text.strip()
    if ".." in text:
        lo, hi = (int(x) for x in text.split("..", 1))
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return tuple(range(lo, hi + 1))
    return tuple(int(x) for x in text.split(",") if x.strip())


@dataclass(frozen=True)
class ExperimentConfig:
    family: str
    n_values: tuple[int, ...] = ()
    k_values: tuple[int, ...] = (1,)
    thetas: tuple[float, ...] = (0.0,)
    t_max: int = DEFAULT_T_MAX
    path: str | None = None
    output: str | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.family == "file":
            if not self.path:
                raise ValueError("family 'file' needs an edge-list path")
        elif not self.n_values:
            raise ValueError("size range is empty")
        if self.family == "circulant" and not self.k_values:
            raise ValueError("k range is empty")
        if not self.thetas:
            raise ValueError("theta list is empty")
        if any(th < 0 for th in self.thetas):
            raise ValueError("theta must be >= 0")
        if self.t_max < 1:
            raise ValueError("t_max must be >= 1")

    def graph_items(self) -> list[tuple]:
        """Graph descriptors in sweep order."""
        if self.family == "file":
            return [("file", self.path)]
        if self.family == "circulant":
            return [("circulant", n, k) for n in self.n_values for k in self.k_values]
        return [(self.family, n) for n in self.n_values]


def _build(item: tuple) -> Digraph:
    kind, *args = item
    if kind == "cycle":
        return build_cycle(*args)
    if kind == "complete":
        return build_complete(*args)
    if kind == "circulant":
        return build_circulant(*args)
    return read_edge_list(*args)


@dataclass
class SpeedRecord:
    n: int
    kappa: int | None
    theta: float
    t_star: int | None = None
    lower: float | None = None
    upper_stated: float | None = None
    upper_theta: float | None = None
    d_head: tuple[float, ...] = ()
    bounds_ok: tuple[bool, bool] | None = None
    graph: str = ""
    error: str | None = None

    @property
    def stated_upper_ok(self) -> bool | None:
        """Whether ``t_star`` respects the theta-free real upper bound."""
        if self.t_star is None or self.upper_stated is None:
            return None
        return self.t_star <= self.upper_stated


def _label(item: tuple) -> str:
    return ":".join(str(x) for x in item)


def _records_for(item: tuple, thetas: tuple[float, ...], t_max: int) -> list[SpeedRecord]:
    label = _label(item)
    expected_n = item[1] if item[0] != "file" else 0
    expected_kappa = 2 * item[2] if item[0] == "circulant" else None
    try:
        graph = _build(item)
    except (GraphError, OSError) as exc:
        return [SpeedRecord(expected_n, expected_kappa, th, graph=label, error=str(exc)) for th in thetas]

    n, kappa = graph.num_vertices, is_regular(graph)
    try:
        d = distance_sequence(
            graph, t_max, stop_below=math.exp(-max(thetas)), min_length=D_HEAD
        )
    except NoStationaryStateError as exc:
        return [SpeedRecord(n, kappa, th, graph=label, error=str(exc)) for th in thetas]

    records = []
    for th in thetas:
        rec = SpeedRecord(n, kappa, th, graph=label, d_head=tuple(float(x) for x in d[:D_HEAD]))
        rec.t_star = first_below(d, th)
        if rec.t_star is None:
            rec.error = f"not converged within {t_max} steps"
        if kappa is not None and kappa >= 2:
            b = speed_bounds(kappa, n, th)
            rec.lower, rec.upper_stated, rec.upper_theta = b
            if rec.t_star is not None:
                rec.bounds_ok = b.admits(rec.t_star)
        records.append(rec)
    return records


def run_sweep(config: ExperimentConfig) -> list[SpeedRecord]:
    """One record per (graph, theta), in config order."""
    items = config.graph_items()
    args = (config.thetas, config.t_max)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunks = list(pool.map(_records_for, items, *([a] * len(items) for a in args)))
    else:
        chunks = [_records_for(item, *args) for item in items]
    return [rec for chunk in chunks for rec in chunk]


def _num(x: float | None) -> str:
    return "" if x is None else f"{x:.12g}"


def _flag(x: bool | None) -> str:
    return "" if x is None else ("true" if x else "false")


def format_csv(records: list[SpeedRecord]) -> str:
    """Speed CSV; records carrying an error are left out."""
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in records:
        if r.error is not None:
            continue
        lower_ok, upper_ok = r.bounds_ok if r.bounds_ok else (None, None)
        row = [
            str(r.n),
            "" if r.kappa is None else str(r.kappa),
            _num(r.theta),
            str(r.t_star),
            _num(r.lower),
            _num(r.upper_stated),
            _num(r.upper_theta),
            _flag(lower_ok),
            _flag(upper_ok),
        ]
        buf.write(",".join(row) + "\n")
    return buf.getvalue()
