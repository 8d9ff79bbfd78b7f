"""Command-line entry point: ``qwtails {simulate,stationary,speed,verify}``."""

from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

from ..graph import (
    Digraph,
    build_circulant,
    build_complete,
    build_cycle,
    is_regular,
    read_edge_list,
)
from ..operators import (
    adjacency_matrix,
    build_E_GON,
    build_L,
    format_matrix,
    incidence_K,
    shift_S,
    truncated_evolution,
)
from ..walk import (
    NoStationaryStateError,
    comfortability,
    evolve,
    qtv,
    stationary_state,
    vertex_measure,
)
from .sweep import ExperimentConfig, format_csv, parse_range, run_sweep
from .verify import verify_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_NOT_CONVERGED = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_graph_spec(spec: str) -> Digraph:
    """``cycle:N``, ``complete:N``, ``circulant:N:k`` or ``file:PATH``."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "file" and rest:
            return read_edge_list(rest)
        args = [int(x) for x in rest.split(":")] if rest else []
        if kind == "cycle" and len(args) == 1:
            return build_cycle(*args)
        if kind == "complete" and len(args) == 1:
            return build_complete(*args)
        if kind == "circulant" and len(args) == 2:
            return build_circulant(*args)
    except (ValueError, OSError) as exc:
        raise UsageError(f"bad graph spec {spec!r}: {exc}") from None
    raise UsageError(f"bad graph spec {spec!r}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump_operators(graph: Digraph) -> str:
    mats = [("E_PON", truncated_evolution(graph))]
    kappa = is_regular(graph)
    if kappa is not None:
        mats += [
            ("M", adjacency_matrix(graph)),
            ("K", incidence_K(graph, kappa)),
            ("S", shift_S(graph)),
            ("L", build_L(graph, kappa)),
            ("E_GON", build_E_GON(graph, kappa)),
        ]
    parts = [f"# {name} {m.shape[0]}x{m.shape[1]}\n{format_matrix(m)}\n" for name, m in mats]
    return "".join(parts)


def cmd_simulate(args) -> int:
    graph = parse_graph_spec(args.graph)
    if args.dump_operators:
        sys.stdout.write(_dump_operators(graph))
    mu_inf = vertex_measure(graph, stationary_state(graph))
    traj = evolve(graph, args.steps)
    buf = io.StringIO()
    header = ["t", "psi_max", "psi_min", "comfortability", "d_t"]
    header += [f"mu_{u}" for u in range(graph.num_vertices)]
    buf.write(",".join(header) + "\n")
    for t, psi in enumerate(traj.states):
        mu = vertex_measure(graph, psi)
        row = [str(t)] + [
            f"{x:.12g}"
            for x in (psi.max(), psi.min(), comfortability(mu), qtv(mu, mu_inf), *mu)
        ]
        buf.write(",".join(row) + "\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_stationary(args) -> int:
    graph = parse_graph_spec(args.graph)
    psi = stationary_state(graph)
    mu = vertex_measure(graph, psi)
    lines = ["# psi_inf: origin terminal amplitude"]
    lines += [f"{o} {t} {x:.17g}" for (o, t), x in zip(graph.arcs, psi)]
    lines.append("# mu_inf: vertex measure")
    lines += [f"{u} {x:.17g}" for u, x in enumerate(mu)]
    lines.append(f"# comfortability {comfortability(mu):.17g}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_speed(args) -> int:
    try:
        config = ExperimentConfig(
            family=args.family,
            n_values=parse_range(args.n_range) if args.n_range else (),
            k_values=parse_range(args.k) if args.k else (1,),
            thetas=tuple(float(x) for x in args.theta.split(",")),
            t_max=args.tmax,
            path=args.path,
            output=args.out,
            workers=args.workers,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    records = run_sweep(config)
    _emit(format_csv(records), config.output)

    not_converged = False
    for r in records:
        if r.error is not None:
            print(f"skipped {r.graph} theta={r.theta:g}: {r.error}", file=sys.stderr)
            not_converged |= r.error.startswith("not converged")
    stated = [r for r in records if r.stated_upper_ok is False]
    if stated:
        print(
            f"theta-free upper bound exceeded in {len(stated)} of "
            f"{sum(r.stated_upper_ok is not None for r in records)} records "
            f"(e.g. N={stated[0].n} kappa={stated[0].kappa} theta={stated[0].theta:g}: "
            f"t_star={stated[0].t_star} > {stated[0].upper_stated:.4f})",
            file=sys.stderr,
        )
    return EXIT_NOT_CONVERGED if not_converged else EXIT_OK


def cmd_verify(args) -> int:
    graph = parse_graph_spec(args.graph)
    report = verify_suite(graph, seed=args.seed, label=args.graph)
    if args.json:
        sys.stdout.write(json.dumps(report.to_dict(), indent=2) + "\n")
    else:
        sys.stdout.write(report.format_text() + "\n")
    return EXIT_OK if report.ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qwtails", description="Grover walks on graphs with tails.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="per-step amplitudes, measures and distance")
    p.add_argument("--graph", required=True, help="cycle:N | complete:N | circulant:N:k | file:PATH")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--dump-operators", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("stationary", help="stationary amplitudes and measure")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_stationary)

    p = sub.add_parser("speed", help="convergence-speed sweep as CSV")
    p.add_argument("--family", required=True, choices=["cycle", "complete", "circulant", "file"])
    p.add_argument("--n-range", help="A..B or comma list")
    p.add_argument("--k", help="circulant offset(s): K, A..B or comma list")
    p.add_argument("--path", help="edge-list file for --family file")
    p.add_argument("--theta", default="0", help="comma-separated theta values")
    p.add_argument("--tmax", type=int, default=10_000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_speed)

    p = sub.add_parser("verify", help="check all operator identities on one graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "steps", 0) < 0:
        parser.error("--steps must be >= 0")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qwtails: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoStationaryStateError as exc:
        print(f"qwtails: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
