"""Command-line interface: ``lpalgebra {seed,mutate,explore,verify,export}``."""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .explorer import (
    ALL_CHECKS,
    DEFAULT_MAX_SEEDS,
    ExchangeGraph,
    ExplorationError,
    LabelingError,
    explore,
    label_by_sequences,
    verify_suite,
)
from .graphs import ActivationSequence, Digraph, GraphError, initial_seed
from .poly import PolynomialError
from .seed import Seed, SeedError, mutate, seed_to_dict, seed_to_json


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 and a usage dump; keep the one-line contract instead
    def error(self, message):
        raise UsageError(message)


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", metavar="FILE", help='digraph JSON {"n": int, "edges": [[i, j], ...]}')
    src.add_argument("--complete", metavar="N", type=int, help="use the complete digraph on N vertices")
    p.add_argument("--kind", choices=("linear", "binomial"), default="binomial")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lpalgebra", description="Laurent phenomenon algebras of digraphs")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("seed", help="print the initial seed of a digraph")
    _add_source(p)
    p.add_argument("--pretty", action="store_true", help="human-readable table instead of JSON")

    p = sub.add_parser("mutate", help="mutate the initial seed and print the result")
    _add_source(p)
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--sequence", metavar="I,J,...", help="mutation directions, applied left to right")
    how.add_argument("--activation", metavar="I,J,...", help="activation sequence (distinct entries)")
    p.add_argument("--pretty", action="store_true")

    p = sub.add_parser("explore", help="build the exchange graph")
    _add_source(p)
    p.add_argument("--out", metavar="FILE", help="output file; format from the extension unless --format")
    p.add_argument("--format", choices=("dot", "json"))
    p.add_argument("--max-seeds", type=int, default=DEFAULT_MAX_SEEDS)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-seeds", action="store_true", help="omit seeds from JSON output")
    p.add_argument("--pretty", action="store_true")

    p = sub.add_parser("verify", help="run the identity and graph checks on K_n")
    p.add_argument("--complete", metavar="N", type=int, required=True)
    p.add_argument("--checks", default=",".join(ALL_CHECKS), help=f"comma list from {','.join(ALL_CHECKS)}")
    p.add_argument("--max-length", type=int, help="only sequences up to this length for per-sequence checks")
    p.add_argument("--max-seeds", type=int, default=DEFAULT_MAX_SEEDS)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--pretty", action="store_true", help="also list every failing case")

    p = sub.add_parser("export", help="convert stored graph JSON to DOT")
    p.add_argument("--in", dest="infile", metavar="FILE", required=True)
    p.add_argument("--out", metavar="FILE")
    return parser


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _write(path: Optional[str], text: str, out) -> None:
    if path is None:
        out.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _digraph(args) -> Digraph:
    if args.graph is not None:
        try:
            return Digraph.from_json(_read(args.graph))
        except GraphError as exc:
            raise UsageError(f"{args.graph}: {exc}") from None
    if args.complete < 1:
        raise UsageError(f"--complete must be positive, got {args.complete}")
    return Digraph.complete(args.complete)


def _directions(text: str, n: int, flag: str) -> List[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"{flag} {text!r}: expected comma-separated integers") from None
    for d in out:
        if not 1 <= d <= n:
            raise UsageError(f"{flag} {text!r}: direction {d} outside [1,{n}]")
    return out


def _format_seed(seed: Seed, pretty: bool) -> str:
    if not pretty:
        return seed_to_json(seed) + "\n"
    d = seed_to_dict(seed)
    lines = [f"rank {d['rank']}"]
    for p, slot in enumerate(d["slots"], 1):
        lines.append(f"X{p}\t{slot['ambient']}\t{slot['exchange']}")
    return "\n".join(lines) + "\n"


def _cmd_seed(args, out, err) -> int:
    out.write(_format_seed(initial_seed(_digraph(args), args.kind), args.pretty))
    return 0


def _cmd_mutate(args, out, err) -> int:
    g = _digraph(args)
    if args.activation is not None:
        try:
            path = list(ActivationSequence.parse(args.activation, g.n))
        except GraphError as exc:
            raise UsageError(f"--activation {args.activation!r}: {exc}") from None
    else:
        path = _directions(args.sequence, g.n, "--sequence")
    seed = initial_seed(g, args.kind)
    for d in path:
        seed = mutate(seed, d)
    out.write(_format_seed(seed, args.pretty))
    return 0


def _cmd_explore(args, out, err) -> int:
    g = _digraph(args)
    if args.max_seeds < 1:
        raise UsageError("--max-seeds must be positive")
    graph = explore(initial_seed(g, args.kind), max_seeds=args.max_seeds, threads=max(1, args.threads))
    labels = None
    if args.complete is not None and not graph.truncated:
        try:
            labels = label_by_sequences(graph)
        except LabelingError as exc:
            err.write(f"labeling failed: {exc}\n")
    fmt = args.format or ("json" if args.out and args.out.endswith(".json") else "dot")
    if fmt == "dot":
        text = graph.to_dot(labels)
    else:
        text = graph.to_json(labels, include_seeds=not args.no_seeds, pretty=args.pretty) + "\n"
    _write(args.out, text, out)
    note = ", truncated" if graph.truncated else ""
    err.write(f"{len(graph)} seeds, {len(graph.edges())} edges{note}\n")
    return 1 if graph.truncated else 0


def _cmd_verify(args, out, err) -> int:
    if args.complete < 1:
        raise UsageError(f"--complete must be positive, got {args.complete}")
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    for c in checks:
        if c not in ALL_CHECKS:
            raise UsageError(f"--checks: unknown check {c!r}; choose from {','.join(ALL_CHECKS)}")
    report = verify_suite(args.complete, checks, max_length=args.max_length,
                                max_seeds=args.max_seeds, threads=max(1, args.threads))
    for name, text, ok in report.summary():
        out.write(f"{name}\t{text}, {'PASS' if ok else 'FAIL'}\n")
    failures = report.failures()
    for r in failures if args.pretty else failures[:5]:
        err.write(f"{r.check} {r.subject}: {r.detail}\n")
    if len(failures) > 5 and not args.pretty:
        err.write(f"... {len(failures) - 5} more failures\n")
    return 0 if report.ok else 1


def _cmd_export(args, out, err) -> int:
    graph, labels = ExchangeGraph.from_json(_read(args.infile))
    _write(args.out, graph.to_dot(labels), out)
    return 0


COMMANDS = {
    "seed": _cmd_seed,
    "mutate": _cmd_mutate,
    "explore": _cmd_explore,
    "verify": _cmd_verify,
    "export": _cmd_export,
}


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out, err)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except (GraphError, SeedError, ExplorationError, PolynomialError) as exc:
        err.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())
