"""Command-line front end.

Every command prints one JSON document on stdout. Exit status is 0 on
success, 1 when a checked property fails, and 2 for usage, parse or
precondition errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .errors import ContractError, InvariantError, ParseError, PathError
from .exchange import build_k_base_graph, build_multiset_fiber_graph, build_single_exchange_graph
from .graph import MultiGraph, parse_graph
from .ideal import (
    BaseBinomial,
    certificate_from_json,
    certificate_to_json,
    decompose_to_quadrics,
    verify_certificate,
)
from .matroid import enumerate_bases, format_base, parse_bases
from .pathfinder import find_path_k, find_path_single, verify_k_path, verify_pair_path
from .sweep import MAX_EDGES, labeled_source, sweep_theorem4, sweep_theorem7, sweep_white


class UsageError(Exception):
    pass


def _emit(payload: dict, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _read_graph(args) -> MultiGraph:
    try:
        if args.input in (None, "-"):
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read graph: {exc}") from None
    return parse_graph(text)


def _graph_json(g: MultiGraph) -> dict:
    return {"vertices": g.vertex_count, "edges": [[a + 1, b + 1] for a, b in g.edges]}


def cmd_bases(args) -> int:
    g = _read_graph(args)
    if args.count:
        _emit({"count": sum(1 for _ in enumerate_bases(g))})
        return 0
    bases = [format_base(b) for b in enumerate_bases(g)]
    _emit({"count": len(bases), "bases": bases})
    return 0


def cmd_graph(args) -> int:
    g = _read_graph(args)
    if args.mode == "single":
        x = build_single_exchange_graph(g)
    elif args.mode == "k-base":
        x = build_k_base_graph(g, args.k)
    else:
        if args.exponent is None:
            raise UsageError("--mode fiber needs --exponent")
        try:
            s = [int(v) for v in args.exponent.split(",")]
        except ValueError:
            raise UsageError(f"malformed exponent {args.exponent!r}") from None
        if len(s) != g.edge_count:
            raise UsageError(f"exponent has {len(s)} entries, graph has {g.edge_count} edges")
        x = build_multiset_fiber_graph(g, s, args.k)
    stats = x.stats()
    stats["mode"] = args.mode
    _emit(stats)
    return 1 if args.expect_connected and not stats["connected"] else 0


def cmd_path(args) -> int:
    g = _read_graph(args)
    src, dst = parse_bases(args.source), parse_bases(args.target)
    try:
        if args.ordered:
            if len(src) != 2 or len(dst) != 2:
                raise UsageError("--ordered paths join ordered pairs of bases")
            path = find_path_single(g, src, dst)
            ok = verify_pair_path(g, path, src, dst)
            states, witnesses = path.pairs, [{"out": o, "in": i} for o, i in path.swaps]
            k = 2
        else:
            k = args.k if args.k is not None else len(src)
            path = find_path_k(g, src, dst, k)
            ok = verify_k_path(g, path, k, src, dst)
            states, witnesses = path.tuples, [format_base(w) for w in path.witnesses]
    except PathError as exc:
        _emit({"error": str(exc), "junction": exc.junction})
        return 1
    except InvariantError as exc:
        _emit({"error": str(exc)})
        return 1
    if not ok:
        _emit({"error": "path failed re-verification"})
        return 1
    _emit({
        "graph": _graph_json(g),
        "k": k,
        "ordered": bool(args.ordered),
        "length": len(states) - 1,
        "path": [[format_base(b) for b in t] for t in states],
        "witnesses": witnesses,
    })
    return 0


def cmd_decompose(args) -> int:
    g = _read_graph(args)
    if args.verify_only:
        try:
            with open(args.verify_only, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read certificate: {exc}") from None
        cert = certificate_from_json(data)
        verdict = verify_certificate(g, cert.binomial, cert)
        _emit({"valid": verdict.ok, "reason": verdict.reason, "terms": len(cert.terms)})
        return 0 if verdict else 1
    if args.lhs is None or args.rhs is None:
        raise UsageError("decompose needs --lhs and --rhs (or --verify-only)")
    b = BaseBinomial(tuple(parse_bases(args.lhs)), tuple(parse_bases(args.rhs)))
    if len(b.lhs) != len(b.rhs):
        raise UsageError("both sides need the same number of bases")
    try:
        cert = decompose_to_quadrics(g, b)
    except InvariantError as exc:
        _emit({"error": str(exc)})
        return 1
    verdict = verify_certificate(g, b, cert)
    payload = certificate_to_json(cert)
    payload["verified"] = verdict.ok
    if not verdict:
        payload["reason"] = verdict.reason
    _emit(payload)
    return 0 if verdict else 1


def cmd_sweep(args) -> int:
    n = args.max_edges
    if n < 0 or n > MAX_EDGES:
        raise UsageError(f"--max-edges must lie in 0..{MAX_EDGES}")
    k = args.k if args.k is not None else (2 if args.mode != "theorem4" else 3)
    source = labeled_source(n, k, args.mode) if args.labeled else None
    if args.mode == "theorem7":
        if k != 2:
            raise UsageError("theorem7 sweeps use k = 2")
        report = sweep_theorem7(n, args.seed, args.samples, not args.shallow, source)
    elif args.mode == "theorem4":
        if k < 3:
            raise UsageError("theorem4 sweeps need k >= 3")
        report = sweep_theorem4(n, k, args.seed, args.samples, not args.shallow, source)
    else:
        report = sweep_white(n, k, args.seed, args.samples if args.samples_set else 10, source)
    payload = report.to_json()
    payload["max_edges"] = n
    payload["enumeration"] = "labeled" if args.labeled else "isomorphism classes"
    _emit(payload)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    def add_common(p, suppress):
        # subcommands repeat the global flags without clobbering values given before them
        dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--input", metavar="FILE", default=dflt(None), help="graph file (default: standard input)")
        p.add_argument("--json", action="store_true", default=dflt(False), help="JSON output (always on)")
        p.add_argument("--seed", type=int, default=dflt(0), help="seed for random sampling")
        return p

    common = add_common(argparse.ArgumentParser(add_help=False), suppress=True)
    parser = add_common(argparse.ArgumentParser(prog="forestswap",
                                                description="Base exchange graphs of graphic matroids."),
                        suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bases", parents=[common], help="list the spanning forests")
    p.add_argument("--count", action="store_true", help="print only the number of bases")
    p.set_defaults(func=cmd_bases)

    p = sub.add_parser("graph", parents=[common], help="exchange-graph statistics")
    p.add_argument("--mode", choices=["k-base", "single", "fiber"], default="single")
    p.add_argument("-k", type=int, default=2)
    p.add_argument("--exponent", help="fiber exponent, comma-separated per edge")
    p.add_argument("--expect-connected", action="store_true", help="exit 1 if the graph is disconnected")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("path", parents=[common], help="constructive path between two vertices")
    p.add_argument("-k", type=int)
    p.add_argument("--from", dest="source", required=True, help='bases like "0,1;2,3"')
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--ordered", action="store_true", help="ordered pairs in the single exchange graph")
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("decompose", parents=[common], help="quadric certificate for a binomial")
    p.add_argument("--lhs")
    p.add_argument("--rhs")
    p.add_argument("--verify-only", metavar="CERT", help="check a certificate JSON file instead")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("sweep", parents=[common], help="exhaustive small-graph sweep")
    p.add_argument("--max-edges", type=int, default=6)
    p.add_argument("-k", type=int)
    p.add_argument("--mode", choices=["theorem4", "theorem7", "white"], default="theorem7")
    p.add_argument("--samples", type=int, default=None, help="random pairs per instance (20, or 10 per fiber)")
    p.add_argument("--labeled", action="store_true",
                   help="every labeled graph instead of one per isomorphism class")
    p.add_argument("--shallow", action="store_true", help="skip the balance and move checks")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "sweep":
        args.samples_set = args.samples is not None
        if args.samples is None:
            args.samples = 20
    try:
        return args.func(args)
    except (ParseError, ContractError, UsageError, ValueError) as exc:
        print(f"forestswap: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
