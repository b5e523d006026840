"""Command-line front end.

Exit codes: 0 success, 1 graph does not explain the map, 2 unreadable or
invalid input, 3 hypercube dimension cap exceeded, 4 internal explain check
failed, 5 graph is not a median graph, 6 ultrametric checks disagree.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .constructions import DEFAULT_HYPERCUBE_CAP, DimensionCapExceeded, explain_by_halfgrid, explain_by_hypercube
from .formats import GraphFormatError, read_graph, read_map, write_graph
from .graph import Disconnected, GraphError, NotMedianGraph, UnlabeledMedian, explains
from .mdt import compute_mdt
from .oracle import DEFAULT_INSTANCE_BUDGET, BudgetExceeded, InstanceSpec, generate_instances
from .pvr import pvr_expand
from .symmap import MapError, is_symbolic_ultrametric

EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_INTERNAL = 4
EXIT_NOT_MEDIAN = 5
EXIT_DISAGREE = 6


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_map(path):
    try:
        return read_map(path)
    except OSError as exc:
        _err(f"error: cannot read {path}: {exc.strerror}")
    except MapError as exc:
        _err(f"error: {type(exc).__name__}: {exc}")
    return None


def cmd_mdt(args) -> int:
    delta = _load_map(args.input)
    if delta is None:
        return EXIT_INPUT
    tree = compute_mdt(delta)
    sys.stdout.write(tree.to_json() + "\n" if args.format == "json" else tree.to_dot())
    return 0


def _out_format(args) -> str:
    if args.format:
        return args.format
    if args.out:
        suffix = Path(args.out).suffix.lower().lstrip(".")
        if suffix in ("dot", "gv"):
            return "dot"
        if suffix == "graphml":
            return "graphml"
    return "json"


def cmd_explain(args) -> int:
    delta = _load_map(args.input)
    if delta is None:
        return EXIT_INPUT
    if delta.n < 2:
        _err("error: need at least two points")
        return EXIT_INPUT
    try:
        if args.construction == "pvr":
            g = pvr_expand(delta).graph
        elif args.construction == "halfgrid":
            g = explain_by_halfgrid(delta)
        else:
            g = explain_by_hypercube(delta, cap=args.cap_hypercube)
    except DimensionCapExceeded as exc:
        _err(f"error: {exc}")
        return EXIT_CAP
    try:
        report = explains(g, delta)
    except GraphError as exc:
        _err(f"internal error: constructed graph fails the explain check: {exc}")
        return EXIT_INTERNAL
    if not report:
        _err(f"internal error: {len(report.mismatches)} pairs not explained")
        return EXIT_INTERNAL
    text = write_graph(g, _out_format(args))
    if args.out:
        Path(args.out).write_text(text)
        _err(f"wrote {g.n_vertices} vertices, {g.n_edges} edges to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    delta = _load_map(args.input)
    if delta is None:
        return EXIT_INPUT
    try:
        g = read_graph(args.graph)
        g.validate()
    except OSError as exc:
        _err(f"error: cannot read {args.graph}: {exc.strerror}")
        return EXIT_INPUT
    except Disconnected as exc:
        print(f"not a median graph: {exc}")
        return EXIT_NOT_MEDIAN
    except (GraphFormatError, GraphError, KeyError, ValueError) as exc:
        _err(f"error: invalid graph: {exc}")
        return EXIT_INPUT
    try:
        report = explains(g, delta)
    except NotMedianGraph as exc:
        names = ", ".join(g.names[u] for u in exc.triple)
        print(f"not a median graph: triple ({names}) has {exc.count} medians")
        return EXIT_NOT_MEDIAN
    except UnlabeledMedian as exc:
        x, y = exc.pair
        print(f"does not explain: median {exc.vertex} of ({x},{y}) is unlabeled")
        return EXIT_MISMATCH
    except GraphError as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    if report:
        print(f"explains: yes ({delta.n * (delta.n - 1) // 2} pairs)")
        return 0
    print(f"explains: no ({len(report.mismatches)} mismatching pairs)")
    for x, y, want, got in report.mismatches:
        print(f"{x}\t{y}\texpected={want}\tfound={got}")
    return EXIT_MISMATCH


def _classify(delta) -> tuple[bool, str]:
    ult = is_symbolic_ultrametric(delta)
    primes = len(compute_mdt(delta).prime_nodes()) if delta.n >= 1 else 0
    agree = ult.ok == (primes == 0)
    if ult.ok:
        text = "symbolic ultrametric"
    else:
        text = f"not symbolic ultrametric; {ult.axiom} witness ({','.join(ult.witness)})"
    noun = "vertex" if primes == 1 else "vertices"
    text += f"; MDT has {primes} prime {noun}"
    return agree, text


def _parse_sweep(tokens) -> dict:
    out = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep or key not in ("n", "k", "count"):
            raise ValueError(f"bad sweep token {tok!r}; expected n=, k=, count=")
        out[key] = int(val)
    missing = {"n", "k", "count"} - out.keys()
    if missing:
        raise ValueError(f"sweep lacks {sorted(missing)}")
    return out


def cmd_check(args) -> int:
    if args.sweep:
        try:
            sw = _parse_sweep(args.sweep)
            spec = InstanceSpec(sw["n"], sw["k"], seed=args.seed, count=sw["count"], budget=args.budget)
            agree = ultra = total = 0
            for delta in generate_instances(spec):
                ok, _ = _classify(delta)
                total += 1
                agree += ok
                ultra += bool(is_symbolic_ultrametric(delta))
        except (ValueError, BudgetExceeded) as exc:
            _err(f"error: {exc}")
            return EXIT_INPUT
        print(f"sweep n={spec.n} k={spec.k} count={spec.count} seed={spec.seed}: "
              f"{agree}/{total} agree, {ultra} symbolic ultrametric")
        return 0 if agree == total else EXIT_DISAGREE
    if args.input is None:
        _err("error: give a map file or --sweep")
        return EXIT_INPUT
    delta = _load_map(args.input)
    if delta is None:
        return EXIT_INPUT
    ok, text = _classify(delta)
    print(text)
    if not ok:
        _err("internal error: axiom check and MDT check disagree")
        return EXIT_DISAGREE
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="medex", description="Median graphs explaining symmetric maps.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("mdt", help="modular decomposition tree of a map")
    q.add_argument("input", help="map file (JSON or TSV matrix)")
    q.add_argument("--format", choices=("json", "dot"), default="json")
    q.set_defaults(func=cmd_mdt)

    q = sub.add_parser("explain", help="build a labeled median graph explaining a map")
    q.add_argument("input")
    q.add_argument("--construction", choices=("pvr", "halfgrid", "hypercube"), default="pvr")
    q.add_argument("--out", help="output file (stdout if omitted)")
    q.add_argument("--format", choices=("json", "dot", "graphml"),
                   help="output format (default from --out suffix, else json)")
    q.add_argument("--cap-hypercube", type=int, default=DEFAULT_HYPERCUBE_CAP, metavar="N",
                   help=f"largest hypercube dimension (default {DEFAULT_HYPERCUBE_CAP})")
    q.set_defaults(func=cmd_explain)

    q = sub.add_parser("verify", help="check that a graph file explains a map")
    q.add_argument("input", help="map file")
    q.add_argument("graph", help="graph file (JSON or GraphML)")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("check", help="symbolic-ultrametric classification")
    q.add_argument("input", nargs="?")
    q.add_argument("--sweep", nargs=3, metavar="KEY=VAL", help="random sweep, e.g. --sweep n=7 k=3 count=500")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--budget", type=int, default=DEFAULT_INSTANCE_BUDGET)
    q.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
