"""Command-line front end: ``cyclictri <command> ...``.

Exit codes: 0 ok, 1 verification failed, 2 parse/usage error, 3 not a
triangulation, 4 arc not mutable, 5 cyclic quiver, 6 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .arcs import (
    PolytopeParams,
    Triangulation,
    compact_arc,
    format_arc,
    interior_simplices,
    make_arc,
    parse_arc,
    triangulation_from_json,
    triangulation_to_json,
)
from .errors import (
    BudgetExceeded,
    CounterexampleFound,
    CyclicQuiver,
    CyclicTriError,
    NotMutable,
)
from .explorer import (
    DEFAULT_BUDGET,
    enumerate_triangulations,
    flip_graph,
    verify_cells,
    verify_cut_slice,
    verify_theorem_A,
    verify_theorem_B,
)
from .quiver import build_quiver
from .retrograde import flip, maximal_retrograde_paths, mutable_arcs

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_NOT_MUTABLE = 4
EXIT_CYCLIC = 5
EXIT_BUDGET = 6

PALETTE = ["red", "blue", "forestgreen", "orange", "purple", "brown", "magenta", "cyan"]


class UsageError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def load_triangulation(path: str) -> Triangulation:
    """Read a triangulation file; parse problems become :class:`UsageError`."""
    try:
        text = _read_text(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON: {exc}") from exc
    if not isinstance(data, dict) or not {"m", "d", "arcs"} <= data.keys():
        raise UsageError(f"{path}: expected an object with keys m, d, arcs")
    try:
        PolytopeParams(int(data["m"]), int(data["d"]))
        for a in data["arcs"]:
            if isinstance(a, str):
                parse_arc(a)
            elif not isinstance(a, list):
                raise ValueError(f"bad arc entry {a!r}")
    except CyclicTriError:
        raise
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from exc
    return triangulation_from_json(text)


def quiver_dot(tri: Triangulation) -> str:
    """DOT for Q(T); each maximal retrograde path gets one palette colour."""
    q = build_quiver(tri)
    colour = {}
    for k, path in enumerate(maximal_retrograde_paths(q)):
        for a in path.arrows:
            colour[a] = PALETTE[k % len(PALETTE)]
    lines = [f'digraph "Q {tri.params}" {{']
    for v in q.vertices:
        lines.append(f'  "{compact_arc(v.values)}";')
    for a in q.arrows:
        lines.append(
            f'  "{compact_arc(a.source.values)}" -> "{compact_arc(a.target.values)}" [color={colour[a]}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _arc_arg(tri: Triangulation, text: str):
    try:
        arc = make_arc(parse_arc(text), tri.params)
    except (CyclicTriError, ValueError) as exc:
        raise UsageError(f"bad --arc {text!r}: {exc}") from exc
    if arc not in tri:
        raise UsageError(f"{arc} is not an arc of the triangulation")
    return arc


def cmd_validate(args) -> int:
    load_triangulation(args.file)
    print("VALID")
    return EXIT_OK


def cmd_quiver(args) -> int:
    tri = load_triangulation(args.file)
    if args.dot:
        sys.stdout.write(quiver_dot(tri))
    else:
        for a in build_quiver(tri).arrows:
            print(a)
    return EXIT_OK


def cmd_mutable(args) -> int:
    tri = load_triangulation(args.file)
    q = build_quiver(tri)
    if args.paths:
        for p in maximal_retrograde_paths(q):
            print("path:", p)
    for a in sorted(mutable_arcs(tri, q)):
        print(a)
    return EXIT_OK


def cmd_flip(args) -> int:
    tri = load_triangulation(args.file)
    arc = _arc_arg(tri, args.arc)
    try:
        new, replacement = flip(tri, arc)
    except NotMutable as exc:
        print(f"{arc} is not mutable; blocking retrograde path: {exc.path}", file=sys.stderr)
        print(exc.path)
        return EXIT_NOT_MUTABLE
    print(f"{arc} -> {replacement}")
    payload = triangulation_to_json(new) + "\n"
    if args.output:
        Path(args.output).write_text(payload)
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def cmd_interior(args) -> int:
    tri = load_triangulation(args.file)
    for s in sorted(interior_simplices(tri)):
        print(format_arc(s.values))
    return EXIT_OK


def cmd_cut(args) -> int:
    from .cutslice import cut_from_slice, slice_lift

    tri = load_triangulation(args.file)
    try:
        s = slice_lift(tri)
    except CyclicQuiver:
        print("cyclic quiver", file=sys.stderr)
        return EXIT_CYCLIC
    if args.json:
        from .cutslice import cut_to_json

        print(cut_to_json(cut_from_slice(s)))
    else:
        for a in sorted(cut_from_slice(s).arrows):
            print(a)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    params = PolytopeParams(args.m, args.d)
    count = 0
    for t in enumerate_triangulations(params, budget=args.budget, workers=args.workers):
        if args.interior_free and interior_simplices(t):
            continue
        count += 1
        if not args.count:
            print(triangulation_to_json(t))
    if args.count:
        print(count)
    return EXIT_OK


def cmd_flipgraph(args) -> int:
    params = PolytopeParams(args.m, args.d)
    g = flip_graph(params, budget=args.budget, workers=args.workers)
    if args.dot:
        sys.stdout.write(g.to_dot())
    elif args.json:
        print(g.to_json())
    else:
        free = {i for i, t in enumerate(g.nodes) if not interior_simplices(t)}
        print(f"nodes: {len(g.nodes)}")
        print(f"edges: {len(g.edges) // 2}")
        print(f"connected: {g.is_connected()}")
        print(f"interior-free nodes: {len(free)}")
        print(f"interior-free connected: {g.is_connected(free)}")
    return EXIT_OK


_CHECKS = {
    "A": verify_theorem_A,
    "B": verify_theorem_B,
    "cuts": verify_cut_slice,
    "cells": verify_cells,
}


def cmd_check(args) -> int:
    params = PolytopeParams(args.m, args.d)
    names = list(_CHECKS) if args.theorem == "all" else [args.theorem]
    ok = True
    for name in names:
        rep = _CHECKS[name](params, raise_on_fail=False, budget=args.budget, workers=args.workers)
        print("\n".join(rep.lines()[:-1]))
        ok = ok and rep.ok
    print("OK" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclictri",
        description="Quivers, retrograde paths and flips for triangulations of even-dimensional cyclic polytopes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_file(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("file", help="triangulation JSON file ('-' for stdin)")
        p.set_defaults(func=func)
        return p

    def with_params(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--m", type=int, required=True, help="number of vertices")
        p.add_argument("--d", type=int, required=True, help="half the dimension")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search node budget")
        p.add_argument("--workers", type=int, default=1, help="worker processes for enumeration")
        p.set_defaults(func=func)
        return p

    with_file("validate", cmd_validate, "check that a file holds a triangulation")
    p = with_file("quiver", cmd_quiver, "print the arrows of Q(T)")
    p.add_argument("--dot", action="store_true", help="emit DOT coloured by retrograde path")
    p = with_file("mutable", cmd_mutable, "print the mutable arcs")
    p.add_argument("--paths", action="store_true", help="also print the maximal retrograde paths")
    p = with_file("flip", cmd_flip, "flip at an arc")
    p.add_argument("--arc", required=True, help="arc, e.g. 1,3,6,8 or 1368")
    p.add_argument("-o", "--output", help="write the flipped triangulation here instead of stdout")
    with_file("interior", cmd_interior, "print the interior (d+1)-simplices")
    p = with_file("cut", cmd_cut, "print the cut of Q^(d,n) for an acyclic quiver")
    p.add_argument("--json", action="store_true")

    p = with_params("enumerate", cmd_enumerate, "list all triangulations as JSON lines")
    p.add_argument("--interior-free", action="store_true", help="only those without interior simplices")
    p.add_argument("--count", action="store_true", help="print only the number found")
    p = with_params("flipgraph", cmd_flipgraph, "build the flip graph")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--dot", action="store_true")
    g.add_argument("--json", action="store_true")
    p = with_params("check", cmd_check, "exhaustive verification")
    p.add_argument("--theorem", choices=["A", "B", "cuts", "cells", "all"], default="all")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CounterexampleFound as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL
    except CyclicTriError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
