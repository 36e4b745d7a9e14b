"""Command line front end: ``python -m betweenness <command> ...``."""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import formulas as fm
from .evaluator import Assignment, BudgetExceeded, EvalBudget, EvalError, evaluate
from .frames import (
    build_frame,
    check_torus_isomorphism,
    find_torus_isomorphism,
    reduce_end_to_end,
)
from .interpretation import frame_interpretation, induced_structure, parse_interpretation
from .structures import FinStructure, StructureError, TorusSpec, cell, format_structure, load_structure, parse_dims
from .syntax import FormulaError, parse_formula, print_formula
from .tiling import TileSetError, load_tileset, solve_bounded_grid, solve_periodic, solve_torus


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_arg(value: str) -> str:
    if value.startswith("@"):
        with open(value[1:]) as fh:
            return fh.read()
    return value


def cmd_frame(args) -> int:
    bundle = build_frame(args.m, args.n)
    _write(format_structure(bundle.structure), args.out)
    return 0


def cmd_interpret(args) -> int:
    host = load_structure(args.structure)
    if args.interpretation:
        with open(args.interpretation) as fh:
            interp = parse_interpretation(fh.read())
    else:
        interp = frame_interpretation(args.kind)
    budget = EvalBudget(max_set_domain=args.max_set_domain)
    _write(format_structure(induced_structure(interp, host, budget)), args.out)
    return 0


def expected_map_for(structure: FinStructure, m: int, n: int) -> dict:
    """Name convention: torus cell ``i_j`` goes to frame element ``fi_j``
    when present, otherwise to the element of the same name."""
    names = set(structure.elements)
    return {cell(i, j): (f"f{i}_{j}" if f"f{i}_{j}" in names else cell(i, j))
            for j in range(n) for i in range(m)}


def cmd_iso(args) -> int:
    a = load_structure(args.a)
    if not args.b.startswith("builtin:torus:"):
        print("error: --b must be builtin:torus:MxN", file=sys.stderr)
        return 2
    m, n = parse_dims(args.b.split(":")[2])
    spec = TorusSpec(m, n)
    if args.map == "search":
        f = find_torus_isomorphism(a, spec)
        if f is None:
            print("isomorphic: false (no isomorphism found)")
            return 1
        print("isomorphic: true")
        for key in sorted(f, key=lambda c: tuple(map(int, c.split("_")))[::-1]):
            print(f"{key} -> {f[key]}")
        return 0
    result = check_torus_isomorphism(a, spec, expected_map_for(a, m, n))
    print(f"isomorphic: {str(result.ok).lower()} ({result.diagnostic})")
    return 0 if result.ok else 1


def cmd_reduce(args) -> int:
    S = load_tileset(args.tiles)
    report = reduce_end_to_end(S, args.bound, EvalBudget(max_set_domain=args.max_set_domain))
    print("\n".join(report.lines()))
    if args.summary:
        _write(report.summary(), args.summary)
    return 0 if report.agreement else 1


_GEN = ("collinear", "parallel", "basis", "flat", "opentriangle", "finiteness", "omega",
        "frame-formulas", "frame-sentence", "wmso2mso")


def cmd_gen(args) -> int:
    what = args.what
    if what == "collinear":
        out = [fm.make_collinear()]
    elif what == "parallel":
        out = [fm.make_parallel()]
    elif what in ("basis", "flat"):
        b, f = fm.make_basis_and_flat(args.k)
        out = [b if what == "basis" else f]
    elif what == "opentriangle":
        out = [fm.make_opentriangle(args.k)]
    elif what == "finiteness":
        out = [fm.make_finiteness_sentence(args.n)]
    elif what == "omega":
        out = [fm.make_omega_sequence_sentence()]
    elif what == "frame-formulas":
        ff = fm.make_frame_formulas(args.kind)
        for label, f in (("end_P(x)", ff.end_p), ("end_Q(x)", ff.end_q), ("Dom(u)", ff.dom),
                         ("H(u,v)", ff.h), ("V(u,v)", ff.v)):
            print(f"{label}: {print_formula(f)}")
        return 0
    elif what == "frame-sentence":
        out = [fm.make_frame_class_sentence(args.kind)]
    else:
        if not args.formula:
            print("error: wmso2mso needs --formula", file=sys.stderr)
            return 2
        out = [fm.weak_to_strong(parse_formula(_read_arg(args.formula)), args.n)]
    for f in out:
        print(print_formula(f))
    return 0


def cmd_tile(args) -> int:
    S = load_tileset(args.tiles)
    if args.torus:
        m, n = parse_dims(args.torus)
        cert = solve_torus(S, m, n)
    elif args.grid:
        m, n = parse_dims(args.grid)
        cert = solve_bounded_grid(S, m, n)
    else:
        found = solve_periodic(S, args.bound)
        cert = None
        if found is not None:
            m, n, cert = found
    if cert is None:
        print("tilable: false")
        return 1
    print(f"tilable: true ({m}x{n})")
    print(cert.render(m, n))
    return 0


def cmd_eval(args) -> int:
    structure = load_structure(args.structure)
    f = parse_formula(_read_arg(args.formula), structure.vocabulary)
    fo, sets = {}, {}
    for item in args.assign:
        name, _, value = item.partition("=")
        if name[:1].isupper():
            sets[name] = frozenset(v for v in value.split(",") if v)
        else:
            fo[name] = value
    value = evaluate(structure, f, Assignment(fo, sets), EvalBudget(max_set_domain=args.max_set_domain))
    print(str(value).lower())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="betweenness", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("frame", help="write an m x n Cartesian frame as a structure file")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_frame)

    p = sub.add_parser("interpret", help="apply an interpretation to a structure")
    p.add_argument("--structure", required=True)
    p.add_argument("--kind", choices=[fm.FINITE, fm.INFINITE], default=fm.FINITE)
    p.add_argument("--interpretation", help="interpretation file (default: the frame interpretation)")
    p.add_argument("--max-set-domain", type=int, default=16)
    p.add_argument("--out")
    p.set_defaults(func=cmd_interpret)

    p = sub.add_parser("iso", help="check a structure against a builtin torus")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--map", choices=["expected", "search"], default="expected")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("reduce", help="cross-check the frame reduction against the torus solver")
    p.add_argument("--tiles", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--summary")
    p.add_argument("--max-set-domain", type=int, default=16)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gen", help="print a constructed formula")
    p.add_argument("--what", choices=_GEN, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--kind", choices=[fm.FINITE, fm.INFINITE], default=fm.FINITE)
    p.add_argument("--formula", help="input for wmso2mso (text or @file)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("tile", help="Wang tile solvers")
    tsub = p.add_subparsers(dest="tile_command", required=True)
    s = tsub.add_parser("solve")
    s.add_argument("--tiles", required=True)
    group = s.add_mutually_exclusive_group(required=True)
    group.add_argument("--torus")
    group.add_argument("--grid")
    group.add_argument("--periodic", action="store_true")
    s.add_argument("--bound", type=int, default=4)
    s.set_defaults(func=cmd_tile)

    p = sub.add_parser("eval", help="evaluate a formula on a structure")
    p.add_argument("--structure", required=True)
    p.add_argument("--formula", required=True, help="formula text or @file")
    p.add_argument("--assign", action="append", default=[], metavar="NAME=VALUE",
                   help="x=elem for elements, X=a,b,c for sets")
    p.add_argument("--max-set-domain", type=int, default=16)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (FormulaError, StructureError, TileSetError, EvalError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
