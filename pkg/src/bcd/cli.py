"""Command line front end.

Exit codes: 0 success or decided true, 1 decided false, 2 usage or parse
error, 3 resource limit exceeded.  --json switches output to a single JSON
object on stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .bench import fitted_exponent, scaling_run
from .decide import DecisionCache, explain, subtype_matrix
from .factors import factor_to_expr, factors
from .model import LimitExceeded, UnknownAtom, build_model, satisfies_eq, stack_of_twos
from .rewrite import dept_normal_form, dist_normal_form, slat_canonical
from .selftest import run_criteria
from .syntax import ParseError, parse, render, to_json_obj


def _emit(obj: dict) -> None:
    print(json.dumps(obj))


def _cmd_parse(args) -> int:
    e = parse(args.expr)
    if args.json:
        _emit(to_json_obj(e))
    else:
        print(render(e))
    return 0


def _cmd_nf(args) -> int:
    e = parse(args.expr)
    if args.kind == "dist":
        result = dist_normal_form(e)
    elif args.kind == "slat":
        result = slat_canonical(e)
    else:
        if args.depth is None:
            print("nf --kind dept requires --depth", file=sys.stderr)
            return 2
        result = dept_normal_form(e, args.depth)
    if args.json:
        _emit({"kind": args.kind, "result": to_json_obj(result)})
    else:
        print(render(result))
    return 0


def _cmd_factors(args) -> int:
    e = parse(args.expr)
    fs = sorted(factors(e), key=lambda f: (f.head, f.arity, render(factor_to_expr(f))))
    if args.json:
        _emit(
            {
                "factors": [
                    {"args": [to_json_obj(a) for a in f.args], "head": f.head}
                    for f in fs
                ]
            }
        )
    else:
        for f in fs:
            print(render(factor_to_expr(f)))
    return 0


def _cmd_compare(args, want_equiv: bool) -> int:
    a = parse(args.a)
    b = parse(args.b)
    cache = DecisionCache()
    if want_equiv:
        holds = cache.subseteq(a, b) and cache.subseteq(b, a)
    else:
        holds = cache.subseteq(a, b)
    if args.explain:
        tree = {"holds": holds, "forward": explain(a, b)}
        if want_equiv:
            tree["backward"] = explain(b, a)
        _emit(tree)
    elif args.json:
        _emit({"a": args.a, "b": args.b, "holds": holds})
    else:
        print("true" if holds else "false")
    return 0 if holds else 1


def _cmd_sat(args) -> int:
    a = parse(args.a)
    b = parse(args.b)
    holds = satisfies_eq(args.depth, a, b)
    if args.json:
        _emit({"depth": args.depth, "a": args.a, "b": args.b, "holds": holds})
    else:
        print("true" if holds else "false")
    return 0 if holds else 1


def _cmd_model(args) -> int:
    atoms = [a.strip() for a in args.atoms.split(",") if a.strip()]
    model = build_model(
        atoms,
        args.depth,
        max_atoms=args.max_atoms,
        max_depth=args.max_depth,
        max_candidates=args.max_candidates,
    )
    bound = stack_of_twos(args.depth + 1, len(model.atoms) + args.depth)
    if args.json:
        obj = {
            "atoms": list(model.atoms),
            "depth": model.depth,
            "carrier_size": model.size,
            "bound": bound,
            "carrier": [render(e) for e in model.carrier],
        }
        if args.tables:
            obj["meet_table"] = [list(row) for row in model.meet_table]
            obj["arrow_table"] = [list(row) for row in model.arrow_table]
        _emit(obj)
    else:
        print(f"atoms: {', '.join(model.atoms)}")
        print(f"depth: {model.depth}")
        print(f"carrier size: {model.size} (bound {bound})")
        for i, e in enumerate(model.carrier):
            print(f"  [{i}] {render(e)}")
        if args.tables:
            print("meet table:")
            for row in model.meet_table:
                print("  " + " ".join(f"{v:3d}" for v in row))
            print("arrow table:")
            for row in model.arrow_table:
                print("  " + " ".join(f"{v:3d}" for v in row))
    return 0


def _cmd_bench(args) -> int:
    if args.stdin:
        results = []
        for line in sys.stdin:
            line = line.strip()
            if not line:
                continue
            e = parse(line)
            t0 = time.perf_counter()
            matrix = subtype_matrix(e)
            results.append((matrix.size, time.perf_counter() - t0))
    else:
        sizes = [int(s) for s in args.sizes.split(",")]
        results = scaling_run(sizes, seed=args.seed)
    exponent = (
        fitted_exponent(results)
        if len({n for n, _ in results}) >= 2
        else None
    )
    if args.json:
        obj = {"results": [{"nodes": n, "seconds": t} for n, t in results]}
        if exponent is not None:
            obj["fitted_exponent"] = exponent
        _emit(obj)
    else:
        for n, t in results:
            print(f"{n} {t:.6f}")
        if exponent is not None:
            print(f"fitted exponent: {exponent:.3f}")
    return 0


def _cmd_selftest(args) -> int:
    ok = run_criteria(full=args.full)
    return 0 if ok else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bcd",
        description="Intersection type toolkit: parsing, rewriting, subtyping, finite models.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("parse", help="parse and reprint an expression")
    p.add_argument("expr")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("nf", help="normal forms: dist, dept, or slat")
    p.add_argument("--kind", choices=("dist", "dept", "slat"), required=True)
    p.add_argument("--depth", type=int)
    p.add_argument("--json", action="store_true")
    p.add_argument("expr")

    p = sub.add_parser("factors", help="print the factor set")
    p.add_argument("expr")
    p.add_argument("--json", action="store_true")

    for verb, help_text in (("le", "decide a below b"), ("eq", "decide congruence")):
        p = sub.add_parser(verb, help=help_text)
        p.add_argument("a")
        p.add_argument("b")
        p.add_argument("--json", action="store_true")
        p.add_argument("--explain", action="store_true")

    p = sub.add_parser("sat", help="decide equality in the depth-n model")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("model", help="build a finite model and print its carrier")
    p.add_argument("--atoms", default="@")
    p.add_argument("--depth", type=int, default=0)
    p.add_argument("--tables", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-atoms", type=int, default=2)
    p.add_argument("--max-depth", type=int, default=1)
    p.add_argument("--max-candidates", type=int, default=4096)

    p = sub.add_parser("bench", help="time the subtype matrix on random instances")
    p.add_argument("--sizes", default="200,400,800,1600")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.add_argument("--stdin", action="store_true", help="time expressions read from stdin")

    p = sub.add_parser("selftest", help="run the embedded acceptance checks")
    p.add_argument("--full", action="store_true", help="full scale instead of desk scale")

    return parser


_DISPATCH = {
    "parse": _cmd_parse,
    "nf": _cmd_nf,
    "factors": _cmd_factors,
    "le": lambda args: _cmd_compare(args, want_equiv=False),
    "eq": lambda args: _cmd_compare(args, want_equiv=True),
    "sat": _cmd_sat,
    "model": _cmd_model,
    "bench": _cmd_bench,
    "selftest": _cmd_selftest,
}


def run(argv) -> int:
    """Dispatch one invocation; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _DISPATCH[args.verb](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except LimitExceeded as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return 3
    except (UnknownAtom, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    if sys.getrecursionlimit() < 20000:
        sys.setrecursionlimit(20000)
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
