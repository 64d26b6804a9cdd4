#!/usr/bin/env python3
"""Build finite truncation models and report carrier sizes against the
iterated-exponential bound.

Usage: python scripts/explore_models.py [--atoms @,p] [--depth 1] [--tables]
       [--max-atoms 2] [--max-depth 1] [--max-candidates 4096]
"""

import argparse

from bcd.model import build_model, stack_of_twos
from bcd.syntax import render


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--atoms", default="@,p")
    ap.add_argument("--depth", type=int, default=1)
    ap.add_argument("--tables", action="store_true")
    ap.add_argument("--max-atoms", type=int, default=2)
    ap.add_argument("--max-depth", type=int, default=1)
    ap.add_argument("--max-candidates", type=int, default=4096)
    args = ap.parse_args()

    atoms = [a.strip() for a in args.atoms.split(",") if a.strip()]
    model = build_model(
        atoms,
        args.depth,
        max_atoms=args.max_atoms,
        max_depth=args.max_depth,
        max_candidates=args.max_candidates,
    )
    m = len(model.atoms)
    bound = stack_of_twos(args.depth + 1, m + args.depth)
    print(f"model over {{{', '.join(model.atoms)}}} at depth {args.depth}")
    print(f"carrier size {model.size}, bound s({args.depth + 1},{m + args.depth}) = {bound}")
    for i, e in enumerate(model.carrier):
        print(f"  [{i:3d}] {render(e)}")
    if args.tables:
        print("meet table:")
        for row in model.meet_table:
            print("  " + " ".join(f"{v:3d}" for v in row))
        print("arrow table:")
        for row in model.arrow_table:
            print("  " + " ".join(f"{v:3d}" for v in row))


if __name__ == "__main__":
    main()
