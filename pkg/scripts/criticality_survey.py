#!/usr/bin/env python3
"""Survey first-order criticality across the shipped combinatorial catalog.

Each catalog start is descended to its local optimum, then every
elementary perturbation rate (face translations, face hinges, vertex
truncations) is evaluated there. A clean local minimizer shows a
non-negative worst rate up to tolerance; anything with a decisively
negative rate names the escape direction that the within-type descent
cannot take.

Usage: python3 scripts/criticality_survey.py [--seed N] [--tol T] [--json PATH]
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from melzak.errors import GeometryError
from melzak.optimize import (OptimizeOptions, criticality_report, load_catalog,
                             local_optimize)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1e-6)
    ap.add_argument("--json", type=Path, default=None)
    args = ap.parse_args(argv)

    rows = []
    opts = OptimizeOptions(seed=args.seed)
    for t in load_catalog():
        try:
            res = local_optimize(t.build(), opts)
            rep = criticality_report(res.polyhedron, tol=args.tol)
        except GeometryError as exc:
            print(f"{t.name:24s} skipped: {exc}")
            continue
        worst = min(rep.entries, key=rep.entries.get)
        verdict = "critical" if rep.is_critical else f"escape {worst}"
        print(f"{t.name:24s} faces={t.faces} ratio={res.ratio:14.6f} "
              f"min_dM={rep.minimum:+.3e}  {verdict}")
        rows.append({"name": t.name, "faces": t.faces,
                     "ratio": float(f"{res.ratio:.12g}"),
                     "stalled_at_boundary": res.combinatorics_changed,
                     "criticality": rep.to_dict()})

    critical = sum(r["criticality"]["is_critical"] for r in rows)
    print(f"{critical}/{len(rows)} locally critical at tol {args.tol:g}")
    if args.json is not None:
        args.json.write_text(json.dumps({"tol": args.tol, "seed": args.seed,
                                         "types": rows}, indent=1, sort_keys=True) + "\n")
        print(f"wrote {args.json}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
