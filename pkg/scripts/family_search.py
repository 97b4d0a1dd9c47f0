"""Numerical family search on every sign-feasible orientation class of a graph.

    python3 scripts/family_search.py square K2,3 cube+1 --starts 16
"""

import argparse
import time

from mtlz.catalog import resolve_graph
from mtlz.family import assemble_hamiltonians, check_integrability, family_to_json, numeric_family_search
from mtlz.orientation import valid_orientations
from mtlz.signs import build_sign_system, solve


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("graphs", nargs="+")
    ap.add_argument("--starts", type=int, default=16)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--M", type=int, default=2)
    ap.add_argument("--save", help="directory for JSON families that converge")
    args = ap.parse_args()

    for spec in args.graphs:
        g = resolve_graph(spec)
        for i, o in enumerate(valid_orientations(g), 1):
            sys_ = build_sign_system(g, o)
            v = solve(sys_)
            if not v.feasible:
                continue
            t = time.perf_counter()
            res = numeric_family_search(g, o, eps=v.eps_table(sys_), M=args.M, seed=args.seed, starts=args.starts)
            dt = time.perf_counter() - t
            line = (f"{spec} class {i}: success={res.success} residual={res.residual:.3g} "
                    f"margin={res.margin:.3g} start={res.start} ({dt:.1f}s)")
            if res.success:
                rep = check_integrability(assemble_hamiltonians(res.family))
                line += f" integrability={rep.worst:.2g}"
                if args.save:
                    from pathlib import Path

                    d = Path(args.save)
                    d.mkdir(parents=True, exist_ok=True)
                    (d / f"{spec.replace(',', '_').replace('+', 'p')}_class{i}.json").write_text(
                        family_to_json(res.family))
            print(line)


if __name__ == "__main__":
    main()
