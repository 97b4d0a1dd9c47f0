"""Per-n counts through the pipeline, with the reference checks.

    python3 scripts/reproduce_tables.py --n 10 --out results/catalog10.json
"""

import argparse
import time

from mtlz.catalog import PipelineConfig, check_catalog, export, run_pipeline


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--mode", choices=("exhaustive", "layer"), default="exhaustive")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out")
    args = ap.parse_args()

    t = time.perf_counter()
    cat = run_pipeline(PipelineConfig(args.n, frozenset({"properties", "rules", "signs"}), args.mode, args.workers))
    print(f"pipeline to n={args.n} ({args.mode}) in {time.perf_counter() - t:.1f}s\n")
    print("n  basic  allowed  sign-feasible  names")
    for n in range(2, args.n + 1):
        allowed = cat.allowed(n)
        feas = sum(e.sign_status == "feasible" for e in allowed)
        names = ", ".join(e.name or e.graph6 for e in allowed)
        print(f"{n:<2} {len(cat.by_n(n)):>5}  {len(allowed):>7}  {feas:>13}  {names}")
    print()
    for c in check_catalog(cat):
        print(f"[{'PASS' if c.ok else 'FAIL'}] {c.label}: {c.detail}")
    if args.out:
        print(f"wrote {export(cat, 'json', args.out)}")


if __name__ == "__main__":
    main()
