"""Sign-level proofs (or witnesses) for the named graphs, written to one file each."""

import argparse
from pathlib import Path

from mtlz.catalog import prove

NAMES = ("K3,3", "1221", "fig5a", "fig5b", "square", "K2,3", "cube", "cube+1")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/proofs")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in NAMES:
        rep = prove(name)
        path = out / f"{name.replace(',', '_').replace('+', 'p')}.txt"
        path.write_text(rep.text)
        print(f"{name:<8} {len(rep.classes):>3} classes  {'feasible' if rep.feasible else 'infeasible':<10} -> {path}")


if __name__ == "__main__":
    main()
