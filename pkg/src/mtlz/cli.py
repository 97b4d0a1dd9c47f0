"""Command line: ``python -m mtlz <verb> ...``.

Exit status is 0 on success, 1 on a usage or input error, 2 when ``--check``
finds a mismatch against the reference results.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from mtlz import graph6
from mtlz.catalog import (STAGES, Catalog, PipelineConfig, check_catalog, export, name_of, prove,
                          resolve_graph, run_pipeline)
from mtlz.generate import BASIC, connected_triangle_free_levels, enumerate_layer_scheme
from mtlz.graph import GraphError
from mtlz.orientation import bipartite_cycle_count, cycle_types, sources_and_sinks, to_dot, valid_orientations
from mtlz.rules import classify, passes_basic

# prove --check: expected (class count or None, sign-level feasible)
PROOF_EXPECTATIONS = {
    "K3,3": (2, False),
    "1221": (None, False),
    "fig5a": (None, False),
    "fig5b": (8, False),
    "square": (2, True),
    "cube": (None, True),
}


def _stages(text: str) -> frozenset[str]:
    parts = frozenset(s.strip() for s in text.split(",") if s.strip())
    bad = parts - set(STAGES)
    if bad:
        raise argparse.ArgumentTypeError(f"unknown stage(s) {sorted(bad)}; choose from {','.join(STAGES)}")
    return parts


def _report_checks(checks, enabled: bool) -> int:
    if not enabled:
        return 0
    for c in checks:
        print(f"[{'PASS' if c.ok else 'FAIL'}] {c.label}: {c.detail}")
    return 0 if all(c.ok for c in checks) else 2


def _pipeline(args, default_stages) -> Catalog:
    stages = args.stages if args.stages is not None else default_stages
    cfg = PipelineConfig(args.n, stages, args.mode, args.workers, args.seed)
    return run_pipeline(cfg)


def cmd_enumerate(args) -> int:
    if args.stages is not None and args.stages - {"properties"}:
        cat = _pipeline(args, frozenset({"properties"}))
        graphs = {n: [e.graph() for e in cat.by_n(n)] for n in range(2, args.n + 1)}
    else:
        basic = args.stages is not None and "properties" in args.stages
        if args.mode == "layer":
            graphs = {n: list(enumerate_layer_scheme(n, {BASIC} if basic else ())) for n in range(2, args.n + 1)}
        else:
            levels = connected_triangle_free_levels(args.n, workers=args.workers)
            graphs = {n: [g for g in levels[n] if not basic or passes_basic(g)] for n in range(2, args.n + 1)}
    print("n\tcount")
    for n, gs in graphs.items():
        print(f"{n}\t{len(gs)}")
    if args.out:
        with open(args.out, "w") as fh:
            graph6.write((g for gs in graphs.values() for g in gs), fh)
        print(f"wrote {args.out}")
    if args.check:
        from mtlz.catalog import EXPECTED_BASIC_COUNTS, Check

        if args.stages is None or "properties" not in args.stages:
            print("--check compares basic-property counts; add --stages properties", file=sys.stderr)
            return 1
        want = {n: c for n, c in EXPECTED_BASIC_COUNTS.items() if n <= args.n}
        got = {n: len(graphs[n]) for n in want}
        return _report_checks([Check("basic-property counts", got == want, f"got {got}")], True)
    return 0


def cmd_classify(args) -> int:
    if args.graph:
        g = resolve_graph(args.graph)
        v = classify(g)
        from mtlz.catalog import _fmt_witness

        w = _fmt_witness(g, v)
        print(f"{args.graph}: {v.stage.value}" + (f" ({w})" if w else ""))
        return 0
    cat = _pipeline(args, frozenset({"properties", "rules"}))
    for n in range(2, args.n + 1):
        survivors = cat.allowed(n)
        names = ", ".join(e.name or e.graph6 for e in survivors)
        print(f"n={n}: {len(cat.by_n(n))} pass basic properties, {len(survivors)} allowed" +
              (f": {names}" if names else ""))
    if args.out:
        export(cat, "json", args.out)
        print(f"wrote {args.out}")
    return _report_checks(check_catalog(cat), args.check)


def cmd_orient(args) -> int:
    g = resolve_graph(args.graph)
    orients = valid_orientations(g)
    print(f"{args.graph}: {len(orients)} orientation classes")
    dots = []
    for i, o in enumerate(orients, 1):
        src, snk = sources_and_sinks(o)
        print(f"class {i}: {bipartite_cycle_count(o)} bipartite 4-cycles, sources "
              f"{{{','.join(g.name(v) for v in src)}}}, sinks {{{','.join(g.name(v) for v in snk)}}}")
        if args.verbose:
            for q, t in cycle_types(o).items():
                print(f"  {q.label(g)}: {t.value}")
        dots.append(to_dot(o, name=f"class{i}"))
    if args.out:
        Path(args.out).write_text("".join(dots))
        print(f"wrote {args.out}")
    return 0


def cmd_prove(args) -> int:
    report = prove(args.graph)
    print(report.text, end="")
    if args.out:
        Path(args.out).write_text(report.text)
    if not args.check:
        return 0
    name = args.graph if args.graph in PROOF_EXPECTATIONS else name_of(report.graph)
    if name not in PROOF_EXPECTATIONS:
        print(f"no reference result for {args.graph}", file=sys.stderr)
        return 0
    classes, feasible = PROOF_EXPECTATIONS[name]
    ok = report.feasible == feasible and (classes is None or classes == len(report.classes))
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: expected {'feasible' if feasible else 'infeasible'}"
          + (f" with {classes} classes" if classes else ""))
    return 0 if ok else 2


def cmd_family(args) -> int:
    from mtlz.family import (assemble_hamiltonians, build_square_family, check_integrability,
                             family_to_json, numeric_family_search)
    from mtlz.signs import build_sign_system, solve

    g = resolve_graph(args.graph)
    if args.closed_form:
        if name_of(g) != "K2,2":
            print("--closed-form is available for the square only", file=sys.stderr)
            return 1
        fam = build_square_family(np.array([1.0, 0.0]), np.array([0.0, 1.0]), args.theta)
        rep = check_integrability(assemble_hamiltonians(fam))
        print(f"closed-form square family: worst integrability residual {rep.worst:.3g}")
        best = fam
        success = rep.passed
    else:
        best, success = None, False
        for i, o in enumerate(valid_orientations(g), 1):
            sys_ = build_sign_system(g, o)
            v = solve(sys_)
            if not v.feasible:
                print(f"class {i}: sign-level infeasible, skipped")
                continue
            res = numeric_family_search(g, o, eps=v.eps_table(sys_), M=args.M, seed=args.seed, starts=args.starts)
            print(f"class {i}: residual {res.residual:.3g}, good-family margin {res.margin:.3g}, "
                  f"{'success' if res.success else 'no convergence'} (start {res.start})")
            if best is None or res.success:
                best, success = res.family, res.success
            if res.success:
                break
        if best is None:
            print("no sign-level feasible orientation class")
            return 0
    if args.out:
        Path(args.out).write_text(family_to_json(best))
        print(f"wrote {args.out}")
    if args.check and not success:
        return 2
    return 0


def cmd_export(args) -> int:
    if args.input:
        from mtlz.catalog import load

        cat = load(args.input)
    else:
        cat = _pipeline(args, frozenset({"properties", "rules", "signs"}))
    path = export(cat, args.format, args.out)
    print(f"wrote {len(cat.entries)} entries to {path}")
    return _report_checks(check_catalog(cat), args.check)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mtlz", description="MTLZ graph classification engine")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="verb", required=True)

    def pipeline_flags(sp, n_default):
        sp.add_argument("--n", type=int, default=n_default, help="largest vertex count")
        sp.add_argument("--stages", type=_stages, default=None,
                        help=f"comma-separated subset of {','.join(STAGES)}")
        sp.add_argument("--mode", choices=("exhaustive", "layer"), default="exhaustive")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--check", action="store_true", help="exit 2 if results differ from the reference")

    sp = sub.add_parser("enumerate", help="count graphs per vertex count")
    pipeline_flags(sp, 8)
    sp.add_argument("--out", help="write graph6 lines here")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("classify", help="rule-stage classification of one graph or all up to --n")
    sp.add_argument("graph", nargs="?", help="library name or graph6")
    pipeline_flags(sp, 8)
    sp.add_argument("--out", help="write the catalog as JSON")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("orient", help="valid orientation classes of a graph")
    sp.add_argument("graph")
    sp.add_argument("--out", help="write DOT here")
    sp.set_defaults(func=cmd_orient)

    sp = sub.add_parser("prove", help="sign-level proof or witness for every orientation class")
    sp.add_argument("graph")
    sp.add_argument("--out", help="write the report here")
    sp.add_argument("--check", action="store_true")
    sp.set_defaults(func=cmd_prove)

    sp = sub.add_parser("family", help="numerical family search")
    sp.add_argument("graph")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--starts", type=int, default=16)
    sp.add_argument("--M", type=int, default=2, help="number of times")
    sp.add_argument("--closed-form", action="store_true", help="square only: closed-form construction")
    sp.add_argument("--theta", type=float, default=0.3)
    sp.add_argument("--out", help="write the family as JSON")
    sp.add_argument("--check", action="store_true", help="exit 2 unless a family is found")
    sp.set_defaults(func=cmd_family)

    sp = sub.add_parser("export", help="run the pipeline and write json, graph6 or dot")
    pipeline_flags(sp, 8)
    sp.add_argument("--format", choices=("json", "graph6", "dot"), default="json")
    sp.add_argument("--input", help="re-export an existing JSON catalog instead of recomputing")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
