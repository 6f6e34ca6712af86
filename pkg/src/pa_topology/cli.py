"""Command line entry point: ``patopo <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import census as census_mod
from . import harness, theory
from .complex import clique_complex
from .estimators import geometric_checkpoints, link_trace
from .homology import betti_numbers
from .pa_graph import PAParams, dumps_graph, generate, load_graph, simplify


def _number(text: str):
    """Exact rational when the text allows it (``-5``, ``-7/2``, ``0.25``), else float."""
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def _delta_float(d) -> float | int:
    f = float(d)
    return int(f) if f.is_integer() else f


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_generate(a) -> int:
    g = generate(PAParams(a.T, a.m, _delta_float(a.delta), a.seed))
    _emit(dumps_graph(g), a.out)
    return 0


def cmd_betti(a) -> int:
    g = load_graph(a.graph)
    top = a.max_q
    x = clique_complex(simplify(g), top + 1)
    print(json.dumps({"betti": betti_numbers(x, top)}))
    return 0


def cmd_trace(a) -> int:
    g = load_graph(a.graph)
    x = clique_complex(simplify(g), a.q + 1)
    cps = geometric_checkpoints(g.num_nodes, a.per_decade)
    exact_cap = g.num_nodes if a.exact else 0
    tr = link_trace(x, a.q, probe_prefix=a.probe_prefix, exact_cap=exact_cap, checkpoints=cps)
    _emit(tr.to_csv(), a.out)
    return 0


def cmd_ensemble(a) -> int:
    overrides = {k: getattr(a, k) for k in ("T", "m", "q", "replicates", "master_seed", "mode",
                                            "outdir", "threads", "mom_blocks", "per_decade")}
    if a.delta is not None:
        overrides["delta"] = _delta_float(a.delta)
    if a.checkpoints:
        overrides["checkpoints"] = [int(c) for c in a.checkpoints.split(",")]
    cfg = harness.load_config(a.config, overrides)
    summary = harness.run_ensemble(cfg)
    print(json.dumps({"outdir": cfg.outdir, "replicates": summary.replicates,
                      "tail_slope": summary.tail_slope,
                      "sandwich_violations": summary.sandwich_violations()}))
    return 0


def cmd_predict(a) -> int:
    print(json.dumps(theory.prediction_record(a.q, a.delta, a.m)))
    return 0


def cmd_census(a) -> int:
    if a.pattern:
        p, pid = theory.load_pattern(a.pattern), Path(a.pattern).stem
    elif a.square_cones is not None:
        p, pid = theory.square_cone_pattern(a.square_cones), f"square+{a.square_cones}cones"
    else:
        p, pid = theory.PatternGraph.from_edges(2, [(2, 1)]), "edge"
    Ts = [int(t) for t in a.T.split(",")]
    seeds = [harness.replicate_seed(a.master_seed, i) for i in range(a.replicates)]
    res = census_mod.census(p, Ts, a.m, _delta_float(a.delta), seeds=seeds, pattern_id=pid)
    d = res.to_dict()
    # the prediction is exact when delta is rational
    _, A, r = theory.count_sequence(p, a.delta, a.m)
    d["predicted_exponent_exact"], d["log_power"] = str(A), r
    print(json.dumps(d))
    return 0


def cmd_report(a) -> int:
    summary = harness.load_summary(a.summary)
    paths = harness.report(summary, a.out, svg=not a.no_svg)
    print(json.dumps({k: str(v) for k, v in paths.items()}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="patopo", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("generate", help="sample an attachment multigraph")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta", type=_number, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("betti", help="Betti numbers of a graph file's clique complex")
    p.add_argument("graph")
    p.add_argument("--max-q", type=int, default=2)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("trace", help="per-node link estimators as CSV")
    p.add_argument("graph")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--probe-prefix", type=int, default=20)
    p.add_argument("--per-decade", type=int, default=20)
    p.add_argument("--no-exact", dest="exact", action="store_false")
    p.add_argument("--out")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("ensemble", help="seeded ensemble run")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--T", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--delta", type=_number)
    p.add_argument("--q", type=int)
    p.add_argument("--replicates", type=int)
    p.add_argument("--master-seed", type=int)
    p.add_argument("--checkpoints", help="comma separated")
    p.add_argument("--per-decade", type=int)
    p.add_argument("--mode", choices=harness.MODES)
    p.add_argument("--outdir")
    p.add_argument("--threads", type=int)
    p.add_argument("--mom-blocks", type=int)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("predict", help="closed-form growth prediction")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--delta", type=_number, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("census", help="mean ordered pattern counts and their growth fit")
    p.add_argument("--pattern", help="pattern file ('pattern v=<n>' then 'i j mult' lines)")
    p.add_argument("--square-cones", type=int, help="built-in square with k cone vertices")
    p.add_argument("--T", default="500,1000,2000,4000")
    p.add_argument("--m", type=int, default=7)
    p.add_argument("--delta", type=_number, default=Fraction(-5))
    p.add_argument("--replicates", type=int, default=10)
    p.add_argument("--master-seed", type=int, default=0)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("report", help="plot data from a summary.json")
    p.add_argument("summary")
    p.add_argument("--out", required=True)
    p.add_argument("--no-svg", action="store_true")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return a.func(a)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
