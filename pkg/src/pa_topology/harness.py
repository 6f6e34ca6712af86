"""Seeded ensembles of attachment clique complexes, their aggregation and plot-data output."""
from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .census import fit_exponent
from .complex import clique_complex
from .estimators import EXACT_CAP, geometric_checkpoints, link_trace
from .homology import prefix_betti_curve
from .pa_graph import PAParams, generate, simplify
from .theory import regime

log = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "PATOPO_OUTPUT_DIR"
MODES = ("exact", "hatted", "both")


def replicate_seed(master_seed: int, i: int) -> int:
    """64-bit seed of replicate ``i``: first word of numpy's SeedSequence keyed by (master, i)."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(i,))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class ExperimentConfig:
    T: int = 2000
    m: int = 7
    delta: float = -5
    q: int = 2
    replicates: int = 50
    master_seed: int = 0
    checkpoints: list[int] | None = None
    mode: str = "both"
    outdir: str = "runs/ensemble"
    threads: int = 1
    mom_blocks: int = 10
    per_decade: int = 20
    exact_cap: int = EXACT_CAP

    def __post_init__(self):
        PAParams(self.T, self.m, self.delta)  # parameter checks live there
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.q < 0:
            raise ValueError("q must be >= 0")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.mode == "exact" and self.T > self.exact_cap:
            raise ValueError(f"exact mode needs T <= exact_cap ({self.exact_cap}); use hatted or both")
        if self.mom_blocks < 1:
            raise ValueError("mom_blocks must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must fit in 64 bits")
        if self.checkpoints is not None:
            cps = sorted(set(int(c) for c in self.checkpoints))
            if not cps or cps[0] < 1 or cps[-1] > self.T:
                raise ValueError(f"checkpoints must lie in 1..T={self.T}")
            self.checkpoints = cps

    @property
    def schedule(self) -> list[int]:
        return self.checkpoints if self.checkpoints is not None else geometric_checkpoints(self.T, self.per_decade)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**dict(data))

    def to_dict(self) -> dict:
        return asdict(self)


def load_config(path: str | Path | None = None, overrides: Mapping[str, Any] | None = None,
                env: Mapping[str, str] | None = None) -> ExperimentConfig:
    """Defaults, then the JSON file, then the output-dir env var, then explicit overrides."""
    data: dict[str, Any] = {}
    if path is not None:
        data.update(json.loads(Path(path).read_text()))
    env = os.environ if env is None else env
    if env.get(OUTPUT_DIR_ENV):
        data["outdir"] = env[OUTPUT_DIR_ENV]
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return ExperimentConfig.from_mapping(data)


@dataclass
class ReplicateResult:
    index: int
    seed: int
    csv: str
    curves: dict[str, list[float]]


def _run_replicate(args) -> ReplicateResult:
    cfg, i = args
    seed = replicate_seed(cfg.master_seed, i)
    g = generate(PAParams(cfg.T, cfg.m, cfg.delta, seed))
    x = clique_complex(simplify(g), cfg.q + 1)
    cps = cfg.schedule
    if cfg.q < 2:
        betti = prefix_betti_curve(x, cfg.q, cps)
        csv = "t,betti_checkpoint\n" + "".join(f"{t},{b}\n" for t, b in zip(cps, betti))
        return ReplicateResult(i, seed, csv, {"betti": [float(b) for b in betti]})
    exact = cfg.mode in ("exact", "both") and cfg.T <= cfg.exact_cap
    tr = link_trace(x, cfg.q, cfg.T, exact_cap=cfg.T if exact else 0, checkpoints=cps)
    idx = [t - 1 for t in cps]
    curves = {
        "betti": [float(b) for _, b in tr.checkpoints],
        "upper": tr.upper[idx].astype(float).tolist(),
    }
    if cfg.mode in ("hatted", "both"):
        curves["lower_hatted"] = tr.lower[idx].astype(float).tolist()
    if exact:
        curves["lower_exact"] = tr.lower_exact[idx].astype(float).tolist()
    return ReplicateResult(i, seed, tr.to_csv(), curves)


def median_of_means(values: np.ndarray, blocks: int) -> np.ndarray:
    """Median over equal consecutive blocks of replicates (axis 0); leftover replicates are dropped."""
    values = np.asarray(values, dtype=float)
    R = values.shape[0]
    k = min(blocks, R)
    size = R // k
    means = values[: k * size].reshape(k, size, *values.shape[1:]).mean(axis=1)
    return np.median(means, axis=0)


def standard_error(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape[0] < 2:
        return np.full(values.shape[1:], np.nan)
    return values.std(axis=0, ddof=1) / math.sqrt(values.shape[0])


def tail_slope(ts: Sequence[int], ys: Sequence[float]) -> float | None:
    """Log-log slope fitted over the last decade of checkpoints (None if under 3 usable points)."""
    if not len(ts):
        return None
    lo = ts[-1] / 10
    pts = [(t, y) for t, y in zip(ts, ys) if t >= lo]
    try:
        return fit_exponent(pts)[0]
    except ValueError:
        return None


def loglog_slopes(ts: Sequence[int], ys: Sequence[float]) -> np.ndarray:
    """Discrete slopes between consecutive points in log-log coordinates."""
    t = np.log(np.asarray(ts, dtype=float))
    y = np.log(np.asarray(ys, dtype=float))
    return np.diff(y) / np.diff(t)


@dataclass
class CurveStats:
    mean: np.ndarray
    mom: np.ndarray
    se: np.ndarray

    def to_dict(self) -> dict:
        return {k: [None if not np.isfinite(v) else float(v) for v in getattr(self, k)]
                for k in ("mean", "mom", "se")}


@dataclass
class EnsembleSummary:
    q: int
    m: int
    delta: float
    T: int
    replicates: int
    checkpoints: list[int]
    stats: dict[str, CurveStats]
    values: dict[str, np.ndarray] = field(repr=False, default_factory=dict)
    seeds: list[int] = field(default_factory=list)
    mom_blocks: int = 10

    @property
    def tail_slope(self) -> float | None:
        return tail_slope(self.checkpoints, self.stats["betti"].mean) if "betti" in self.stats else None

    def sandwich_violations(self) -> dict[str, int]:
        """Replicate-checkpoint pairs where a lower curve exceeds beta or beta exceeds upper."""
        out: dict[str, int] = {}
        b = self.values.get("betti")
        if b is None:
            return out
        if "upper" in self.values:
            out["upper"] = int((b > self.values["upper"]).sum())
        for name in ("lower_exact", "lower_hatted"):
            if name in self.values:
                out[name] = int((self.values[name] > b).sum())
        return out

    @classmethod
    def from_values(cls, values: Mapping[str, np.ndarray], checkpoints: Sequence[int], *, q: int, m: int,
                    delta: float, T: int, mom_blocks: int = 10, seeds: Sequence[int] = ()) -> "EnsembleSummary":
        vals = {k: np.asarray(v, dtype=float) for k, v in values.items()}
        if not vals:
            raise ValueError("no curves to summarise")
        R = next(iter(vals.values())).shape[0]
        stats = {k: CurveStats(v.mean(axis=0), median_of_means(v, mom_blocks), standard_error(v))
                 for k, v in vals.items()}
        return cls(q, m, delta, T, R, list(checkpoints), stats, vals, list(seeds), mom_blocks)

    def to_dict(self) -> dict:
        return {
            "q": self.q, "m": self.m, "delta": self.delta, "T": self.T,
            "replicates": self.replicates, "mom_blocks": self.mom_blocks,
            "checkpoints": self.checkpoints,
            "curves": {k: s.to_dict() for k, s in self.stats.items()},
            "tail_slope": self.tail_slope,
            "sandwich_violations": self.sandwich_violations(),
            "seeds": self.seeds,
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")


def load_summary(path: str | Path) -> EnsembleSummary:
    d = json.loads(Path(path).read_text())
    stats = {k: CurveStats(*(np.array([np.nan if v is None else v for v in c[f]], dtype=float)
                             for f in ("mean", "mom", "se")))
             for k, c in d["curves"].items()}
    return EnsembleSummary(d["q"], d["m"], d["delta"], d["T"], d["replicates"], d["checkpoints"], stats,
                           {}, d.get("seeds", []), d.get("mom_blocks", 10))


def run_ensemble(cfg: ExperimentConfig, write: bool = True) -> EnsembleSummary:
    """Run every replicate, aggregate, and (optionally) write per-replicate CSVs and summary.json."""
    jobs = [(cfg, i) for i in range(cfg.replicates)]
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(_run_replicate, jobs))
    else:
        results = [_run_replicate(j) for j in jobs]

    names = list(results[0].curves)
    values = {k: np.array([r.curves[k] for r in results]) for k in names}
    summary = EnsembleSummary.from_values(values, cfg.schedule, q=cfg.q, m=cfg.m, delta=cfg.delta,
                                          T=cfg.T, mom_blocks=cfg.mom_blocks,
                                          seeds=[r.seed for r in results])
    if write:
        out = Path(cfg.outdir)
        out.mkdir(parents=True, exist_ok=True)
        width = max(4, len(str(cfg.replicates - 1)))
        for r in results:
            (out / f"replicate_{r.index:0{width}d}.csv").write_text(r.csv)
        (out / "config.json").write_text(json.dumps(cfg.to_dict(), indent=2) + "\n")
        summary.save(out / "summary.json")
        log.info("wrote %d replicate traces to %s", len(results), out)
    return summary


def _fmt(v: float) -> str:
    return "" if not np.isfinite(v) else repr(float(v))


def _log10(v: float) -> str:
    return repr(math.log10(v)) if np.isfinite(v) and v > 0 else ""


def report(summary: EnsembleSummary, outdir: str | Path, svg: bool = True) -> dict[str, Path]:
    """Write the log-log curve table, the reference band file and (optionally) an SVG chart."""
    if not summary.checkpoints or not summary.stats:
        raise ValueError("summary has no curves")
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    names = [k for k in ("betti", "upper", "lower_exact", "lower_hatted") if k in summary.stats]
    names += [k for k in summary.stats if k not in names]

    header = ["t", "log10_t"]
    for k in names:
        header += [f"mean_{k}", f"log10_mean_{k}", f"mom_{k}"]
    rows = [",".join(header)]
    for i, t in enumerate(summary.checkpoints):
        row = [str(t), repr(math.log10(t))]
        for k in names:
            s = summary.stats[k]
            row += [_fmt(s.mean[i]), _log10(s.mean[i]), _fmt(s.mom[i])]
        rows.append(",".join(row))
    paths = {"loglog": out / "loglog.csv", "band": out / "band.json"}
    paths["loglog"].write_text("\n".join(rows) + "\n")

    pred = regime(summary.q, _as_exact(summary.delta), summary.m)
    band = {
        "q": summary.q, "m": summary.m, "delta": summary.delta,
        "regime": pred.regime,
        "slope": float(pred.exponent),
        "slope_exact": str(pred.exponent),
        "log_power": pred.log_power,
        "empirical_tail_slope": summary.tail_slope,
        "scale": f"T={summary.T}, replicates={summary.replicates}; desk-scale run, "
                 "asymptotic slopes are not expected to be reached at this size",
    }
    if "betti" in summary.stats and summary.stats["betti"].mean[-1] > 0:
        # reference line through the last mean Betti value
        t_end, y_end = summary.checkpoints[-1], float(summary.stats["betti"].mean[-1])
        band["anchor"] = {"t": t_end, "value": y_end}
    paths["band"].write_text(json.dumps(band, indent=2) + "\n")

    if svg:
        chart = _plot_svg(summary, names, band, out / "loglog.svg")
        if chart is not None:
            paths["svg"] = chart
    return paths


def _as_exact(delta):
    from fractions import Fraction
    d = Fraction(delta).limit_denominator(10**6)
    return d if float(d) == float(delta) else delta


def _plot_svg(summary: EnsembleSummary, names: Sequence[str], band: dict, path: Path) -> Path | None:
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        log.warning("matplotlib unavailable; skipping SVG chart")
        return None
    ts = np.asarray(summary.checkpoints, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for k in names:
        y = summary.stats[k].mean
        ok = y > 0
        if ok.any():
            ax.plot(ts[ok], y[ok], label=k)
    if "anchor" in band:
        t0, y0 = band["anchor"]["t"], band["anchor"]["value"]
        ref = y0 * (ts / t0) ** band["slope"]
        ax.plot(ts, ref, "k--", lw=0.8, label=f"slope {band['slope_exact']}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel(f"mean over {summary.replicates} replicates")
    ax.set_title(f"q={summary.q}, m={summary.m}, delta={summary.delta}")
    ax.legend(fontsize="small")
    # fixed metadata keeps the SVG reproducible
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
