"""Seeded Monte Carlo estimation of logical error rates and thresholds.

Trial ``t`` of an experiment with base seed ``s`` draws all of its randomness
from ``Philox(SeedSequence([s, t]))``.  Trials are processed in fixed chunks
and the per-chunk counts are summed in chunk order, so the result does not
depend on how many worker processes ran the chunks.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .codes.catalogue import build_named_code
from .decoders import check_decoder, get_decoder
from .noise import ErrorModel, class_label, logical_class_bits, sample_history

__all__ = [
    "CSV_COLUMNS",
    "SCHEMA_VERSION",
    "ExperimentConfig",
    "ThresholdError",
    "ThresholdEstimate",
    "TrialStats",
    "curves_from_rows",
    "estimate_threshold",
    "logical_error_rate",
    "pseudo_threshold",
    "read_csv",
    "run_trials",
    "stats_row",
    "sweep",
    "trial_rng",
    "wilson_interval",
    "write_csv",
    "write_json",
]

SCHEMA_VERSION = 1
CSV_COLUMNS = ["family", "params", "decoder", "p", "q", "R", "trials", "failures", "p_logical",
               "ci_low", "ci_high", "seed", "wall_time_s"]
CHUNK = 500
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo point.

    Attributes:
        family, params: catalogue code (see :func:`~qeclab.codes.build_named_code`).
        noise: error-model kind (``depolarizing``, ``independent_xz``, ``bitflip``).
        p, q: data and measurement error rates.
        decoder: registry name (``ml``, ``minweight``, ``mwpm``, ``rg``, ``bs1d``).
        trials: number of trials (upper bound when ``target_ci_width`` is set).
        rounds: measurement rounds per trial; the last one is perfect.
        seed: base seed.
        jobs: worker processes (a hint; results do not depend on it).
        target_ci_width: stop early once the Wilson interval is narrower.
    """

    family: str
    params: dict = field(default_factory=dict)
    noise: str = "depolarizing"
    p: float = 0.0
    q: float = 0.0
    decoder: str = "mwpm"
    trials: int = 1000
    rounds: int = 1
    seed: int = 0
    jobs: int = 1
    target_ci_width: float | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        object.__setattr__(self, "params", dict(self.params))

    @property
    def model(self) -> ErrorModel:
        return ErrorModel(self.noise, self.p, self.q)

    def params_text(self) -> str:
        return ";".join(f"{k}={v}" for k, v in sorted(self.params.items())) or "-"


@dataclass
class TrialStats:
    """Failure counts for one configuration.

    ``failures_x`` / ``failures_z`` count trials whose residual has a nonzero
    ``X̄`` / ``Z̄`` component (a ``Ȳ`` counts in both); ``gave_up`` counts
    decoder give-ups, which are failures too.
    """

    trials: int = 0
    failures: int = 0
    failures_x: int = 0
    failures_z: int = 0
    gave_up: int = 0
    classes: dict = field(default_factory=dict)

    def merge(self, other: TrialStats) -> TrialStats:
        classes = dict(self.classes)
        for key, v in other.classes.items():
            classes[key] = classes.get(key, 0) + v
        return TrialStats(self.trials + other.trials, self.failures + other.failures,
                          self.failures_x + other.failures_x, self.failures_z + other.failures_z,
                          self.gave_up + other.gave_up, dict(sorted(classes.items())))

    @property
    def p_logical(self) -> float:
        return self.failures / self.trials if self.trials else float("nan")

    @property
    def interval(self) -> tuple[float, float]:
        return wilson_interval(self.failures, self.trials)


def wilson_interval(failures: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("need at least one trial")
    ph = failures / trials
    z2 = z * z
    den = 1 + z2 / trials
    centre = (ph + z2 / (2 * trials)) / den
    half = z * math.sqrt(ph * (1 - ph) / trials + z2 / (4 * trials * trials)) / den
    lo = 0.0 if failures == 0 else max(0.0, centre - half)
    hi = 1.0 if failures == trials else min(1.0, centre + half)
    return lo, hi


def logical_error_rate(stats: TrialStats) -> tuple[float, float, float]:
    """``(estimate, ci_low, ci_high)`` with a Wilson 95% interval."""
    lo, hi = wilson_interval(stats.failures, stats.trials)
    return stats.p_logical, lo, hi


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(trial)])))


@lru_cache(maxsize=16)
def _code(family: str, params: tuple):
    return build_named_code(family, **dict(params))


def _run_chunk(cfg: ExperimentConfig, start: int, stop: int) -> TrialStats:
    code = _code(cfg.family, tuple(sorted(cfg.params.items())))
    model = cfg.model
    decoder = get_decoder(cfg.decoder)
    st = TrialStats()
    k = code.k
    for t in range(start, stop):
        rng = trial_rng(cfg.seed, t)
        hist = sample_history(code, model, cfg.rounds, rng)
        corr = decoder(code, hist.record, model)
        cls = logical_class_bits(code, corr.x ^ hist.x[-1], corr.z ^ hist.z[-1])
        st.trials += 1
        bad = bool(cls.any()) or corr.failed
        if bad:
            st.failures += 1
            st.failures_x += bool(cls[:k].any())
            st.failures_z += bool(cls[k:].any())
            st.gave_up += bool(corr.failed)
            label = "gave_up" if corr.failed else class_label(cls, k)
            st.classes[label] = st.classes.get(label, 0) + 1
    return st


def _jobs(jobs: int | None) -> int:
    if jobs is None:
        jobs = int(os.environ.get("QECLAB_JOBS", "1") or 1)
    return max(1, int(jobs))


def run_trials(cfg: ExperimentConfig, executor=None) -> TrialStats:
    """Sample, decode and score ``cfg.trials`` trials.

    Raises:
        DecoderError: the decoder cannot handle the code (checked before any trial).
    """
    code = _code(cfg.family, tuple(sorted(cfg.params.items())))
    check_decoder(cfg.decoder, code, cfg.rounds)
    bounds = [(a, min(a + CHUNK, cfg.trials)) for a in range(0, cfg.trials, CHUNK)]
    total = TrialStats()
    jobs = _jobs(cfg.jobs)
    if cfg.target_ci_width is not None or (jobs == 1 and executor is None):
        for a, b in bounds:
            total = total.merge(_run_chunk(cfg, a, b))
            if cfg.target_ci_width is not None:
                lo, hi = total.interval
                if hi - lo <= cfg.target_ci_width:
                    break
        return total
    own = executor is None
    ex = executor or ProcessPoolExecutor(max_workers=jobs)
    try:
        futures = [ex.submit(_run_chunk, cfg, a, b) for a, b in bounds]
        for f in futures:
            total = total.merge(f.result())
    finally:
        if own:
            ex.shutdown()
    return total


# -- sweeps and files -----------------------------------------------------------


def _fmt(v: float) -> str:
    return f"{v:.10g}"


def stats_row(cfg: ExperimentConfig, stats: TrialStats, wall_time: float | None = None) -> dict:
    est, lo, hi = logical_error_rate(stats)
    return {
        "family": cfg.family,
        "params": cfg.params_text(),
        "decoder": cfg.decoder,
        "p": _fmt(cfg.p),
        "q": _fmt(cfg.q),
        "R": str(cfg.rounds),
        "trials": str(stats.trials),
        "failures": str(stats.failures),
        "p_logical": _fmt(est),
        "ci_low": _fmt(lo),
        "ci_high": _fmt(hi),
        "seed": str(cfg.seed),
        "wall_time_s": "" if wall_time is None else f"{wall_time:.3f}",
    }


def sweep(configs, jobs: int | None = 1, timing: bool = False, progress=None):
    """Run several configurations; returns ``[(cfg, stats, row), ...]`` in input order."""
    jobs = _jobs(jobs)
    out = []
    ex = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for cfg in configs:
            t0 = time.perf_counter()
            stats = run_trials(cfg, executor=ex) if ex else run_trials(cfg)
            wall = time.perf_counter() - t0 if timing else None
            row = stats_row(cfg, stats, wall)
            out.append((cfg, stats, row))
            if progress:
                progress(row)
    finally:
        if ex:
            ex.shutdown()
    return out


def write_csv(rows, fh=None) -> str:
    """Write rows (dicts with :data:`CSV_COLUMNS`) after a ``# schema=1`` line; returns the text."""
    buf = io.StringIO()
    buf.write(f"# schema={SCHEMA_VERSION}\n")
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: r.get(c, "") for c in CSV_COLUMNS})
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text


def write_json(results, fh=None) -> str:
    """JSON mirror of a sweep with the full configuration of every row."""
    doc = {"schema": SCHEMA_VERSION, "rows": []}
    for cfg, stats, row in results:
        doc["rows"].append({"config": asdict(cfg), "stats": asdict(stats), "row": row})
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fh is not None:
        fh.write(text)
    return text


def read_csv(text: str) -> list[dict]:
    """Parse CSV text written by :func:`write_csv`.

    Raises:
        ValueError: unknown schema version or missing columns.
    """
    lines = text.splitlines()
    schema = None
    body = []
    for ln in lines:
        if ln.startswith("#"):
            if "schema=" in ln:
                schema = int(ln.split("schema=", 1)[1].split()[0])
            continue
        if ln.strip():
            body.append(ln)
    if schema is not None and schema != SCHEMA_VERSION:
        raise ValueError(f"unsupported CSV schema {schema}")
    rows = list(csv.DictReader(body))
    if rows:
        missing = set(CSV_COLUMNS) - set(rows[0])
        if missing:
            raise ValueError(f"CSV lacks columns {sorted(missing)}")
    return rows


def _parse_params(text: str) -> dict:
    if text in ("", "-"):
        return {}
    out = {}
    for part in text.split(";"):
        k, _, v = part.partition("=")
        out[k] = v
    return out


def curves_from_rows(rows, size_key: str | None = None) -> dict:
    """Group CSV rows into ``{size: [(p, p_logical, (ci_low, ci_high), trials), ...]}`` sorted by ``p``."""
    curves: dict = {}
    for r in rows:
        params = _parse_params(r["params"])
        key = size_key or next((k for k in ("L", "n") if k in params), None)
        if key is None:
            raise ValueError(f"row has no size parameter: {r['params']}")
        size = int(params[key])
        curves.setdefault(size, []).append(
            (float(r["p"]), float(r["p_logical"]), (float(r["ci_low"]), float(r["ci_high"])), int(r["trials"])))
    return {s: sorted(c) for s, c in sorted(curves.items())}


# -- thresholds ---------------------------------------------------------------------


class ThresholdError(ValueError):
    """The curves do not bracket a crossing (message lists curve endpoints)."""


@dataclass(frozen=True)
class ThresholdEstimate:
    p_c: float
    low: float
    high: float
    crossings: tuple = ()

    @property
    def spread(self) -> tuple[float, float]:
        return self.low, self.high


def _unpack(curve):
    ps = np.array([c[0] for c in curve], dtype=float)
    ys = np.array([c[1] for c in curve], dtype=float)
    order = np.argsort(ps)
    return ps[order], ys[order]


def _log(y, floor=1e-12):
    return np.log(np.maximum(y, floor))


def _crossings(ps, diff):
    out = []
    for i in range(len(ps) - 1):
        a, b = diff[i], diff[i + 1]
        if a < 0 <= b or a <= 0 < b:
            t = 0.0 if b == a else -a / (b - a)
            out.append(ps[i] + t * (ps[i + 1] - ps[i]))
    return out


def estimate_threshold(curves: dict) -> ThresholdEstimate:
    """Median of pairwise crossings of ``log p̄`` interpolated linearly in ``p``.

    ``curves`` maps a size to ``(p, p̄, ...)`` tuples.  For each pair of sizes
    the difference ``log p̄_big - log p̄_small`` is interpolated on the union of
    their ``p`` grids and every change from negative to non-negative counts as
    a crossing.

    Raises:
        ThresholdError: fewer than two curves, or no pair crosses.
    """
    sizes = sorted(curves)
    if len(sizes) < 2:
        raise ThresholdError("need curves for at least two sizes")
    data = {s: _unpack(curves[s]) for s in sizes}
    found = []
    for i, a in enumerate(sizes):
        for b in sizes[i + 1:]:
            pa, ya = data[a]
            pb, yb = data[b]
            lo, hi = max(pa[0], pb[0]), min(pa[-1], pb[-1])
            grid = np.unique(np.concatenate([pa, pb]))
            grid = grid[(grid >= lo) & (grid <= hi)]
            if len(grid) < 2:
                continue
            diff = np.interp(grid, pb, _log(yb)) - np.interp(grid, pa, _log(ya))
            cs = _crossings(grid, diff)
            if cs:
                found.append((a, b, float(np.median(cs))))
    if not found:
        ends = "; ".join(f"size {s}: p̄({data[s][0][0]:.4g})={data[s][1][0]:.4g}, "
                         f"p̄({data[s][0][-1]:.4g})={data[s][1][-1]:.4g}" for s in sizes)
        raise ThresholdError(f"no crossing in range ({ends})")
    vals = np.array([f[2] for f in found])
    return ThresholdEstimate(float(np.median(vals)), float(vals.min()), float(vals.max()), tuple(found))


def pseudo_threshold(curve) -> float:
    """Break-even rate where ``p̄(p) = p`` (log-linear interpolation of ``p̄ / p``).

    Raises:
        ThresholdError: the curve does not cross the diagonal from below.
    """
    ps, ys = _unpack(curve)
    keep = ps > 0
    ps, ys = ps[keep], ys[keep]
    diff = _log(ys) - np.log(ps)
    cs = _crossings(ps, diff)
    if not cs:
        raise ThresholdError(f"curve does not cross p̄ = p between p={ps[0]:.4g} and p={ps[-1]:.4g}")
    return float(cs[0])
