"""Seeded Monte Carlo benchmark of automatic tail-index estimators."""

from __future__ import annotations

import csv
import io
import json
import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .core import make_sample
from .distributions import Distribution, make_rng, parse_distribution, sample
from .errors import DomainError, RBMError
from .hill import gh_threshold
from .rbm import rbm_estimate

ESTIMATORS = ("rbm", "gh")

ROW_COLUMNS = ["distribution", "estimator", "rmse", "rmse_se", "bias", "bias_se", "replications",
               "excluded", "mean_k_hat", "n_warnings", "se_undefined", "sample_size",
               "n_semantics", "seed", "version"]


@dataclass(frozen=True)
class BenchConfig:
    """``sample_size`` is the draw size before non-positive values are dropped."""

    distribution: str
    sample_size: int
    replications: int
    estimators: Tuple[str, ...] = ESTIMATORS
    seed: int = 0
    cap: Optional[int] = None

    def __post_init__(self):
        if self.replications < 1:
            raise DomainError("replications must be at least 1")
        if self.sample_size < 4:
            raise DomainError("sample size must be at least 4")
        object.__setattr__(self, "estimators", tuple(self.estimators))
        for e in self.estimators:
            if e not in ESTIMATORS:
                raise DomainError(f"unknown estimator {e!r}; choose from {ESTIMATORS}")
        parse_distribution(self.distribution)


@dataclass(frozen=True)
class BenchRow:
    distribution: str
    estimator: str
    rmse: float
    rmse_se: float
    bias: float
    bias_se: float
    replications: int
    excluded: int
    mean_k_hat: float
    n_warnings: int = 0
    se_undefined: bool = False
    sample_size: int = 0
    n_semantics: str = "pre_filter"
    seed: int = 0
    version: str = __version__


def rmse_bias(errors: Sequence[float]) -> Tuple[float, float, float, float]:
    """RMSE and bias of estimation errors, each with a Monte Carlo standard error.

    ``rmse_se`` follows from the delta method applied to ``sqrt(mean e^2)``.
    With a single error both standard errors are reported as 0.
    """
    e = np.asarray(errors, dtype=np.float64)
    if e.size == 0:
        raise DomainError("rmse_bias needs at least one error")
    r = e.size
    bias = float(np.mean(e))
    rmse = math.sqrt(float(np.mean(e**2)))
    if r < 2:
        return rmse, 0.0, bias, 0.0
    bias_se = float(np.std(e, ddof=1)) / math.sqrt(r)
    rmse_se = 0.0 if rmse == 0 else float(np.std(e**2, ddof=1)) / (2.0 * rmse * math.sqrt(r))
    return rmse, rmse_se, bias, bias_se


def replication_stream(seed: int, rep: int, dist_id: str) -> np.random.SeedSequence:
    """Stream for one replication, keyed by (master seed, index, distribution)."""
    return np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(rep),
                                   zlib.crc32(dist_id.encode())])


def _estimate(name, smp):
    est = rbm_estimate(smp) if name == "rbm" else gh_threshold(smp)
    return est.gamma_hat, est.k_hat, est.warning is not None


def run_replications(config: BenchConfig, reps: Sequence[int]) -> Dict[str, list]:
    """Errors for the given replication indices.

    Returns ``{estimator: [(rep, error | None, k_hat, warned), ...]}``; a failed
    estimator records ``None``.
    """
    dist = parse_distribution(config.distribution)
    gamma_true = dist.truth.gamma
    out = {e: [] for e in config.estimators}
    for rep in reps:
        x = sample(dist, config.sample_size,
                   rng=make_rng(replication_stream(config.seed, rep, dist.id)))
        try:
            smp = make_sample(x, cap=config.cap)
        except RBMError:
            smp = None
        for name in config.estimators:
            if smp is None:
                out[name].append((rep, None, math.nan, False))
                continue
            try:
                g, k, warned = _estimate(name, smp)
                out[name].append((rep, g - gamma_true, k, warned))
            except RBMError:
                out[name].append((rep, None, math.nan, False))
    return out


def _chunks(r: int, workers: int) -> List[range]:
    size = max(1, math.ceil(r / (4 * workers)))
    return [range(i, min(i + size, r)) for i in range(0, r, size)]


def run_benchmark(config: BenchConfig, workers: int = 1) -> List[BenchRow]:
    """Run every replication and aggregate one row per estimator.

    Replications are merged in index order before reduction, so rows are
    bit-identical for any ``workers``.
    """
    if workers <= 1:
        parts = [run_replications(config, range(config.replications))]
    else:
        chunks = _chunks(config.replications, workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_replications, [config] * len(chunks), chunks))
    dist = parse_distribution(config.distribution)
    rows = []
    for name in config.estimators:
        recs = sorted((rec for part in parts for rec in part[name]), key=lambda t: t[0])
        ok = [rec for rec in recs if rec[1] is not None]
        excluded = len(recs) - len(ok)
        if ok:
            rmse, rmse_se, bias, bias_se = rmse_bias([rec[1] for rec in ok])
            mean_k = float(np.mean([rec[2] for rec in ok]))
        else:
            rmse = rmse_se = bias = bias_se = mean_k = math.nan
        rows.append(BenchRow(
            distribution=dist.id, estimator=name, rmse=rmse, rmse_se=rmse_se, bias=bias,
            bias_se=bias_se, replications=len(ok), excluded=excluded, mean_k_hat=mean_k,
            n_warnings=sum(1 for rec in ok if rec[3]), se_undefined=len(ok) < 2,
            sample_size=config.sample_size, seed=config.seed))
    return rows


def _cell(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return v


def rows_to_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ROW_COLUMNS)
    for row in rows:
        d = asdict(row)
        w.writerow([_cell(d[c]) for c in ROW_COLUMNS])
    return buf.getvalue()


def rows_to_json(rows: Sequence[BenchRow], config: BenchConfig) -> str:
    doc = {
        "version": __version__,
        "seed": config.seed,
        "config": {**asdict(config), "estimators": list(config.estimators)},
        "n_semantics": "sample_size counts draws before non-positive values are dropped",
        "rows": [{k: (None if isinstance(v, float) and math.isnan(v) else v)
                  for k, v in asdict(r).items()} for r in rows],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
