"""Random Block Maxima (RBM) tail-index estimator and its threshold rule.

``M(s)`` is the mean log-maximum over all size-``s`` subsamples drawn without
replacement. It is a weighted average of the top order statistics with weights
``C(n-j, s-1) / C(n, s)``, and the estimator is ``s * (M(s) - M(s-1))``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._backend import kernels
from .core import EstimatorPath, Sample, TailEstimate, k_of_s, s_of_k
from .errors import DomainError, PathTooShort, TooLargeToEnumerate

MAX_ENUMERATION_N = 20
DEFAULT_MIN_K = 4.0


@dataclass(frozen=True)
class WeightVector:
    """``w[j-1] = C(n-j, s-1) / C(n, s)`` for ``j = 1..n-s+1``."""

    n: int
    s: int
    w: np.ndarray


@dataclass(frozen=True)
class MProfile:
    """``m[s-1] = M(s)`` for ``s = 1..n``."""

    m: np.ndarray

    def __getitem__(self, s: int) -> float:
        return float(self.m[s - 1])


def _centered_desc_logs(sample: Sample) -> np.ndarray:
    # logs relative to the maximum: ties give exact zeros, M(s) - M(s-1) avoids
    # cancellation against a large common level, and the ratio is unchanged
    # bit for bit when the data are scaled by a power of two
    v = sample.values
    return np.ascontiguousarray(np.log(v[::-1] / v[-1]))


def subsample_max_weights(n: int, s: int) -> WeightVector:
    """Probabilities that the j-th largest point is the maximum of a random size-s subset.

    Uses the recurrence ``w_1 = s/n``, ``w_{j+1} = w_j (n-j-s+1)/(n-j)``, which
    stays finite for n in the tens of thousands where the binomials overflow.
    """
    if s < 1 or s > n:
        raise DomainError(f"subsample size s={s} outside [1, {n}]")
    w = np.asarray(kernels.subsample_weights(int(n), int(s)))
    w.flags.writeable = False
    return WeightVector(n, s, w)


def mean_log_max_profile(sample: Sample) -> MProfile:
    """``M(s)`` for every ``s = 1..n`` in O(n^2) time and O(n) extra space."""
    m = np.asarray(kernels.mean_log_max_profile(_centered_desc_logs(sample))) + sample.logs[-1]
    m.flags.writeable = False
    return MProfile(m)


def rbm_at(sample: Sample, s: int) -> float:
    """RBM estimate ``s (M(s) - M(s-1))`` for a single subsample size, in O(n)."""
    n = sample.n
    if s < 2 or s > n:
        raise DomainError(f"subsample size s={s} outside [2, {n}]")
    desc = _centered_desc_logs(sample)
    return s * (kernels.mean_log_max_at(desc, s) - kernels.mean_log_max_at(desc, s - 1))


def brute_force_rbm(sample: Sample, s: int) -> float:
    """Average of ``log(top) - log(second)`` over every size-``s`` subset.

    Exponential in ``n``; used only as an oracle for :func:`rbm_at`.
    """
    n = sample.n
    if s < 2 or s > n:
        raise DomainError(f"subsample size s={s} outside [2, {n}]")
    if n > MAX_ENUMERATION_N:
        raise TooLargeToEnumerate(f"n={n} exceeds the enumeration guard {MAX_ENUMERATION_N}")
    logs = sample.logs.tolist()
    # values are sorted ascending, so each combination's last two are its top two
    terms = (c[-1] - c[-2] for c in itertools.combinations(logs, s))
    return math.fsum(terms) / math.comb(n, s)


def brute_force_mean_log_max(sample: Sample, s: int) -> float:
    """Enumerated mean over all size-``s`` subsets of the log-maximum."""
    n = sample.n
    if s < 1 or s > n:
        raise DomainError(f"subsample size s={s} outside [1, {n}]")
    if n > MAX_ENUMERATION_N:
        raise TooLargeToEnumerate(f"n={n} exceeds the enumeration guard {MAX_ENUMERATION_N}")
    logs = sample.logs.tolist()
    return math.fsum(c[-1] for c in itertools.combinations(logs, s)) / math.comb(n, s)


def rbm_path(sample: Sample) -> EstimatorPath:
    """RBM estimates for ``s = n, n-1, ..., 2`` (increasing ``k = 2n/s``)."""
    n = sample.n
    m = np.asarray(kernels.mean_log_max_profile(_centered_desc_logs(sample)))
    s = np.arange(n, 1, -1)
    gamma = s * (m[s - 1] - m[s - 2])
    # M(s) is non-decreasing in exact arithmetic; clip rounding noise on ties
    gamma = np.maximum(gamma, 0.0)
    k = 2.0 * n / s
    return EstimatorPath.from_arrays("rbm", s, k, gamma)


def threshold_objective(k: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """Squared log-k derivative of the path plus the ``gamma^2 / (2k)`` variance penalty.

    Entry ``i`` is defined for ``i >= 1``; entry 0 (no left neighbour) is ``inf``.
    """
    k = np.asarray(k, dtype=np.float64)
    gamma = np.asarray(gamma, dtype=np.float64)
    out = np.full(k.shape, np.inf)
    slope = np.diff(gamma) / np.diff(np.log(k))
    out[1:] = slope**2 + gamma[1:] ** 2 / (2.0 * k[1:])
    return out


def select_threshold(path: EstimatorPath, min_k: Optional[float] = DEFAULT_MIN_K) -> TailEstimate:
    """Pick the path point minimizing :func:`threshold_objective`.

    Candidates are the points with a left neighbour and ``k >= min_k``. The
    default floor of 4 keeps subsamples at most half the data: below it the
    estimate rests on the top two or three spacings, and the plug-in penalty
    ``gamma_hat^2 / (2k)`` can vanish with a near-zero estimate. ``min_k=None``
    disables the floor, and so does a path with no point at or above it.
    Ties go to the smaller k, except on an all-zero path (constant data), where
    the objective vanishes everywhere and the largest k is returned.
    """
    if len(path) < 2:
        raise PathTooShort("threshold selection needs at least two path points")
    k = path.k
    if not np.any(path.gamma):
        p = path.points[-1]
        return TailEstimate(gamma_hat=p.gamma_hat, k_hat=p.k,
                            s_hat=p.s if path.estimator_id == "rbm" else None)
    obj = threshold_objective(k, path.gamma)
    if min_k is not None:
        floored = np.where(k >= min_k, obj, np.inf)
        if np.isfinite(floored).any():
            obj = floored
    i = int(np.argmin(obj))
    p = path.points[i]
    s_hat = p.s if path.estimator_id == "rbm" else None
    return TailEstimate(gamma_hat=p.gamma_hat, k_hat=p.k, s_hat=s_hat)


def rbm_estimate(sample: Sample, min_k: Optional[float] = DEFAULT_MIN_K) -> TailEstimate:
    """RBM estimate at the automatically selected threshold."""
    return select_threshold(rbm_path(sample), min_k=min_k)


def rbm_at_k(sample: Sample, k: float) -> TailEstimate:
    """RBM estimate at a user-fixed threshold, snapped to the nearest subsample size."""
    s = s_of_k(k, sample.n)
    return TailEstimate(gamma_hat=rbm_at(sample, s), k_hat=k_of_s(s, sample.n), s_hat=s)
