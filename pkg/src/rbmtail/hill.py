"""Hill-family benchmark estimators and closed-form asymptotic comparisons."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import EstimatorPath, Sample, SecondOrderModel, TailEstimate
from .errors import DomainError

GH_CRITICAL_VALUE = 1.25


@dataclass(frozen=True)
class LimitLaw:
    """Normal limit of ``sqrt(k) (estimate - gamma)``."""

    mean_shift: float
    variance: float


def _centered_desc_logs(sample: Sample) -> np.ndarray:
    v = sample.values
    return np.log(v[::-1] / v[-1])


def hill_values(sample: Sample) -> np.ndarray:
    """Hill estimates for every ``k = 1..n-1``; entry ``k-1`` holds ``hill(sample, k)``."""
    d = _centered_desc_logs(sample)
    k = np.arange(1, sample.n)
    h = np.cumsum(d[:-1]) / k - d[1:]
    return np.maximum(h, 0.0)


def hill(sample: Sample, k: int) -> float:
    """Hill estimator on the top ``k + 1`` order statistics."""
    n = sample.n
    if k < 1 or k > n - 1:
        raise DomainError(f"Hill threshold k={k} outside [1, {n - 1}]")
    d = _centered_desc_logs(sample)
    return max(float(np.mean(d[:k]) - d[k]), 0.0)


def smoohill(sample: Sample, k: int) -> float:
    """Mean of ``hill(sample, j)`` over ``j`` in ``(k, min(2k, n-1)]``.

    The window is truncated at ``n - 1`` instead of raising so the whole k range
    stays plottable.
    """
    n = sample.n
    hi = min(2 * k, n - 1)
    if k < 1 or hi <= k:
        raise DomainError(f"smooHill window ({k}, {hi}] is empty for n={n}")
    return float(np.mean(hill_values(sample)[k:hi]))


def round_k(k: float, n: int) -> int:
    """Nearest integer Hill threshold in ``[1, n-1]`` (halves round up)."""
    return int(min(max(math.floor(k + 0.5), 1), n - 1))


def hill_on_grid(sample: Sample, k_grid) -> np.ndarray:
    """Hill estimates at ``round(k)`` for each real ``k`` in ``k_grid``."""
    h = hill_values(sample)
    idx = [round_k(k, sample.n) - 1 for k in k_grid]
    return h[idx]


def smoohill_on_grid(sample: Sample, k_grid) -> np.ndarray:
    """smooHill at ``round(k)``, clipped to ``n-2`` so the window is never empty.

    Returns NaN everywhere when ``n < 3``.
    """
    n = sample.n
    if n < 3:
        return np.full(len(k_grid), np.nan)
    h = hill_values(sample)
    csum = np.concatenate(([0.0], np.cumsum(h)))
    out = np.empty(len(k_grid))
    for i, k in enumerate(k_grid):
        kk = min(round_k(k, n), n - 2)
        hi = min(2 * kk, n - 1)
        out[i] = (csum[hi] - csum[kk]) / (hi - kk)
    return out


def hill_path(sample: Sample) -> EstimatorPath:
    """Hill estimates at integer ``k = 1..n-1``; ``s`` holds ``round(2n/k)`` clipped to ``[2, n]``."""
    n = sample.n
    k = np.arange(1, n)
    s = np.clip(np.rint(2.0 * n / k), 2, n).astype(int)
    return EstimatorPath.from_arrays("hill", s, k.astype(float), hill_values(sample))


def gh_statistics(sample: Sample):
    """Guillou-Hall bias diagnostic on every admissible ``k``.

    With scaled log spacings ``U_i = i (log X_{n-i+1,n} - log X_{n-i,n})`` the
    statistic is::

        T(k) = sqrt(12/k) * sum_{i<=k} ((k - 2i + 1) / (2k)) U_i / hill(k)

    which is approximately standard normal when the top ``k`` spacings carry no
    bias. It is smoothed over a window of half-width ``floor(k/2)``::

        Q(k) = sqrt(mean of T(j)^2 for j in [k - floor(k/2), k + floor(k/2)])

    Admissible ``k`` are ``2 <= k`` with ``k + floor(k/2) <= n - 1``.

    Returns
    -------
    k : ndarray of int
        Admissible thresholds.
    q : ndarray
        ``Q(k)`` at each admissible threshold.
    """
    n = sample.n
    if n < 4:
        raise DomainError(f"the Guillou-Hall diagnostic needs n >= 4, got n={n}")
    d = _centered_desc_logs(sample)
    i = np.arange(1, n, dtype=np.float64)
    u = i * (d[:-1] - d[1:])
    s0 = np.cumsum(u)
    s1 = np.cumsum(i * u)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.sqrt(12.0 / i) * ((i + 1.0) * s0 - 2.0 * s1) / (2.0 * s0)
    t[s0 <= 0] = 0.0
    c2 = np.concatenate(([0.0], np.cumsum(t**2)))
    k = np.arange(2, n)
    half = k // 2
    k = k[k + half <= n - 1]
    half = k // 2
    lo, hi = k - half, k + half
    q = np.sqrt((c2[hi] - c2[lo - 1]) / (2 * half + 1))
    return k, q


def gh_threshold(sample: Sample, critical: float = GH_CRITICAL_VALUE) -> TailEstimate:
    """Hill estimate at the Guillou-Hall threshold.

    The threshold is the smallest ``k`` such that ``Q(t) > critical`` for every
    admissible ``t >= k``. When ``Q`` at the largest admissible ``k`` does not
    exceed the critical value the rule has no solution; the largest admissible
    ``k`` is returned with a warning instead of raising.
    """
    k, q = gh_statistics(sample)
    below = np.flatnonzero(q <= critical)
    warning = None
    if below.size == 0:
        k_hat = int(k[0])
    elif below[-1] == k.size - 1:
        k_hat = int(k[-1])
        warning = "no bias detected at any admissible k; using the largest"
    else:
        k_hat = int(k[below[-1] + 1])
    return TailEstimate(gamma_hat=hill(sample, k_hat), k_hat=float(k_hat), warning=warning)


def asymptotic_bias_ratio(rho: float) -> float:
    """Limit of RBM bias over Hill bias at equal variance: ``2^rho Gamma(1-rho) (1-rho)``."""
    if not rho < 0:
        raise DomainError(f"rho must be negative, got {rho}")
    return 2.0**rho * math.gamma(1.0 - rho) * (1.0 - rho)


def _check_limit_args(a: float, model: SecondOrderModel):
    if not a > 0:
        raise DomainError(f"a must be positive, got {a}")
    if not model.rho < 0:
        raise DomainError(f"rho must be negative, got {model.rho}")
    if model.lam is None:
        raise DomainError("the limit law needs the bias level lam")


def rbm_limit(a: float, model: SecondOrderModel) -> LimitLaw:
    """Limit law of the RBM estimator at threshold ``a k(n)``."""
    _check_limit_args(a, model)
    rho = model.rho
    mean = model.lam * math.gamma(1.0 - rho) * (a / 2.0) ** (-rho)
    return LimitLaw(mean, model.gamma**2 / a)


def rbm_limit_cov(a_i: float, a_j: float, gamma: float) -> float:
    """Limiting ``k Cov`` of RBM estimates at thresholds ``a_i k`` and ``a_j k``."""
    if not (a_i > 0 and a_j > 0):
        raise DomainError("threshold multipliers must be positive")
    return 2.0 * gamma**2 / (a_i + a_j)


def hill_limit(a: float, model: SecondOrderModel) -> LimitLaw:
    """Limit law of the Hill estimator at threshold ``a k(n)``."""
    _check_limit_args(a, model)
    rho = model.rho
    return LimitLaw(model.lam * a ** (-rho) / (1.0 - rho), model.gamma**2 / a)
