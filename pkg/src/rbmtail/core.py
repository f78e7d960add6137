"""Domain types, sample filtering and the k <-> s threshold parameterization."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError, EmptyAfterFiltering, InputFormatError

DEFAULT_CAP = 2000

_DECIMAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Sample:
    """Positive observations sorted ascending, plus filtering bookkeeping.

    ``values[i]`` is the order statistic ``X_{i+1,n}``.
    """

    values: np.ndarray
    n_raw: int
    n_dropped_nonpositive: int = 0
    n_capped: int = 0

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        v = self.values
        if v.ndim != 1 or v.size < 2:
            raise EmptyAfterFiltering(f"need at least 2 positive values, got {v.size}")
        if not np.all(v > 0) or not np.all(np.isfinite(v)):
            raise DomainError("sample values must be finite and strictly positive")
        if np.any(np.diff(v) < 0):
            raise DomainError("sample values must be sorted ascending")
        if self.n_raw != v.size + self.n_dropped_nonpositive + self.n_capped:
            raise DomainError("n_raw does not match the filtering counts")

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def logs(self) -> np.ndarray:
        return np.log(self.values)


@dataclass(frozen=True)
class ThresholdPoint:
    s: int
    k: float
    gamma_hat: float


@dataclass(frozen=True)
class EstimatorPath:
    """Estimates of one estimator on one sample, ordered by increasing k."""

    estimator_id: str
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise DomainError("an estimator path needs at least one point")
        k = self.k
        if np.any(np.diff(k) <= 0):
            raise DomainError("path k values must be strictly increasing")
        if not np.all(np.isfinite(self.gamma)):
            raise DomainError("path estimates must be finite")

    @property
    def k(self) -> np.ndarray:
        return np.array([p.k for p in self.points], dtype=np.float64)

    @property
    def s(self) -> np.ndarray:
        return np.array([p.s for p in self.points], dtype=np.int64)

    @property
    def gamma(self) -> np.ndarray:
        return np.array([p.gamma_hat for p in self.points], dtype=np.float64)

    def __len__(self) -> int:
        return len(self.points)

    @classmethod
    def from_arrays(cls, estimator_id: str, s: Sequence[int], k: Sequence[float],
                    gamma: Sequence[float]) -> "EstimatorPath":
        pts = [ThresholdPoint(int(si), float(ki), float(gi)) for si, ki, gi in zip(s, k, gamma)]
        return cls(estimator_id, pts)


@dataclass(frozen=True)
class TailEstimate:
    """A selected threshold and the estimate at it.

    ``stderr`` is always ``gamma_hat / sqrt(k_hat)``; ``s_hat`` is only set for
    the RBM estimator. ``warning`` carries a non-fatal diagnostic from the
    threshold rule, if any.
    """

    gamma_hat: float
    k_hat: float
    s_hat: Optional[int] = None
    warning: Optional[str] = None
    stderr: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "stderr", self.gamma_hat / math.sqrt(self.k_hat))


@dataclass(frozen=True)
class SecondOrderModel:
    """Tail index ``gamma``, second-order parameter ``rho`` and bias level ``lam``.

    ``lam`` is the limit of ``sqrt(k) A(n/k)``; it is ``None`` for ground-truth
    tables, where it depends on the threshold sequence rather than on the
    distribution.
    """

    gamma: float
    rho: float
    lam: Optional[float] = None

    def __post_init__(self):
        if not self.gamma > 0:
            raise DomainError(f"gamma must be positive, got {self.gamma}")
        if not self.rho <= 0:
            raise DomainError(f"rho must be non-positive, got {self.rho}")


def make_sample(raw: Iterable[float], cap: Optional[int] = None) -> Sample:
    """Drop non-positive values, optionally keep only the ``cap`` largest, sort.

    Parameters
    ----------
    raw : iterable of float
        Observations in any order. Zeros are dropped together with negatives
        since every estimator takes logarithms.
    cap : int, optional
        Keep only the ``cap`` largest positive values.

    Raises
    ------
    EmptyAfterFiltering
        If fewer than two values survive.
    """
    x = np.asarray(list(raw) if not isinstance(raw, np.ndarray) else raw, dtype=np.float64).ravel()
    if x.size == 0:
        raise EmptyAfterFiltering("no observations given")
    if np.any(np.isnan(x)):
        raise DomainError("observations must not be NaN")
    pos = np.sort(x[x > 0])
    n_dropped = int(x.size - pos.size)
    n_capped = 0
    if cap is not None:
        if cap < 2:
            raise DomainError(f"cap must be at least 2, got {cap}")
        if pos.size > cap:
            n_capped = int(pos.size - cap)
            pos = pos[n_capped:]
    if pos.size < 2:
        raise EmptyAfterFiltering(f"only {pos.size} positive value(s) remain after filtering")
    return Sample(pos, n_raw=int(x.size), n_dropped_nonpositive=n_dropped, n_capped=n_capped)


def k_of_s(s: int, n: int) -> float:
    """Hill-comparable threshold ``k = 2n/s`` for subsample size ``s``."""
    if s < 2 or s > n:
        raise DomainError(f"subsample size s={s} outside [2, {n}]")
    return 2.0 * n / s


def s_of_k(k: float, n: int) -> int:
    """Nearest admissible subsample size for a real threshold ``k``."""
    if not k > 0:
        raise DomainError(f"threshold k must be positive, got {k}")
    return int(min(max(math.floor(2.0 * n / k + 0.5), 2), n))


def parse_values(lines: Iterable[str]) -> list:
    """Parse one decimal number per line; a trailing newline is allowed."""
    out = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not _DECIMAL.fullmatch(text):
            raise InputFormatError(lineno, text)
        out.append(float(text))
    return out


def read_values(path) -> list:
    """Read a data file in the one-number-per-line format."""
    return parse_values(Path(path).read_text().splitlines())
