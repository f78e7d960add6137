"""Seedable samplers for heavy-tailed test distributions with known (gamma, rho).

Spec strings: ``frechet:2``, ``burr:1:0.5:2``, ``t:4``, ``loggamma``,
``uinvsqlog``, ``pareto:0.5``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import stats

from .core import SecondOrderModel
from .errors import DomainError, UnknownDistribution, Unsupported

BURR_PARAMS = (1.0, 0.5, 2.0)


@dataclass(frozen=True)
class Distribution:
    """A test distribution identified by ``kind`` and its parameters."""

    kind: str
    params: Tuple[float, ...] = ()

    def __post_init__(self):
        _validate(self.kind, self.params)

    @property
    def id(self) -> str:
        """Canonical spec string, e.g. ``frechet:2``."""
        name = {"student_t": "t", "log_gamma": "loggamma", "u_inv_sq_log": "uinvsqlog"}.get(
            self.kind, self.kind)
        return ":".join([name] + [_fmt(p) for p in self.params])

    @property
    def truth(self) -> SecondOrderModel:
        return SecondOrderModel(*truth(self))


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def _validate(kind, params):
    if kind == "frechet":
        if len(params) != 1 or not params[0] > 0:
            raise UnknownDistribution("frechet needs one positive shape parameter")
    elif kind == "burr":
        if tuple(float(p) for p in params) != BURR_PARAMS:
            raise UnknownDistribution("only burr:1:0.5:2 is supported")
    elif kind == "student_t":
        if len(params) != 1 or not params[0] > 0:
            raise UnknownDistribution("t needs one positive degrees-of-freedom parameter")
    elif kind in ("log_gamma", "u_inv_sq_log"):
        if params:
            raise UnknownDistribution(f"{kind} takes no parameters")
    elif kind == "pareto":
        if len(params) != 1 or not params[0] > 0:
            raise UnknownDistribution("pareto needs one positive tail index")
    else:
        raise UnknownDistribution(f"unknown distribution {kind!r}")


_ALIASES = {
    "frechet": "frechet",
    "burr": "burr",
    "t": "student_t",
    "student_t": "student_t",
    "loggamma": "log_gamma",
    "log_gamma": "log_gamma",
    "uinvsqlog": "u_inv_sq_log",
    "u_inv_sq_log": "u_inv_sq_log",
    "pareto": "pareto",
}


def parse_distribution(spec: str) -> Distribution:
    """Parse a spec string such as ``frechet:2`` or ``burr:1:0.5:2``."""
    name, *rest = spec.strip().split(":")
    kind = _ALIASES.get(name.lower())
    if kind is None:
        raise UnknownDistribution(f"unknown distribution {name!r} in {spec!r}")
    try:
        params = tuple(float(p) for p in rest)
    except ValueError:
        raise UnknownDistribution(f"non-numeric parameter in {spec!r}") from None
    if not all(math.isfinite(p) for p in params):
        raise UnknownDistribution(f"non-finite parameter in {spec!r}")
    return Distribution(kind, params)


def truth(dist: Distribution) -> Tuple[float, float]:
    """Ground-truth ``(gamma, rho)``; exact Pareto has ``rho = -inf``."""
    kind, p = dist.kind, dist.params
    if kind == "frechet":
        return 1.0 / p[0], -1.0
    if kind == "burr":
        return 1.0, -0.5
    if kind == "student_t":
        return 1.0 / p[0], -2.0 / p[0]
    if kind == "log_gamma":
        return 1.0, 0.0
    if kind == "u_inv_sq_log":
        return 2.0, 0.0
    if kind == "pareto":
        return p[0], -math.inf
    raise UnknownDistribution(kind)


def _check_u(u):
    u = np.asarray(u, dtype=np.float64)
    if np.any(~((u > 0) & (u < 1))):
        raise DomainError("quantile level must lie in (0, 1)")
    return u


def quantile(dist: Distribution, u):
    """Inverse CDF; accepts scalars or arrays of levels in (0, 1)."""
    u = _check_u(u)
    kind, p = dist.kind, dist.params
    if kind == "frechet":
        out = (-np.log(u)) ** (-1.0 / p[0])
    elif kind == "burr":
        out = ((1.0 - u) ** -0.5 - 1.0) ** 2
    elif kind == "student_t":
        out = stats.t.ppf(u, p[0])
    elif kind == "u_inv_sq_log":
        v = 1.0 - u
        out = v**-2.0 * (1.0 - np.log(v))
    elif kind == "pareto":
        out = (1.0 - u) ** (-p[0])
    else:
        raise Unsupported(f"{dist.id} has no closed-form quantile; use sample()")
    return out if out.ndim else float(out)


def cdf(dist: Distribution, x):
    """Distribution function, where a closed form exists."""
    x = np.asarray(x, dtype=np.float64)
    kind, p = dist.kind, dist.params
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind == "frechet":
            out = np.where(x > 0, np.exp(-np.maximum(x, 0) ** (-p[0])), 0.0)
        elif kind == "burr":
            out = np.where(x > 0, 1.0 - (1.0 + np.sqrt(np.maximum(x, 0))) ** -2.0, 0.0)
        elif kind == "student_t":
            out = stats.t.cdf(x, p[0])
        elif kind == "log_gamma":
            lx = np.log(np.maximum(x, 1.0))
            out = np.where(x > 1, 1.0 - (1.0 + lx) / np.maximum(x, 1.0), 0.0)
        elif kind == "pareto":
            out = np.where(x > 1, 1.0 - np.maximum(x, 1.0) ** (-1.0 / p[0]), 0.0)
        else:
            raise Unsupported(f"{dist.id} has no closed-form CDF")
    return out if out.ndim else float(out)


def open_uniform(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniforms strictly inside (0, 1) on the 2^-53 lattice midpoints."""
    return (rng.integers(0, 2**53, size=n, dtype=np.int64) + 0.5) / 2.0**53


def sample(dist: Distribution, n: int, seed=None, rng: np.random.Generator = None) -> np.ndarray:
    """Draw ``n`` values.

    Pass either an integer ``seed`` (or a ``SeedSequence``) or a ready ``rng``.
    Student-t draws keep their non-positive values; filtering happens when the
    :class:`~rbmtail.core.Sample` is built.
    """
    if n < 1:
        raise DomainError(f"sample size must be positive, got {n}")
    if rng is None:
        rng = make_rng(seed)
    kind, p = dist.kind, dist.params
    if kind == "student_t":
        z = rng.standard_normal(n)
        v = rng.chisquare(p[0], n)
        return z / np.sqrt(v / p[0])
    if kind == "log_gamma":
        return np.exp(rng.standard_exponential(n) + rng.standard_exponential(n))
    return quantile(dist, open_uniform(rng, n))


def make_rng(seed) -> np.random.Generator:
    """Counter-based Philox generator from an int, int sequence or SeedSequence."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(ss))
