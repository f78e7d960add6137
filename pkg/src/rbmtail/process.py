"""The RBM limit Gaussian process on the log-threshold scale ``tau = log t``.

``R(tau)`` has mean ``lam Gamma(1-rho) (e^tau / 2)^(-rho)`` and covariance
``2 gamma^2 / (e^tau1 + e^tau2)``. Its derivative ``R'`` is jointly Gaussian
with it; every kernel below is an exact derivative of that covariance.
"""

from __future__ import annotations

import csv
import io
import math
import struct
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .core import SecondOrderModel
from .distributions import make_rng
from .errors import DomainError, FactorizationFailure

JITTER_START = 1e-12
JITTER_MAX = 1e-6
STUDY_GRID_LEFT = 6.0
STUDY_GRID_RIGHT = 4.0
STUDY_GRID_POINTS = 200

STUDY_COLUMNS = ["rho", "gamma", "tau_star", "q05", "q50", "q95", "mean_relative_regret",
                 "regret_se", "n_paths", "seed", "interior_fraction"]


@dataclass(frozen=True)
class ProcessSpec:
    model: SecondOrderModel
    grid: np.ndarray

    def __post_init__(self):
        g = np.array(self.grid, dtype=np.float64)
        g.flags.writeable = False
        object.__setattr__(self, "grid", g)
        if g.ndim != 1 or g.size < 2:
            raise DomainError("the tau grid needs at least two points")
        if np.any(np.diff(g) <= 0):
            raise DomainError("the tau grid must be strictly increasing")
        if not self.model.rho < 0:
            raise DomainError("the RBM process needs rho < 0")
        if self.model.lam is None:
            raise DomainError("the RBM process needs a bias level lam")


@dataclass(frozen=True)
class ProcessPath:
    r: np.ndarray
    r_prime: np.ndarray


def _lam(model):
    return 0.0 if model.lam is None else model.lam


def mean_r(tau, model: SecondOrderModel):
    rho = model.rho
    return _lam(model) * math.gamma(1.0 - rho) * np.exp(-rho * (np.asarray(tau) - math.log(2.0)))


def mean_rp(tau, model: SecondOrderModel):
    return -model.rho * mean_r(tau, model)


def cov_r(tau1, tau2, model: SecondOrderModel):
    return 2.0 * model.gamma**2 / (np.exp(tau1) + np.exp(tau2))


def cross_cov(tau_r, tau_rp, model: SecondOrderModel):
    """``Cov[R(tau_r), R'(tau_rp)]``."""
    e1, e2 = np.exp(tau_r), np.exp(tau_rp)
    return -2.0 * model.gamma**2 * e2 / (e1 + e2) ** 2


def cov_rp(tau1, tau2, model: SecondOrderModel):
    e1, e2 = np.exp(tau1), np.exp(tau2)
    return 4.0 * model.gamma**2 * e1 * e2 / (e1 + e2) ** 3


def joint_mean(spec: ProcessSpec) -> np.ndarray:
    g = spec.grid
    return np.concatenate([mean_r(g, spec.model), mean_rp(g, spec.model)])


def joint_covariance(spec: ProcessSpec) -> np.ndarray:
    """Covariance of ``(R(grid), R'(grid))`` as a ``2m x 2m`` block matrix."""
    g = spec.grid
    a, b = np.meshgrid(g, g, indexing="ij")
    crr = cov_r(a, b, spec.model)
    crp = cross_cov(a, b, spec.model)
    cpp = cov_rp(a, b, spec.model)
    return np.block([[crr, crp], [crp.T, cpp]])


def factorize(cov: np.ndarray):
    """Lower factor ``L`` with ``L L^T ~= cov`` and the relative jitter used.

    The matrix is scaled to unit diagonal first so the jitter perturbs every
    coordinate by the same relative amount. Jitter starts at zero, then
    ``1e-12`` and grows tenfold up to ``1e-6``.
    """
    d = np.sqrt(np.diag(cov))
    if np.any(d <= 0) or not np.all(np.isfinite(cov)):
        raise FactorizationFailure("covariance has a non-positive or non-finite diagonal")
    corr = cov / np.outer(d, d)
    corr = 0.5 * (corr + corr.T)
    eye = np.eye(len(d))
    jitter = 0.0
    while True:
        try:
            chol = np.linalg.cholesky(corr + jitter * eye)
            return chol * d[:, None], jitter
        except np.linalg.LinAlgError:
            jitter = JITTER_START if jitter == 0.0 else jitter * 10.0
            if jitter > JITTER_MAX * (1 + 1e-9):
                raise FactorizationFailure(
                    f"Cholesky failed with relative jitter up to {JITTER_MAX:g}") from None


def simulate_paths(spec: ProcessSpec, n_paths: int, seed=None, rng=None) -> List[ProcessPath]:
    """Exact joint Gaussian draws of ``(R, R')`` on ``spec.grid``."""
    if n_paths < 1:
        raise DomainError("n_paths must be at least 1")
    r, rp = simulate_arrays(spec, n_paths, seed=seed, rng=rng)
    return [ProcessPath(r[i], rp[i]) for i in range(n_paths)]


def simulate_arrays(spec: ProcessSpec, n_paths: int, seed=None, rng=None):
    """Like :func:`simulate_paths` but returns two ``(n_paths, m)`` arrays."""
    if rng is None:
        rng = make_rng(seed)
    chol, _ = factorize(joint_covariance(spec))
    z = rng.standard_normal((n_paths, chol.shape[0]))
    x = joint_mean(spec) + z @ chol.T
    m = spec.grid.size
    return x[:, :m], x[:, m:]


def threshold_objective(r_prime, spec: ProcessSpec) -> np.ndarray:
    """``R'(tau)^2 + gamma^2 / (2 e^tau)`` on the grid; works on stacked paths."""
    return np.asarray(r_prime) ** 2 + spec.model.gamma**2 / (2.0 * np.exp(spec.grid))


def process_threshold(path: ProcessPath, spec: ProcessSpec) -> float:
    """Grid argmin of the threshold objective; ties go to the smaller tau."""
    z = threshold_objective(path.r_prime, spec)
    return float(spec.grid[int(np.argmin(z))])


def expected_sq_error(tau, model: SecondOrderModel):
    """``E[R(tau)^2] = mean^2 + variance``."""
    return mean_r(tau, model) ** 2 + model.gamma**2 * np.exp(-np.asarray(tau))


def optimal_tau(model: SecondOrderModel) -> float:
    """Minimizer of :func:`expected_sq_error`.

    With ``c = lam Gamma(1-rho) 2^rho`` the stationarity condition
    ``-2 rho c^2 e^{-2 rho tau} = gamma^2 e^{-tau}`` gives
    ``tau* = log(gamma^2 / (-2 rho c^2)) / (1 - 2 rho)``.
    """
    rho = model.rho
    if not rho < 0:
        raise DomainError("optimal threshold needs rho < 0")
    if not model.lam:
        raise DomainError("with lam = 0 the expected squared error has no interior minimum")
    c2 = (model.lam * math.gamma(1.0 - rho) * 2.0**rho) ** 2
    return math.log(model.gamma**2 / (-2.0 * rho * c2)) / (1.0 - 2.0 * rho)


def study_grid(tau_star: float, n_points: int = STUDY_GRID_POINTS) -> np.ndarray:
    return np.linspace(tau_star - STUDY_GRID_LEFT, tau_star + STUDY_GRID_RIGHT, n_points)


@dataclass(frozen=True)
class RegretSummary:
    rho: float
    gamma: float
    tau_star: float
    q05: float
    q50: float
    q95: float
    mean_relative_regret: float
    regret_se: float
    n_paths: int
    seed: int
    interior_fraction: float

    def as_row(self) -> list:
        return [getattr(self, c) for c in STUDY_COLUMNS]


def _rho_stream(seed: int, rho: float) -> np.random.SeedSequence:
    bits = struct.unpack("<Q", struct.pack("<d", float(rho)))[0]
    return np.random.SeedSequence([int(seed), bits & 0xFFFFFFFF, bits >> 32])


def regret_study(rhos: Sequence[float], n_paths: int, seed: int, lam: float = 1.0,
                 n_points: int = STUDY_GRID_POINTS) -> List[RegretSummary]:
    """Adaptive-vs-oracle threshold study along ``rho = -2 gamma``.

    For each ``rho`` paths are simulated on ``[tau* - 6, tau* + 4]`` and the
    adaptive ``tau_hat`` is compared with the oracle ``tau*``. The relative
    regret of a path is ``R(tau_hat)^2 / E[R(tau*)^2]``. Each ``rho`` draws from
    its own stream keyed by its value, so adding a ``rho`` never changes the
    others.
    """
    out = []
    for rho in rhos:
        if not rho < 0:
            raise DomainError(f"rho must be negative, got {rho}")
        model = SecondOrderModel(gamma=-rho / 2.0, rho=rho, lam=lam)
        tau_star = optimal_tau(model)
        spec = ProcessSpec(model, study_grid(tau_star, n_points))
        r, rp = simulate_arrays(spec, n_paths, rng=make_rng(_rho_stream(seed, rho)))
        idx = np.argmin(threshold_objective(rp, spec), axis=1)
        tau_hat = spec.grid[idx]
        diff = tau_hat - tau_star
        regret = r[np.arange(n_paths), idx] ** 2 / expected_sq_error(tau_star, model)
        q05, q50, q95 = np.quantile(diff, [0.05, 0.5, 0.95])
        interior = float(np.mean(idx < spec.grid.size - 1))
        out.append(RegretSummary(float(rho), model.gamma, tau_star, float(q05), float(q50),
                                 float(q95), float(np.mean(regret)), _se(regret), int(n_paths),
                                 int(seed), interior))
    return out


def _se(x):
    return float(np.std(x, ddof=1) / math.sqrt(x.size)) if x.size > 1 else 0.0


def study_csv(rows: Sequence[RegretSummary]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STUDY_COLUMNS)
    for row in rows:
        w.writerow([_num(v) for v in row.as_row()])
    return buf.getvalue()


def _num(v):
    return repr(float(v)) if isinstance(v, float) else v
