"""Random Block Maxima tail-index estimation.

Quick start::

    from rbmtail import make_sample, rbm_estimate
    est = rbm_estimate(make_sample(data))
    est.gamma_hat, est.k_hat, est.stderr
"""

__version__ = "0.1.0"

from ._backend import BACKEND  # noqa: E402
from .core import (  # noqa: E402
    EstimatorPath,
    Sample,
    SecondOrderModel,
    TailEstimate,
    ThresholdPoint,
    k_of_s,
    make_sample,
)
from .hill import gh_threshold, hill, smoohill  # noqa: E402
from .rbm import (  # noqa: E402
    mean_log_max_profile,
    rbm_at,
    rbm_estimate,
    rbm_path,
    select_threshold,
    subsample_max_weights,
)

__all__ = [
    "BACKEND",
    "EstimatorPath",
    "Sample",
    "SecondOrderModel",
    "TailEstimate",
    "ThresholdPoint",
    "gh_threshold",
    "hill",
    "k_of_s",
    "make_sample",
    "mean_log_max_profile",
    "rbm_at",
    "rbm_estimate",
    "rbm_path",
    "select_threshold",
    "smoohill",
    "subsample_max_weights",
]
