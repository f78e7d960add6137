import sys

import numpy as np
import pytest

from rbmtail import _kernels_py
from rbmtail.core import make_sample
from rbmtail.distributions import parse_distribution, sample

try:
    from rbmtail import _kernels as _kernels_c
except ImportError:  # pragma: no cover - build without a compiler
    _kernels_c = None

BACKENDS = [_kernels_py] + ([_kernels_c] if _kernels_c is not None else [])


@pytest.fixture(params=BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    import rbmtail.rbm

    monkeypatch.setattr(rbmtail.rbm, "kernels", request.param)
    return request.param


def random_sample(rng, n, low=0.0, high=3.0):
    """Positive sample with logs uniform on [low, high]."""
    return make_sample(np.exp(rng.uniform(low, high, n)))


def frechet_sample(n, seed):
    return make_sample(sample(parse_distribution("frechet:2"), n, seed=seed))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
