"""Pure-numpy fallback for the compiled kernels in ``_kernels.pyx``.

Both backends take the log-sample sorted in *descending* order and run the
same multiplicative weight recurrence; only the summation order differs.
"""

import numpy as np


def subsample_weights(n, s):
    i = np.arange(1, n - s + 1, dtype=np.float64)
    w = np.empty(n - s + 1, dtype=np.float64)
    w[0] = s / n
    # sequential products keep the same rounding as the compiled loop
    w[1:] = (n - i - s + 1) / (n - i)
    return np.multiply.accumulate(w)


def mean_log_max_at(desc, s):
    n = desc.shape[0]
    return float(np.dot(subsample_weights(n, s), desc[: n - s + 1]))


def mean_log_max_profile(desc):
    n = desc.shape[0]
    m = np.empty(n, dtype=np.float64)
    for s in range(1, n + 1):
        w = subsample_weights(n, s)
        m[s - 1] = np.dot(w, desc[: n - s + 1])
    return m
