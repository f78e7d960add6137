# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; _kernels_py holds the reference fallback."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef double _weighted_top(const double[::1] desc, Py_ssize_t n, Py_ssize_t s) noexcept nogil:
    cdef Py_ssize_t i
    cdef double w = <double>s / <double>n
    cdef double acc = w * desc[0]
    for i in range(1, n - s + 1):
        w = w * (<double>(n - i - s + 1) / <double>(n - i))
        if w == 0.0:
            break
        acc = acc + w * desc[i]
    return acc


def subsample_weights(Py_ssize_t n, Py_ssize_t s):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.empty(n - s + 1, dtype=np.float64)
    cdef Py_ssize_t i
    w[0] = <double>s / <double>n
    for i in range(1, n - s + 1):
        w[i] = w[i - 1] * (<double>(n - i - s + 1) / <double>(n - i))
    return w


def mean_log_max_at(const double[::1] desc, Py_ssize_t s):
    return _weighted_top(desc, desc.shape[0], s)


def mean_log_max_profile(const double[::1] desc):
    cdef Py_ssize_t n = desc.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] m = np.empty(n, dtype=np.float64)
    cdef double[::1] mv = m
    cdef Py_ssize_t s
    with nogil:
        for s in range(1, n + 1):
            mv[s - 1] = _weighted_top(desc, n, s)
    return m
