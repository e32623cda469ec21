"""Compiled kernel for the edge-difference primal-dual iteration.

Hot loop of the recovery solver; semantics match ``graphmab._pd_numpy``.
"""

from libc.math cimport sqrt
from libc.stdint cimport int64_t

import numpy as np


def pd_solve(const int64_t[::1] eu, const int64_t[::1] ev,
             const int64_t[::1] sample_idx, const double[::1] sample_val,
             const double[::1] x0, double tau, double sigma,
             Py_ssize_t max_iters, double rel_tol):
    """Run the primal-dual iteration; returns ``(x, iterations, converged)``."""
    cdef Py_ssize_t n = x0.shape[0]
    cdef Py_ssize_t m = eu.shape[0]
    cdef Py_ssize_t ns = sample_idx.shape[0]

    x_np = np.empty(n, dtype=np.float64)
    xn_np = np.empty(n, dtype=np.float64)
    xbar_np = np.empty(n, dtype=np.float64)
    dty_np = np.empty(n, dtype=np.float64)
    y_np = np.zeros(m, dtype=np.float64)
    cdef double[::1] x = x_np
    cdef double[::1] xn = xn_np
    cdef double[::1] xbar = xbar_np
    cdef double[::1] dty = dty_np
    cdef double[::1] y = y_np

    cdef Py_ssize_t it, e, i, k
    cdef double v, num, den, diff
    cdef Py_ssize_t iters = 0
    cdef bint converged = 0

    for i in range(n):
        x[i] = x0[i]
        xbar[i] = x0[i]

    for it in range(max_iters):
        # dual ascent on edge differences, clipped to [-1, 1]
        for e in range(m):
            v = y[e] + sigma * (xbar[ev[e]] - xbar[eu[e]])
            if v > 1.0:
                v = 1.0
            elif v < -1.0:
                v = -1.0
            y[e] = v
        # primal descent along the negative divergence
        for i in range(n):
            dty[i] = 0.0
        for e in range(m):
            dty[eu[e]] -= y[e]
            dty[ev[e]] += y[e]
        for i in range(n):
            xn[i] = x[i] - tau * dty[i]
        # exact feasibility: sampled coordinates are pinned every iteration
        for k in range(ns):
            xn[sample_idx[k]] = sample_val[k]
        num = 0.0
        den = 0.0
        for i in range(n):
            diff = xn[i] - x[i]
            num += diff * diff
            den += x[i] * x[i]
            xbar[i] = 2.0 * xn[i] - x[i]
            x[i] = xn[i]
        iters = it + 1
        den = sqrt(den)
        if den < 1.0:
            den = 1.0
        if sqrt(num) <= rel_tol * den:
            converged = 1
            break

    return x_np, int(iters), bool(converged)
