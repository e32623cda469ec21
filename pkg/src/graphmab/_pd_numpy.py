"""Pure-numpy kernel for the edge-difference primal-dual iteration.

Fallback used when the compiled extension is unavailable; same contract as
``graphmab._pd_cython.pd_solve``.
"""

from __future__ import annotations

import numpy as np


def pd_solve(eu, ev, sample_idx, sample_val, x0, tau, sigma, max_iters, rel_tol):
    """Primal-dual iteration for min sum_e |x[ev_e] - x[eu_e]| with exact
    agreement on the sampled coordinates.

    Dual step clips each edge variable to [-1, 1]; primal step is a
    divergence descent followed by overwriting the sampled coordinates with
    their observed values; over-relaxation doubles the fresh primal point.
    Returns ``(x, iterations, converged)``.
    """
    n = x0.shape[0]
    x = np.array(x0, dtype=np.float64, copy=True)
    xbar = x.copy()
    y = np.zeros(eu.shape[0], dtype=np.float64)

    iters = 0
    for it in range(max_iters):
        np.clip(y + sigma * (xbar[ev] - xbar[eu]), -1.0, 1.0, out=y)
        dty = np.bincount(ev, weights=y, minlength=n) - np.bincount(
            eu, weights=y, minlength=n
        )
        xn = x - tau * dty
        xn[sample_idx] = sample_val
        iters = it + 1
        num = float(np.linalg.norm(xn - x))
        den = max(float(np.linalg.norm(x)), 1.0)
        xbar = 2.0 * xn - x
        x = xn
        if num <= rel_tol * den:
            return x, iters, True
    return x, iters, False
