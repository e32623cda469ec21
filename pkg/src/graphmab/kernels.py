"""Solver kernel selection: compiled extension with pure-numpy fallback.

The active backend is chosen once at import: the Cython extension if it
built, otherwise the numpy implementation. Set ``GRAPHMAB_BACKEND=numpy``
(or ``cython``) to force a choice; ``SolverConfig.backend`` overrides per
solve. ``benchmarks/bench_solver.py`` times the two side by side.
"""

from __future__ import annotations

import os

from . import _pd_numpy

try:
    from . import _pd_cython

    _HAVE_CYTHON = True
except ImportError:  # extension not built
    _pd_cython = None
    _HAVE_CYTHON = False

_KERNELS = {"numpy": _pd_numpy.pd_solve}
if _HAVE_CYTHON:
    _KERNELS["cython"] = _pd_cython.pd_solve


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_KERNELS))


def _default_backend() -> str:
    forced = os.environ.get("GRAPHMAB_BACKEND", "").strip().lower()
    if forced:
        if forced not in _KERNELS:
            raise ImportError(
                f"GRAPHMAB_BACKEND={forced!r} unavailable; "
                f"have {available_backends()}"
            )
        return forced
    return "cython" if _HAVE_CYTHON else "numpy"


DEFAULT_BACKEND = _default_backend()


def solver_backend() -> str:
    """Name of the backend used when none is requested explicitly."""
    return DEFAULT_BACKEND


def get_pd_solve(backend: str | None = None):
    """Return the ``pd_solve`` kernel for ``backend`` (default: active one)."""
    name = DEFAULT_BACKEND if backend is None else backend
    try:
        return _KERNELS[name]
    except KeyError:
        raise ValueError(
            f"unknown solver backend {name!r}; have {available_backends()}"
        ) from None
