"""Clustered graph signals, total variation, and error metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import Graph, Partition

# A graph signal is a 1-D float64 array with one value per node.
GraphSignal = np.ndarray


def as_signal(values, node_count: int | None = None) -> np.ndarray:
    """Validate and return a signal as a float64 vector."""
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"signal must be 1-D, got shape {x.shape}")
    if node_count is not None and x.shape[0] != node_count:
        raise ValueError(f"signal length {x.shape[0]} != node count {node_count}")
    if not np.isfinite(x).all():
        raise ValueError("signal entries must be finite")
    return x


@dataclass(frozen=True)
class ClusteredSignalSpec:
    """Piecewise-constant signal: one coefficient per cluster of a partition."""

    partition: Partition
    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "coefficients", tuple(float(c) for c in self.coefficients)
        )


def realize(spec: ClusteredSignalSpec) -> np.ndarray:
    """Expand cluster coefficients into the dense node-value vector."""
    if len(spec.coefficients) != len(spec.partition):
        raise ValueError(
            f"{len(spec.coefficients)} coefficients for "
            f"{len(spec.partition)} clusters"
        )
    coeffs = np.asarray(spec.coefficients, dtype=np.float64)
    return coeffs[spec.partition.cluster_of]


def total_variation(g: Graph, x: np.ndarray) -> float:
    """Sum of absolute signal differences over the edges of ``g``."""
    x = as_signal(x, g.node_count)
    eu, ev = g.edge_arrays()
    if eu.shape[0] == 0:
        return 0.0
    return float(np.abs(x[ev] - x[eu]).sum())


def mse(x: np.ndarray, y: np.ndarray) -> float:
    """Mean squared entry-wise difference."""
    x = as_signal(x)
    y = as_signal(y, x.shape[0])
    d = x - y
    return float(d @ d) / x.shape[0]


def nmse(truth: np.ndarray, estimate: np.ndarray) -> float:
    """Squared recovery error normalized by the true signal's squared norm."""
    truth = as_signal(truth)
    estimate = as_signal(estimate, truth.shape[0])
    denom = float(truth @ truth)
    if denom == 0.0:
        raise ValueError("truth signal is identically zero")
    d = estimate - truth
    return float(d @ d) / denom


DB_FLOOR_DEFAULT = -120.0


def to_db(value: float, floor_db: float = DB_FLOOR_DEFAULT) -> float:
    """``10*log10(value)``, clamped at ``floor_db`` for tiny or zero input.

    Perfect recovery yields value 0; the clamp keeps such records finite so
    they do not poison aggregates. Use :func:`db_clamped` to flag them.
    """
    if value <= 0.0:
        return floor_db
    return max(10.0 * math.log10(value), floor_db)


def db_clamped(value: float, floor_db: float = DB_FLOOR_DEFAULT) -> bool:
    return value <= 0.0 or 10.0 * math.log10(value) < floor_db


# ------------------------------------------------------------- serialization


def write_signal(path, x: np.ndarray) -> None:
    """One value per line; ``repr`` keeps the full double round-trip."""
    x = as_signal(x)
    Path(path).write_text("\n".join(repr(float(v)) for v in x) + "\n")


def read_signal(path) -> np.ndarray:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    return as_signal([float(ln) for ln in lines])
