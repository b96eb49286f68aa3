"""Richardson extrapolation of a regularised quantity to zero regulator."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Extrapolation:
    value: float
    error: float
    table: tuple[tuple[float, ...], ...]


def richardson(steps, values) -> Extrapolation:
    """Extrapolate ``values`` measured at ``steps`` to ``step -> 0``.

    Assumes ``f(h) = f0 + c1 h + c2 h^2 + ...`` and eliminates one power per
    column of the tableau (Neville's scheme evaluated at zero, so the steps need
    not form a geometric sequence).  ``error`` is the gap between the two most
    refined entries of the last row.
    """
    h = np.asarray(steps, float)
    f = np.asarray(values, float)
    if h.shape != f.shape or h.ndim != 1 or len(h) == 0:
        raise ValueError("steps and values must be equal-length 1-d sequences")
    if np.any(h <= 0) or len(np.unique(h)) != len(h):
        raise ValueError("steps must be positive and distinct")
    rows = [[float(v)] for v in f]
    for i in range(1, len(h)):
        for j in range(1, i + 1):
            hi, hlo = h[i], h[i - j]
            rows[i].append((hlo * rows[i][j - 1] - hi * rows[i - 1][j - 1]) / (hlo - hi))
    last = rows[-1]
    error = abs(last[-1] - last[-2]) if len(last) > 1 else float("inf")
    return Extrapolation(float(last[-1]), float(error), tuple(tuple(r) for r in rows))


def observed_order(steps, values, limit: float) -> float:
    """Least-squares slope of ``log|f(h) - limit|`` against ``log h``."""
    h = np.asarray(steps, float)
    err = np.abs(np.asarray(values, float) - limit)
    keep = err > 0
    if keep.sum() < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(h[keep]), np.log(err[keep]), 1)
    return float(slope)
