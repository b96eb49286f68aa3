"""Gauss linking integral of two closed polylines.

Used as an oracle for the signed crossing count: it needs no spanning surface.
"""
from __future__ import annotations

import numpy as np

from .errors import LoopsTouch
from .geom import TOL_GEOM, OrientedLoop


def gauss_linking(loop_a: OrientedLoop, loop_b: OrientedLoop, quad_order: int = 4) -> float:
    """Linking number by tensor Gauss-Legendre quadrature over every segment pair.

    Evaluates ``(1/4pi) sum_ij int int (r1 - r2) . (dr1 x dr2) / |r1 - r2|^3``.
    For disjoint loops the integrand is smooth and the result approaches an integer
    as the loops are refined.
    """
    if quad_order < 1:
        raise ValueError("quad_order must be >= 1")
    gap = loop_a.distance_to_loop(loop_b)
    if gap <= TOL_GEOM:
        raise LoopsTouch(f"loops are {gap:.3g} apart")
    x, w = np.polynomial.legendre.leggauss(quad_order)
    t = 0.5 * (x + 1.0)
    w = 0.5 * w
    a0, a1 = loop_a.segments
    b0, b1 = loop_b.segments
    da = a1 - a0
    db = b1 - b0
    # (r1 - r2) . (da x db) only needs the cross product once per pair
    cross = np.cross(da[:, None, :], db[None, :, :])
    total = 0.0
    for ti, wi in zip(t, w):
        r1 = a0 + ti * da
        for uj, wj in zip(t, w):
            r2 = b0 + uj * db
            d = r1[:, None, :] - r2[None, :, :]
            num = np.einsum("ijk,ijk->ij", d, cross)
            dist3 = np.einsum("ijk,ijk->ij", d, d) ** 1.5
            total += wi * wj * np.sum(num / dist3)
    return float(total / (4.0 * np.pi))
