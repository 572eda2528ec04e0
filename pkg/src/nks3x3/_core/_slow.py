"""Pure-numpy chart/metric kernels (fallback backend).

Mirrors the compiled extension `_fast` function for function; `nks3x3._core`
picks one at import time.  Everything here works in a per-factor
stereographic chart: a point of S3 x S3 near the center (p0, q0) is

    p = p0 * sigma(y),   q = q0 * sigma(z),   (y, z) in R^3 x R^3,

where sigma maps R^3 to S3 by inverse stereographic projection from the
antipode of 1, sigma(0) = 1.  Coordinates are the 6-vector (y, z).
"""

from __future__ import annotations

import math

import numpy as np

SQRT3 = math.sqrt(3.0)


def _qmul(a, b):
    w1, x1, y1, z1 = a
    w2, x2, y2, z2 = b
    return np.array([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 + y1 * w2 + z1 * x2 - x1 * z2,
        w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
    ])


def _qconj(a):
    return np.array([a[0], -a[1], -a[2], -a[3]])


def _sigma(y):
    """Inverse stereographic projection R^3 -> S3, sigma(0) = 1."""
    s = y @ y
    d = 1.0 + s
    return np.array([(1.0 - s) / d, 2.0 * y[0] / d, 2.0 * y[1] / d, 2.0 * y[2] / d])


def _dsigma(y):
    """Rows k = d sigma / d y_k, shape (3, 4)."""
    s = y @ y
    d = 1.0 + s
    d2 = d * d
    out = np.empty((3, 4))
    for k in range(3):
        out[k, 0] = -4.0 * y[k] / d2
        for i in range(3):
            out[k, 1 + i] = (2.0 * (1.0 if i == k else 0.0) * d - 4.0 * y[i] * y[k]) / d2
    return out


def chart_point(center, coords):
    """Ambient (p, q) in R^8 at chart coordinates (y, z)."""
    center = np.asarray(center, dtype=float)
    coords = np.asarray(coords, dtype=float)
    p = _qmul(center[:4], _sigma(coords[:3]))
    q = _qmul(center[4:], _sigma(coords[3:]))
    return np.concatenate([p, q])


def chart_coords(center, point):
    """Chart coordinates of an ambient point; inverse of chart_point."""
    center = np.asarray(center, dtype=float)
    point = np.asarray(point, dtype=float)
    out = np.empty(6)
    for f in range(2):
        u = _qmul(_qconj(center[4 * f:4 * f + 4]), point[4 * f:4 * f + 4])
        out[3 * f:3 * f + 3] = u[1:] / (1.0 + u[0])
    return out


def chart_frame(center, coords):
    """Pushforwards of the 6 coordinate directions, shape (6, 8)."""
    center = np.asarray(center, dtype=float)
    coords = np.asarray(coords, dtype=float)
    out = np.zeros((6, 8))
    for f in range(2):
        c = center[4 * f:4 * f + 4]
        d = _dsigma(coords[3 * f:3 * f + 3])
        for k in range(3):
            out[3 * f + k, 4 * f:4 * f + 4] = _qmul(c, d[k])
    return out


def _j_apply(p, q, U, V):
    """Ambient almost complex structure: (2 p q^-1 V - U, -2 q p^-1 U + V)/sqrt(3)."""
    a = _qmul(p, _qconj(q))
    b = _qmul(q, _qconj(p))
    return (2.0 * _qmul(a, V) - U) / SQRT3, (-2.0 * _qmul(b, U) + V) / SQRT3


def _metric_from_frame(p, q, E):
    JE = np.empty_like(E)
    for k in range(6):
        JU, JV = _j_apply(p, q, E[k, :4], E[k, 4:])
        JE[k, :4] = JU
        JE[k, 4:] = JV
    return 0.5 * (E @ E.T + JE @ JE.T)


def metric_matrix(center, coords):
    """6x6 matrix of the invariant metric in the chart frame."""
    point = chart_point(center, coords)
    E = chart_frame(center, coords)
    return _metric_from_frame(point[:4], point[4:], E)


def metric_derivs(center, coords, step):
    """Metric and its central-difference coordinate derivatives.

    Returns (g0, dg) with g0 the 6x6 metric at `coords` and
    dg[k] = d g / d coord_k, each a 6x6 matrix.
    """
    coords = np.asarray(coords, dtype=float)
    g0 = metric_matrix(center, coords)
    dg = np.empty((6, 6, 6))
    for k in range(6):
        e = np.zeros(6)
        e[k] = step
        gp = metric_matrix(center, coords + e)
        gm = metric_matrix(center, coords - e)
        dg[k] = (gp - gm) / (2.0 * step)
    return g0, dg


def j_matrix(center, coords):
    """Matrix of J in the chart frame: J E_k = sum_l out[l, k] E_l."""
    point = chart_point(center, coords)
    E = chart_frame(center, coords)
    JE = np.empty_like(E)
    for k in range(6):
        JU, JV = _j_apply(point[:4], point[4:], E[k, :4], E[k, 4:])
        JE[k, :4] = JU
        JE[k, 4:] = JV
    gram = E @ E.T
    return np.linalg.solve(gram, E @ JE.T)


def tangent_coords(center, coords, tangent):
    """Chart components of an ambient tangent vector at `coords`."""
    E = chart_frame(center, coords)
    tangent = np.asarray(tangent, dtype=float)
    return np.linalg.solve(E @ E.T, E @ tangent)
