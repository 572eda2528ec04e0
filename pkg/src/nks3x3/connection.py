"""Numerical Levi-Civita connection for the nearly Kahler metric.

The metric has no published Christoffel symbols, so everything here is
computed by second-order central differences in a chart: per-factor
stereographic projection from the antipode of the chart center, which
keeps coordinates near zero where distortion is smallest.  The module
verifies the nearly Kahler condition, cross-checks the closed-form
curvature tensor, and computes second fundamental forms and mean
curvature vectors of parametrized surfaces.

Vector fields are extended off a point by holding their chart components
constant; covariant derivatives of such extensions reduce to Christoffel
contractions, and derivatives of J enter through the chart matrix of J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _core
from . import nkspace as nk
from .errors import (BoundaryTooClose, DegenerateMetric, StepOutOfRange)
from .nkspace import PointNK, TangentNK
from .quat import Quaternion
from .surface import GridSurface, ParamSurface

STEP_MIN = 1e-6
STEP_MAX = 1e-2
DEFAULT_STEP = 1e-4


def _check_step(step: float) -> float:
    step = float(step)
    if not (STEP_MIN <= step <= STEP_MAX):
        raise StepOutOfRange(f"finite-difference step {step:.3e} outside "
                             f"[{STEP_MIN:.0e}, {STEP_MAX:.0e}]")
    return step


@dataclass(frozen=True)
class Chart:
    """Per-factor stereographic chart centered at a point of S3 x S3.

    Coordinates are 6 reals (3 per factor); the center maps to 0 and the
    chart is trustworthy while each factor's coordinate norm stays
    below 2 (round-trip error <= 1e-10 there).
    """

    center: PointNK

    @property
    def center8(self) -> np.ndarray:
        return self.center.as_array()

    def point(self, coords) -> PointNK:
        return PointNK.from_array(_core.chart_point(self.center8, np.asarray(coords)))

    def coords(self, x: PointNK) -> np.ndarray:
        return _core.chart_coords(self.center8, x.as_array())

    def frame(self, coords) -> np.ndarray:
        """Pushforwards of the 6 coordinate directions, rows of a (6, 8) array."""
        return _core.chart_frame(self.center8, np.asarray(coords))

    def tangent_components(self, coords, X: TangentNK) -> np.ndarray:
        return _core.tangent_coords(self.center8, np.asarray(coords), X.as_array())

    def tangent_from_components(self, coords, comps) -> TangentNK:
        coords = np.asarray(coords)
        at = self.point(coords)
        amb = self.frame(coords).T @ np.asarray(comps)
        return TangentNK.projected(at, Quaternion.from_array(amb[:4]),
                                   Quaternion.from_array(amb[4:]))


def _gamma_at(center8: np.ndarray, coords: np.ndarray, step: float):
    """(g, dg, gamma) at chart coordinates; gamma[k, i, j] symmetric in (i, j)."""
    g0, dg = _core.metric_derivs(center8, coords, step)
    try:
        ginv = np.linalg.inv(g0)
    except np.linalg.LinAlgError as e:
        raise DegenerateMetric(f"chart metric singular at coords {coords}") from e
    # dg[k, i, j] = d_k g_ij; brackets[i, j, l] = d_i g_jl + d_j g_il - d_l g_ij
    brackets = dg + np.einsum("jil->ijl", dg) - np.einsum("lij->ijl", dg)
    gamma = 0.5 * np.einsum("kl,ijl->kij", ginv, brackets)
    return g0, dg, gamma


@dataclass
class ConnectionJet:
    """Metric, metric derivatives, and Christoffel symbols at one point."""

    chart: Chart
    coords: np.ndarray
    g: np.ndarray  # (6, 6)
    dg: np.ndarray  # (6, 6, 6), dg[k] = d g / d coord_k
    gamma: np.ndarray  # (6, 6, 6), gamma[k, i, j]
    step: float

    def metric_compatibility(self, refine: int = 4) -> float:
        """Max residual of d_k g_ij - Gamma^m_ki g_mj - Gamma^m_kj g_im.

        The Koszul inversion reproduces the differenced dg identically,
        so the derivative is re-estimated at step/refine to expose the
        O(step^2) truncation error; refine=1 returns the algebraic floor.
        """
        if refine == 1:
            dg_ref = self.dg
        else:
            _, dg_ref = _core.metric_derivs(self.chart.center8, self.coords,
                                            self.step / refine)
        res = dg_ref - np.einsum("mki,mj->kij", self.gamma, self.g) \
            - np.einsum("mkj,im->kij", self.gamma, self.g)
        return float(np.max(np.abs(res)))


def christoffels(x: PointNK, step: float = DEFAULT_STEP) -> ConnectionJet:
    """Christoffel symbols of the nearly Kahler metric at x (chart centered at x)."""
    step = _check_step(step)
    chart = Chart(x)
    coords = np.zeros(6)
    g0, dg, gamma = _gamma_at(chart.center8, coords, step)
    if np.min(np.linalg.eigvalsh(g0)) <= 0.0:
        raise DegenerateMetric("chart metric not positive definite")
    return ConnectionJet(chart, coords, g0, dg, gamma, step)


def nabla_J(X: TangentNK, Y: TangentNK, step: float = DEFAULT_STEP) -> TangentNK:
    """(nabla_X J) Y = nabla_X(JY) - J(nabla_X Y) with coordinate-constant Y.

    The nearly Kahler condition makes this vanish for Y = X, and the
    tensor is skew-symmetric in (X, Y).
    """
    step = _check_step(step)
    nk._require_same_base(X, Y)
    chart = Chart(X.base)
    center8 = chart.center8
    coords = np.zeros(6)
    _, _, gamma = _gamma_at(center8, coords, step)
    x = chart.tangent_components(coords, X)
    y = chart.tangent_components(coords, Y)
    J0 = _core.j_matrix(center8, coords)
    dJ = np.empty((6, 6, 6))
    for i in range(6):
        e = np.zeros(6)
        e[i] = step
        dJ[i] = (_core.j_matrix(center8, coords + e)
                 - _core.j_matrix(center8, coords - e)) / (2.0 * step)
    Jy = J0 @ y
    # nabla_X (JY): derivative of the J-matrix plus Christoffel transport
    d_JY = np.einsum("i,ikj,j->k", x, dJ, y) + np.einsum("kim,i,m->k", gamma, x, Jy)
    # J (nabla_X Y) for coordinate-constant Y
    J_dY = J0 @ np.einsum("kij,i,j->k", gamma, x, y)
    return chart.tangent_from_components(coords, d_JY - J_dY)


def numeric_curvature(x: PointNK, U: TangentNK, V: TangentNK, W: TangentNK,
                      step: float = DEFAULT_STEP, chart_center: PointNK = None
                      ) -> TangentNK:
    """R(U, V)W from finite differences of Christoffel symbols.

    Evaluates in the chart centered at x by default; pass chart_center to
    verify chart independence.
    """
    step = _check_step(step)
    chart = Chart(chart_center if chart_center is not None else x)
    center8 = chart.center8
    coords = chart.coords(x)
    _, _, gamma0 = _gamma_at(center8, coords, step)
    dgamma = np.empty((6, 6, 6, 6))
    for i in range(6):
        e = np.zeros(6)
        e[i] = step
        _, _, gp = _gamma_at(center8, coords + e, step)
        _, _, gm = _gamma_at(center8, coords - e, step)
        dgamma[i] = (gp - gm) / (2.0 * step)
    # R^l_{kij} components of R(e_i, e_j) e_k
    R = (np.einsum("iljk->ijkl", dgamma) - np.einsum("jlik->ijkl", dgamma)
         + np.einsum("lim,mjk->ijkl", gamma0, gamma0)
         - np.einsum("ljm,mik->ijkl", gamma0, gamma0))
    u = chart.tangent_components(coords, U)
    v = chart.tangent_components(coords, V)
    w = chart.tangent_components(coords, W)
    comps = np.einsum("i,j,k,ijkl->l", u, v, w, R)
    return chart.tangent_from_components(coords, comps)


def curvature_crosscheck(x: PointNK, U: TangentNK, V: TangentNK, W: TangentNK,
                         step: float = DEFAULT_STEP) -> float:
    """g-norm of (numeric R(U,V)W - closed-form R(U,V)W)."""
    num = numeric_curvature(x, U, V, W, step)
    closed = nk.curvature(U, V, W)
    diff = num - closed
    return math.sqrt(max(nk.g(diff, diff), 0.0))


def numeric_sectional_curvature(plane: nk.Plane2, step: float = DEFAULT_STEP,
                                chart_center: PointNK = None) -> float:
    """Sectional curvature with R from finite differences (g in closed form)."""
    X, Y = plane.X, plane.Y
    R = numeric_curvature(plane.base, X, Y, Y, step, chart_center)
    denom = nk.g(X, X) * nk.g(Y, Y) - nk.g(X, Y) ** 2
    return nk.g(R, X) / denom


@dataclass
class Bilinear2Normal:
    """Second fundamental form values at one surface point.

    h_uu, h_uv, h_vv are tangent vectors g-orthogonal to the surface
    tangent plane (h_uv stored once for the symmetric slot); induced is
    the 2x2 first fundamental form; normality_residual records the worst
    g-inner product of any value with the tangent plane.
    """

    base: PointNK
    h_uu: TangentNK
    h_uv: TangentNK
    h_vv: TangentNK
    induced: np.ndarray
    normality_residual: float

    def norm(self) -> float:
        """g-Frobenius norm with respect to the induced metric."""
        ginv = np.linalg.inv(self.induced)
        h = (self.h_uu, self.h_uv, self.h_vv)
        pick = {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 2}
        total = 0.0
        for a in range(2):
            for b in range(2):
                for c in range(2):
                    for d in range(2):
                        total += ginv[a, c] * ginv[b, d] * nk.g(
                            h[pick[(a, b)]], h[pick[(c, d)]])
        return math.sqrt(max(total, 0.0))

    def trace(self) -> TangentNK:
        """g-trace: contraction of h with the inverse induced metric."""
        ginv = np.linalg.inv(self.induced)
        return (ginv[0, 0] * self.h_uu + 2.0 * ginv[0, 1] * self.h_uv
                + ginv[1, 1] * self.h_vv)


def _surface_step(S: ParamSurface, step):
    if step is not None:
        if step <= 0:
            raise StepOutOfRange(f"surface stencil step must be positive, got {step}")
        return float(step)
    if isinstance(S, GridSurface):
        return float(min(S.du, S.dv))
    return DEFAULT_STEP


def _check_interior(S: ParamSurface, u: float, v: float, h: float):
    dom = S.domain
    if not dom.periodic_u and not (dom.u0 + 2 * h <= u <= dom.u1 - 2 * h):
        raise BoundaryTooClose(f"u = {u:.6g} within 2*step of the domain edge")
    if not dom.periodic_v and not (dom.v0 + 2 * h <= v <= dom.v1 - 2 * h):
        raise BoundaryTooClose(f"v = {v:.6g} within 2*step of the domain edge")


def second_fundamental_form(S: ParamSurface, u: float, v: float,
                            step: float = None, chart_step: float = DEFAULT_STEP,
                            chart_center: PointNK = None) -> Bilinear2Normal:
    """Second fundamental form of the surface at (u, v).

    step is the surface stencil spacing (defaults to the grid spacing
    for grid surfaces, 1e-4 otherwise); chart_step is the chart
    finite-difference step for the Christoffel symbols.
    """
    h = _surface_step(S, step)
    chart_step = _check_step(chart_step)
    _check_interior(S, u, v, h)
    center = S.point(u, v)
    chart = Chart(chart_center if chart_center is not None else center)
    y0 = chart.coords(center)

    def y(du_, dv_):
        uu, vv = S.domain.wrap(u + du_, v + dv_)
        return chart.coords(S.point(uu, vv)) - y0

    yuP, yuM = y(h, 0.0), y(-h, 0.0)
    yvP, yvM = y(0.0, h), y(0.0, -h)
    y_u = (yuP - yuM) / (2.0 * h)
    y_v = (yvP - yvM) / (2.0 * h)
    y_uu = (yuP + yuM) / (h * h)
    y_vv = (yvP + yvM) / (h * h)
    y_uv = (y(h, h) - y(h, -h) - y(-h, h) + y(-h, -h)) / (4.0 * h * h)

    g0, _, gamma = _gamma_at(chart.center8, y0, chart_step)
    tang = np.stack([y_u, y_v])  # (2, 6)
    G2 = tang @ g0 @ tang.T
    cov = {}
    for name, y_ab, a, b in (("uu", y_uu, y_u, y_u), ("uv", y_uv, y_u, y_v),
                             ("vv", y_vv, y_v, y_v)):
        cov[name] = y_ab + np.einsum("kij,i,j->k", gamma, a, b)
    try:
        G2inv = np.linalg.inv(G2)
    except np.linalg.LinAlgError as e:
        raise DegenerateMetric("surface tangent plane degenerate") from e

    normals = {}
    worst = 0.0
    for name, c in cov.items():
        coeffs = G2inv @ (tang @ g0 @ c)
        n = c - coeffs[0] * y_u - coeffs[1] * y_v
        normals[name] = chart.tangent_from_components(y0, n)
        worst = max(worst, float(np.max(np.abs(tang @ g0 @ n))))
    return Bilinear2Normal(center, normals["uu"], normals["uv"], normals["vv"],
                           G2, worst)


def mean_curvature_vector(S: ParamSurface, u: float, v: float,
                          step: float = None, chart_step: float = DEFAULT_STEP
                          ) -> TangentNK:
    """Half the g-trace of the second fundamental form at (u, v)."""
    return 0.5 * second_fundamental_form(S, u, v, step, chart_step).trace()
