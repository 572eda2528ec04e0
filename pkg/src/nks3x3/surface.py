"""Parametrized almost complex surfaces in the nearly Kahler S3 x S3.

A surface is a map phi(u, v) = (p(u, v), q(u, v)) into S3 x S3.  The
module fixes the orientation convention J phi_u = phi_v, extracts the
left-translated frame fields

    alpha = p^-1 p_u,  beta = p^-1 p_v,  gamma = q^-1 q_u,  delta = q^-1 q_v

as imaginary quaternions (3-vectors), and computes everything the frames
determine: integrability residuals, the induced conformal factor lambda
and its Gaussian curvature, the holomorphic differential Lambda dz^2, and
the equivalent vanishing conditions that characterize the Lambda = 0
surfaces.  Builtins provide the product-of-circles torus (raw and
adapted) and the totally geodesic sphere.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (BadInput, DegenerateMetric, NotAlmostComplex)
from .nkspace import IsometryNK, PointNK, g_arrays, j_arrays, p_arrays
from .quat import qconj, qmul

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class Domain:
    """Rectangle [u0,u1] x [v0,v1] with per-axis periodicity flags.

    Periodic axes treat u1 (v1) as identified with u0 (v0); grids on a
    periodic axis exclude the right endpoint and wrap differences.
    """

    u0: float
    u1: float
    v0: float
    v1: float
    periodic_u: bool = False
    periodic_v: bool = False

    def __post_init__(self):
        if not (self.u1 > self.u0 and self.v1 > self.v0):
            raise BadInput("domain rectangle has non-positive extent")

    @property
    def width_u(self) -> float:
        return self.u1 - self.u0

    @property
    def width_v(self) -> float:
        return self.v1 - self.v0

    def wrap(self, u: float, v: float) -> tuple:
        if self.periodic_u:
            u = self.u0 + (u - self.u0) % self.width_u
        if self.periodic_v:
            v = self.v0 + (v - self.v0) % self.width_v
        return u, v


def grid_axes(domain: Domain, nu: int, nv: int):
    """Axis samples and spacings; periodic axes exclude the right endpoint."""
    if nu < 2 or nv < 2:
        raise BadInput("grid needs at least 2 nodes per axis")
    if domain.periodic_u:
        du = domain.width_u / nu
        us = domain.u0 + du * np.arange(nu)
    else:
        du = domain.width_u / (nu - 1)
        us = np.linspace(domain.u0, domain.u1, nu)
    if domain.periodic_v:
        dv = domain.width_v / nv
        vs = domain.v0 + dv * np.arange(nv)
    else:
        dv = domain.width_v / (nv - 1)
        vs = np.linspace(domain.v0, domain.v1, nv)
    return us, vs, du, dv


def interior_mask(nu: int, nv: int, periodic_u: bool, periodic_v: bool) -> np.ndarray:
    """True where centered stencils apply (everywhere along periodic axes)."""
    mask = np.ones((nu, nv), dtype=bool)
    if not periodic_u:
        mask[0, :] = False
        mask[-1, :] = False
    if not periodic_v:
        mask[:, 0] = False
        mask[:, -1] = False
    return mask


class ParamSurface:
    """Base class: a map (u, v) -> PointNK over a rectangular domain."""

    domain: Domain
    analytic: bool = False

    def point(self, u: float, v: float) -> PointNK:
        arr = self.point_array(np.array(u, dtype=float), np.array(v, dtype=float))
        return PointNK.from_array(np.asarray(arr, dtype=float).reshape(8))

    def point_array(self, U, V) -> np.ndarray:
        raise NotImplementedError

    def derivative_arrays(self, U, V):
        """(phi_u, phi_v) as (...,8) arrays, or None when only FD is available."""
        return None


class AnalyticSurface(ParamSurface):
    """Surface given by vectorized closures, optionally with derivatives."""

    def __init__(self, domain: Domain, point_fn, deriv_fn=None):
        self.domain = domain
        self._point_fn = point_fn
        self._deriv_fn = deriv_fn
        self.analytic = deriv_fn is not None

    def point_array(self, U, V):
        U, V = np.broadcast_arrays(np.asarray(U, dtype=float), np.asarray(V, dtype=float))
        return self._point_fn(U, V)

    def derivative_arrays(self, U, V):
        if self._deriv_fn is None:
            return None
        U, V = np.broadcast_arrays(np.asarray(U, dtype=float), np.asarray(V, dtype=float))
        return self._deriv_fn(U, V)


class GridSurface(ParamSurface):
    """Surface known only at the nodes of its own uniform grid."""

    def __init__(self, domain: Domain, nodes: np.ndarray):
        nodes = np.asarray(nodes, dtype=float)
        if nodes.ndim != 3 or nodes.shape[2] != 8:
            raise BadInput(f"grid nodes must have shape (nu, nv, 8), got {nodes.shape}")
        norms_p = np.linalg.norm(nodes[:, :, :4], axis=2)
        norms_q = np.linalg.norm(nodes[:, :, 4:], axis=2)
        bad = np.argwhere((np.abs(norms_p - 1.0) > 1e-10) | (np.abs(norms_q - 1.0) > 1e-10))
        if bad.size:
            iu, iv = bad[0]
            raise BadInput(f"node ({iu},{iv}) is not on S3 x S3: |p| = "
                           f"{norms_p[iu, iv]:.12f}, |q| = {norms_q[iu, iv]:.12f}")
        self.domain = domain
        self.nodes = nodes
        self.nu, self.nv = nodes.shape[:2]
        self.us, self.vs, self.du, self.dv = grid_axes(domain, self.nu, self.nv)

    def _index(self, u: float, v: float):
        u, v = self.domain.wrap(u, v)
        fu = (u - self.domain.u0) / self.du
        fv = (v - self.domain.v0) / self.dv
        iu, iv = round(fu), round(fv)
        if abs(fu - iu) > 1e-6 or abs(fv - iv) > 1e-6:
            raise BadInput(f"query ({u:.6g}, {v:.6g}) is off the stored grid")
        return int(iu) % self.nu if self.domain.periodic_u else int(iu), \
            int(iv) % self.nv if self.domain.periodic_v else int(iv)

    def point_array(self, U, V):
        U, V = np.broadcast_arrays(np.asarray(U, dtype=float), np.asarray(V, dtype=float))
        out = np.empty(U.shape + (8,))
        for idx in np.ndindex(U.shape):
            iu, iv = self._index(float(U[idx]), float(V[idx]))
            out[idx] = self.nodes[iu, iv]
        return out

    def point(self, u: float, v: float) -> PointNK:
        iu, iv = self._index(u, v)
        return PointNK.from_array(self.nodes[iu, iv])


def _axis_deriv(A: np.ndarray, h: float, axis: int, periodic: bool) -> np.ndarray:
    """Second-order first derivative along an axis of a grid array."""
    if periodic:
        return (np.roll(A, -1, axis=axis) - np.roll(A, 1, axis=axis)) / (2.0 * h)
    return np.gradient(A, h, axis=axis, edge_order=2)


def _axis_second_deriv(A: np.ndarray, h: float, axis: int, periodic: bool) -> np.ndarray:
    """Second-order second derivative; 4-point one-sided rows at open edges."""
    if periodic:
        return (np.roll(A, -1, axis=axis) - 2.0 * A + np.roll(A, 1, axis=axis)) / (h * h)
    A = np.moveaxis(A, axis, 0)
    out = np.empty_like(A)
    out[1:-1] = (A[2:] - 2.0 * A[1:-1] + A[:-2]) / (h * h)
    out[0] = (2.0 * A[0] - 5.0 * A[1] + 4.0 * A[2] - A[3]) / (h * h)
    out[-1] = (2.0 * A[-1] - 5.0 * A[-2] + 4.0 * A[-3] - A[-4]) / (h * h)
    return np.moveaxis(out, 0, axis)


@dataclass
class SurfaceGrid:
    """A surface evaluated on its grid: points and first derivatives."""

    domain: Domain
    us: np.ndarray
    vs: np.ndarray
    du: float
    dv: float
    points: np.ndarray  # (nu, nv, 8)
    d_u: np.ndarray  # (nu, nv, 8)
    d_v: np.ndarray  # (nu, nv, 8)
    analytic: bool

    @property
    def shape(self):
        return self.points.shape[:2]

    @property
    def p(self):
        return self.points[:, :, :4]

    @property
    def q(self):
        return self.points[:, :, 4:]

    def interior_mask(self) -> np.ndarray:
        nu, nv = self.shape
        return interior_mask(nu, nv, self.domain.periodic_u, self.domain.periodic_v)


def sample(S: ParamSurface, nu: int = 129, nv: int = 129) -> SurfaceGrid:
    """Evaluate a surface and its first derivatives on an nu x nv grid.

    Analytic derivatives are used when the surface provides them;
    otherwise grid finite differences (centered inside, second-order
    one-sided at open edges, wrapped along periodic axes).
    """
    dom = S.domain
    derivs = None
    if isinstance(S, GridSurface):
        us, vs, du, dv = S.us, S.vs, S.du, S.dv
        points = S.nodes
        if (nu, nv) != points.shape[:2]:
            points = _subsample_nodes(S, nu, nv)
            us, vs, du, dv = grid_axes(dom, nu, nv)
    else:
        us, vs, du, dv = grid_axes(dom, nu, nv)
        U, V = np.meshgrid(us, vs, indexing="ij")
        points = S.point_array(U, V)
        derivs = S.derivative_arrays(U, V)
    if derivs is None:
        d_u = _axis_deriv(points, du, 0, dom.periodic_u)
        d_v = _axis_deriv(points, dv, 1, dom.periodic_v)
        analytic = False
    else:
        d_u, d_v = derivs
        analytic = True
    return SurfaceGrid(dom, us, vs, du, dv, points, d_u, d_v, analytic)


def _subsample_nodes(S: GridSurface, nu: int, nv: int) -> np.ndarray:
    msg = (f"grid surface stores {S.nu}x{S.nv} nodes; cannot resample to "
           f"{nu}x{nv} (stride must be integral)")
    if S.domain.periodic_u:
        if S.nu % nu:
            raise BadInput(msg)
        su = S.nu // nu
    else:
        if (S.nu - 1) % (nu - 1):
            raise BadInput(msg)
        su = (S.nu - 1) // (nu - 1)
    if S.domain.periodic_v:
        if S.nv % nv:
            raise BadInput(msg)
        sv = S.nv // nv
    else:
        if (S.nv - 1) % (nv - 1):
            raise BadInput(msg)
        sv = (S.nv - 1) // (nv - 1)
    return S.nodes[::su, ::sv][:nu, :nv]


# ---------------------------------------------------------------------------
# builtin surfaces


def example1_torus() -> ParamSurface:
    """Product-of-circles torus (e^{is}, e^{it}); not adapted to J."""

    def point_fn(S, T):
        out = np.zeros(S.shape + (8,))
        out[..., 0] = np.cos(S)
        out[..., 1] = np.sin(S)
        out[..., 4] = np.cos(T)
        out[..., 5] = np.sin(T)
        return out

    def deriv_fn(S, T):
        d_s = np.zeros(S.shape + (8,))
        d_s[..., 0] = -np.sin(S)
        d_s[..., 1] = np.cos(S)
        d_t = np.zeros(S.shape + (8,))
        d_t[..., 4] = -np.sin(T)
        d_t[..., 5] = np.cos(T)
        return d_s, d_t

    dom = Domain(0.0, 2.0 * math.pi, 0.0, 2.0 * math.pi,
                 periodic_u=True, periodic_v=True)
    return AnalyticSurface(dom, point_fn, deriv_fn)


def example1_torus_isothermal() -> ParamSurface:
    """The torus reparametrized so that J phi_u = phi_v exactly.

    (u, v) -> (e^{i(u - v/sqrt(3))}, e^{-2iv/sqrt(3)}); the constant
    frames are alpha = i, beta = -i/sqrt(3).
    """

    def angles(U, V):
        return U - V / SQRT3, -2.0 * V / SQRT3

    def point_fn(U, V):
        S, T = angles(U, V)
        out = np.zeros(U.shape + (8,))
        out[..., 0] = np.cos(S)
        out[..., 1] = np.sin(S)
        out[..., 4] = np.cos(T)
        out[..., 5] = np.sin(T)
        return out

    def deriv_fn(U, V):
        S, T = angles(U, V)
        ps = np.zeros(U.shape + (2,))
        ps[..., 0] = -np.sin(S)
        ps[..., 1] = np.cos(S)
        qt = np.zeros(U.shape + (2,))
        qt[..., 0] = -np.sin(T)
        qt[..., 1] = np.cos(T)
        d_u = np.zeros(U.shape + (8,))
        d_u[..., :2] = ps
        d_v = np.zeros(U.shape + (8,))
        d_v[..., :2] = -ps / SQRT3
        d_v[..., 4:6] = -2.0 * qt / SQRT3
        return d_u, d_v

    dom = Domain(0.0, 2.0 * math.pi, 0.0, 2.0 * SQRT3 * math.pi,
                 periodic_u=True, periodic_v=True)
    return AnalyticSurface(dom, point_fn, deriv_fn)


def example2_sphere(half_width: float = 1.0) -> ParamSurface:
    """The totally geodesic sphere x -> ((1 - sqrt(3)x)/2, (1 + sqrt(3)x)/2).

    x(u, v) = (2v, 2u, u^2 + v^2 - 1)/(1 + u^2 + v^2) parametrizes the
    unit sphere of imaginary quaternions isothermally with the
    orientation that makes J phi_u = phi_v.
    """

    def xmap(U, V):
        D = 1.0 + U * U + V * V
        x = np.empty(U.shape + (3,))
        x[..., 0] = 2.0 * V / D
        x[..., 1] = 2.0 * U / D
        x[..., 2] = (U * U + V * V - 1.0) / D
        return x, D

    def point_fn(U, V):
        x, _ = xmap(U, V)
        out = np.empty(U.shape + (8,))
        out[..., 0] = 0.5
        out[..., 1:4] = -(SQRT3 / 2.0) * x
        out[..., 4] = 0.5
        out[..., 5:8] = (SQRT3 / 2.0) * x
        return out

    def deriv_fn(U, V):
        D = 1.0 + U * U + V * V
        D2 = D * D
        x_u = np.empty(U.shape + (3,))
        x_u[..., 0] = -4.0 * U * V / D2
        x_u[..., 1] = (2.0 * D - 4.0 * U * U) / D2
        x_u[..., 2] = 4.0 * U / D2
        x_v = np.empty(U.shape + (3,))
        x_v[..., 0] = (2.0 * D - 4.0 * V * V) / D2
        x_v[..., 1] = -4.0 * U * V / D2
        x_v[..., 2] = 4.0 * V / D2
        d_u = np.zeros(U.shape + (8,))
        d_u[..., 1:4] = -(SQRT3 / 2.0) * x_u
        d_u[..., 5:8] = (SQRT3 / 2.0) * x_u
        d_v = np.zeros(U.shape + (8,))
        d_v[..., 1:4] = -(SQRT3 / 2.0) * x_v
        d_v[..., 5:8] = (SQRT3 / 2.0) * x_v
        return d_u, d_v

    dom = Domain(-half_width, half_width, -half_width, half_width)
    return AnalyticSurface(dom, point_fn, deriv_fn)


# ---------------------------------------------------------------------------
# frame fields and derived quantities


def almost_complex_residual(S: ParamSurface, nu: int = 129, nv: int = 129) -> np.ndarray:
    """Nodewise g-norm of J phi_u - phi_v (zero iff adapted almost complex)."""
    return _ac_residual(sample(S, nu, nv))


def _ac_residual(G: SurfaceGrid) -> np.ndarray:
    JU, JV = j_arrays(G.p, G.q, G.d_u[:, :, :4], G.d_u[:, :, 4:])
    DU = JU - G.d_v[:, :, :4]
    DV = JV - G.d_v[:, :, 4:]
    val = g_arrays(G.p, G.q, DU, DV, DU, DV)
    return np.sqrt(np.maximum(val, 0.0))


@dataclass
class FrameFields:
    """Left-translated frames alpha, beta, gamma, delta on a grid.

    The (nu, nv, 3) arrays hold imaginary-quaternion components (i, j, k).
    max_ac_residual is the almost-complex residual the grid passed;
    max_frame_real_part records how far p^-1 p_u strayed from imaginary.
    """

    grid: SurfaceGrid
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray
    max_ac_residual: float
    max_frame_real_part: float

    @property
    def domain(self) -> Domain:
        return self.grid.domain

    @property
    def du(self) -> float:
        return self.grid.du

    @property
    def dv(self) -> float:
        return self.grid.dv

    def interior_mask(self) -> np.ndarray:
        return self.grid.interior_mask()


def frame_fields(S: ParamSurface, nu: int = 129, nv: int = 129,
                 tol: float = 1e-8) -> FrameFields:
    """Extract (alpha, beta, gamma, delta) from an adapted almost complex surface.

    Raises NotAlmostComplex unless the almost-complex residual stays
    below tol on the whole grid (boundary included for analytic
    derivatives, excluded for grid finite differences).
    """
    G = sample(S, nu, nv)
    res = _ac_residual(G)
    check = res if G.analytic else res[G.interior_mask()]
    worst = float(np.max(check))
    if worst > tol:
        raise NotAlmostComplex(
            f"max ||J phi_u - phi_v|| = {worst:.3e} exceeds tol {tol:.1e}; "
            "the parametrization is not adapted (or oriented J phi_u = -phi_v)")
    a_full = qmul(qconj(G.p), G.d_u[:, :, :4])
    b_full = qmul(qconj(G.p), G.d_v[:, :, :4])
    c_full = qmul(qconj(G.q), G.d_u[:, :, 4:])
    d_full = qmul(qconj(G.q), G.d_v[:, :, 4:])
    real_part = max(float(np.max(np.abs(f[:, :, 0]))) for f in (a_full, b_full, c_full, d_full))
    return FrameFields(G, a_full[:, :, 1:], b_full[:, :, 1:], c_full[:, :, 1:],
                       d_full[:, :, 1:], worst, real_part)


def gd_residuals(F: FrameFields) -> tuple:
    """Nodewise norms of gamma - (sqrt(3)/2 beta + alpha/2) and delta - (beta/2 - sqrt(3)/2 alpha)."""
    r1 = F.gamma - (SQRT3 / 2.0) * F.beta - 0.5 * F.alpha
    r2 = F.delta - 0.5 * F.beta + (SQRT3 / 2.0) * F.alpha
    return np.linalg.norm(r1, axis=2), np.linalg.norm(r2, axis=2)


def integrability_residuals(F: FrameFields) -> tuple:
    """Nodewise norms of the two first-order frame equations.

    First: alpha_v - beta_u - 2 alpha x beta.  Second: alpha_u + beta_v
    - (2/sqrt(3)) alpha x beta.  Boundary rows use one-sided stencils
    and should be excluded from pass/fail via interior_mask().
    """
    dom = F.domain
    a_v = _axis_deriv(F.alpha, F.dv, 1, dom.periodic_v)
    b_u = _axis_deriv(F.beta, F.du, 0, dom.periodic_u)
    a_u = _axis_deriv(F.alpha, F.du, 0, dom.periodic_u)
    b_v = _axis_deriv(F.beta, F.dv, 1, dom.periodic_v)
    cross = np.cross(F.alpha, F.beta)
    r1 = a_v - b_u - 2.0 * cross
    r2 = a_u + b_v - (2.0 / SQRT3) * cross
    return np.linalg.norm(r1, axis=2), np.linalg.norm(r2, axis=2)


def induced_metric_and_K(F: FrameFields) -> tuple:
    """Conformal factor lambda = alpha.alpha + beta.beta and Gaussian K.

    K = -laplacian(ln lambda) / (2 lambda) by second-order differences;
    open-boundary nodes use one-sided stencils (exclude from pass/fail).
    """
    lam = np.sum(F.alpha * F.alpha, axis=2) + np.sum(F.beta * F.beta, axis=2)
    if np.min(lam) <= 1e-10:
        raise DegenerateMetric(f"conformal factor min {np.min(lam):.3e} <= 1e-10")
    ln_lam = np.log(lam)
    dom = F.domain
    lap = (_axis_second_deriv(ln_lam, F.du, 0, dom.periodic_u)
           + _axis_second_deriv(ln_lam, F.dv, 1, dom.periodic_v))
    return lam, -lap / (2.0 * lam)


@dataclass
class LambdaField:
    """The holomorphic differential data of an almost complex surface.

    Lam is g(P phi_z, phi_z) with g complex-bilinear and P real-linear;
    w = 2 alpha.beta + i(alpha.alpha - beta.beta); lam the conformal
    factor; cr_lambda and cr_w the nodewise Cauchy-Riemann residuals.
    """

    frames: FrameFields
    Lam: np.ndarray
    w: np.ndarray
    lam: np.ndarray
    cr_lambda: np.ndarray
    cr_w: np.ndarray

    def interior_mask(self) -> np.ndarray:
        return self.frames.interior_mask()


def _cr_residual(Z: np.ndarray, du: float, dv: float, dom: Domain) -> np.ndarray:
    A, B = Z.real, Z.imag
    A_u = _axis_deriv(A, du, 0, dom.periodic_u)
    A_v = _axis_deriv(A, dv, 1, dom.periodic_v)
    B_u = _axis_deriv(B, du, 0, dom.periodic_u)
    B_v = _axis_deriv(B, dv, 1, dom.periodic_v)
    return np.hypot(A_u - B_v, A_v + B_u)


def lambda_differential(S: ParamSurface, nu: int = 129, nv: int = 129,
                        tol: float = 1e-8) -> LambdaField:
    """Compute Lambda = g(P phi_z, phi_z) and w alongside lambda and CR residuals."""
    F = frame_fields(S, nu, nv, tol)
    G = F.grid
    # phi_z = (phi_u - i phi_v)/2 fed through the real-coefficient bilinear
    # forms, which is exactly the complex-bilinear/real-linear extension
    phiz_U = 0.5 * (G.d_u[:, :, :4] - 1j * G.d_v[:, :, :4])
    phiz_V = 0.5 * (G.d_u[:, :, 4:] - 1j * G.d_v[:, :, 4:])
    PU, PV = p_arrays(G.p, G.q, phiz_U, phiz_V)
    Lam = g_arrays(G.p, G.q, PU, PV, phiz_U, phiz_V)
    aa = np.sum(F.alpha * F.alpha, axis=2)
    bb = np.sum(F.beta * F.beta, axis=2)
    ab = np.sum(F.alpha * F.beta, axis=2)
    w = 2.0 * ab + 1j * (aa - bb)
    lam = aa + bb
    cr_l = _cr_residual(Lam, F.du, F.dv, F.domain)
    cr_w = _cr_residual(w, F.du, F.dv, F.domain)
    return LambdaField(F, Lam, w, lam, cr_l, cr_w)


@dataclass
class TheoremLResiduals:
    """The three equivalent vanishing conditions, as nodewise residual grids.

    differential: |Lambda|; frame: |alpha.alpha - beta.beta| + |alpha.beta|;
    product: |g(P phi_a, phi_b)| summed over the three slots.  Each is
    below tolerance precisely when the others are.
    """

    differential: np.ndarray
    frame: np.ndarray
    product: np.ndarray

    def maxima(self) -> tuple:
        return (float(np.max(self.differential)), float(np.max(self.frame)),
                float(np.max(self.product)))


def theorem_L_check(S: ParamSurface, nu: int = 129, nv: int = 129,
                    tol: float = 1e-8) -> TheoremLResiduals:
    """Evaluate the three equivalent characterizations of Lambda = 0."""
    L = lambda_differential(S, nu, nv, tol)
    G = L.frames.grid
    aa = np.sum(L.frames.alpha * L.frames.alpha, axis=2)
    bb = np.sum(L.frames.beta * L.frames.beta, axis=2)
    ab = np.sum(L.frames.alpha * L.frames.beta, axis=2)
    PU, PV = p_arrays(G.p, G.q, G.d_u[:, :, :4], G.d_u[:, :, 4:])
    puu = g_arrays(G.p, G.q, PU, PV, G.d_u[:, :, :4], G.d_u[:, :, 4:])
    puv = g_arrays(G.p, G.q, PU, PV, G.d_v[:, :, :4], G.d_v[:, :, 4:])
    PU2, PV2 = p_arrays(G.p, G.q, G.d_v[:, :, :4], G.d_v[:, :, 4:])
    pvv = g_arrays(G.p, G.q, PU2, PV2, G.d_v[:, :, :4], G.d_v[:, :, 4:])
    return TheoremLResiduals(np.abs(L.Lam), np.abs(aa - bb) + np.abs(ab),
                             np.abs(puu) + np.abs(puv) + np.abs(pvv))


def transform_surface(S: ParamSurface, F: IsometryNK) -> ParamSurface:
    """The surface (a p c^-1, b q c^-1) with the same parametrization."""
    a = F.a.as_array()
    b = F.b.as_array()
    ci = F.c.inverse().as_array()

    def move(arr):
        out = np.empty_like(arr)
        out[..., :4] = qmul(qmul(a, arr[..., :4]), ci)
        out[..., 4:] = qmul(qmul(b, arr[..., 4:]), ci)
        return out

    if isinstance(S, GridSurface):
        return GridSurface(S.domain, move(S.nodes))

    def point_fn(U, V):
        return move(S.point_array(U, V))

    def deriv_fn(U, V):
        d_u, d_v = S.derivative_arrays(U, V)
        return move(d_u), move(d_v)

    return AnalyticSurface(S.domain, point_fn, deriv_fn if S.analytic else None)


# ---------------------------------------------------------------------------
# surface JSON files


def save_surface_json(path: str, S: ParamSurface, nu: int = 129, nv: int = 129) -> None:
    """Write the surface sampled on nu x nv nodes in the surface JSON format.

    Layout: nodes row-major in the u index, 8 reals per node
    (p.w, p.x, p.y, p.z, q.w, q.x, q.y, q.z).
    """
    G = sample(S, nu, nv)
    dom = G.domain
    doc = {
        "domain": [dom.u0, dom.u1, dom.v0, dom.v1],
        "periodic": [dom.periodic_u, dom.periodic_v],
        "nu": int(G.shape[0]),
        "nv": int(G.shape[1]),
        "nodes": [float(x) for x in G.points.reshape(-1)],
    }
    with open(path, "w") as f:
        json.dump(doc, f)
        f.write("\n")


def load_surface_json(path: str) -> GridSurface:
    """Load a surface JSON file, validating shape and unit-norm node data."""
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise BadInput(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    for key in ("domain", "periodic", "nu", "nv", "nodes"):
        if key not in doc:
            raise BadInput(f"{path}: missing field {key!r}")
    dom_vals = doc["domain"]
    if not (isinstance(dom_vals, list) and len(dom_vals) == 4):
        raise BadInput(f"{path}: field 'domain' must be [u0, u1, v0, v1]")
    per = doc["periodic"]
    if not (isinstance(per, list) and len(per) == 2):
        raise BadInput(f"{path}: field 'periodic' must be [bool, bool]")
    nu, nv = int(doc["nu"]), int(doc["nv"])
    nodes = np.asarray(doc["nodes"], dtype=float)
    if nodes.size != nu * nv * 8:
        raise BadInput(f"{path}: expected {nu * nv * 8} reals in 'nodes', "
                       f"got {nodes.size}")
    dom = Domain(float(dom_vals[0]), float(dom_vals[1]), float(dom_vals[2]),
                 float(dom_vals[3]), bool(per[0]), bool(per[1]))
    try:
        return GridSurface(dom, nodes.reshape(nu, nv, 8))
    except BadInput as e:
        raise BadInput(f"{path}: {e}") from e
