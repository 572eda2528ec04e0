"""Correspondence between almost complex surfaces and H-surface solutions.

Rotating the tangent frames (alpha, beta) of an adapted almost complex
surface through 2 pi / 3 turns the two first-order frame equations into
the closedness of alpha~ du + beta~ dv together with Wente's H-surface
equation for its primitive epsilon: R^3.  When the holomorphic
differential vanishes, (u, v) are isothermal for epsilon and the image
is a constant-mean-curvature surface with H = -2/sqrt(3) carrying half
the induced metric.  The reverse direction recovers the frames from a
gridded H-surface solution and integrates the quaternionic frame
equations back to an almost complex surface.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (BadInput, DegenerateImmersion, IntegrationDiverged,
                     NotIsothermal, OrientationMismatch, PeriodicWithoutFlag,
                     ResidualTooLarge)
from .quat import Quaternion, qexp_im, qmul, qnorm
from .surface import (Domain, FrameFields, GridSurface, _axis_deriv,
                      _axis_second_deriv, grid_axes, interior_mask)

SQRT3 = math.sqrt(3.0)
H_CMC = -2.0 / SQRT3

# FD-tier default for the isothermal gate: grid first derivatives carry
# O(h^2) truncation error, so exact isothermal data measures ~ (h/rho)^2
# at grid scale; 5e-4 admits 65x65 and finer grids of the builtins.
ISOTHERMAL_TOL_FD = 5e-4
ISOTHERMAL_TOL_EXACT = 1e-6
CROSS_MIN = 1e-10


def rotate_frame(alpha, beta):
    """Rotate tangent frames through 2 pi / 3.

    alpha~ = -alpha/2 + sqrt(3)/2 beta, beta~ = -sqrt(3)/2 alpha - beta/2;
    applying it three times is the identity and it preserves
    alpha.alpha + beta.beta and alpha x beta.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    return (-0.5 * alpha + (SQRT3 / 2.0) * beta,
            -(SQRT3 / 2.0) * alpha - 0.5 * beta)


def rotate_frame_inverse(alpha_t, beta_t):
    """Inverse of rotate_frame (rotation through -2 pi / 3)."""
    alpha_t = np.asarray(alpha_t, dtype=float)
    beta_t = np.asarray(beta_t, dtype=float)
    return (-0.5 * alpha_t - (SQRT3 / 2.0) * beta_t,
            (SQRT3 / 2.0) * alpha_t - 0.5 * beta_t)


def _cumtrapz(F: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Cumulative composite trapezoid along an axis, zero at the first node."""
    F = np.moveaxis(F, axis, 0)
    out = np.zeros_like(F)
    np.cumsum(0.5 * h * (F[1:] + F[:-1]), axis=0, out=out[1:])
    return np.moveaxis(out, 0, axis)


@dataclass
class EpsilonGrid:
    """R^3-valued grid epsilon(u, v) with residual diagnostics.

    alpha_t/beta_t hold the generating rotated frames (equal to eps_u,
    eps_v by construction) when produced by integrate_epsilon; raw grids
    leave them None and fall back to grid finite differences.  Periodic
    source domains are integrated on the universal cover, so the nodes
    need not close up: derivatives never wrap, and holonomy_u/holonomy_v
    record the per-period increment of epsilon for flagged directions.
    """

    domain: Domain
    us: np.ndarray
    vs: np.ndarray
    du: float
    dv: float
    nodes: np.ndarray  # (nu, nv, 3)
    alpha_t: np.ndarray = None
    beta_t: np.ndarray = None
    path_residual: float = 0.0
    closedness_residual: float = 0.0
    holonomy_u: np.ndarray = None
    holonomy_v: np.ndarray = None

    @property
    def shape(self):
        return self.nodes.shape[:2]

    def interior_mask(self) -> np.ndarray:
        nu, nv = self.shape
        return interior_mask(nu, nv, False, False)

    def first_derivatives(self):
        """(eps_u, eps_v): the generating frames when present, grid FD otherwise."""
        if self.alpha_t is not None:
            return self.alpha_t, self.beta_t
        return (_axis_deriv(self.nodes, self.du, 0, False),
                _axis_deriv(self.nodes, self.dv, 1, False))

    def second_derivatives(self):
        """(eps_uu, eps_vv) by second-order differences.

        Differences the stored frames when present (one derivative is
        then exact), node values otherwise.
        """
        if self.alpha_t is not None:
            return (_axis_deriv(self.alpha_t, self.du, 0, False),
                    _axis_deriv(self.beta_t, self.dv, 1, False))
        return (_axis_second_deriv(self.nodes, self.du, 0, False),
                _axis_second_deriv(self.nodes, self.dv, 1, False))


def _reject_hidden_seam(points: np.ndarray, dom: Domain) -> None:
    # closed surface sampled inclusively without declaring periodicity
    if not dom.periodic_u and np.max(np.abs(points[0] - points[-1])) <= 1e-9:
        raise PeriodicWithoutFlag(
            "first and last u rows coincide: closed data integrated naively; "
            "declare periodic_u on the domain")
    if not dom.periodic_v and np.max(np.abs(points[:, 0] - points[:, -1])) <= 1e-9:
        raise PeriodicWithoutFlag(
            "first and last v columns coincide: closed data integrated naively; "
            "declare periodic_v on the domain")


def closedness_residuals(F: FrameFields) -> np.ndarray:
    """Nodewise norm of alpha~_v - beta~_u (the form alpha~ du + beta~ dv is closed)."""
    at, bt = rotate_frame(F.alpha, F.beta)
    dom = F.domain
    at_v = _axis_deriv(at, F.dv, 1, dom.periodic_v)
    bt_u = _axis_deriv(bt, F.du, 0, dom.periodic_u)
    return np.linalg.norm(at_v - bt_u, axis=2)


def rotation_intertwines_residuals(F: FrameFields) -> float:
    """Max nodewise gap between the rotated frame-equation residual pair
    and the H-surface-system residual pair (an algebraic identity)."""
    dom = F.domain
    a_u = _axis_deriv(F.alpha, F.du, 0, dom.periodic_u)
    a_v = _axis_deriv(F.alpha, F.dv, 1, dom.periodic_v)
    b_u = _axis_deriv(F.beta, F.du, 0, dom.periodic_u)
    b_v = _axis_deriv(F.beta, F.dv, 1, dom.periodic_v)
    cross = np.cross(F.alpha, F.beta)
    r1 = a_v - b_u - 2.0 * cross
    r2 = a_u + b_v - (2.0 / SQRT3) * cross
    at, bt = rotate_frame(F.alpha, F.beta)
    at_u = _axis_deriv(at, F.du, 0, dom.periodic_u)
    at_v = _axis_deriv(at, F.dv, 1, dom.periodic_v)
    bt_u = _axis_deriv(bt, F.du, 0, dom.periodic_u)
    bt_v = _axis_deriv(bt, F.dv, 1, dom.periodic_v)
    s1 = at_v - bt_u
    s2 = at_u + bt_v + (4.0 / SQRT3) * np.cross(at, bt)
    t1, t2 = rotate_frame(r1, r2)
    gap = max(float(np.max(np.linalg.norm(s1 - t1, axis=2))),
              float(np.max(np.linalg.norm(s2 - t2, axis=2))))
    return gap


def integrate_epsilon(F: FrameFields) -> EpsilonGrid:
    """Primitive of alpha~ du + beta~ dv with epsilon(u0, v0) = 0.

    Composite trapezoid along the first column (v direction), then along
    the rows; integrating rows-then-column instead gives the reported
    path-consistency residual.  Periodic directions integrate on the
    universal cover and report the per-period holonomy vector.
    """
    dom = F.domain
    _reject_hidden_seam(F.grid.points, dom)
    at, bt = rotate_frame(F.alpha, F.beta)
    eps = _cumtrapz(bt[:1], F.dv, axis=1) + _cumtrapz(at, F.du, axis=0)
    alt = _cumtrapz(at[:, :1], F.du, axis=0) + _cumtrapz(bt, F.dv, axis=1)
    path = float(np.max(np.linalg.norm(eps - alt, axis=2)))
    closed = float(np.max(closedness_residuals(F)))
    hol_u = hol_v = None
    if dom.periodic_u:
        # exclusive-endpoint sampling makes the closed-loop trapezoid a plain sum
        hol_u = F.du * np.mean(np.sum(at, axis=0), axis=0)
    if dom.periodic_v:
        hol_v = F.dv * np.mean(np.sum(bt, axis=1), axis=0)
    G = F.grid
    return EpsilonGrid(dom, G.us, G.vs, G.du, G.dv, eps, at, bt,
                       path, closed, hol_u, hol_v)


def _isothermal_gate(eu, ev, inter, tol):
    luu = np.sum(eu * eu, axis=2)
    lvv = np.sum(ev * ev, axis=2)
    luv = np.sum(eu * ev, axis=2)
    scale = float(max(np.max(luu[inter]), np.max(lvv[inter])))
    if scale <= 0.0:
        raise DegenerateImmersion("epsilon grid is constant")
    worst = max(float(np.max(np.abs(luu - lvv)[inter])),
                float(np.max(np.abs(luv)[inter])))
    if worst > tol * scale:
        raise NotIsothermal(
            f"isothermal residual {worst:.3e} exceeds {tol:.1e} * scale "
            f"{scale:.3e}; the coordinates are not isothermal for epsilon "
            "(the holomorphic differential does not vanish)")
    return luu


def mean_curvature_r3(E: EpsilonGrid, tol: float = None) -> np.ndarray:
    """Mean curvature grid H = (eps_uu + eps_vv) . n / (2 lambda_eps).

    n = eps_u x eps_v / |eps_u x eps_v| and lambda_eps = eps_u . eps_u;
    requires isothermal coordinates (within tol * metric scale) and a
    cross product bounded away from zero on interior nodes.  tol
    defaults to the exact tier when the grid carries generating frames
    and the FD tier otherwise.
    """
    eu, ev = E.first_derivatives()
    inter = E.interior_mask()
    if tol is None:
        tol = ISOTHERMAL_TOL_EXACT if E.alpha_t is not None else ISOTHERMAL_TOL_FD
    lam = _isothermal_gate(eu, ev, inter, tol)
    cross = np.cross(eu, ev)
    cn = np.linalg.norm(cross, axis=2)
    if float(np.min(cn[inter])) < CROSS_MIN:
        raise DegenerateImmersion(
            f"|eps_u x eps_v| min {np.min(cn[inter]):.3e} < {CROSS_MIN:.0e}; "
            "the epsilon map is rank-deficient (line or point image)")
    n = cross / np.maximum(cn, 1e-300)[..., None]
    euu, evv = E.second_derivatives()
    return np.sum((euu + evv) * n, axis=2) / (2.0 * lam)


def h_surface_residual(E: EpsilonGrid) -> np.ndarray:
    """Nodewise norm of eps_uu + eps_vv + (4/sqrt(3)) eps_u x eps_v."""
    eu, ev = E.first_derivatives()
    euu, evv = E.second_derivatives()
    r = euu + evv + (4.0 / SQRT3) * np.cross(eu, ev)
    return np.linalg.norm(r, axis=2)


def metric_halving_ratio(F: FrameFields) -> np.ndarray:
    """Nodewise lambda_eps / lambda.

    lambda_eps = alpha~ . alpha~ is the conformal factor induced by
    epsilon and lambda = alpha.alpha + beta.beta the one induced
    upstairs; the ratio is 1/2 exactly where the holomorphic
    differential vanishes (and only there, since alpha~ alone is not
    rotation-invariant).
    """
    at, _ = rotate_frame(F.alpha, F.beta)
    lam_eps = np.sum(at * at, axis=2)
    lam = np.sum(F.alpha * F.alpha, axis=2) + np.sum(F.beta * F.beta, axis=2)
    return lam_eps / lam


def fit_sphere(nodes: np.ndarray):
    """Least-squares sphere fit: (center (3,), radius, max |dist - radius|)."""
    X = np.asarray(nodes, dtype=float).reshape(-1, 3)
    A = np.concatenate([2.0 * X, np.ones((len(X), 1))], axis=1)
    b = np.sum(X * X, axis=1)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    center = sol[:3]
    r2 = sol[3] + float(center @ center)
    if r2 <= 0.0:
        raise DegenerateImmersion("sphere fit produced non-positive radius")
    radius = math.sqrt(r2)
    dist = np.linalg.norm(X - center, axis=1)
    return center, radius, float(np.max(np.abs(dist - radius)))


def align_rigid(A: np.ndarray, B: np.ndarray):
    """Best proper rigid motion x -> R x + t mapping point set A onto B."""
    A2 = np.asarray(A, dtype=float).reshape(-1, 3)
    B2 = np.asarray(B, dtype=float).reshape(-1, 3)
    if A2.shape != B2.shape:
        raise BadInput(f"point sets differ in shape: {A2.shape} vs {B2.shape}")
    ca, cb = A2.mean(axis=0), B2.mean(axis=0)
    H = (A2 - ca).T @ (B2 - cb)
    U, _, Vt = np.linalg.svd(H)
    D = np.diag([1.0, 1.0, float(np.sign(np.linalg.det(Vt.T @ U.T)))])
    R = Vt.T @ D @ U.T
    return R, cb - R @ ca


def rigid_alignment_error(A: np.ndarray, B: np.ndarray) -> float:
    """Max nodewise distance between B and the best rigid motion of A."""
    R, t = align_rigid(A, B)
    moved = np.asarray(A, dtype=float).reshape(-1, 3) @ R.T + t
    diff = moved - np.asarray(B, dtype=float).reshape(-1, 3)
    return float(np.max(np.linalg.norm(diff, axis=1)))


@dataclass
class CMCInput:
    """R^3 grid claimed to solve the H-surface equation.

    When the isothermal flag is set the grid-FD first derivatives must
    satisfy |eps_u.eps_u - eps_v.eps_v|, |eps_u.eps_v| <= tol * scale on
    interior nodes (tol at the FD tier by default).
    """

    domain: Domain
    nodes: np.ndarray
    isothermal: bool = True
    isothermal_tol: float = ISOTHERMAL_TOL_FD

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 3 or nodes.shape[2] != 3 or nodes.shape[0] < 4 \
                or nodes.shape[1] < 4:
            raise BadInput(f"CMC nodes must be (nu, nv, 3) with nu, nv >= 4, "
                           f"got {nodes.shape}")
        if not np.all(np.isfinite(nodes)):
            raise BadInput("CMC nodes contain non-finite values")
        object.__setattr__(self, "nodes", nodes)
        if self.isothermal:
            eg = self.epsilon_grid()
            eu, ev = eg.first_derivatives()
            _isothermal_gate(eu, ev, eg.interior_mask(), self.isothermal_tol)

    @property
    def shape(self):
        return self.nodes.shape[:2]

    def epsilon_grid(self) -> EpsilonGrid:
        nu, nv = self.shape
        us, vs, du, dv = grid_axes(self.domain, nu, nv)
        return EpsilonGrid(self.domain, us, vs, du, dv, self.nodes)


def _axis_deriv4(A: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Fourth-order first derivative along an axis (5-point stencils).

    Grids with fewer than 5 rows fall back to the second-order stencil.
    """
    A = np.moveaxis(np.asarray(A, dtype=float), axis, 0)
    if A.shape[0] < 5:
        return np.moveaxis(np.gradient(A, h, axis=0, edge_order=2), 0, axis)
    out = np.empty_like(A)
    out[2:-2] = (A[:-4] - 8.0 * A[1:-3] + 8.0 * A[3:-1] - A[4:]) / (12.0 * h)
    edge = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12.0 * h)
    near = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / (12.0 * h)
    out[0] = np.tensordot(edge, A[:5], axes=1)
    out[1] = np.tensordot(near, A[:5], axes=1)
    out[-1] = -np.tensordot(edge, A[-1:-6:-1], axes=1)
    out[-2] = -np.tensordot(near, A[-1:-6:-1], axes=1)
    return np.moveaxis(out, 0, axis)


def _frames_for_lift(eg: EpsilonGrid):
    """Node frames and midpoint frames for the lift, all from grid differences.

    Midpoint values of the differenced direction come from first
    differences of epsilon (exact trapezoidal midpoints); the transverse
    frame is averaged between the two nodes.  Node frames use
    fourth-order stencils: the first column sits on the u boundary, and
    second-order one-sided errors there would seed a visible seam
    between the column chain and the row chains.
    """
    at = _axis_deriv4(eg.nodes, eg.du, 0)
    bt = _axis_deriv4(eg.nodes, eg.dv, 1)
    nodes = eg.nodes
    at_mid_u = (nodes[1:] - nodes[:-1]) / eg.du
    bt_mid_u = 0.5 * (bt[1:] + bt[:-1])
    bt_mid_v = (nodes[:, 1:] - nodes[:, :-1]) / eg.dv
    at_mid_v = 0.5 * (at[:, 1:] + at[:, :-1])
    return (at, bt), (at_mid_u, bt_mid_u), (at_mid_v, bt_mid_v)


def _gd_from_ab(alpha, beta):
    gamma = (SQRT3 / 2.0) * beta + 0.5 * alpha
    delta = 0.5 * beta - (SQRT3 / 2.0) * alpha
    return gamma, delta


def _integrate_chain(start4, frames, h):
    """start4 (..., 4) stepped through exp_im(h * frame) for each midpoint frame.

    frames has one more leading axis entry than steps taken; each step
    multiplies on the right and renormalizes, preserving unit norm.
    """
    out = np.empty((frames.shape[0] + 1,) + start4.shape)
    out[0] = start4
    for i in range(frames.shape[0]):
        step = qmul(out[i], qexp_im(h * frames[i]))
        out[i + 1] = step / qnorm(step)[..., None]
    return out


def _integrate_lift(eg: EpsilonGrid, p0: np.ndarray, q0: np.ndarray,
                    column_first: bool):
    (_, _), (at_mu, bt_mu), (at_mv, bt_mv) = _frames_for_lift(eg)
    a_mu, b_mu = rotate_frame_inverse(at_mu, bt_mu)
    g_mu, d_mu = _gd_from_ab(a_mu, b_mu)
    a_mv, b_mv = rotate_frame_inverse(at_mv, bt_mv)
    g_mv, d_mv = _gd_from_ab(a_mv, b_mv)
    nu, nv = eg.shape
    if column_first:
        # p along the first column uses beta (v direction), then alpha rows
        p_col = _integrate_chain(p0, b_mv[0], eg.dv)  # (nv, 4)
        q_col = _integrate_chain(q0, d_mv[0], eg.dv)
        p = _integrate_chain(p_col, a_mu, eg.du)  # (nu, nv, 4)
        q = _integrate_chain(q_col, g_mu, eg.du)
    else:
        p_row = _integrate_chain(p0, a_mu[:, 0], eg.du)  # (nu, 4)
        q_row = _integrate_chain(q0, g_mu[:, 0], eg.du)
        p = np.swapaxes(_integrate_chain(p_row, np.swapaxes(b_mv, 0, 1), eg.dv), 0, 1)
        q = np.swapaxes(_integrate_chain(q_row, np.swapaxes(d_mv, 0, 1), eg.dv), 0, 1)
    return p, q


def lift_from_cmc(E: CMCInput, p0=None, q0=None, residual_tol: float = None,
                  consistency_tol: float = 1e-3) -> GridSurface:
    """Integrate the quaternionic frame equations over an H-surface solution.

    Sets alpha~ = eps_u, beta~ = eps_v by grid differences, inverts the
    2 pi / 3 rotation, recovers gamma and delta, and integrates
    p_u = p alpha, p_v = p beta, q_u = q gamma, q_v = q delta from the
    corner (p0, q0) by multiplicative exponential midpoint steps with
    renormalization (first column in v, then all rows in u).  The
    rows-first integration must agree within consistency_tol.

    residual_tol defaults to 50 * max(du, dv)^2, the FD tier for data
    that solves the equation in the continuum.
    """
    eg = E.epsilon_grid()
    h = max(eg.du, eg.dv)
    if residual_tol is None:
        residual_tol = 50.0 * h * h
    inter = eg.interior_mask()
    res = float(np.max(h_surface_residual(eg)[inter]))
    if res > residual_tol:
        eu, ev = eg.first_derivatives()
        euu, evv = eg.second_derivatives()
        flipped = np.linalg.norm(
            euu + evv - (4.0 / SQRT3) * np.cross(eu, ev), axis=2)
        if float(np.max(flipped[inter])) <= residual_tol:
            raise OrientationMismatch(
                f"data solves the +4/sqrt(3) sign convention (residual "
                f"{np.max(flipped[inter]):.3e}); swap the u and v axes "
                "(transpose the grid) and retry")
        raise ResidualTooLarge(
            f"max H-surface residual {res:.3e} exceeds {residual_tol:.3e}; "
            "input is not a solution at this grid resolution")
    p0 = _as_unit4(p0, "p0")
    q0 = _as_unit4(q0, "q0")
    p, q = _integrate_lift(eg, p0, q0, column_first=True)
    p2, q2 = _integrate_lift(eg, p0, q0, column_first=False)
    gap = max(float(np.max(np.abs(p - p2))), float(np.max(np.abs(q - q2))))
    if gap > consistency_tol:
        raise IntegrationDiverged(
            f"column-first and rows-first integrations disagree by {gap:.3e} "
            f"(tolerance {consistency_tol:.1e})")
    return GridSurface(E.domain, np.concatenate([p, q], axis=2))


def _as_unit4(x, name: str) -> np.ndarray:
    if x is None:
        return np.array([1.0, 0.0, 0.0, 0.0])
    if isinstance(x, Quaternion):
        arr = x.as_array()
    else:
        arr = np.asarray(x, dtype=float)
    if arr.shape != (4,):
        raise BadInput(f"{name} must be a quaternion (4 reals), got shape {arr.shape}")
    n = float(np.linalg.norm(arr))
    if abs(n - 1.0) > 1e-10:
        raise BadInput(f"{name} must be unit norm, |{name}| = {n:.12f}")
    return arr / n


# ---------------------------------------------------------------------------
# builtin CMC inputs


# default patch half-width for the builtin sphere input: keeps the grid-FD
# almost-complex residual of a 129 x 129 lift below 1e-4
SPHERE_CMC_HALF_WIDTH = 0.3


def _stereographic_sphere(us: np.ndarray, vs: np.ndarray) -> np.ndarray:
    U, V = np.meshgrid(us, vs, indexing="ij")
    s2 = U * U + V * V
    x = np.empty(U.shape + (3,))
    x[..., 0] = 2.0 * V
    x[..., 1] = 2.0 * U
    x[..., 2] = s2 - 1.0
    return x / (1.0 + s2)[..., None]


def sphere_cmc(nu: int = 129, nv: int = 129,
               half_width: float = SPHERE_CMC_HALF_WIDTH) -> CMCInput:
    """Round sphere of radius sqrt(3)/2 in isothermal stereographic coordinates.

    eps(u, v) = (sqrt(3)/2) x(u, v) with the same chart as the builtin
    almost complex sphere, so lifted frames are directly comparable to
    its frames on a matching domain.  The default half-width keeps the
    grid-FD almost-complex residual of a 129 x 129 lift below 1e-4
    (the measurement floor scales like the squared spacing).
    """
    dom = Domain(-half_width, half_width, -half_width, half_width)
    us, vs, _, _ = grid_axes(dom, nu, nv)
    return CMCInput(dom, (SQRT3 / 2.0) * _stereographic_sphere(us, vs))


def cylinder_cmc(nu: int = 129, nv: int = 129, width: float = 1.0) -> CMCInput:
    """Cylinder of radius sqrt(3)/4: an H-surface solution whose lift is
    minimal but not totally geodesic.

    eps(u, v) = (r cos(u/r), r sin(u/r), v) with r = sqrt(3)/4 solves
    the H-surface equation exactly with H = -2/sqrt(3) (|H| = 1/(2r)).
    """
    r = SQRT3 / 4.0
    dom = Domain(0.0, width, 0.0, width)
    us, vs, _, _ = grid_axes(dom, nu, nv)
    U, V = np.meshgrid(us, vs, indexing="ij")
    nodes = np.empty(U.shape + (3,))
    nodes[..., 0] = r * np.cos(U / r)
    nodes[..., 1] = r * np.sin(U / r)
    nodes[..., 2] = V
    return CMCInput(dom, nodes)


# ---------------------------------------------------------------------------
# file formats


def save_cmc_json(path: str, E: CMCInput) -> None:
    """Write a CMC input grid: domain, sizes, isothermal flag, row-major nodes."""
    dom = E.domain
    nu, nv = E.shape
    doc = {
        "domain": [dom.u0, dom.u1, dom.v0, dom.v1],
        "periodic": [dom.periodic_u, dom.periodic_v],
        "nu": int(nu),
        "nv": int(nv),
        "isothermal": bool(E.isothermal),
        "nodes": [float(x) for x in E.nodes.reshape(-1)],
    }
    with open(path, "w") as f:
        json.dump(doc, f)
        f.write("\n")


def load_cmc_json(path: str) -> CMCInput:
    """Load a CMC input file, validating counts and finiteness."""
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise BadInput(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    for key in ("domain", "nu", "nv", "isothermal", "nodes"):
        if key not in doc:
            raise BadInput(f"{path}: missing field {key!r}")
    dom_vals = doc["domain"]
    if not (isinstance(dom_vals, list) and len(dom_vals) == 4):
        raise BadInput(f"{path}: field 'domain' must be [u0, u1, v0, v1]")
    per = doc.get("periodic", [False, False])
    if not (isinstance(per, list) and len(per) == 2):
        raise BadInput(f"{path}: field 'periodic' must be [bool, bool]")
    nu, nv = int(doc["nu"]), int(doc["nv"])
    nodes = np.asarray(doc["nodes"], dtype=float)
    if nodes.size != nu * nv * 3:
        raise BadInput(f"{path}: expected {nu * nv * 3} reals in 'nodes', "
                       f"got {nodes.size}")
    dom = Domain(float(dom_vals[0]), float(dom_vals[1]), float(dom_vals[2]),
                 float(dom_vals[3]), bool(per[0]), bool(per[1]))
    try:
        return CMCInput(dom, nodes.reshape(nu, nv, 3), bool(doc["isothermal"]))
    except (BadInput, NotIsothermal) as e:
        raise type(e)(f"{path}: {e}") from e


def save_obj(path: str, E: EpsilonGrid) -> None:
    """Write the epsilon grid as OBJ: vertex lines plus triangulated grid quads."""
    nu, nv = E.shape
    lines = []
    for i in range(nu):
        for j in range(nv):
            x, y, z = E.nodes[i, j]
            lines.append(f"v {x:.17g} {y:.17g} {z:.17g}")
    for i in range(nu - 1):
        for j in range(nv - 1):
            a = i * nv + j + 1
            b = (i + 1) * nv + j + 1
            c = (i + 1) * nv + j + 2
            d = i * nv + j + 2
            lines.append(f"f {a} {b} {c}")
            lines.append(f"f {a} {c} {d}")
    with open(path, "w") as f:
        f.write("\n".join(lines))
        f.write("\n")


def save_csv(path: str, E: EpsilonGrid) -> None:
    """Write the epsilon grid as CSV rows u, v, x, y, z."""
    nu, nv = E.shape
    lines = ["u,v,x,y,z"]
    for i in range(nu):
        for j in range(nv):
            x, y, z = E.nodes[i, j]
            lines.append(f"{E.us[i]:.17g},{E.vs[j]:.17g},"
                         f"{x:.17g},{y:.17g},{z:.17g}")
    with open(path, "w") as f:
        f.write("\n".join(lines))
        f.write("\n")
