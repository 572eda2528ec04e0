"""Acceptance gate: one printed pass/fail line per criterion.

Each criterion is checked at its stated tolerance and emits a one-line
verdict (replayed in the terminal summary via conftest, and printed for
runs with capture disabled), then asserts, so a failure is visible both
ways.
"""

import math
import time

import conftest
import numpy as np

from nks3x3 import cli
from nks3x3 import connection as cn
from nks3x3 import nkspace as nk
from nks3x3 import surface as sf
from nks3x3 import wente as wt
from nks3x3.quat import Quaternion, qmul

SQRT3 = math.sqrt(3.0)


def announce(num: int, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    line = f"[{status}] criterion {num:2d}: {detail}"
    conftest.acceptance_lines.append(line)
    print(line, flush=True)


def gnorm(X) -> float:
    return math.sqrt(max(nk.g(X, X), 0.0))


def test_criterion_01_structure_identities():
    t0 = time.perf_counter()
    worst = cli.identity_suite(1000, 42)
    elapsed = time.perf_counter() - t0
    err = max(worst.values())
    ok = err <= 1e-10 and elapsed < 5.0
    announce(1, ok, f"identity suite over 1000 tangents: max error "
                    f"{err:.2e} (tol 1e-10), runtime {elapsed:.2f}s (< 5s)")
    assert err <= 1e-10
    assert elapsed < 5.0


def test_criterion_02_nearly_kahler_condition():
    t0 = time.perf_counter()
    fd = cli.nearly_kahler_suite(200, 42, 1e-4)
    elapsed = time.perf_counter() - t0
    ok = fd["nabla_j_diagonal"] <= 5e-4 and fd["nabla_j_skew"] <= 5e-4 \
        and elapsed < 30.0
    announce(2, ok, f"(nabla_X J)X over 200 samples, step 1e-4: "
                    f"{fd['nabla_j_diagonal']:.2e}, skew "
                    f"{fd['nabla_j_skew']:.2e} (tol 5e-4), "
                    f"runtime {elapsed:.2f}s (< 30s)")
    assert fd["nabla_j_diagonal"] <= 5e-4
    assert fd["nabla_j_skew"] <= 5e-4
    assert elapsed < 30.0


def test_criterion_03_curvature_crosscheck():
    cc = cli.curvature_suite(100, 42, 1e-4)
    rng = nk.Rng(43)
    steps = (1e-3, 5e-4, 2.5e-4)
    residuals = []
    quads = []
    for _ in range(3):
        x = nk.random_point(rng)
        quads.append((x, nk.random_tangent(x, rng), nk.random_tangent(x, rng),
                      nk.random_tangent(x, rng)))
    for step in steps:
        worst = 0.0
        for x, U, V, W in quads:
            worst = max(worst, cn.curvature_crosscheck(x, U, V, W, step))
        residuals.append(worst)
    orders = [math.log2(residuals[i] / residuals[i + 1]) for i in range(2)]
    ok = cc["curvature_relative"] <= 1e-3 and min(orders) >= 1.8
    announce(3, ok, f"closed-form vs chart-FD curvature, 100 quadruples: "
                    f"relative error {cc['curvature_relative']:.2e} (tol 1e-3), "
                    f"orders {orders[0]:.2f}/{orders[1]:.2f} (>= 1.8)")
    assert cc["curvature_relative"] <= 1e-3
    assert min(orders) >= 1.8


def test_criterion_04_sectional_curvature_planes():
    planes = cli.lemma_plane_suite(100, 42)
    err = max(planes.values())
    ok = err <= 1e-10
    announce(4, ok, f"constructed planes: |K - 2/3| and |K - 0| max "
                    f"{err:.2e} (tol 1e-10)")
    assert err <= 1e-10


def test_criterion_05_torus():
    G = sf.sample(sf.example1_torus(), 33, 33)
    E = nk.g_arrays(G.p, G.q, G.d_u[:, :, :4], G.d_u[:, :, 4:],
                    G.d_u[:, :, :4], G.d_u[:, :, 4:])
    Fm = nk.g_arrays(G.p, G.q, G.d_u[:, :, :4], G.d_u[:, :, 4:],
                     G.d_v[:, :, :4], G.d_v[:, :, 4:])
    Gm = nk.g_arrays(G.p, G.q, G.d_v[:, :, :4], G.d_v[:, :, 4:],
                     G.d_v[:, :, :4], G.d_v[:, :, 4:])
    metric_err = max(float(np.max(np.abs(E - 4.0 / 3.0))),
                     float(np.max(np.abs(Gm - 4.0 / 3.0))),
                     float(np.max(np.abs(Fm + 2.0 / 3.0))))
    S = sf.example1_torus_isothermal()
    F = sf.frame_fields(S, 33, 33)
    lam, K = sf.induced_metric_and_K(F)
    lam_err = float(np.max(np.abs(lam - 4.0 / 3.0)))
    K_err = float(np.max(np.abs(K)))
    worst_h = 0.0
    for u, v in [(1.0, 1.0), (3.0, 2.0), (5.0, 4.0)]:
        worst_h = max(worst_h, cn.second_fundamental_form(S, u, v).norm())
    T = sf.theorem_L_check(S, 33, 33)
    t_min = min(float(np.min(T.differential)), float(np.min(T.frame)),
                float(np.min(T.product)))
    ok = (metric_err <= 1e-12 and lam_err <= 1e-12 and K_err <= 1e-6
          and worst_h <= 1e-3 and t_min >= 0.1)
    announce(5, ok, f"torus: metric constants err {metric_err:.2e} (tol 1e-12), "
                    f"lambda=4/3 err {lam_err:.2e} (tol 1e-12), |K| {K_err:.2e} "
                    f"(tol 1e-6), |h| {worst_h:.2e} (tol 1e-3), theorem-L min "
                    f"{t_min:.2f} (>= 0.1)")
    assert metric_err <= 1e-12
    assert lam_err <= 1e-12
    assert K_err <= 1e-6
    assert worst_h <= 1e-3
    assert t_min >= 0.1


def test_criterion_06_sphere():
    S = sf.example2_sphere()
    L = sf.lambda_differential(S, 129, 129)
    F = L.frames
    im = F.interior_mask()
    lam, K = sf.induced_metric_and_K(F)
    us, vs, _, _ = sf.grid_axes(S.domain, 129, 129)
    U, V = np.meshgrid(us, vs, indexing="ij")
    lam_err = float(np.max(np.abs(lam - 6.0 / (1.0 + U * U + V * V) ** 2)))
    K_err = float(np.max(np.abs(K[im] - 2.0 / 3.0)))
    T = sf.theorem_L_check(S, 129, 129)
    p_perp = float(np.max(T.product))
    Lam_max = float(np.max(np.abs(L.Lam)))
    worst_h = 0.0
    for u, v in [(0.0, 0.0), (0.4, -0.3), (-0.7, 0.6)]:
        worst_h = max(worst_h, cn.second_fundamental_form(S, u, v).norm())
    ok = (lam_err <= 1e-12 and K_err <= 1e-4 and p_perp <= 1e-12
          and Lam_max <= 1e-12 and worst_h <= 1e-3)
    announce(6, ok, f"sphere: lambda closed-form err {lam_err:.2e} (tol 1e-12), "
                    f"|K - 2/3| {K_err:.2e} (tol 1e-4, 129x129), P-perp "
                    f"{p_perp:.2e} (tol 1e-12), |Lambda| {Lam_max:.2e} "
                    f"(tol 1e-12), |h| {worst_h:.2e} (tol 1e-3)")
    assert lam_err <= 1e-12
    assert K_err <= 1e-4
    assert p_perp <= 1e-12
    assert Lam_max <= 1e-12
    assert worst_h <= 1e-3


def test_criterion_07_wente_forward():
    S = sf.example2_sphere()
    h_res = []
    for n in (33, 65, 129):
        F = sf.frame_fields(S, n, n)
        E = wt.integrate_epsilon(F)
        h_res.append(float(np.max(wt.h_surface_residual(E)[E.interior_mask()])))
    orders = [math.log2(h_res[i] / h_res[i + 1]) for i in range(2)]
    F = sf.frame_fields(S, 129, 129)
    E = wt.integrate_epsilon(F)
    _, radius, _ = wt.fit_sphere(E.nodes)
    radius_err = abs(radius - SQRT3 / 2.0)
    H = wt.mean_curvature_r3(E)
    H_err = float(np.max(np.abs(H[E.interior_mask()] + 2.0 / SQRT3)))
    ratio_err = float(np.max(np.abs(wt.metric_halving_ratio(F) - 0.5)))
    ok = (radius_err <= 1e-4 and H_err <= 1e-3 and ratio_err <= 1e-6
          and min(orders) >= 1.8)
    announce(7, ok, f"wente forward: radius sqrt(3)/2 err {radius_err:.2e} "
                    f"(tol 1e-4), H = -2/sqrt(3) err {H_err:.2e} (tol 1e-3), "
                    f"metric ratio 1/2 err {ratio_err:.2e} (tol 1e-6), "
                    f"residual orders {orders[0]:.2f}/{orders[1]:.2f} (>= 1.8)")
    assert radius_err <= 1e-4
    assert H_err <= 1e-3
    assert ratio_err <= 1e-6
    assert min(orders) >= 1.8


def test_criterion_08_holomorphy():
    cr = []
    for n in (33, 65, 129):
        L = sf.lambda_differential(sf.example2_sphere(), n, n)
        cr.append(float(np.max(L.cr_w[L.interior_mask()])))
    # w vanishes identically on the sphere, so its CR residual sits at the
    # rounding floor; the decay criterion is met by being at that floor
    at_floor = cr[-1] <= 1e-12
    if at_floor:
        order_txt = f"at rounding floor ({cr[-1]:.2e} <= 1e-12)"
        order_ok = True
    else:
        orders = [math.log2(cr[i] / cr[i + 1]) for i in range(2)]
        order_txt = f"orders {orders[0]:.2f}/{orders[1]:.2f}"
        order_ok = min(orders) >= 1.8
    LT = sf.lambda_differential(sf.example1_torus_isothermal(), 33, 33)
    w_ref = -2.0 / SQRT3 + (2.0 / 3.0) * 1j
    w_err = float(np.max(np.abs(LT.w - w_ref)))
    ok = order_ok and w_err <= 1e-10
    announce(8, ok, f"holomorphy: sphere CR residual of w {order_txt}; torus "
                    f"w = -2/sqrt(3) + (2/3)i err {w_err:.2e} (tol 1e-10)")
    assert order_ok
    assert w_err <= 1e-10


def test_criterion_09_reverse_lift():
    S = sf.example2_sphere(half_width=wt.SPHERE_CMC_HALF_WIDTH)
    E = wt.sphere_cmc(129, 129)
    eg = E.epsilon_grid()
    x0 = S.point(eg.us[0], eg.vs[0]).as_array()
    t0 = time.perf_counter()
    L = wt.lift_from_cmc(E, x0[:4], x0[4:])
    t_sphere = time.perf_counter() - t0
    im = sf.interior_mask(129, 129, False, False)
    ac_s = float(np.max(sf.almost_complex_residual(L, 129, 129)[im]))
    h_s = max(cn.second_fundamental_form(L, eg.us[i], eg.vs[j]).norm()
              for i, j in ((64, 64), (32, 96)))
    Fl = sf.frame_fields(L, 129, 129, tol=1e-3)
    Fr = sf.frame_fields(S, 129, 129)
    frame_gap = max(float(np.max(np.linalg.norm(Fl.alpha - Fr.alpha, axis=2))),
                    float(np.max(np.linalg.norm(Fl.beta - Fr.beta, axis=2))))
    rt_s = wt.rigid_alignment_error(wt.integrate_epsilon(Fl).nodes, E.nodes)

    EC = wt.cylinder_cmc(129, 129)
    t0 = time.perf_counter()
    LC = wt.lift_from_cmc(EC)
    t_cyl = time.perf_counter() - t0
    ac_c = float(np.max(sf.almost_complex_residual(LC, 129, 129)[im]))
    egc = EC.epsilon_grid()
    bs = [cn.second_fundamental_form(LC, egc.us[i], egc.vs[j])
          for i, j in ((64, 64), (32, 96))]
    H_c = max(0.5 * gnorm(b.trace()) for b in bs)
    h_c = min(b.norm() for b in bs)
    FC = sf.frame_fields(LC, 129, 129, tol=1e-3)
    rt_c = wt.rigid_alignment_error(wt.integrate_epsilon(FC).nodes, EC.nodes)

    ok = (ac_s <= 1e-4 and h_s <= 1e-3 and frame_gap <= 1e-3 and
          ac_c <= 1e-4 and H_c <= 1e-3 and h_c > 0.05 and
          rt_s <= 1e-3 and rt_c <= 1e-3 and t_sphere < 60.0 and t_cyl < 60.0)
    announce(9, ok, f"reverse lift: sphere residual {ac_s:.2e} (tol 1e-4), "
                    f"|h| {h_s:.2e} (tol 1e-3), frames vs reference "
                    f"{frame_gap:.2e}; cylinder residual {ac_c:.2e}, |H| "
                    f"{H_c:.2e} (tol 1e-3), |h| {h_c:.2f} (> 0.05); "
                    f"round-trips {rt_s:.2e}/{rt_c:.2e} (tol 1e-3); lifts "
                    f"{t_sphere:.2f}s/{t_cyl:.2f}s (< 60s)")
    assert ac_s <= 1e-4
    assert h_s <= 1e-3
    assert frame_gap <= 1e-3
    assert rt_s <= 1e-3
    assert ac_c <= 1e-4
    assert H_c <= 1e-3
    assert h_c > 0.05
    assert rt_c <= 1e-3
    assert t_sphere < 60.0
    assert t_cyl < 60.0


def test_criterion_10_isometry_equivariance():
    # the classification statements are uniqueness proofs; the desk-scale
    # substitute is criteria 5, 6, 9 (run above) plus equivariance checks
    rng = nk.Rng(99)
    worst_g = 0.0
    worst_j = 0.0
    for _ in range(20):
        arr = rng.normals(12)
        iso = nk.IsometryNK(
            Quaternion.from_array(arr[0:4]).normalize(),
            Quaternion.from_array(arr[4:8]).normalize(),
            Quaternion.from_array(arr[8:12]).normalize())
        x = nk.random_point(rng)
        X = nk.random_tangent(x, rng)
        Y = nk.random_tangent(x, rng)
        FX, FY = nk.isometry_apply(iso, X), nk.isometry_apply(iso, Y)
        worst_g = max(worst_g, abs(nk.g(FX, FY) - nk.g(X, Y)))
        worst_j = max(worst_j, gnorm(nk.isometry_apply(iso, nk.J(X)) - nk.J(FX)))
    c = Quaternion.from_array(nk.Rng(7).normals(4)).normalize()
    iso_c = nk.IsometryNK(c, c, c)
    S = sf.example2_sphere(half_width=0.5)
    F = sf.frame_fields(S, 17, 17)
    F2 = sf.frame_fields(sf.transform_surface(S, iso_c), 17, 17)
    c4, ci4 = c.as_array(), c.inverse().as_array()
    a4 = np.zeros(F.alpha.shape[:2] + (4,))
    a4[:, :, 1:] = F.alpha
    conj = qmul(qmul(c4, a4), ci4)[:, :, 1:]
    worst_frame = float(np.max(np.linalg.norm(F2.alpha - conj, axis=2)))
    ok = worst_g <= 1e-10 and worst_j <= 1e-10 and worst_frame <= 1e-10
    announce(10, ok, f"equivariance (with criteria 5, 6, 9 as the "
                     f"classification substitute): g preserved {worst_g:.2e}, "
                     f"J commutes {worst_j:.2e}, frames alpha -> c alpha c^-1 "
                     f"{worst_frame:.2e} (tol 1e-10)")
    assert worst_g <= 1e-10
    assert worst_j <= 1e-10
    assert worst_frame <= 1e-10
