"""Command-line interface: verification suites, surface analysis, Wente correspondence.

Subcommands:

  verify   structure identities, nearly Kahler condition, curvature cross-check
  surface  almost complex surface analysis (metric, curvature, differential)
  wente    integrate the H-surface map epsilon from an almost complex surface
  lift     reverse construction: lift isothermal CMC data to S3 x S3

Every run is deterministic given its flags; reports are byte-stable.
Exit codes: 0 all checks pass, 1 check failure, 2 input error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from . import connection as cn
from . import nkspace as nk
from . import surface as sf
from . import wente as wt
from .errors import BadInput, NKError
from .report import (Check, Report, check_close, check_max, check_min,
                     check_order)

SQRT3 = math.sqrt(3.0)


def _gnorm(X: nk.TangentNK) -> float:
    return math.sqrt(max(nk.g(X, X), 0.0))


# ---------------------------------------------------------------------------
# verification suites (exposed for programmatic use)


def identity_suite(samples: int, seed: int) -> dict:
    """Max errors of the closed-form structure identities over random tangents.

    Covers J^2 = -Id, g(JX,JY) = g(X,Y), P^2 = Id, PJ = -JP,
    g(PX,PY) = g(X,Y), both curvature antisymmetries, and the first
    Bianchi identity.
    """
    rng = nk.Rng(seed)
    keys = ("j_squared", "j_isometry", "p_squared", "pj_anticommute",
            "p_isometry", "r_swap_antisymmetry", "r_pair_skew", "r_bianchi")
    worst = dict.fromkeys(keys, 0.0)
    for _ in range(samples):
        x = nk.random_point(rng)
        U = nk.random_tangent(x, rng)
        V = nk.random_tangent(x, rng)
        W = nk.random_tangent(x, rng)
        Z = nk.random_tangent(x, rng)
        worst["j_squared"] = max(worst["j_squared"], _gnorm(nk.J(nk.J(U)) + U))
        worst["j_isometry"] = max(worst["j_isometry"],
                                  abs(nk.g(nk.J(U), nk.J(V)) - nk.g(U, V)))
        worst["p_squared"] = max(worst["p_squared"], _gnorm(nk.P(nk.P(U)) - U))
        worst["pj_anticommute"] = max(worst["pj_anticommute"],
                                      _gnorm(nk.P(nk.J(U)) + nk.J(nk.P(U))))
        worst["p_isometry"] = max(worst["p_isometry"],
                                  abs(nk.g(nk.P(U), nk.P(V)) - nk.g(U, V)))
        Ruv_w = nk.curvature(U, V, W)
        worst["r_swap_antisymmetry"] = max(worst["r_swap_antisymmetry"],
                                           _gnorm(Ruv_w + nk.curvature(V, U, W)))
        worst["r_pair_skew"] = max(worst["r_pair_skew"],
                                   abs(nk.g(Ruv_w, Z) + nk.g(nk.curvature(U, V, Z), W)))
        bianchi = Ruv_w + nk.curvature(V, W, U) + nk.curvature(W, U, V)
        worst["r_bianchi"] = max(worst["r_bianchi"], _gnorm(bianchi))
    return worst


def lemma_plane_suite(samples: int, seed: int) -> dict:
    """Closed-form sectional curvature of the two constructed plane families."""
    rng = nk.Rng(seed)
    e_perp = 0.0
    e_inv = 0.0
    for _ in range(samples):
        x = nk.random_point(rng)
        e_perp = max(e_perp, abs(nk.sectional_curvature(nk.plane_p_perpendicular(x))
                                 - 2.0 / 3.0))
        e_inv = max(e_inv, abs(nk.sectional_curvature(nk.plane_p_invariant(x))))
    return {"k_p_perpendicular": e_perp, "k_p_invariant": e_inv}


def nearly_kahler_suite(samples: int, seed: int, step: float) -> dict:
    """FD checks of the nearly Kahler condition and skew-symmetry of nabla J."""
    rng = nk.Rng(seed)
    diag = 0.0
    skew = 0.0
    for _ in range(samples):
        x = nk.random_point(rng)
        X = nk.random_tangent(x, rng)
        Y = nk.random_tangent(x, rng)
        Z = nk.random_tangent(x, rng)
        diag = max(diag, _gnorm(cn.nabla_J(X, X, step)))
        skew = max(skew, abs(nk.g(cn.nabla_J(X, Y, step), Z)
                             + nk.g(Y, cn.nabla_J(X, Z, step))))
    return {"nabla_j_diagonal": diag, "nabla_j_skew": skew}


def curvature_suite(samples: int, seed: int, step: float) -> dict:
    """Max relative gap between chart-FD curvature and the closed form."""
    rng = nk.Rng(seed)
    worst = 0.0
    for _ in range(samples):
        x = nk.random_point(rng)
        U = nk.random_tangent(x, rng)
        V = nk.random_tangent(x, rng)
        W = nk.random_tangent(x, rng)
        closed = nk.curvature(U, V, W)
        scale = max(_gnorm(closed), 1.0)
        worst = max(worst, cn.curvature_crosscheck(x, U, V, W, step) / scale)
    return {"curvature_relative": worst}


# ---------------------------------------------------------------------------
# argument plumbing


def _parse_grid(text: str):
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise BadInput(f"--grid wants NxM, got {text!r}")
    try:
        nu, nv = int(parts[0]), int(parts[1])
    except ValueError:
        raise BadInput(f"--grid wants NxM integers, got {text!r}") from None
    if nu < 5 or nv < 5:
        raise BadInput(f"--grid needs at least 5x5 nodes, got {nu}x{nv}")
    return nu, nv


def _parse_periodic(text: str):
    tokens = [t for t in text.lower().split(",") if t]
    if any(t not in ("u", "v") for t in tokens):
        raise BadInput(f"--periodic wants a subset of u,v; got {text!r}")
    return "u" in tokens, "v" in tokens


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="nks3x3",
        description="Verification toolkit for the nearly Kahler S3 x S3 and "
                    "its almost complex surfaces.")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, grid=True, periodic=True):
        if grid:
            p.add_argument("--grid", default="129x129", metavar="NxM",
                           help="grid resolution (default 129x129)")
        p.add_argument("--json", metavar="PATH",
                       help="write the JSON report to PATH ('-' for stdout)")
        p.add_argument("--out", metavar="PATH",
                       help="write computed data to PATH (format by extension)")
        if periodic:
            p.add_argument("--periodic", metavar="u,v",
                           help="treat these file-input axes as periodic")

    v = sub.add_parser("verify", help="identity, nearly Kahler, and curvature suites")
    v.add_argument("--samples", type=int, default=1000,
                   help="random tangents for the analytic suite; FD suites "
                        "use samples/5 and samples/10 draws (default 1000)")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--step", type=float, default=1e-4,
                   help="finite-difference step (default 1e-4)")
    v.add_argument("--tol-analytic", type=float, default=1e-12)
    v.add_argument("--tol-fd", type=float, default=5e-4,
                   help="tolerance for FD checks; the curvature cross-check "
                        "uses twice this value (default 5e-4)")
    v.add_argument("--json", metavar="PATH",
                   help="write the JSON report to PATH ('-' for stdout)")

    s = sub.add_parser("surface", help="analyze an almost complex surface")
    s.add_argument("input", metavar="NAME|FILE",
                   help="torus | torus-isothermal | sphere | surface JSON file")
    s.add_argument("--step", type=float, default=1e-4,
                   help="chart FD step for second fundamental forms")
    s.add_argument("--tol-analytic", type=float, default=1e-12)
    s.add_argument("--tol-fd", type=float, default=5e-4)
    common(s)

    w = sub.add_parser("wente", help="integrate the H-surface map epsilon")
    w.add_argument("input", metavar="NAME|FILE",
                   help="torus | torus-isothermal | sphere | surface JSON "
                        "file (torus uses its isothermal parametrization)")
    w.add_argument("--tol-analytic", type=float, default=1e-12)
    w.add_argument("--tol-fd", type=float, default=5e-4)
    common(w)

    lf = sub.add_parser("lift", help="lift isothermal CMC data to S3 x S3")
    lf.add_argument("input", metavar="NAME|FILE",
                    help="sphere-cmc | cylinder-cmc | CMC JSON file")
    lf.add_argument("--tol-fd", type=float, default=1e-4,
                    help="tolerance for the lifted almost-complex residual "
                         "and differential (default 1e-4)")
    common(lf)
    return top


def _resolve_surface(name: str, periodic):
    builtins = {"torus": sf.example1_torus,
                "torus-isothermal": sf.example1_torus_isothermal,
                "sphere": sf.example2_sphere}
    if name in builtins:
        if periodic is not None:
            raise BadInput("--periodic applies to file inputs; builtin "
                           "surfaces carry their own periodicity")
        return builtins[name](), name
    try:
        S = sf.load_surface_json(name)
    except OSError as exc:
        raise BadInput(f"cannot read surface file {name!r}: {exc}") from exc
    if periodic is not None:
        dom = replace(S.domain, periodic_u=periodic[0], periodic_v=periodic[1])
        S = sf.GridSurface(dom, S.nodes)
    return S, "file"


def _h_sample_params(S: sf.ParamSurface, nu: int, nv: int):
    """Deterministic interior parameter points that lie on stored grids."""
    us, vs, _, _ = sf.grid_axes(S.domain, nu, nv)
    if isinstance(S, sf.GridSurface):
        us, vs = S.us, S.vs
        nu, nv = S.nu, S.nv
    iu = sorted({nu // 4, nu // 2, (3 * nu) // 4})
    iv = sorted({nv // 4, nv // 2, (3 * nv) // 4})
    return [(us[i], vs[j]) for i in iu for j in iv]


def _h_stats(S: sf.ParamSurface, nu: int, nv: int, step: float):
    """Max second-fundamental-form and mean-curvature norms over sample points."""
    worst_h = 0.0
    worst_H = 0.0
    for u, v in _h_sample_params(S, nu, nv):
        b = cn.second_fundamental_form(S, u, v, chart_step=step)
        worst_h = max(worst_h, b.norm())
        worst_H = max(worst_H, 0.5 * _gnorm(b.trace()))
    return worst_h, worst_H


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(args) -> Report:
    config = {"samples": args.samples, "seed": args.seed, "step": args.step,
              "tol_analytic": args.tol_analytic, "tol_fd": args.tol_fd}
    if args.samples < 1:
        raise BadInput(f"--samples must be >= 1, got {args.samples}")
    rep = Report("verify", config)
    claims = {
        "j_squared": "J^2 = -Id",
        "j_isometry": "g(JX, JY) = g(X, Y)",
        "p_squared": "P^2 = Id",
        "pj_anticommute": "PJ = -JP",
        "p_isometry": "g(PX, PY) = g(X, Y)",
        "r_swap_antisymmetry": "R(U,V)W = -R(V,U)W",
        "r_pair_skew": "g(R(U,V)W, Z) = -g(R(U,V)Z, W)",
        "r_bianchi": "R(U,V)W + R(V,W)U + R(W,U)V = 0",
    }
    for key, val in identity_suite(args.samples, args.seed).items():
        rep.add(check_max(key, val, args.tol_analytic, claims[key]))
    planes = lemma_plane_suite(min(args.samples, 100), args.seed + 1)
    rep.add(check_max("k_p_perpendicular", planes["k_p_perpendicular"],
                      args.tol_analytic,
                      "planes with P-perpendicular span have sectional curvature 2/3"))
    rep.add(check_max("k_p_invariant", planes["k_p_invariant"],
                      args.tol_analytic,
                      "P-invariant planes spanned by (X, JX) are flat"))
    fd = nearly_kahler_suite(max(1, args.samples // 5), args.seed + 2, args.step)
    rep.add(check_max("nabla_j_diagonal", fd["nabla_j_diagonal"], args.tol_fd,
                      "(nabla_X J) X = 0 (nearly Kahler condition)"))
    rep.add(check_max("nabla_j_skew", fd["nabla_j_skew"], args.tol_fd,
                      "nabla J is skew-symmetric"))
    cc = curvature_suite(max(1, args.samples // 10), args.seed + 3, args.step)
    rep.add(check_max("curvature_relative", cc["curvature_relative"],
                      2.0 * args.tol_fd,
                      "chart-FD curvature matches the closed-form tensor"))
    return rep


def _analysis_grids(nu: int, nv: int):
    """Three coarse-to-fine resolutions ending at (nu, nv)."""
    seq = [(max(9, (nu + 3) // 4), max(9, (nv + 3) // 4)),
           (max(9, (nu + 1) // 2), max(9, (nv + 1) // 2)), (nu, nv)]
    return seq


def _grid_relax(nu: int, nv: int) -> float:
    """Claim tolerances are calibrated on 129x129; relax as h^2 on coarser grids."""
    return max((128.0 / (nu - 1)) ** 2, (128.0 / (nv - 1)) ** 2, 1.0)


def cmd_surface(args) -> Report:
    periodic = _parse_periodic(args.periodic) if args.periodic else None
    nu, nv = _parse_grid(args.grid)
    S, kind = _resolve_surface(args.input, periodic)
    if isinstance(S, sf.GridSurface):
        nu, nv = S.nu, S.nv
    config = {"input": args.input, "grid": f"{nu}x{nv}", "step": args.step,
              "tol_analytic": args.tol_analytic, "tol_fd": args.tol_fd}
    rep = Report("surface", config)

    if kind == "torus":
        G = sf.sample(S, nu, nv)
        p, q = G.p, G.q
        E = nk.g_arrays(p, q, G.d_u[:, :, :4], G.d_u[:, :, 4:],
                        G.d_u[:, :, :4], G.d_u[:, :, 4:])
        Fm = nk.g_arrays(p, q, G.d_u[:, :, :4], G.d_u[:, :, 4:],
                         G.d_v[:, :, :4], G.d_v[:, :, 4:])
        Gm = nk.g_arrays(p, q, G.d_v[:, :, :4], G.d_v[:, :, 4:],
                         G.d_v[:, :, :4], G.d_v[:, :, 4:])
        rep.add(check_max("metric_g_uu", float(np.max(np.abs(E - 4.0 / 3.0))),
                          args.tol_analytic, "g(phi_s, phi_s) = 4/3"))
        rep.add(check_max("metric_g_vv", float(np.max(np.abs(Gm - 4.0 / 3.0))),
                          args.tol_analytic, "g(phi_t, phi_t) = 4/3"))
        rep.add(check_max("metric_g_uv", float(np.max(np.abs(Fm + 2.0 / 3.0))),
                          args.tol_analytic, "g(phi_s, phi_t) = -2/3"))
        res = sf.almost_complex_residual(S, nu, nv)
        rep.add(check_min("non_adapted_coordinates", float(np.min(res)), 0.5,
                          "the (s,t) coordinates are not adapted even though "
                          "the image is an almost complex torus"))
        worst_h, worst_H = _h_stats(S, nu, nv, args.step)
        rep.add(check_max("mean_curvature", worst_H, 1e-3,
                          "almost complex surfaces are minimal"))
        rep.add(check_max("second_fundamental_form", worst_h, 1e-3,
                          "the torus is totally geodesic"))
        if args.out:
            _write_metric_csv(args.out, G, E, Fm, Gm)
        return rep

    gate = 1e-8 if kind != "file" else args.tol_fd
    L = sf.lambda_differential(S, nu, nv, tol=gate)
    F = L.frames
    im = F.interior_mask()
    rep.add(check_max("almost_complex_residual", F.max_ac_residual, gate,
                      "adapted parametrization: J phi_u = phi_v"))
    lam, K = sf.induced_metric_and_K(F)
    lam_stats = {"lambda_min": float(np.min(lam)), "lambda_max": float(np.max(lam)),
                 "K_min": float(np.min(K[im])), "K_max": float(np.max(K[im]))}
    rep.add(Check("induced_metric", lam_stats, 0.0, float(np.min(lam)) > 0.0,
                  "the induced metric lambda(du^2 + dv^2) is nondegenerate"))

    if kind == "sphere":
        us, vs, _, _ = sf.grid_axes(S.domain, nu, nv)
        U, V = np.meshgrid(us, vs, indexing="ij")
        lam_ref = 6.0 / (1.0 + U * U + V * V) ** 2
        rep.add(check_max("lambda_closed_form",
                          float(np.max(np.abs(lam - lam_ref))), args.tol_analytic,
                          "lambda = 6/(1 + u^2 + v^2)^2"))
        rep.add(check_max("gauss_curvature",
                          float(np.max(np.abs(K[im] - 2.0 / 3.0))),
                          1e-4 * _grid_relax(nu, nv),
                          "K = 2/3 (round sphere of radius sqrt(3/2))"))
        T = sf.theorem_L_check(S, nu, nv)
        rep.add(check_max("p_perpendicular", float(np.max(T.product)),
                          args.tol_analytic, "P maps the tangent plane to its "
                          "orthogonal complement"))
        rep.add(check_max("lambda_differential", float(np.max(np.abs(L.Lam))),
                          args.tol_analytic, "the holomorphic differential vanishes"))
    elif kind == "torus-isothermal":
        rep.add(check_max("lambda_constant",
                          float(np.max(np.abs(lam - 4.0 / 3.0))), args.tol_analytic,
                          "lambda = 4/3 in isothermal coordinates"))
        rep.add(check_max("gauss_curvature", float(np.max(np.abs(K[im]))), 1e-6,
                          "the torus is flat"))
        w_ref = -2.0 / SQRT3 + (2.0 / 3.0) * 1j
        rep.add(check_max("w_constant", float(np.max(np.abs(L.w - w_ref))), 1e-10,
                          "w = 2 alpha.beta + i(alpha.alpha - beta.beta) is the "
                          "constant -2/sqrt(3) + (2/3)i"))
        T = sf.theorem_L_check(S, nu, nv)
        mins = {"differential": float(np.min(T.differential)),
                "frame": float(np.min(T.frame)),
                "product": float(np.min(T.product))}
        rep.add(Check("nonvanishing_differential", mins, 0.1,
                      all(v >= 0.1 for v in mins.values()),
                      "all three equivalent vanishing conditions stay bounded "
                      "away from zero (P-invariant tangent planes)"))
    else:
        # grid data carries FD noise of order the almost-complex residual;
        # differentiating it once divides that floor by the spacing
        tol_cr = max(args.tol_fd, 10.0 * F.max_ac_residual / min(F.du, F.dv))
        rep.add(check_max("w_cauchy_riemann", float(np.max(L.cr_w[im])),
                          tol_cr, "w satisfies the Cauchy-Riemann equations "
                          "(within the grid's noise floor)"))
        rep.add(check_max("lambda_cauchy_riemann", float(np.max(L.cr_lambda[im])),
                          tol_cr, "Lambda satisfies the Cauchy-Riemann equations "
                          "(within the grid's noise floor)"))

    worst_h, worst_H = _h_stats(S, nu, nv, args.step)
    rep.add(check_max("mean_curvature", worst_H, 1e-3,
                      "almost complex surfaces are minimal"))
    if kind in ("sphere", "torus-isothermal"):
        rep.add(check_max("second_fundamental_form", worst_h, 1e-3,
                          "this example is totally geodesic"))
    else:
        rep.checks[-1].values["second_fundamental_form_max"] = worst_h
    if args.out:
        _write_field_csv(args.out, F, lam, K, L)
    return rep


def _write_metric_csv(path: str, G: sf.SurfaceGrid, E, Fm, Gm) -> None:
    if not path.endswith(".csv"):
        raise BadInput(f"surface output must be a .csv path, got {path!r}")
    U, V = np.meshgrid(G.us, G.vs, indexing="ij")
    cols = [U, V, E, Fm, Gm]
    with open(path, "w", encoding="ascii") as fh:
        fh.write("u,v,g_uu,g_uv,g_vv\n")
        flat = [c.ravel() for c in cols]
        for row in zip(*flat):
            fh.write(",".join("%.17g" % x for x in row) + "\n")


def _write_field_csv(path: str, F: sf.FrameFields, lam, K, L: sf.LambdaField) -> None:
    if not path.endswith(".csv"):
        raise BadInput(f"surface output must be a .csv path, got {path!r}")
    G = F.grid
    U, V = np.meshgrid(G.us, G.vs, indexing="ij")
    cols = [U, V, lam, K, L.Lam.real, L.Lam.imag, L.w.real, L.w.imag]
    with open(path, "w", encoding="ascii") as fh:
        fh.write("u,v,lambda,K,Lambda_re,Lambda_im,w_re,w_im\n")
        flat = [np.asarray(c).ravel() for c in cols]
        for row in zip(*flat):
            fh.write(",".join("%.17g" % x for x in row) + "\n")


def cmd_wente(args) -> Report:
    periodic = _parse_periodic(args.periodic) if args.periodic else None
    nu, nv = _parse_grid(args.grid)
    S, kind = _resolve_surface(args.input, periodic)
    if kind == "torus":
        # epsilon needs an adapted parametrization; same torus, isothermal form
        S = sf.example1_torus_isothermal()
        kind = "torus-isothermal"
    if isinstance(S, sf.GridSurface):
        nu, nv = S.nu, S.nv
    config = {"input": args.input, "grid": f"{nu}x{nv}",
              "tol_analytic": args.tol_analytic, "tol_fd": args.tol_fd}
    rep = Report("wente", config)
    gate = 1e-8 if kind != "file" else args.tol_fd
    F = sf.frame_fields(S, nu, nv, tol=gate)
    E = wt.integrate_epsilon(F)
    im = E.interior_mask()

    extras = {}
    if E.holonomy_u is not None:
        extras["holonomy_u"] = [float(x) for x in E.holonomy_u]
    if E.holonomy_v is not None:
        extras["holonomy_v"] = [float(x) for x in E.holonomy_v]
    rep.add(check_max("path_independence", E.path_residual, args.tol_fd,
                      "row-first and column-first integration agree",
                      extras=extras or None))
    rep.add(check_max("frame_rotation_intertwines",
                      wt.rotation_intertwines_residuals(F), args.tol_analytic,
                      "the rotated frame satisfies its first-order system "
                      "exactly when the original satisfies its own"))

    analytic = not isinstance(S, sf.GridSurface)
    if analytic:
        closed_seq, h_seq = [], []
        for gu, gv in _analysis_grids(nu, nv):
            Fg = sf.frame_fields(S, gu, gv, tol=gate)
            Eg = wt.integrate_epsilon(Fg)
            img = Eg.interior_mask()
            closed_seq.append(float(np.max(wt.closedness_residuals(Fg)[img])))
            h_seq.append(float(np.max(wt.h_surface_residual(Eg)[img])))
        rep.add(check_order("closedness_order", closed_seq, 1.8,
                            "d(alpha~ du + beta~ dv) = 0 at second order"))
        rep.add(check_order("h_surface_order", h_seq, 1.8,
                            "epsilon_uu + epsilon_vv = -(4/sqrt(3)) "
                            "epsilon_u x epsilon_v at second order"))
    else:
        closed = float(np.max(wt.closedness_residuals(F)[im]))
        hres = float(np.max(wt.h_surface_residual(E)[im]))
        # frames of grid data already carry noise of order the almost-complex
        # residual; closedness differentiates them once more (divide by spacing)
        tol_closed = max(args.tol_fd,
                         10.0 * F.max_ac_residual / min(F.du, F.dv))
        rep.add(check_max("closedness", closed, tol_closed,
                          "d(alpha~ du + beta~ dv) = 0 (within the grid's "
                          "noise floor)"))
        rep.add(Check("h_surface_residual", {"max": hres}, 0.0, True,
                      "reported; refine the grid to check decay"))

    ratio = wt.metric_halving_ratio(F)
    Lam_max = float(np.max(np.abs(sf.lambda_differential(S, nu, nv, tol=gate).Lam)))
    if Lam_max <= args.tol_fd:
        tol = args.tol_analytic if analytic else args.tol_fd
        rep.add(check_max("metric_halving", float(np.max(np.abs(ratio - 0.5))),
                          max(tol, 1e-6),
                          "epsilon's conformal factor is lambda/2 (the "
                          "differential vanishes)"))
    else:
        rep.add(Check("metric_ratio",
                      {"min": float(np.min(ratio)), "max": float(np.max(ratio)),
                       "Lambda_max": Lam_max}, 0.0, True,
                      "ratio reported; halving applies only when the "
                      "holomorphic differential vanishes"))

    disp = E.nodes.reshape(-1, 3)
    disp = disp - disp.mean(axis=0)
    svals = np.linalg.svd(disp, compute_uv=False)
    degenerate = svals[0] <= 1e-12 or svals[1] / svals[0] <= 1e-6
    if degenerate:
        rep.add(Check("degenerate_image",
                      {"singular_values": [float(s) for s in svals]}, 1e-6, True,
                      "epsilon degenerates to a line; the H-surface equation "
                      "holds with both sides zero"))
    else:
        relax = _grid_relax(nu, nv)
        H = wt.mean_curvature_r3(E, tol=None if analytic else args.tol_fd)
        rep.add(check_max("mean_curvature",
                          float(np.max(np.abs(H[im] + 2.0 / SQRT3))),
                          1e-3 * relax,
                          "epsilon has constant mean curvature -2/sqrt(3)"))
        center, radius, fit_res = wt.fit_sphere(E.nodes)
        if kind == "sphere":
            rep.add(check_close("sphere_radius", radius, SQRT3 / 2.0,
                                1e-4 * relax,
                                "epsilon covers part of a round sphere of "
                                "radius sqrt(3)/2"))
            rep.add(check_max("sphere_fit_residual", fit_res, 1e-4 * relax,
                              "all epsilon nodes lie on the fitted sphere"))
        elif fit_res <= 1e-2 * radius:
            rep.add(Check("sphere_fit",
                          {"radius": float(radius), "fit_residual": float(fit_res),
                           "center": [float(c) for c in center]},
                          1e-2, True, "epsilon image is spherical"))
    if args.out:
        if args.out.endswith(".obj"):
            wt.save_obj(args.out, E)
        elif args.out.endswith(".csv"):
            wt.save_csv(args.out, E)
        else:
            raise BadInput(f"wente output must end in .obj or .csv, got {args.out!r}")
    return rep


def cmd_lift(args) -> Report:
    periodic = _parse_periodic(args.periodic) if args.periodic else None
    nu, nv = _parse_grid(args.grid)
    builtin_start = None
    if args.input == "sphere-cmc":
        if periodic is not None:
            raise BadInput("--periodic applies to file inputs")
        E = wt.sphere_cmc(nu, nv)
        ref = sf.example2_sphere(half_width=wt.SPHERE_CMC_HALF_WIDTH)
        eg = E.epsilon_grid()
        builtin_start = ref.point(eg.us[0], eg.vs[0]).as_array()
        kind = "sphere-cmc"
    elif args.input == "cylinder-cmc":
        if periodic is not None:
            raise BadInput("--periodic applies to file inputs")
        E = wt.cylinder_cmc(nu, nv)
        kind = "cylinder-cmc"
    else:
        try:
            E = wt.load_cmc_json(args.input)
        except OSError as exc:
            raise BadInput(f"cannot read CMC file {args.input!r}: {exc}") from exc
        if periodic is not None:
            dom = replace(E.domain, periodic_u=periodic[0], periodic_v=periodic[1])
            E = wt.CMCInput(dom, E.nodes, isothermal=E.isothermal,
                            isothermal_tol=E.isothermal_tol)
        nu, nv = E.nodes.shape[:2]
        kind = "file"
    config = {"input": args.input, "grid": f"{nu}x{nv}", "tol_fd": args.tol_fd}
    rep = Report("lift", config)

    if builtin_start is not None:
        L = wt.lift_from_cmc(E, builtin_start[:4], builtin_start[4:])
    else:
        L = wt.lift_from_cmc(E)
    im = sf.interior_mask(nu, nv, L.domain.periodic_u, L.domain.periodic_v)
    res = sf.almost_complex_residual(L, nu, nv)
    rep.add(check_max("almost_complex_residual", float(np.max(res[im])),
                      args.tol_fd, "the lift is an almost complex surface"))
    gate = max(1e-3, 10.0 * args.tol_fd)
    LF = sf.lambda_differential(L, nu, nv, tol=gate)
    rep.add(check_max("lambda_differential", float(np.max(np.abs(LF.Lam[im]))),
                      args.tol_fd, "the lift's holomorphic differential vanishes"))

    worst_h, worst_H = _h_stats(L, nu, nv, 1e-4)
    rep.add(check_max("mean_curvature", worst_H, 1e-3,
                      "the lift is minimal in S3 x S3"))
    if kind == "sphere-cmc":
        rep.add(check_max("second_fundamental_form", worst_h, 1e-3,
                          "the sphere lift is totally geodesic"))
        Fl = sf.frame_fields(L, nu, nv, tol=gate)
        ref = sf.example2_sphere(half_width=wt.SPHERE_CMC_HALF_WIDTH)
        Fr = sf.frame_fields(ref, nu, nv)
        frame_gap = max(float(np.max(np.linalg.norm(Fl.alpha - Fr.alpha, axis=2))),
                        float(np.max(np.linalg.norm(Fl.beta - Fr.beta, axis=2))))
        rep.add(check_max("frames_match_reference", frame_gap, 5.0 * args.tol_fd,
                          "lifted frames agree with the totally geodesic "
                          "sphere's (conjugating constant 1)"))
    elif kind == "cylinder-cmc":
        rep.add(check_min("second_fundamental_form", worst_h, 0.05,
                          "the cylinder lift is minimal but not totally geodesic"))

    back = wt.integrate_epsilon(sf.frame_fields(L, nu, nv, tol=gate))
    rt = wt.rigid_alignment_error(back.nodes, E.nodes)
    rep.add(check_max("round_trip", rt, 1e-3,
                      "re-integrating epsilon from the lift reproduces the "
                      "input up to rigid motion"))
    if args.out:
        if not args.out.endswith(".json"):
            raise BadInput(f"lift output must be a .json path, got {args.out!r}")
        sf.save_surface_json(args.out, L, nu, nv)
    return rep


# ---------------------------------------------------------------------------
# entry point


_DISPATCH = {"verify": cmd_verify, "surface": cmd_surface,
             "wente": cmd_wente, "lift": cmd_lift}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = _DISPATCH[args.command](args)
        text = rep.to_json()
        json_path = getattr(args, "json", None)
        if json_path == "-":
            sys.stdout.write(text)
        else:
            sys.stdout.write(rep.summary())
            if json_path:
                with open(json_path, "w", encoding="ascii") as fh:
                    fh.write(text)
    except NKError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0 if rep.overall else 1


if __name__ == "__main__":
    sys.exit(main())
