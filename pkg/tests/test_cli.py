"""CLI and report tests: determinism, exit codes, file emission."""

import json
import math

import numpy as np
import pytest

from nks3x3 import cli
from nks3x3 import surface as sf
from nks3x3 import wente as wt
from nks3x3.errors import BadInput
from nks3x3.report import (Check, Report, check_close, check_max, check_min,
                           check_order)

SQRT3 = math.sqrt(3.0)


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------------------
# report plumbing


def test_report_round_trip():
    rep = Report("demo", {"seed": 7, "grid": "9x9"})
    rep.add(check_max("a", 1e-9, 1e-6, "small thing"))
    rep.add(check_close("b", 0.5, 0.5 + 1e-8, 1e-6, "near half"))
    rep.add(check_min("c", 0.4, 0.1, "bounded below"))
    rep.add(check_order("d", [1e-2, 2.5e-3, 6.2e-4], 1.8, "second order"))
    back = Report.from_json(rep.to_json())
    assert back == rep
    assert back.overall
    assert rep.to_json() == back.to_json()


def test_report_check_semantics():
    assert not check_max("x", 2e-6, 1e-6, "too big").passed
    assert not check_min("x", 0.05, 0.1, "too small").passed
    assert not check_close("x", 1.0, 1.1, 1e-3, "far").passed
    assert not check_order("x", [1e-2, 8e-3, 7e-3], 1.8, "slow decay").passed
    floor = check_order("x", [1e-13, 5e-14, 2e-14], 1.8, "tiny")
    assert floor.passed and "floor" in floor.claim


def test_report_from_json_validation():
    with pytest.raises(BadInput):
        Report.from_json("{nope")
    with pytest.raises(BadInput):
        Report.from_json(json.dumps({"command": "x", "config": {}}))
    doc = {"command": "x", "config": {},
           "checks": [{"name": "a", "values": {"max": 1.0}, "tolerance": 2.0,
                       "passed": True, "claim": "ok"}],
           "overall": False}
    with pytest.raises(BadInput):
        Report.from_json(json.dumps(doc))


def test_flag_parsers():
    assert cli._parse_grid("33x65") == (33, 65)
    with pytest.raises(BadInput):
        cli._parse_grid("33")
    with pytest.raises(BadInput):
        cli._parse_grid("3x3")
    with pytest.raises(BadInput):
        cli._parse_grid("axb")
    assert cli._parse_periodic("u,v") == (True, True)
    assert cli._parse_periodic("v") == (False, True)
    with pytest.raises(BadInput):
        cli._parse_periodic("u,w")


# ---------------------------------------------------------------------------
# verify


def test_verify_small_run_passes_and_is_byte_stable(tmp_path, capsys):
    j1, j2 = tmp_path / "a.json", tmp_path / "b.json"
    code, out, _ = run(["verify", "--samples", "25", "--json", str(j1)], capsys)
    assert code == 0
    assert "overall: PASS" in out
    code, _, _ = run(["verify", "--samples", "25", "--json", str(j2)], capsys)
    assert code == 0
    assert j1.read_bytes() == j2.read_bytes()
    rep = Report.from_json(j1.read_text())
    assert rep.command == "verify" and rep.overall
    names = [c.name for c in rep.checks]
    assert "j_squared" in names and "r_bianchi" in names
    assert "nabla_j_diagonal" in names and "curvature_relative" in names


def test_verify_single_sample(capsys):
    code, out, _ = run(["verify", "--samples", "1"], capsys)
    assert code == 0 and "overall: PASS" in out


def test_verify_rejects_bad_samples(capsys):
    code, _, err = run(["verify", "--samples", "0"], capsys)
    assert code == 2 and "samples" in err


# ---------------------------------------------------------------------------
# surface


def test_surface_sphere(capsys):
    code, out, _ = run(["surface", "sphere"], capsys)
    assert code == 0
    assert "gauss_curvature" in out and "overall: PASS" in out


def test_surface_torus_both_parametrizations(tmp_path, capsys):
    code, out, _ = run(["surface", "torus"], capsys)
    assert code == 0 and "non_adapted_coordinates" in out
    csv = tmp_path / "fields.csv"
    code, out, _ = run(["surface", "torus-isothermal", "--grid", "17x17",
                        "--out", str(csv)], capsys)
    assert code == 0 and "w_constant" in out
    rows = csv.read_text().strip().split("\n")
    assert rows[0] == "u,v,lambda,K,Lambda_re,Lambda_im,w_re,w_im"
    assert len(rows) == 1 + 17 * 17


def test_surface_json_mode_and_file_input(tmp_path, capsys):
    path = tmp_path / "sphere.json"
    sf.save_surface_json(str(path), sf.example2_sphere(half_width=0.3), 33, 33)
    code, out, _ = run(["surface", str(path), "--json", "-"], capsys)
    assert code == 0
    rep = Report.from_json(out)
    assert rep.overall and rep.config["grid"] == "33x33"
    names = [c.name for c in rep.checks]
    assert "w_cauchy_riemann" in names


def test_surface_input_errors(tmp_path, capsys):
    code, _, err = run(["surface", str(tmp_path / "missing.json")], capsys)
    assert code == 2 and "error:" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    code, _, err = run(["surface", str(bad)], capsys)
    assert code == 2
    code, _, err = run(["surface", "sphere", "--periodic", "u"], capsys)
    assert code == 2 and "builtin" in err


# ---------------------------------------------------------------------------
# wente


def test_wente_sphere_with_obj(tmp_path, capsys):
    obj = tmp_path / "eps.obj"
    code, out, _ = run(["wente", "sphere", "--grid", "65x65",
                        "--out", str(obj)], capsys)
    assert code == 0
    assert "sphere_radius" in out and "metric_halving" in out
    lines = obj.read_text().strip().split("\n")
    assert sum(1 for l in lines if l.startswith("v ")) == 65 * 65
    assert sum(1 for l in lines if l.startswith("f ")) == 2 * 64 * 64


def test_wente_torus_degenerate(capsys):
    code, out, _ = run(["wente", "torus-isothermal", "--grid", "33x33"], capsys)
    assert code == 0
    assert "degenerate_image" in out and "holonomy_u" in out
    assert "metric_ratio" in out


def test_wente_torus_uses_isothermal_parametrization(capsys):
    # epsilon needs adapted frames, so the non-adapted builtin is rerouted
    code, out, _ = run(["wente", "torus", "--grid", "33x33"], capsys)
    assert code == 0
    assert "degenerate_image" in out and "holonomy_u" in out


def test_wente_rejects_bad_out_extension(tmp_path, capsys):
    code, _, err = run(["wente", "sphere", "--grid", "17x17",
                        "--out", str(tmp_path / "eps.stl")], capsys)
    assert code == 2 and ".obj or .csv" in err


# ---------------------------------------------------------------------------
# lift


def test_lift_sphere_cmc_writes_surface(tmp_path, capsys):
    out = tmp_path / "lifted.json"
    code, text, _ = run(["lift", "sphere-cmc", "--out", str(out)], capsys)
    assert code == 0
    assert "frames_match_reference" in text and "round_trip" in text
    L = sf.load_surface_json(str(out))
    assert L.nodes.shape == (129, 129, 8)
    # the written lift feeds straight back into the surface analyzer
    code, text, _ = run(["surface", str(out)], capsys)
    assert code == 0


def test_lift_cylinder_cmc(capsys):
    code, out, _ = run(["lift", "cylinder-cmc", "--json", "-"], capsys)
    assert code == 0
    rep = Report.from_json(out)
    byname = {c.name: c for c in rep.checks}
    assert byname["second_fundamental_form"].values["min"] > 0.05
    assert byname["mean_curvature"].values["max"] <= 1e-3


def test_lift_cmc_file_and_failure_exit_code(tmp_path, capsys):
    path = tmp_path / "cyl.json"
    wt.save_cmc_json(str(path), wt.cylinder_cmc(65, 65))
    # 65^2 FD floor exceeds the default 129^2-tuned tolerance: check failure
    code, out, _ = run(["lift", str(path)], capsys)
    assert code == 1 and "overall: FAIL" in out
    code, out, _ = run(["lift", str(path), "--tol-fd", "5e-4"], capsys)
    assert code == 0 and "overall: PASS" in out


def test_lift_orientation_error_is_input_error(tmp_path, capsys):
    E = wt.sphere_cmc(33, 33)
    swapped = wt.CMCInput(E.domain, np.swapaxes(E.nodes, 0, 1).copy())
    path = tmp_path / "swapped.json"
    wt.save_cmc_json(str(path), swapped)
    code, _, err = run(["lift", str(path)], capsys)
    assert code == 2 and "swap" in err


def test_lift_unknown_builtin(capsys):
    code, _, err = run(["lift", "moebius-cmc"], capsys)
    assert code == 2
