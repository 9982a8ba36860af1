import hashlib
import json

import pytest

from dzl_plots.render import (FIGURES, SchemaError, load_report, main,
                              render)


def _write_report(tmp_path, experiment="E2_optimality", rows=None, config=None):
    payload = {
        "schema": "dzl-report-1",
        "experiment": experiment,
        "config": config or {"c": 0.1, "k": 1},
        "columns": [],
        "provenance": {},
        "rows": rows or [],
        "failed_rows": 0,
        "environment": {"version": "0.1.0"},
    }
    path = tmp_path / "report.json"
    path.write_text(json.dumps(payload))
    return str(path)


E2_ROWS = [
    {"N": 1024, "sigma_max": 1.03, "normalized": 0.5, "winding_poly": 0,
     "winding_model": 0, "rouche_ratio": 0.4, "error": ""},
    {"N": 2048, "sigma_max": -1.0, "normalized": -1.0, "winding_poly": 1,
     "winding_model": 1, "rouche_ratio": 1.7, "error": ""},
]

E3_ROWS = [
    {"delta": 0.1, "j": j, "coeff_formula": 0.5 / (1 + j * j),
     "coeff_quadrature": 0.5 / (1 + j * j), "abs_err": 0.0,
     "envelope_product": 0.5, "suite_passed": True, "error": ""}
    for j in range(-4, 5)
]

E5_ROWS = [
    {"N_log10": 10.0 * i, "winding": 0, "left_ratio": 3.0 - 0.1 * i,
     "right_ratio": 0.2, "left_arg": -1.9, "error": ""}
    for i in range(1, 9)
]


def test_schema_mismatch_names_versions(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schema": "dzl-report-0", "rows": []}))
    with pytest.raises(SchemaError) as err:
        load_report(str(path))
    assert "dzl-report-1" in str(err.value) and "dzl-report-0" in str(err.value)


def test_render_all_figures(tmp_path):
    for rows, fig in ((E2_ROWS, "thresholds"), (E3_ROWS, "fourier"),
                      (E5_ROWS, "winding"), (E2_ROWS, "winding")):
        rep = load_report(_write_report(tmp_path, rows=rows))
        out = tmp_path / f"{fig}.png"
        render(rep, fig, str(out))
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_empty_report_no_data_annotation(tmp_path):
    rep = load_report(_write_report(tmp_path, rows=[]))
    for fig in FIGURES:
        out = tmp_path / f"empty_{fig}.png"
        render(rep, fig, str(out))
        assert out.stat().st_size > 0


def test_deterministic_bytes(tmp_path):
    rep = load_report(_write_report(tmp_path, rows=E2_ROWS))
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    render(rep, "thresholds", str(a))
    render(rep, "thresholds", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_render_is_read_only(tmp_path):
    path = _write_report(tmp_path, rows=E2_ROWS)
    before = hashlib.sha256(open(path, "rb").read()).hexdigest()
    render(load_report(path), "winding", str(tmp_path / "o.png"))
    after = hashlib.sha256(open(path, "rb").read()).hexdigest()
    assert before == after


def test_unknown_figure_rejected(tmp_path):
    rep = load_report(_write_report(tmp_path))
    with pytest.raises(ValueError):
        render(rep, "sparklines", str(tmp_path / "x.png"))


def test_real_e1_e3_reports_deterministic(tmp_path):
    lab = pytest.importorskip("dzl.lab")
    outs = {}
    for name, text in (
        ("e1", "experiment = E1_zero_free\nfunction = ones\nN = 1000\n"
               "t_min = -10\nt_max = 10\n"),
        ("e3", "experiment = E3_fourier\nN = 1\n"),
    ):
        lab.emit_report(lab.run_experiment(lab.parse_config(text)),
                        str(tmp_path / name))
        outs[name] = str(tmp_path / name / "report.json")
    for name, fig in (("e1", "thresholds"), ("e3", "fourier")):
        rep = load_report(outs[name])
        a, b = tmp_path / f"{name}_a.png", tmp_path / f"{name}_b.png"
        render(rep, fig, str(a))
        render(rep, fig, str(b))
        assert a.read_bytes() == b.read_bytes()


def test_main_exit_codes(tmp_path):
    good = _write_report(tmp_path, rows=E2_ROWS)
    out = tmp_path / "cli.png"
    assert main([good, "--fig", "thresholds", "-o", str(out)]) == 0
    assert out.exists()
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main([str(bad), "--fig", "thresholds", "-o", str(out)]) == 1
    assert main([str(tmp_path / "nope.json"), "--fig", "fourier",
                 "-o", str(out)]) == 1
