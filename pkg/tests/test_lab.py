import json

import pytest

from dzl import lab
from dzl.cli import main as cli_main


def test_parse_config_basic():
    cfg = lab.parse_config("""
        # comment
        experiment = E1_zero_free
        function = dk
        k = 2
        N = 1000, 10000
        t_min = -10
        t_max = 10
    """)
    assert cfg.experiment == "E1_zero_free"
    assert cfg.N_list == [1000, 10000]
    assert cfg.k == 2


def test_parse_config_errors():
    with pytest.raises(lab.ConfigError):
        lab.parse_config("function = ones\n")  # missing experiment
    with pytest.raises(lab.ConfigError):
        lab.parse_config("experiment = E9_bogus\nN = 10\n")
    with pytest.raises(lab.ConfigError):
        lab.parse_config("experiment = E1_zero_free\nN = \n")  # empty list
    with pytest.raises(lab.ConfigError):
        lab.parse_config("experiment = E1_zero_free\nN = 100, 10\n")  # not ascending
    with pytest.raises(lab.ConfigError):
        lab.parse_config("experiment = E1_zero_free\nN = 10\nbogus_key = 1\n")
    with pytest.raises(lab.ConfigError):
        lab.parse_config("experiment = E1_zero_free\nN = 10\ntol = -1\n")


def test_format_float_round_trip():
    for x in (0.1, 1 / 3, 1e-300, 123456.789, 2.0 ** 0.5):
        assert float(lab.format_float(x)) == x


def test_e3_report_and_round_trip(tmp_path):
    cfg = lab.parse_config("experiment = E3_fourier\nN = 1\n")
    report = lab.run_experiment(cfg)
    assert report.schema == "dzl-report-1"
    assert report.failed_rows == 0
    assert all(r["suite_passed"] for r in report.rows)
    assert all(r["abs_err"] < 1e-9 for r in report.rows)
    paths = lab.emit_report(report, str(tmp_path))
    payload = json.loads((tmp_path / "report.json").read_text())
    assert payload["schema"] == "dzl-report-1"
    assert payload["rows"][0]["suite_passed"] is True
    # emitted floats parse back exactly
    assert payload["rows"][0]["coeff_formula"] == report.rows[0]["coeff_formula"]
    assert any(p.endswith("rows.csv") for p in paths)
    header = (tmp_path / "rows.csv").read_text().splitlines()[0]
    assert header == ",".join(report.columns)


def test_e1_byte_stability(tmp_path):
    cfg = lab.parse_config(
        "experiment = E1_zero_free\nfunction = ones\nN = 1000\n"
        "t_min = -10\nt_max = 10\n")
    a, b = tmp_path / "a", tmp_path / "b"
    lab.emit_report(lab.run_experiment(cfg), str(a))
    lab.emit_report(lab.run_experiment(cfg), str(b))
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
    assert (a / "rows.csv").read_bytes() == (b / "rows.csv").read_bytes()


def test_failed_rows_marked_not_fatal(tmp_path):
    # D = 9 is not a fundamental discriminant: every row errors, none aborts
    cfg = lab.parse_config(
        "experiment = E1_zero_free\nfunction = dedekind\nD = 9\nN = 64, 128\n"
        "t_min = 0\nt_max = 1\n")
    report = lab.run_experiment(cfg)
    assert report.failed_rows == len(report.rows)
    assert all("error" in r and r["error"] for r in report.rows)


def test_cli_run_exit_codes(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("experiment = E3_fourier\nN = 1\nout = %s\n"
                   % (tmp_path / "out"))
    assert cli_main(["run", str(cfg)]) == 0
    bad = tmp_path / "bad.cfg"
    bad.write_text("experiment = nope\nN = 1\n")
    assert cli_main(["run", str(bad)]) == 1
    assert cli_main(["run", str(tmp_path / "missing.cfg")]) == 1


def test_cli_gen_and_fourier(tmp_path):
    out = tmp_path / "t.csv"
    assert cli_main(["gen", "--function", "moebius", "--n", "20",
                     "-o", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "n,re,im"
    four = tmp_path / "f.csv"
    assert cli_main(["fourier", "--deltas", "0.1", "--jmax", "2",
                     "-o", str(four)]) == 0
    lines = four.read_text().splitlines()
    assert lines[0] == "delta,j,coeff_formula,coeff_quadrature,abs_err"
    assert len(lines) == 1 + 5


def test_cli_zeros_find_json(tmp_path):
    out = tmp_path / "z.json"
    rc = cli_main(["zeros", "--function", "ones", "--n", "100",
                   "--mode", "certify", "--t-min", "0", "--t-max", "5",
                   "-o", str(out)])
    assert rc == 0
    payload = json.loads(out.read_text())
    assert payload["mode"] == "certify"
    assert "min_modulus" in payload["margins"]


def test_dzl_threads_env(tmp_path, monkeypatch):
    monkeypatch.setenv("DZL_THREADS", "2")
    cfg = lab.parse_config(
        "experiment = E1_zero_free\nfunction = ones\nN = 500, 1000\n"
        "t_min = -5\nt_max = 5\n")
    report = lab.run_experiment(cfg)
    assert [r["N"] for r in report.rows] == [500, 1000]  # config order kept
