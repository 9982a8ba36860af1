"""Experiment driver: reproducible runs E1-E5 with archived, byte-stable reports.

Config files are plain ``key = value`` text (``#`` comments, commas for
lists); the grammar is documented in the README.  Reports are emitted as
JSON (schema "dzl-report-1") plus a CSV per row table; all floats are
printed with 17 significant digits so parsing them back is lossless.  Wall
times go to a separate sidecar file so the main report is byte-identical
across reruns with the same config and seed.

Parallelism: row computations (one per N) run on up to DZL_THREADS workers;
assembly is serialized in config order.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from . import arith
from .arith import MultiplicativeFunction
from .bdelta import BDelta, verify_fourier_properties
from .dirpoly import DirichletPolynomial
from . import quadrature as quad
from . import zeros as Z

__all__ = [
    "ExperimentConfig",
    "Report",
    "ConfigError",
    "parse_config",
    "make_function",
    "run_experiment",
    "emit_report",
    "format_float",
]

EXPERIMENTS = ("E1_zero_free", "E2_optimality", "E3_fourier",
               "E4_quadrature", "E5_model_m")
SCHEMA = "dzl-report-1"
VERSION = "0.1.0"


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    function: str = "ones"
    k: int = 1
    m: float = 1.0
    D: int = -4
    delta: float | None = None
    c: float = 0.1
    N_list: list = field(default_factory=lambda: [1000])
    t_min: float = -100.0
    t_max: float = 100.0
    tol: float = 1e-6
    out: str = "report"
    seed: int = 0

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; "
                              f"choose from {EXPERIMENTS}")
        if not self.N_list:
            raise ConfigError("N list must be nonempty")
        if list(self.N_list) != sorted(self.N_list):
            raise ConfigError("N list must be ascending")
        if self.tol <= 0:
            raise ConfigError("tolerances must be positive")
        if self.t_min >= self.t_max:
            raise ConfigError("need t_min < t_max")


_INT_KEYS = {"k", "D", "seed"}
_FLOAT_KEYS = {"m", "delta", "c", "t_min", "t_max", "tol"}
_LIST_KEYS = {"N"}
_STR_KEYS = {"experiment", "function", "out"}


def parse_config(text: str) -> ExperimentConfig:
    """Parse the key=value config grammar into a validated ExperimentConfig."""
    kw: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key in _INT_KEYS:
            kw[key] = int(val)
        elif key in _FLOAT_KEYS:
            kw[key] = float(val)
        elif key in _LIST_KEYS:
            kw["N_list"] = [int(float(v)) for v in val.split(",") if v.strip()]
        elif key in _STR_KEYS:
            kw[key] = val
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    if "experiment" not in kw:
        raise ConfigError("missing required key 'experiment'")
    return ExperimentConfig(**kw)


def make_function(label: str, N: int, *, k: int = 2, D: int = -4,
                  delta: float | None = None) -> MultiplicativeFunction:
    """Build a coefficient table by label: ones, dk, moebius, dedekind,
    twisted_ones (ones twisted by b_delta(log p / 2 pi))."""
    if label == "ones":
        return arith.make_ones(N)
    if label == "dk":
        return arith.make_dk(k, N)
    if label == "moebius":
        return arith.make_moebius(N)
    if label == "dedekind":
        return arith.dedekind_quadratic(D, N)
    if label == "twisted_ones":
        if delta is None:
            raise ConfigError("twisted_ones needs delta")
        return arith.twist(arith.make_ones(N), BDelta(delta))
    raise ConfigError(f"unknown function label {label!r}")


@dataclass
class Report:
    schema: str
    experiment: str
    config: dict
    columns: list
    provenance: dict   # column -> formula | scan | oracle
    rows: list         # list of dicts, keys == columns
    failed_rows: int
    environment: dict
    wall_time_s: float = 0.0  # emitted to the sidecar only


def _n_threads() -> int:
    try:
        return max(1, int(os.environ.get("DZL_THREADS", "1")))
    except ValueError:
        return 1


def _row_map(fn, items):
    """Run fn over items on up to DZL_THREADS workers, preserving order.

    A raised exception becomes an {"error": ...} row; the sweep continues.
    """
    def safe(item):
        try:
            return fn(item)
        except Exception as exc:  # captured per-row by design
            return {"error": f"{type(exc).__name__}: {exc}"}

    n = _n_threads()
    if n == 1 or len(items) <= 1:
        return [safe(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(safe, items))


# ---------------------------------------------------------------------------
# experiment bodies

def _run_e1(cfg: ExperimentConfig):
    k = cfg.k if cfg.function == "dk" else 1

    def row(N):
        f = make_function(cfg.function, N, k=cfg.k, D=cfg.D)
        p = DirichletPolynomial.from_function(f)
        thr = Z.threshold(N, f.profile.k)
        rep = Z.certify_zero_free(p, thr, (cfg.t_min, cfg.t_max))
        return {
            "N": N,
            "threshold": thr,
            "sigma_dom": rep.sigma_dom,
            "boxes": rep.boxes,
            "min_modulus": rep.min_modulus if math.isfinite(rep.min_modulus) else -1.0,
            "zero_free": rep.passed,
            "offending_boxes": len(rep.failures),
        }

    prov = {"N": "formula", "threshold": "formula", "sigma_dom": "scan",
            "boxes": "scan", "min_modulus": "scan", "zero_free": "scan",
            "offending_boxes": "scan"}
    return _row_map(row, cfg.N_list), prov


def _run_e2(cfg: ExperimentConfig):
    m = cfg.m
    delta = cfg.delta if cfg.delta is not None else Z.delta_for_c(cfg.c, m)
    b = BDelta(delta)
    Mconst = min(100000, max(cfg.N_list))
    params = Z.build_model_m_params(
        make_function(cfg.function, Mconst, k=cfg.k, D=cfg.D), m, cfg.c,
        M=Mconst)

    def row(N):
        f = make_function(cfg.function, N, k=cfg.k, D=cfg.D)
        g = arith.twist(f, b)
        p = DirichletPolynomial.from_function(g)
        L = math.log(N)
        scan = Z.rightmost_zero_scan(p, 1.0 + 1e-9, (cfg.t_min, cfg.t_max))
        rect = Z.montgomery_rectangle(N, cfg.c, m, -math.pi / L)
        pr = params.with_N(float(N))
        rr = Z.rouche_gap_report(p, pr, rect)
        mres = Z.model_M_winding(pr, rect)
        smax = scan.sigma_max
        out = {
            "N": N,
            "delta": delta,
            "sigma_max": smax if smax is not None else -1.0,
            "normalized": ((smax - 1.0) * L / math.log(L)
                           if smax is not None else -1.0),
            "winding_poly": rr.poly_winding,
            "winding_model": rr.model_winding,
            "rouche_ratio": rr.max_ratio,
            "model_status": mres.status,
            "left_ratio": mres.left_max_ratio,
            "right_ratio": mres.right_max_ratio,
            "consistent": (rr.consistent if rr.consistent is not None else True),
        }
        return out

    prov = {"N": "formula", "delta": "formula", "sigma_max": "scan",
            "normalized": "formula", "winding_poly": "scan",
            "winding_model": "scan", "rouche_ratio": "scan",
            "model_status": "scan", "left_ratio": "scan",
            "right_ratio": "scan", "consistent": "scan"}
    return _row_map(row, cfg.N_list), prov


def _run_e3(cfg: ExperimentConfig):
    deltas = [0.05, 0.1, 0.2, 0.3]
    if cfg.delta is not None:
        deltas = sorted(set(deltas + [cfg.delta]))
    J = 8
    bs = [BDelta(d) for d in deltas]
    rep = verify_fourier_properties(bs, J=J)
    rows = []
    for b in bs:
        for j in range(-J, J + 1):
            cf = b.coeff(j)
            cq = b.coeff_quadrature(j).real
            rows.append({
                "delta": b.delta,
                "j": j,
                "coeff_formula": cf,
                "coeff_quadrature": cq,
                "abs_err": abs(cf - cq),
                "envelope_product": abs(cf) * (1 + j * j),
                "suite_passed": rep.passed,
            })
    prov = {"delta": "formula", "j": "formula", "coeff_formula": "formula",
            "coeff_quadrature": "oracle", "abs_err": "oracle",
            "envelope_product": "formula", "suite_passed": "oracle"}
    return rows, prov


def _run_e4(cfg: ExperimentConfig):
    rows = []
    # Perron
    for label, k, x, alpha, T in (("ones", 1, 10.5, 1.5, 1e3),
                                  ("dk", 2, 500.5, 1.5, 2e3),
                                  ("moebius", 1, 100.5, 1.5, 1e3)):
        f = make_function(label, 2000, k=k)
        r = quad.perron_partial_sum(f, x, alpha, T)
        rows.append({"check": "perron", "case": f"{label},x={x:g}",
                     "value": r.deviation, "bound": r.total_budget,
                     "passed": r.deviation <= r.total_budget})
    # Hankel
    worst = 0.0
    from scipy.special import rgamma
    for zr in (-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0):
        for zi in (-2.0, 0.0, 2.0):
            z = complex(zr, zi)
            err = abs(quad.hankel_gamma(z, 40.0).value - rgamma(z))
            worst = max(worst, err)
    rows.append({"check": "hankel", "case": "grid,X=40", "value": worst,
                 "bound": 1e-6, "passed": worst < 1e-6})
    # vertical segment sweep
    ratios = []
    for x in (0.5, 2.0, 0.1):
        for tau in (-0.3, 0.3, 1.0):
            for K in (5.0, 10.0, 20.0):
                ratios.append(quad.vertical_segment_bound(x, tau, K, 1e4).ratio)
    rows.append({"check": "segment", "case": "3x3x3 sweep",
                 "value": max(ratios), "bound": 1.0,
                 "passed": all(math.isfinite(r) for r in ratios)})
    # Shiu
    sr = []
    for x in (1e4, 1e5):
        f = make_function("dk", int(x), k=2)
        sr.append(quad.shiu_ratio(f, x, 1e3).ratio)
    rows.append({"check": "shiu", "case": "d_2,x=1e4..1e5",
                 "value": max(sr), "bound": 1.0,
                 "passed": all(math.isfinite(r) for r in sr)})
    prov = {"check": "formula", "case": "formula", "value": "scan",
            "bound": "formula", "passed": "scan"}
    return rows, prov


def _run_e5(cfg: ExperimentConfig):
    m = cfg.m
    Mconst = 100000
    f = make_function(cfg.function, Mconst, k=cfg.k, D=cfg.D)
    params = Z.build_model_m_params(f, m, cfg.c, M=Mconst)

    def row(N):
        L = math.log(N)
        pr = params.with_N(float(N))
        res = Z.model_M_winding_scaled(pr, y1=-0.5)
        return {
            "N_log10": math.log10(N),
            "winding": res.winding,
            "status": res.status,
            "dominance_pass": res.dominance_pass,
            "left_ratio": res.left_max_ratio,
            "right_ratio": res.right_max_ratio,
            "left_arg": res.side_arg_changes[3],
            "min_modulus": res.min_boundary_modulus,
        }

    prov = {"N_log10": "formula", "winding": "scan", "status": "scan",
            "dominance_pass": "scan", "left_ratio": "scan",
            "right_ratio": "scan", "left_arg": "scan", "min_modulus": "scan"}
    return _row_map(row, [float(N) for N in cfg.N_list]), prov


def run_experiment(cfg: ExperimentConfig) -> Report:
    t0 = time.monotonic()
    body = {"E1_zero_free": _run_e1, "E2_optimality": _run_e2,
            "E3_fourier": _run_e3, "E4_quadrature": _run_e4,
            "E5_model_m": _run_e5}[cfg.experiment]
    rows, prov = body(cfg)
    columns = list(prov.keys())
    failed = 0
    for r in rows:
        if "error" in r:
            failed += 1
            for col in columns:
                r.setdefault(col, "")
    cfg_dict = asdict(cfg)
    if cfg_dict["delta"] is None:
        cfg_dict["delta"] = -1.0
    return Report(
        schema=SCHEMA,
        experiment=cfg.experiment,
        config=cfg_dict,
        columns=columns + ["error"],
        provenance=prov,
        rows=rows,
        failed_rows=failed,
        environment={"version": VERSION},
        wall_time_s=time.monotonic() - t0,
    )


# ---------------------------------------------------------------------------
# byte-stable emission

def format_float(x: float) -> str:
    """17 significant digits: lossless float round-trip, stable across runs."""
    return f"{x:.17g}"


def _json_value(v, indent: str) -> str:
    import json as _json

    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(float(v))
    if isinstance(v, str):
        return _json.dumps(v)
    if v is None:
        return "null"
    nxt = indent + "  "
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f'{nxt}{_json.dumps(str(k))}: {_json_value(val, nxt)}'
                 for k, val in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + indent + "}"
    if isinstance(v, (list, tuple)):
        if not v:
            return "[]"
        items = [f"{nxt}{_json_value(val, nxt)}" for val in v]
        return "[\n" + ",\n".join(items) + "\n" + indent + "]"
    raise TypeError(f"cannot serialize {type(v)}")


def emit_report(report: Report, out_dir: str, formats=("json", "csv")) -> list:
    """Write report files under out_dir; returns the paths written.

    report.json and rows.csv are byte-stable for a fixed (config, seed);
    timing.json carries the wall time and is allowed to differ.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if "json" in formats:
        payload = {
            "schema": report.schema,
            "experiment": report.experiment,
            "config": report.config,
            "columns": report.columns,
            "provenance": report.provenance,
            "rows": [{c: r.get(c, "") for c in report.columns}
                     for r in report.rows],
            "failed_rows": report.failed_rows,
            "environment": report.environment,
        }
        path = os.path.join(out_dir, "report.json")
        with open(path, "w") as fh:
            fh.write(_json_value(payload, "") + "\n")
        written.append(path)
    if "csv" in formats:
        import csv

        path = os.path.join(out_dir, "rows.csv")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(report.columns)
            for r in report.rows:
                cells = []
                for c in report.columns:
                    v = r.get(c, "")
                    if isinstance(v, (bool, np.bool_)):
                        cells.append("true" if v else "false")
                    elif isinstance(v, (float, np.floating)):
                        cells.append(format_float(float(v)))
                    else:
                        cells.append(str(v))
                w.writerow(cells)
        written.append(path)
    side = os.path.join(out_dir, "timing.json")
    with open(side, "w") as fh:
        fh.write('{\n  "wall_time_s": %s\n}\n' % format_float(report.wall_time_s))
    written.append(side)
    return written
