"""Command-line entry points.

    dzl run <config>           run an experiment from a key=value config file
    dzl fourier ...            Fourier-coefficient table (formula vs quadrature)
    dzl zeros ...              locate/certify zeros or model-M diagnostics
    dzl quad ...               quadrature lemma sweeps as CSV
    dzl gen ...                coefficient table export as CSV

Exit codes: 0 ran clean, 2 ran with failed rows/findings, 1 config or usage
error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

from . import arith
from .bdelta import BDelta
from .dirpoly import DirichletPolynomial
from . import quadrature as quad
from . import zeros as Z
from .lab import (ConfigError, emit_report, format_float, make_function,
                  parse_config, run_experiment)


def _cmd_run(args) -> int:
    try:
        with open(args.config) as fh:
            cfg = parse_config(fh.read())
    except (OSError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    report = run_experiment(cfg)
    out = args.out or cfg.out
    for path in emit_report(report, out):
        print(path)
    return 2 if report.failed_rows else 0


def _cmd_fourier(args) -> int:
    deltas = [float(d) for d in args.deltas.split(",")]
    lines = ["delta,j,coeff_formula,coeff_quadrature,abs_err"]
    for d in deltas:
        b = BDelta(d)
        for j in range(-args.jmax, args.jmax + 1):
            cf = b.coeff(j)
            cq = b.coeff_quadrature(j).real
            lines.append(",".join([format_float(d), str(j), format_float(cf),
                                   format_float(cq), format_float(abs(cf - cq))]))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _build_poly(args):
    f = make_function(args.function, args.n, k=args.k, D=args.D,
                      delta=args.delta)
    return f, DirichletPolynomial.from_function(f)


def _cmd_zeros(args) -> int:
    t0 = time.monotonic()
    try:
        f, p = _build_poly(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out: dict = {"mode": args.mode,
                 "params": {"function": args.function, "n": args.n,
                            "k": args.k, "m": args.m, "c": args.c},
                 "windings": [], "zeros": [], "margins": {}}
    findings = 0
    box = None
    if args.box:
        try:
            a, b, c, d = (float(x) for x in args.box.split(","))
            box = Z.Rectangle(a, b, c, d)
        except ValueError as exc:
            print(f"bad --box: {exc}", file=sys.stderr)
            return 1
    if args.mode == "find":
        if box is None:
            print("--mode find needs --box", file=sys.stderr)
            return 1
        for rec in Z.find_zeros(p, box):
            out["zeros"].append({"re": rec.location.real,
                                 "im": rec.location.imag,
                                 "residual": rec.residual,
                                 "winding": rec.winding})
    elif args.mode == "certify":
        thr = Z.threshold(args.n, f.profile.k)
        rep = Z.certify_zero_free(p, thr, (args.t_min, args.t_max))
        out["margins"] = {"threshold": thr, "sigma_dom": rep.sigma_dom,
                          "min_modulus": rep.min_modulus
                          if math.isfinite(rep.min_modulus) else -1.0}
        out["windings"] = [0] * rep.boxes if rep.passed else [
            w for _, w in rep.failures]
        findings = len(rep.failures)
    elif args.mode == "rightmost":
        scan = Z.rightmost_zero_scan(p, 1.0 + 1e-9, (args.t_min, args.t_max))
        out["margins"] = {"sigma_dom": scan.sigma_dom}
        if scan.witness is not None:
            out["zeros"].append({"re": scan.witness.location.real,
                                 "im": scan.witness.location.imag,
                                 "residual": scan.witness.residual,
                                 "winding": scan.witness.winding})
    elif args.mode in ("model-m", "rouche"):
        params = Z.build_model_m_params(f, args.m, args.c, M=f.N)
        N = args.model_n
        pr = params.with_N(N)
        rect = Z.montgomery_rectangle(N, args.c, args.m, -math.pi / math.log(N))
        if args.mode == "model-m":
            res = Z.model_M_winding(pr, rect)
            out["windings"] = [res.winding]
            out["margins"] = {"left_ratio": res.left_max_ratio,
                              "right_ratio": res.right_max_ratio,
                              "status": res.status}
            findings = 0 if res.dominance_pass else 1
        else:
            g = arith.twist(f, BDelta(params.delta))
            pg = DirichletPolynomial.from_function(g)
            rr = Z.rouche_gap_report(pg, pr, rect)
            out["windings"] = [rr.poly_winding, rr.model_winding]
            out["margins"] = {"rouche_ratio": rr.max_ratio}
            findings = 0 if (rr.consistent is None or rr.consistent) else 1
    out["timing"] = {"wall_time_s": time.monotonic() - t0}
    text = json.dumps(out, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 2 if findings else 0


def _cmd_quad(args) -> int:
    lines = []
    if args.check == "perron":
        lines.append("function,x,alpha,T,deviation,budget")
        for label, k, x, alpha, T in (("ones", 1, 10.5, 1.5, 1e3),
                                      ("dk", 2, 500.5, 1.5, 2e3),
                                      ("moebius", 1, 100.5, 1.5, 1e3)):
            f = make_function(label, 2000, k=k)
            r = quad.perron_partial_sum(f, x, alpha, T)
            lines.append(",".join([label, format_float(x), format_float(alpha),
                                   format_float(T), format_float(r.deviation),
                                   format_float(r.total_budget)]))
    elif args.check == "hankel":
        from scipy.special import rgamma

        lines.append("re_z,im_z,X,abs_err,envelope")
        for zr in (-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0):
            for zi in (-2.0, 0.0, 2.0):
                for X in (20.0, 40.0):
                    z = complex(zr, zi)
                    err = abs(quad.hankel_gamma(z, X).value - rgamma(z))
                    lines.append(",".join([
                        format_float(zr), format_float(zi), format_float(X),
                        format_float(err),
                        format_float(quad.hankel_error_envelope(z, X))]))
    elif args.check == "segment":
        lines.append("x,tau,K,T,ratio")
        for x in (0.5, 2.0, 0.1):
            for tau in (-0.3, 0.3, 1.0):
                for K in (5.0, 10.0, 20.0):
                    r = quad.vertical_segment_bound(x, tau, K, 1e4)
                    lines.append(",".join([format_float(x), format_float(tau),
                                           format_float(K), format_float(1e4),
                                           format_float(r.ratio)]))
    else:  # shiu
        lines.append("function,x,z,lhs,rhs_envelope,ratio")
        for x in (1e4, 1e5):
            f = make_function("dk", int(x), k=2)
            r = quad.shiu_ratio(f, x, 1e3)
            lines.append(",".join(["dk", format_float(x), format_float(1e3),
                                   format_float(r.lhs),
                                   format_float(r.rhs_envelope),
                                   format_float(r.ratio)]))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_gen(args) -> int:
    try:
        f = make_function(args.function, args.n, k=args.k, D=args.D,
                          delta=args.delta)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    arith.export_table_csv(f, args.out)
    print(args.out)
    return 0


def _add_function_args(sp, default_n=1000):
    sp.add_argument("--function", default="ones",
                    choices=["ones", "dk", "moebius", "dedekind",
                             "twisted_ones"])
    sp.add_argument("--n", type=int, default=default_n)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--D", type=int, default=-4)
    sp.add_argument("--delta", type=float, default=None)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="dzl",
                                 description="Dirichlet-polynomial zero lab")
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("run", help="run an experiment config")
    sp.add_argument("config")
    sp.add_argument("-o", "--out", default=None)
    sp.set_defaults(fn=_cmd_run)

    sp = sub.add_parser("fourier", help="Fourier coefficient table")
    sp.add_argument("--deltas", default="0.05,0.1,0.2,0.3")
    sp.add_argument("--jmax", type=int, default=8)
    sp.add_argument("-o", "--out", default=None)
    sp.set_defaults(fn=_cmd_fourier)

    sp = sub.add_parser("zeros", help="zero localization / certification")
    _add_function_args(sp, default_n=2000)
    sp.add_argument("--box", default=None,
                    help="sigma_lo,sigma_hi,t_lo,t_hi")
    sp.add_argument("--mode", default="find",
                    choices=["find", "certify", "rightmost", "model-m",
                             "rouche"])
    sp.add_argument("--t-min", type=float, default=0.0)
    sp.add_argument("--t-max", type=float, default=50.0)
    sp.add_argument("--m", type=float, default=1.0)
    sp.add_argument("--c", type=float, default=0.1)
    sp.add_argument("--model-n", type=float, default=1e80)
    sp.add_argument("-o", "--out", default=None)
    sp.set_defaults(fn=_cmd_zeros)

    sp = sub.add_parser("quad", help="quadrature lemma sweep")
    sp.add_argument("--check", required=True,
                    choices=["perron", "hankel", "segment", "shiu"])
    sp.add_argument("-o", "--out", default=None)
    sp.set_defaults(fn=_cmd_quad)

    sp = sub.add_parser("gen", help="coefficient table CSV export")
    _add_function_args(sp)
    sp.add_argument("-o", "--out", required=True)
    sp.set_defaults(fn=_cmd_gen)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
