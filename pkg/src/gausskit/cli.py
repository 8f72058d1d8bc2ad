"""Command-line front end.

Every subcommand prints a JSON report on stdout (or writes it with
``--report``) and can emit plotting data with ``--csv``.  Exit status is 0 on
success, 1 for usage and input errors, 2 for numerical failures.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import gaussfit, hermite, lowfreq, lsq, stencil
from .errors import GaussKitError, InputError, InvalidParameter, NumericalError
from .funcspec import parse
from .numerics.linalg import condition_estimate
from .numerics.quadrature import QuadratureConfig, integrate

DIGITS_ENV = "GAUSSKIT_DEFAULT_DIGITS"
DEFAULT_SAMPLES = 501
LSQ_REFUSE_N = 5
LSQ_REFUSE_T = 0.01


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# output helpers


def _fmt(v):
    return format(float(v), ".17g")


def emit_curve_csv(f, approximant, range_, samples, path):
    """Write ``x,f,approx,diff`` rows on a uniform grid (real parts only)."""
    lo, hi = (float(v) for v in range_)
    if not lo < hi:
        raise InvalidParameter(f"range must satisfy lo < hi, got {lo}:{hi}")
    if samples < 2:
        raise InvalidParameter("samples must be at least 2")
    xs = np.linspace(lo, hi, int(samples))
    fv = np.real(np.asarray(f(xs), dtype=complex)) * np.ones_like(xs)
    av = np.real(np.asarray(approximant(xs), dtype=complex)) * np.ones_like(xs)
    lines = ["x,f,approx,diff"]
    lines += [f"{_fmt(x)},{_fmt(a)},{_fmt(b)},{_fmt(a - b)}" for x, a, b in zip(xs, fv, av)]
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    return path


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, complex):
        return [_jsonable(v.real), _jsonable(v.imag)]
    return v


def _write_report(report, path):
    text = json.dumps(_jsonable(report), indent=2) + "\n"
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument parsing


def _range(text):
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    return (lo, hi)


def _scalar(text):
    text = text.strip().replace(" ", "")
    try:
        return float(text) if "i" not in text and "j" not in text else complex(text.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad node {text!r}") from None


def _nodes(text):
    return [_scalar(v) for v in text.split(",") if v.strip()]


def _add_common(p, fitting=True):
    p.add_argument("--f", dest="f", required=fitting, help="target function expression")
    p.add_argument("--abs-tol", type=float, default=1e-10)
    p.add_argument("--csv", help="write x,f,approx,diff samples to this path ('-' for stdout)")
    p.add_argument("--range", type=_range, help="LO:HI sampling range for --csv")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.add_argument("--timing", action="store_true", help="add wall_time_ms to the report")


def _add_fit_args(p, need_t=True):
    p.add_argument("--N", type=int, required=True)
    if need_t:
        p.add_argument("--t", type=float, required=True)
    p.add_argument("--M", type=float, help="truncation half-width override")
    p.add_argument("--digits", type=int, help="working precision in decimal digits")
    p.add_argument("--coef-csv", help="write the coefficient table to this path")


def build_parser():
    parser = _Parser(prog="gausskit", description="Approximation by sums of Gaussian translates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", help="Gaussian translates from the Hermite expansion")
    _add_common(p)
    _add_fit_args(p)

    p = sub.add_parser("hermite", help="expansion in derivatives of exp(-x^2)")
    _add_common(p)
    _add_fit_args(p, need_t=False)

    p = sub.add_parser("lsq", help="least-squares Gaussian translates")
    _add_common(p)
    _add_fit_args(p)

    for name in ("trig", "cosine"):
        p = sub.add_parser(name, help="low-frequency exponential/cosine series")
        _add_common(p)
        _add_fit_args(p)
        p.add_argument("--f-imag", help="imaginary part of the target")
        p.add_argument("--omega", type=float, help="frequency bound (N*|t| must stay below it)")
        p.add_argument("--interval", type=_range, help="finite interval A:B for sine/cosine series")
        p.add_argument("--method", choices=("thm3", "lsq"), default="thm3")
        p.add_argument("--route", choices=("direct", "grid"), default="direct")
        p.add_argument("--extension", choices=("zero", "natural"), default="zero")
        p.add_argument("--grid-spacing", type=float, default=lowfreq.DEFAULT_SPACING)
        p.add_argument("--grid-halfwidth", type=float, default=lowfreq.DEFAULT_HALFWIDTH)

    p = sub.add_parser("stencil", help="finite-difference coefficients")
    _add_common(p, fitting=False)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--nodes", type=_nodes, required=True)
    p.add_argument("--t", type=float, help="step for the truncation error bound")
    p.add_argument("--digits", type=int, default=stencil.DEFAULT_DIGITS)

    p = sub.add_parser("synth", help="impulse train through the Gaussian filter")
    _add_common(p)
    _add_fit_args(p, need_t=False)
    p.add_argument("--tau", type=float, required=True)

    for name in ("eval", "error"):
        p = sub.add_parser(name, help="evaluate an approximant" if name == "eval" else "report errors only")
        _add_common(p)
        _add_fit_args(p)
        p.add_argument("--method", choices=("hermite", "thm3", "lsq"), default="thm3")
    return parser


# ---------------------------------------------------------------------------
# subcommands


def _cfg(args):
    return QuadratureConfig(abs_tol=args.abs_tol)


def _default_digits():
    env = os.environ.get(DIGITS_ENV)
    if env is None:
        return lsq.DEFAULT_PRECISION, False
    try:
        return int(env), True
    except ValueError:
        raise UsageError(f"{DIGITS_ENV} must be an integer, got {env!r}") from None


def _default_range(f):
    lo, hi = f.support
    if math.isfinite(lo) and math.isfinite(hi):
        pad = 0.25 * (hi - lo)
        return (lo - pad, hi + pad)
    return (-5.0, 5.0)


def _combo_rows(c):
    return [{"index": n, "shift": sh, "sign": s, "log10_magnitude": lg, "value": v}
            for n, sh, s, lg, v in gaussfit.coefficient_rows(c)]


def _maybe_curve(args, f, approx, report):
    if args.csv:
        rng = args.range or _default_range(f)
        emit_curve_csv(f, approx, rng, args.samples, args.csv)
        report["parameters"]["range"] = list(rng)
        report["parameters"]["samples"] = args.samples


def _relative(err, f, cfg):
    norm = math.sqrt(max(float(integrate(lambda x: np.abs(f(x)) ** 2, "whole-line", cfg,
                                         getattr(f, "breakpoints", ()))), 0.0))
    return err / norm if norm > 0 else None


def _run_hermite(args, f, cfg):
    b = hermite.compute_bn(f, args.N, cfg, args.M)
    approx = lambda x: hermite.eval_hermite_expansion(b, x)  # noqa: E731
    lo, hi = f.support
    T = cfg.tail_cutoff
    dom = (lo if math.isfinite(lo) else -T, hi if math.isfinite(hi) else T)
    dom = (min(dom[0], -T), max(dom[1], T))
    err = math.sqrt(max(float(integrate(lambda x: np.abs(f(x) - approx(x)) ** 2, dom, cfg,
                                        [p for p in f.breakpoints if dom[0] < p < dom[1]])), 0.0))
    report = {
        "method": "hermite",
        "parameters": {"f": f.render(), "N": args.N, "M": b.truncation_M, "abs_tol": args.abs_tol},
        "error_l2": err,
        "error_l2_relative": _relative(err, f, cfg),
        "coefficients": [{"index": n, "b": float(v)} for n, v in enumerate(b.b)],
    }
    return report, approx


def _run_thm3(args, f, cfg):
    c = gaussfit.fit(f, args.N, args.t, cfg, args.M, args.digits)
    err = gaussfit.l2_fit_error(f, c, cfg)
    report = {
        "method": "gauss-thm3",
        "parameters": {"f": f.render(), "N": args.N, "t": args.t, "M": c.info.get("truncation_M"),
                       "digits": c.digits, "abs_tol": args.abs_tol},
        "error_l2": err,
        "error_l2_relative": _relative(err, f, cfg),
        "coefficients": _combo_rows(c),
    }
    if args.coef_csv:
        gaussfit.write_coefficient_csv(c, args.coef_csv)
    return report, gaussfit.combo_function(c)


def _run_lsq(args, f, cfg):
    default, from_env = _default_digits()
    digits = args.digits if args.digits is not None else default
    explicit = args.digits is not None or from_env
    if args.N > LSQ_REFUSE_N and abs(args.t) <= LSQ_REFUSE_T and not explicit:
        kappa = condition_estimate(lsq.gram_matrix(args.N, args.t, 400), 400)
        raise UsageError(
            f"N={args.N} at |t|={abs(args.t):g} gives a normal matrix with condition estimate "
            f"{kappa:.3g}; {digits} digits are not enough. Pass --digits (about "
            f"{int(math.log10(kappa)) + 30} or more) or set {DIGITS_ENV}.")
    sys_ = lsq.build_normal_system(f, args.N, args.t, digits, cfg)
    c = lsq.solve_least_squares(sys_)
    e2 = float(lsq.quadratic_form_error(sys_, c.a))
    report = lsq.report(sys_, c, e2)
    report = {
        "method": "gauss-lsq",
        "parameters": {"f": f.render(), "N": args.N, "t": args.t, "precision_digits": digits,
                       "abs_tol": args.abs_tol},
        "error_l2": math.sqrt(max(e2, 0.0)),
        "e2_error": e2,
        "condition_estimate": report["condition_estimate"],
        "residual_inf_norm": report["residual_inf_norm"],
        "coefficients": _combo_rows(c),
    }
    if args.coef_csv:
        gaussfit.write_coefficient_csv(c, args.coef_csv)
    return report, gaussfit.combo_function(c)


def _trig_rows(c):
    return [{"index": n, "frequency": n * c.t, "re": v.real, "im": v.imag}
            for n, v in enumerate(c.values)]


def _write_trig_csv(c, path):
    with open(path, "w", newline="\n") as fh:
        fh.write("index,frequency,re,im\n")
        for n, v in enumerate(c.values):
            fh.write(f"{n},{_fmt(n * c.t)},{_fmt(v.real)},{_fmt(v.imag)}\n")


def _lowfreq_kwargs(args):
    default, _ = _default_digits()
    kw = {"route": args.route, "halfwidth": args.grid_halfwidth, "spacing": args.grid_spacing,
          "M": args.M}
    if args.method == "lsq":
        kw["precision"] = args.digits if args.digits is not None else default
    return kw


def _lowfreq_params(args, f, extra):
    params = {"f": f.render(), "N": args.N, "t": args.t, "omega": args.omega,
              "method": args.method, "route": args.route, "grid_spacing": args.grid_spacing,
              "grid_halfwidth": args.grid_halfwidth, "abs_tol": args.abs_tol}
    if args.method == "lsq":
        params["precision_digits"] = _lowfreq_kwargs(args)["precision"]
    params.update(extra)
    return params


def _run_trig(args, f, cfg):
    f_im = parse(args.f_imag) if args.f_imag else None
    kw = _lowfreq_kwargs(args)
    if args.interval is not None:
        if args.omega is None:
            raise UsageError("--interval needs --omega")
        if f_im is not None:
            raise UsageError("sine/cosine series take a real target; drop --f-imag")
        r = lowfreq.fit_sincos(f, args.interval, args.N, args.t, args.omega, cfg,
                               method=args.method, extension=args.extension, **kw)
        c = r.combination
        report = {
            "method": "trig",
            "parameters": _lowfreq_params(args, f, {"interval": list(args.interval),
                                                    "extension": args.extension,
                                                    "M": c.info.get("truncation_M")}),
            "error_l2": r.error_l2,
            "error_weighted": r.error_weighted,
            "coefficients": [{"index": n, "frequency": n * r.t, "cos": a, "sin": b}
                             for n, (a, b) in enumerate(zip(r.cos, r.sin))],
        }
        approx = r
    else:
        c = lowfreq.fit_lowfreq(f, args.N, args.t, cfg, f_imag=f_im, method=args.method,
                                omega=args.omega, **kw)
        err = lowfreq.weighted_fit_error(f, c, cfg, f_im)
        extra = {"M": c.info.get("truncation_M")}
        if f_im is not None:
            extra["f_imag"] = f_im.render()
        report = {
            "method": "trig",
            "parameters": _lowfreq_params(args, f, extra),
            "error_weighted": err,
            "coefficients": _trig_rows(c),
        }
        approx = c
    if "condition_estimate" in c.info:
        report["condition_estimate"] = c.info["condition_estimate"]
    if args.coef_csv:
        _write_trig_csv(c, args.coef_csv)
    return report, approx


def _run_cosine(args, f, cfg):
    if args.omega is None:
        raise UsageError("cosine needs --omega")
    if args.interval is None:
        raise UsageError("cosine needs --interval 0:B")
    a, b = args.interval
    if a != 0:
        raise UsageError("cosine series live on an interval 0:B")
    kw = _lowfreq_kwargs(args)
    r = lowfreq.fit_cosine_even(f, b, args.N, args.t, args.omega, cfg, method=args.method,
                                extension=args.extension, **kw)
    c = r.sincos.combination
    report = {
        "method": "cosine",
        "parameters": _lowfreq_params(args, f, {"interval": [0.0, b], "extension": args.extension,
                                                "M": c.info.get("truncation_M")}),
        "error_l2": r.error_l2,
        "error_weighted": r.sincos.error_weighted,
        "coefficients": [{"index": n, "frequency": n * r.t, "cos": v} for n, v in enumerate(r.cos)],
    }
    if "condition_estimate" in c.info:
        report["condition_estimate"] = c.info["condition_estimate"]
    if args.coef_csv:
        _write_trig_csv(c, args.coef_csv)
    return report, r


def _node_repr(v):
    v = complex(v)
    return _fmt(v.real) if v.imag == 0 else f"{_fmt(v.real)}{'+' if v.imag >= 0 else '-'}{_fmt(abs(v.imag))}i"


def _run_stencil(args, cfg):
    s = stencil.solve_stencil(args.order, args.nodes, args.digits)
    const = s.error_constant()
    report = {
        "method": "stencil",
        "parameters": {"order": args.order, "nodes": [_node_repr(v) for v in s.nodes],
                       "digits": args.digits, "t": args.t},
        "order_of_accuracy": s.order_of_accuracy,
        "error_bound_constant": const,
        "coefficients": [{"node": _node_repr(k), "coefficient": _node_repr(c)}
                         for k, c in zip(s.nodes, s.coeffs)],
    }
    if args.t is not None:
        bound = stencil.gaussian_derivative_bound(s.n + 1)
        report["error_bound_gaussian"] = stencil.truncation_error_bound(s, bound, args.t)
    if args.csv:
        lines = ["node,coefficient"]
        lines += [f"{_node_repr(k)},{_node_repr(c)}" for k, c in zip(s.nodes, s.coeffs)]
        lines += [f"# deriv_order,{s.deriv_order}", f"# order_of_accuracy,{s.order_of_accuracy}",
                  f"# error_bound_constant,{_fmt(const)}"]
        text = "\n".join(lines) + "\n"
        if args.csv == "-":
            sys.stdout.write(text)
        else:
            with open(args.csv, "w", newline="\n") as fh:
                fh.write(text)
    return report


def _run_synth(args, f, cfg):
    train = gaussfit.impulse_synthesis(f, args.N, args.tau, cfg, args.M)
    c = train.combination
    err = gaussfit.l2_fit_error(f, c, cfg)
    report = {
        "method": "synth",
        "parameters": {"f": f.render(), "N": args.N, "tau": args.tau, "t": c.t,
                       "M": c.info.get("truncation_M"), "digits": c.digits, "abs_tol": args.abs_tol},
        "error_l2": err,
        "load_time": train.load_time,
        "coefficients": [{"time": float(s), "weight": float(w)}
                         for s, w in zip(train.times_float, train.weights_float)],
    }
    return report, lambda x: gaussfit.filter_train(train, x)


_FITTERS = {"hermite": _run_hermite, "thm3": _run_thm3, "lsq": _run_lsq}


def _dispatch(args):
    if args.command == "stencil":
        return _run_stencil(args, _cfg(args)), None, None
    cfg = _cfg(args)
    f = parse(args.f)
    if args.command in ("fit", "hermite", "lsq"):
        name = {"fit": "thm3"}.get(args.command, args.command)
        report, approx = _FITTERS[name](args, f, cfg)
    elif args.command == "trig":
        report, approx = _run_trig(args, f, cfg)
    elif args.command == "cosine":
        report, approx = _run_cosine(args, f, cfg)
    elif args.command == "synth":
        report, approx = _run_synth(args, f, cfg)
    else:
        report, approx = _FITTERS[args.method](args, f, cfg)
        if args.command == "error":
            report.pop("coefficients", None)
    return report, f, approx


def run(argv):
    parser = build_parser()
    start = time.perf_counter()
    args = parser.parse_args(argv)
    if getattr(args, "N", 0) is not None and getattr(args, "N", 0) < 0:
        raise UsageError("--N must be non-negative")
    if getattr(args, "samples", 2) < 2:
        raise UsageError("--samples must be at least 2")
    report, f, approx = _dispatch(args)
    if approx is not None:
        if args.command == "eval" and not args.csv:
            args.csv = "-"
        _maybe_curve(args, f, approx, report)
    if args.timing:
        report["wall_time_ms"] = int(round(1000 * (time.perf_counter() - start)))
    if args.command == "eval" and args.csv == "-" and not args.report:
        return 0
    _write_report(report, args.report)
    return 0


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        return run(argv)
    except InputError as exc:
        print(f"gausskit: error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"gausskit: numerical failure: {exc}", file=sys.stderr)
        return 2
    except GaussKitError as exc:
        print(f"gausskit: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"gausskit: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
