"""Command-line front end.

Every subcommand prints flat records, one per grid point, with all inputs
echoed next to the outputs.  CSV floats carry 17 significant digits, so a
row fed back as flags reproduces its outputs exactly.

Exit codes: 0 on success, 2 for bad parameters (including argparse usage
errors), 3 when a numerical method reports instability.
"""
import argparse
import csv
import io
import json
import math
import sys

from . import hitting, montecarlo, process, verification
from .errors import DomainError, InstabilityError
from .inversion import InversionConfig

__all__ = ["build_parser", "run", "main"]

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_INSTABILITY = 3

TAIL_METHODS = ("inversion", "mc-indicator", "mc-lemma22", "asymptotic", "closed-form")


class _Parser(argparse.ArgumentParser):
    # argparse already exits with 2 on usage errors; keep the message on one line.
    def error(self, message):
        self.exit(EXIT_DOMAIN, f"{self.prog}: error: {message}\n")


def _add_common(p, need_b=True, need_t=True):
    p.add_argument("--nu", type=float, help="Bessel index")
    p.add_argument("--a", type=float, help="starting point")
    if need_b:
        p.add_argument("--b", type=float, help="barrier, 0 < b < a")
    if need_t:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--t", type=float, help="time")
        g.add_argument("--t-grid", help="time grid lo:hi:n-log (or -lin)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="write to this file instead of stdout")
    p.add_argument("--config", help="JSON file of defaults; flags override it")


def _add_inversion(p):
    p.add_argument("--precision", choices=("double", "extended"), default="extended")
    p.add_argument("--order", type=int, help="Stehfest order (default 40 extended, 14 double)")
    p.add_argument("--dps", type=int, help="mpmath working digits (extended only)")


def _add_mc(p):
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--horizon", type=float)
    p.add_argument("--streams", type=int, default=64)
    p.add_argument("--bridge", action=argparse.BooleanOptionalAction, default=True,
                   help="Brownian-bridge crossing test between grid points")
    p.add_argument("--backend", choices=("numba", "numpy"))
    p.add_argument("--threads", type=int, help="worker threads (does not change results)")


def build_parser():
    parser = _Parser(prog="besselhit", description="Hitting times of Bessel processes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("tail", help="tail probability of the hitting time")
    _add_common(p)
    p.add_argument("--method", choices=TAIL_METHODS, default="inversion")
    _add_inversion(p)
    _add_mc(p)

    for name, text in (("density", "density of the hitting time"),
                       ("cdf", "distribution function of the hitting time")):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        _add_inversion(p)

    p = sub.add_parser("laplace", help="Laplace transform E[exp(-lam tau)]")
    _add_common(p, need_t=False)
    p.add_argument("--lam", type=float, help="transform argument > 0")

    p = sub.add_parser("moment", help="negative moment E[R_t^(-2p)]")
    _add_common(p, need_b=False)
    p.add_argument("--p", type=float, help="order, 0 < p < 1 + nu")

    p = sub.add_parser("simulate", help="run both Monte Carlo estimators")
    _add_common(p)
    _add_mc(p)

    p = sub.add_parser("asymptote", help="large-t tail law")
    _add_common(p)

    p = sub.add_parser("verify-slope", help="decay slope of |tail - asymptote|")
    _add_common(p)
    _add_inversion(p)

    p = sub.add_parser("verify-constant", help="normalized tail against its limit")
    _add_common(p)
    _add_inversion(p)

    p = sub.add_parser("verify-moment", help="negative-moment sandwich bounds")
    _add_common(p, need_b=False)
    p.add_argument("--p", type=float, help="order, 0 < p < 1 + nu")
    parser.subcommands = sub.choices
    return parser


def _apply_config(parser, argv):
    """Re-parse with defaults taken from ``--config`` when one is given."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        with open(args.config) as fh:
            conf = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read config {args.config!r}: {exc}") from None
    if not isinstance(conf, dict):
        raise DomainError("config file must hold a JSON object")
    conf = {k.replace("-", "_"): v for k, v in conf.items()}
    unknown = sorted(set(conf) - set(vars(args)) - {"command"})
    if unknown:
        raise DomainError(f"unknown config keys: {', '.join(unknown)}")
    conf.pop("command", None)
    # Flags given on the command line must win, so only defaults change.
    parser.subcommands[args.command].set_defaults(**conf)
    return parser.parse_args(argv)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise DomainError(f"missing required value(s): {flags}")


def _times(args):
    if getattr(args, "t_grid", None):
        return verification.parse_grid(args.t_grid)
    _need(args, "t")
    return [args.t]


def _params(args):
    _need(args, "nu", "a", "b")
    return process.BesselParams(args.nu, args.a, args.b)


def _inv_cfg(args):
    if args.precision == "extended":
        order = args.order or 40
        return InversionConfig.extended(order, args.dps)
    return InversionConfig(order=args.order or 14, dps=args.dps)


def _inv_inputs(args):
    return {"precision": args.precision, "order": args.order or (40 if args.precision == "extended" else 14)}


def _mc_cfg(args):
    return montecarlo.McConfig(paths=args.paths, step=args.step, horizon=args.horizon,
                               seed=args.seed, streams=args.streams, bridge=args.bridge)


def _mc_inputs(args):
    row = {"seed": args.seed, "paths": args.paths, "step": args.step, "streams": args.streams,
           "bridge": args.bridge}
    if args.horizon is not None:
        row["horizon"] = args.horizon
    return row


def _base(args, params, t=None):
    row = {"nu": params.nu, "a": params.a, "b": params.b}
    if t is not None:
        row["t"] = t
    return row


def _cmd_tail(args):
    params = _params(args)
    escape = 1.0 - hitting.prob_hit_ever(params)
    rows = []
    for t in _times(args):
        row = _base(args, params, t)
        row["method"] = args.method
        if args.method == "inversion":
            row.update(_inv_inputs(args))
            est = hitting.tail_inversion(params, t, _inv_cfg(args))
            value, err = est.value, est.err
        elif args.method == "closed-form":
            est = hitting.closed_form_tail(params, t)
            value, err = est.value, est.err
        elif args.method == "asymptotic":
            est = hitting.asymptotic_tail(params, t)
            value, err = est.value, est.err
        else:
            row.update(_mc_inputs(args))
            fn = montecarlo.tail_mc_indicator if args.method == "mc-indicator" else montecarlo.tail_mc_lemma22
            est = fn(params, t, _mc_cfg(args), backend=args.backend, threads=args.threads)
            value, err = est.mean, est.std_error
            row["std_error"] = est.std_error
            row["truncation"] = est.truncation
        row["value"] = value
        row["err"] = err
        row["survival"] = escape + value
        rows.append(row)
    return rows


def _cmd_density(args):
    params = _params(args)
    cfg = _inv_cfg(args)
    rows = []
    for t in _times(args):
        row = _base(args, params, t)
        row.update(_inv_inputs(args))
        row["value"] = hitting.density(params, t, cfg)
        rows.append(row)
    return rows


def _cmd_cdf(args):
    params = _params(args)
    cfg = _inv_cfg(args)
    rows = []
    for t in _times(args):
        row = _base(args, params, t)
        row.update(_inv_inputs(args))
        row["value"], row["err"] = hitting.cdf(params, t, cfg)
        rows.append(row)
    return rows


def _cmd_laplace(args):
    params = _params(args)
    _need(args, "lam")
    row = _base(args, params)
    row["lam"] = args.lam
    row["value"] = hitting.laplace_transform(params, args.lam)
    return [row]


def _cmd_moment(args):
    _need(args, "nu", "a", "p")
    params = process.BesselParams(args.nu, args.a, args.a)
    rows = []
    for t in _times(args):
        ev = process.neg_moment(params, args.p, t)
        row = {"nu": params.nu, "a": params.a, "p": args.p, "t": t,
               "value": ev.value, "err": ev.trunc_bound, "terms": ev.terms_used}
        if t >= 1.0:
            row["lower"], row["upper"] = process.moment_bounds(params, args.p, t)
        rows.append(row)
    return rows


def _cmd_simulate(args):
    params = _params(args)
    cfg = _mc_cfg(args)
    rows = []
    for t in _times(args):
        runs = [("indicator", montecarlo.tail_mc_indicator)]
        if params.nu > 0.0:
            runs.append(("lemma22", montecarlo.tail_mc_lemma22))
        for name, fn in runs:
            est = fn(params, t, cfg, backend=args.backend, threads=args.threads)
            row = _base(args, params, t)
            row["estimator"] = name
            row.update(_mc_inputs(args))
            row.update({"value": est.mean, "std_error": est.std_error,
                        "variance": est.variance, "truncation": est.truncation})
            rows.append(row)
    return rows


def _cmd_asymptote(args):
    params = _params(args)
    rows = []
    for t in _times(args):
        est = hitting.asymptotic_tail(params, t)
        row = _base(args, params, t)
        row["value"] = est.value
        row["err"] = est.err
        if params.nu != 0.0:
            row["constant"] = hitting.asymptotic_constant(params)
        rows.append(row)
    return rows


def _report_rows(args, report, head):
    rows = []
    for r in report.rows:
        row = dict(head)
        row.update(r)
        row.update(report.summary)
        row["passed"] = report.passed
        rows.append(row)
    return rows


def _default_grid(args, grid):
    if getattr(args, "t", None) is None and not getattr(args, "t_grid", None):
        args.t_grid = grid


def _cmd_verify_slope(args):
    _default_grid(args, "100:100000:25-log")
    params = _params(args)
    report = verification.remainder_slope(params, _times(args), _inv_cfg(args))
    head = _base(args, params)
    head.update(_inv_inputs(args))
    return _report_rows(args, report, head)


def _cmd_verify_constant(args):
    _default_grid(args, "100:10000:5-log")
    params = _params(args)
    report = verification.check_constant(params, _times(args), _inv_cfg(args))
    head = _base(args, params)
    head.update(_inv_inputs(args))
    return _report_rows(args, report, head)


def _cmd_verify_moment(args):
    _default_grid(args, "1:1000:4-log")
    _need(args, "nu", "a", "p")
    report = verification.check_moment_sandwich(args.nu, args.a, args.p, _times(args))
    head = {"nu": float(args.nu), "a": float(args.a), "p": float(args.p)}
    return _report_rows(args, report, head)


COMMANDS = {
    "tail": _cmd_tail,
    "density": _cmd_density,
    "cdf": _cmd_cdf,
    "laplace": _cmd_laplace,
    "moment": _cmd_moment,
    "simulate": _cmd_simulate,
    "asymptote": _cmd_asymptote,
    "verify-slope": _cmd_verify_slope,
    "verify-constant": _cmd_verify_constant,
    "verify-moment": _cmd_verify_moment,
}


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v) if not math.isfinite(v) else format(v, ".17g")
    return str(v)


def format_rows(rows, fmt):
    """Render records as CSV text or JSON (a bare object when there is one row)."""
    if fmt == "json":
        def clean(v):
            if isinstance(v, float) and not math.isfinite(v):
                return str(v)
            return v

        data = [{k: clean(v) for k, v in r.items()} for r in rows]
        return json.dumps(data[0] if len(data) == 1 else data, indent=2) + "\n"
    fields = []
    for r in rows:
        for k in r:
            if k not in fields:
                fields.append(k)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: _fmt(v) for k, v in r.items()})
    return buf.getvalue()


def run(argv=None):
    """Parse ``argv``, run the subcommand, write output; return the exit code."""
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        rows = COMMANDS[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_DOMAIN
    except InstabilityError as exc:
        print(f"besselhit: numerical instability: {exc}", file=sys.stderr)
        return EXIT_INSTABILITY
    except (DomainError, ValueError, OverflowError) as exc:
        print(f"besselhit: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    text = format_rows(rows, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
