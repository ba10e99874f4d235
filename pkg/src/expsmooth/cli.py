"""Command-line interface: ``expsmooth {smooth,calibrate,simulate,stress}``.

Exit status: 0 on success, 2 on usage errors, 1 on data errors.
"""
from __future__ import annotations

import argparse
import contextlib
import os
import sys

from . import analysis, calibration
from .core import Method, Observation, smooth_stream
from .errors import InvalidArgumentError, OutOfOrderError, SmoothingError
from .streamio import OutputRecord, ParseError, emit_records, parse_stream, write_report

FORMATS = ("csv", "jsonl")
EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _add_timescale(p):
    g = p.add_argument_group("time scale (give exactly one)")
    g.add_argument("--tau", type=float, help="decay time scale, in timestamp units")
    g.add_argument("--half-life", type=float, help="time for a weight to halve")
    g.add_argument("--window", type=float, help="effective window length (exact with --gap, else tau = window/2)")
    g.add_argument("--n", type=float, help="effective number of averaged samples (needs --gap)")
    g.add_argument("--alpha", type=float, help="decay factor per --gap")


def _add_format(p):
    p.add_argument("--format", choices=FORMATS, default=None, help="default: $EXPSMOOTH_FORMAT or csv")
    p.add_argument("--output", default="-", help="output path, or - for stdout")


def build_parser():
    parser = argparse.ArgumentParser(prog="expsmooth", description="Exponential smoothing of irregular time series.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("smooth", help="smooth a t,x series")
    _add_timescale(p)
    p.add_argument("--gap", type=float, help="reference sampling interval for --window/--n/--alpha")
    p.add_argument("--method", choices=[m.value for m in Method], default="v1")
    p.add_argument("--input", default="-", help="input path, or - for stdin")
    p.add_argument("--include-weight", action="store_true")
    _add_format(p)

    p = sub.add_parser("calibrate", help="print equivalent parameterizations")
    _add_timescale(p)
    p.add_argument("--gap", type=float, required=True, help="reference sampling interval")
    _add_format(p)

    p = sub.add_parser("simulate", help="Monte-Carlo moments at a constant rate")
    _add_timescale(p)
    p.add_argument("--gap", type=float, default=1.0, help="constant sampling interval (default 1)")
    p.add_argument("--method", choices=[m.value for m in Method], default="v1")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--seed", type=int, required=True)
    _add_format(p)

    p = sub.add_parser(
        "stress",
        help="numerical error of all methods",
        description="Without --gap-law: constant decay --alpha per step against a double-double "
        "reference. With --gap-law: random gaps, time scale from the usual options.",
    )
    _add_timescale(p)
    p.add_argument("--gap", type=float, help="reference interval for --window/--n/--alpha with --gap-law")
    p.add_argument("--gap-law", choices=analysis.GAP_LAWS)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _add_format(p)
    return parser


def _format(args):
    if args.format:
        return args.format
    env = os.environ.get("EXPSMOOTH_FORMAT")
    if env is None or env == "":
        return "csv"
    if env not in FORMATS:
        raise UsageError(f"EXPSMOOTH_FORMAT must be one of {FORMATS}, got {env!r}")
    return env


def _resolve_tau(args, gap):
    try:
        return calibration.resolve_tau(
            tau=args.tau, half_life=args.half_life, window=args.window, gap=gap, n=args.n, alpha=args.alpha
        )
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from None


def _positive_tau(tau):
    if not tau > 0:
        raise UsageError("the time-scale specification resolves to tau = 0; smoothing needs tau > 0")
    return tau


@contextlib.contextmanager
def _open_out(path):
    if path == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


@contextlib.contextmanager
def _open_in(path):
    if path == "-":
        yield sys.stdin
    else:
        with open(path, encoding="utf-8", newline="") as fh:
            yield fh


def run_smooth(args):
    fmt = _format(args)
    tau, _ = _resolve_tau(args, args.gap)
    tau = _positive_tau(tau)
    method = Method(args.method)
    if method is Method.V2:
        print(
            "expsmooth: note: v2 is exact only at a constant sampling interval; "
            "use v2c or v1 for irregular timestamps",
            file=sys.stderr,
        )
    current = {"line": 0}

    def observations(records):
        for rec in records:
            current["line"] = rec.line
            yield Observation(rec.t, rec.x)

    try:
        with _open_in(args.input) as src, _open_out(args.output) as out:
            pairs = smooth_stream(observations(parse_stream(src, fmt)), tau, method)
            outputs = (OutputRecord(obs.t, val.x_hat, val.weight) for obs, val in pairs)
            emit_records(outputs, out, fmt, include_weight=args.include_weight)
    except OutOfOrderError as exc:
        if exc.strict:
            contract = f"{method.value} requires strictly increasing timestamps"
            hint = "; use --method v1 for duplicate timestamps" if exc.t == exc.last_t else ""
        else:
            contract = "v1 requires non-decreasing timestamps"
            hint = ""
        print(
            f"expsmooth: line {current['line']}: timestamp {exc.t!r} after {exc.last_t!r}: {contract}{hint}",
            file=sys.stderr,
        )
        return EXIT_DATA
    except OSError as exc:
        print(f"expsmooth: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def run_calibrate(args):
    fmt = _format(args)
    tau, alpha = _resolve_tau(args, args.gap)
    try:
        report = calibration.CalibrationReport.from_alpha(alpha, args.gap, tau=tau)
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from None
    with _open_out(args.output) as out:
        write_report(report, out, fmt)
    return EXIT_OK


def run_simulate(args):
    fmt = _format(args)
    tau, _ = _resolve_tau(args, args.gap)
    try:
        config = analysis.SimulationConfig(
            steps=args.steps,
            tau=_positive_tau(tau),
            seed=args.seed,
            burn_in=args.burn_in,
            mu=args.mu,
            sigma=args.sigma,
            gap=args.gap,
            method=args.method,
        )
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from None
    report = analysis.simulate_constant_rate(config)
    with _open_out(args.output) as out:
        write_report(report, out, fmt)
    return EXIT_OK


def run_stress(args):
    fmt = _format(args)
    try:
        if args.gap_law is None:
            if args.alpha is None or any(v is not None for v in (args.tau, args.half_life, args.window, args.n)):
                raise UsageError("without --gap-law, stress takes --alpha only")
            report = analysis.stress_extreme_alpha(args.alpha, args.steps, args.seed)
        else:
            tau, _ = _resolve_tau(args, args.gap)
            report = analysis.variable_rate_divergence(args.gap_law, args.steps, _positive_tau(tau), args.seed)
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from None
    with _open_out(args.output) as out:
        write_report(report, out, fmt)
    return EXIT_OK


COMMANDS = {
    "smooth": run_smooth,
    "calibrate": run_calibrate,
    "simulate": run_simulate,
    "stress": run_stress,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"expsmooth {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, SmoothingError) as exc:
        print(f"expsmooth: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
