"""Command-line interface: ``stdecomp {decompose,diagnose,forecast,generate,baseline}``.

Exit status is 0 on success, 1 for usage errors and 2 for data errors.
"""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import io
from .baseline import Mode, classical_decompose
from .core import TimeSeries, Variant, decompose_std, decompose_stdr
from .diagnostics import stationarity_report
from .errors import StdError
from .generators import MackeyGlassConfig, gen_mackey_glass, gen_test_process
from .patterns import holdout_forecast

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunConfig:
    period: int
    variant: Variant = Variant.DIVERSITY
    mode: str = "std"
    horizon: int = 1
    grouping: Optional[str] = None
    format: str = "csv"

    def __post_init__(self):
        if self.period < 2:
            raise UsageError(f"period must be >= 2, got {self.period}")
        if self.horizon < 1:
            raise UsageError(f"horizon must be >= 1, got {self.horizon}")
        if self.mode not in ("std", "stdr"):
            raise UsageError(f"mode must be std or stdr, got {self.mode!r}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.format!r}")


def _positive(minimum):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if v < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {v}")
        return v
    return parse


def _add_input(p, column_help="value column (default: last column)"):
    p.add_argument("--input", "-i", required=True, help="input CSV file")
    p.add_argument("--column", help=column_help)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stdecomp", description="Seasonal-trend-dispersion decomposition toolkit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("decompose", help="STD / STDR decomposition")
    _add_input(p)
    p.add_argument("--period", "-n", type=_positive(2), required=True)
    p.add_argument("--stdr", action="store_true", help="also extract the remainder")
    p.add_argument("--variant", choices=[v.value for v in Variant], default="diversity")
    p.add_argument("--truncate", action="store_true", help="drop an incomplete trailing cycle")
    p.add_argument("--recurse", help="comma list of trend,dispersion to decompose again")
    p.add_argument("--inner-period", type=_positive(2), help="period for --recurse")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", "-o", help="output path (default: stdout)")

    p = sub.add_parser("diagnose", help="stationarity tests and remainder ratio")
    _add_input(p, "remainder column (default: remainder)")
    p.add_argument("--series-column", default="y", help="observed series for the ratio (default: y)")
    p.add_argument("--max-lag", type=_positive(1), help="ACF/PACF depth")
    p.add_argument("--output", "-o")

    p = sub.add_parser("forecast", help="k-NN pattern forecasts of held-out cycles")
    _add_input(p)
    p.add_argument("--period", "-n", type=_positive(2), required=True)
    p.add_argument("--horizon", type=_positive(1), default=1)
    p.add_argument("--k", type=_positive(1), default=3)
    p.add_argument("--holdout", type=_positive(1), default=2)
    p.add_argument("--weighting", choices=["uniform", "inverse-distance"], default="uniform")
    p.add_argument("--labels", help="label column; groups training pairs by target-cycle label")
    p.add_argument("--variant", choices=[v.value for v in Variant], default="diversity")
    p.add_argument("--truncate", action="store_true")
    p.add_argument("--output", "-o")

    p = sub.add_parser("generate", help="write a synthetic or bundled series as CSV")
    p.add_argument("kind", choices=["mackey-glass", "white-noise", "random-walk", "ar1", "airline"])
    p.add_argument("--length", type=_positive(1))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--phi", type=float, default=0.5)
    p.add_argument("--a", type=float, default=0.2)
    p.add_argument("--b", type=float, default=0.1)
    p.add_argument("--delay", type=float, default=17.0)
    p.add_argument("--x0", type=float, default=1.2)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--sample-every", type=float, default=1.0)
    p.add_argument("--discard", type=_positive(0), default=100)
    p.add_argument("--output", "-o")

    p = sub.add_parser("baseline", help="classical moving-average decomposition")
    _add_input(p)
    p.add_argument("--period", "-n", type=_positive(2), required=True)
    p.add_argument("--mode", choices=[m.value for m in Mode], default="additive")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", "-o")
    return parser


def _decompose(series, cfg: RunConfig, truncate):
    fn = decompose_stdr if cfg.mode == "stdr" else decompose_std
    return fn(series, cfg.period, cfg.variant, truncate=truncate)


def cmd_decompose(args):
    cfg = RunConfig(
        period=args.period,
        variant=Variant(args.variant),
        mode="stdr" if args.stdr else "std",
        format=args.format,
    )
    recurse = []
    if args.recurse:
        recurse = [r.strip() for r in args.recurse.split(",") if r.strip()]
        bad = set(recurse) - {"trend", "dispersion"}
        if bad:
            raise UsageError(f"--recurse accepts trend,dispersion; got {sorted(bad)}")
        if args.inner_period is None:
            raise UsageError("--recurse needs --inner-period")
        if cfg.format == "csv" and args.output in (None, "-"):
            raise UsageError("--recurse with CSV output needs --output (one file per component)")
    series = io.read_csv(args.input, args.column)
    comps = _decompose(series, cfg, args.truncate)
    inner = {}
    for which in recurse:
        values = comps.cycle_means if which == "trend" else comps.cycle_dispersions
        inner_cfg = RunConfig(period=args.inner_period, variant=cfg.variant, mode=cfg.mode)
        inner[which] = _decompose(TimeSeries(values, name=which), inner_cfg, args.truncate)
    if cfg.format == "json":
        doc = io.components_to_dict(comps)
        if inner:
            doc["recursed"] = {
                k: io.components_to_dict(v, {"source": k, "inner_period": args.inner_period})
                for k, v in inner.items()
            }
        io.write_json(doc, args.output)
    else:
        io.write_components(comps, "csv", args.output)
        for which, c in inner.items():
            io.write_components(c, "csv", io.default_recurse_path(args.output, which))
    return EXIT_OK


def cmd_diagnose(args):
    column = args.column or "remainder"
    remainder = io.read_csv(args.input, column).values
    series = None
    if args.series_column and args.series_column != "none":
        with open(args.input, newline="") as fh:
            header = [h.strip() for h in next(csv.reader(fh), [])]
        if args.series_column in header:
            series = io.read_csv(args.input, args.series_column).values
    report = stationarity_report(remainder, series, max_lag=args.max_lag)
    doc = {
        "meta": {"input": str(args.input), "column": column, "length": int(remainder.size)},
        "diagnostics": io.diagnostics_to_dict(report),
    }
    io.write_json(doc, args.output)
    return EXIT_OK


def cmd_forecast(args):
    cfg = RunConfig(
        period=args.period,
        variant=Variant(args.variant),
        horizon=args.horizon,
        grouping=args.labels,
        format="json",
    )
    series = io.read_csv(args.input, args.column, args.labels)
    result = holdout_forecast(
        series, cfg.period, cfg.horizon, holdout=args.holdout, k=args.k,
        weighting=args.weighting, group_by="labels" if cfg.grouping else None,
        variant=cfg.variant, truncate=args.truncate,
    )
    doc = {
        "meta": {
            "period": cfg.period,
            "variant": cfg.variant.value,
            "horizon": cfg.horizon,
            "k": args.k,
            "weighting": args.weighting,
            "holdout": args.holdout,
            "grouping": cfg.grouping,
            "warnings": list(result.dataset.warnings),
        },
        "forecast": io.holdout_to_dict(result),
    }
    io.write_json(doc, args.output)
    return EXIT_OK


def cmd_generate(args):
    if args.kind == "airline":
        with io.airline_path() as p, open(p) as src:
            text = src.read()
        if args.output in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(args.output, "w") as fh:
                fh.write(text)
        return EXIT_OK
    if args.kind == "mackey-glass":
        cfg = MackeyGlassConfig(
            a=args.a, b=args.b, delay=args.delay, x0=args.x0,
            integration_step=args.step, sample_every=args.sample_every,
            discard=args.discard, length=args.length or 970,
        )
        values = gen_mackey_glass(cfg).values
        times = (np.arange(values.size) + cfg.discard + 1) * cfg.sample_every
    else:
        kind = args.kind.replace("-", "_")
        values = gen_test_process(kind, args.length or 500, args.seed, args.phi).values
        times = np.arange(1, values.size + 1)
    with io._open_out(args.output) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "value"])
        for t, v in zip(times, values):
            w.writerow([io.format_float(t), io.format_float(v)])
    return EXIT_OK


def cmd_baseline(args):
    series = io.read_csv(args.input, args.column)
    comps = classical_decompose(series, args.period, Mode(args.mode))
    io.write_components(comps, args.format, args.output)
    return EXIT_OK


COMMANDS = {
    "decompose": cmd_decompose,
    "diagnose": cmd_diagnose,
    "forecast": cmd_forecast,
    "generate": cmd_generate,
    "baseline": cmd_baseline,
}


def cli_dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StdError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


def main():
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
