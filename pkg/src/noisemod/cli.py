"""Command line interface.

Subcommands: `simulate` runs Monte Carlo BEP sweeps and writes CSV/JSON,
`check` prints the distinguishability margins for a configuration, and
`derive` prints the composite constants and detector thresholds.

Exit codes: 0 success, 1 configuration error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .analysis import SpreadFormula, build_report
from .detect import ThresholdMode, threshold_bank
from .harness import Fairness, SweepSpec, SweepVariable, emit, run_sweep
from .modem import Scheme
from .params import (
    ChannelConfig,
    ConfigError,
    DEFAULT_CHANNEL,
    DEFAULT_SAMPLES_PER_SYMBOL,
    DEFAULT_SCHEME,
    DegenerateLevelsError,
    derive_constants,
    derive_subchannels,
    load_config,
)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the CLI contract reserves 2 for I/O.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_int_range(text: str) -> list[int]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [int(text)]
        if len(parts) != 3:
            raise ValueError
        a, b, step = (int(p) for p in parts)
    except ValueError:
        raise ConfigError(f"expected INT or A:B:STEP, got {text!r}") from None
    if step <= 0 or b < a:
        raise ConfigError(f"bad range {text!r}: need A <= B and STEP > 0")
    return list(range(a, b + 1, step))


def _parse_float_range(text: str) -> list[float]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(text)]
        if len(parts) != 3:
            raise ValueError
        a, b, step = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"expected FLOAT or A:B:STEP, got {text!r}") from None
    if step <= 0 or b < a:
        raise ConfigError(f"bad range {text!r}: need A <= B and STEP > 0")
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    return [a + i * step for i in range(count)]


def _load(args):
    if args.config is None:
        return DEFAULT_SCHEME, DEFAULT_CHANNEL, DEFAULT_SAMPLES_PER_SYMBOL
    return load_config(args.config)


_SCHEME_CHOICES = {
    "kljn": (Scheme.KLJN,),
    "gqnm": (Scheme.GQNM,),
    "cgqnm": (Scheme.CGQNM,),
    "all": (Scheme.KLJN, Scheme.GQNM, Scheme.CGQNM),
}


def cmd_simulate(args) -> int:
    scheme_config, channel, n_default = _load(args)
    n_values = _parse_int_range(args.n) if args.n is not None else [n_default]
    sw_values = (
        _parse_float_range(args.sigma_w) if args.sigma_w is not None else [channel.sigma_w]
    )
    if len(n_values) > 1 and len(sw_values) > 1:
        raise ConfigError("sweep one variable at a time (--n and --sigma-w are both ranges)")
    if len(sw_values) > 1:
        variable, values = SweepVariable.SIGMA_W, tuple(sw_values)
        n_fixed = n_values[0]
    else:
        variable, values = SweepVariable.SAMPLES_N, tuple(n_values)
        n_fixed = n_values[0]
        channel = ChannelConfig(sw_values[0])
    spec = SweepSpec(
        variable=variable,
        values=values,
        scheme_config=scheme_config,
        channel=channel,
        n=n_fixed,
        schemes=_SCHEME_CHOICES[args.scheme],
        min_bits=args.min_bits,
        seed=args.seed,
        fairness=Fairness(args.fairness),
        threshold_mode=ThresholdMode(args.threshold_mode),
        variance_formula=SpreadFormula(args.variance_formula),
    )
    _preflight_note(spec)
    result = run_sweep(spec, workers=args.workers)
    for failure in result.failures:
        print(
            f"warning: {failure.scheme.value} at {failure.value}: {failure.error}",
            file=sys.stderr,
        )
    if not result.records:
        print("error: every sweep cell failed", file=sys.stderr)
        return 1
    emit(result.records, format=args.format, path=args.out)
    return 0


def _preflight_note(spec: SweepSpec) -> None:
    """Warn (stderr) when the worst-case swept N leaves margins unsatisfied."""
    if spec.variable is SweepVariable.SAMPLES_N:
        n_worst = int(spec.values[0])
    else:
        n_worst = spec.n
    try:
        report = build_report(spec.scheme_config, n_worst, spec.variance_formula)
    except (ConfigError, DegenerateLevelsError):
        return  # the sweep itself will surface this per cell
    if not report.satisfied:
        ratios = [report.mean_ratio, *report.var_ratios]
        finite = [r for r in ratios if not math.isnan(r)]
        worst = min(finite) if finite else math.nan
        print(
            f"note: distinguishability margins unsatisfied at N={n_worst} "
            f"({spec.variance_formula.value} formula): min ratio {worst:.3g}",
            file=sys.stderr,
        )


def cmd_check(args) -> int:
    scheme_config, _, n_default = _load(args)
    n = args.n if args.n is not None else n_default
    report = build_report(
        scheme_config, n,
        SpreadFormula(args.variance_formula),
        margin_factor=args.margin_factor,
    )
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
        return 0
    ok = lambda flag: "satisfied" if flag else "NOT satisfied"  # noqa: E731
    print(f"mean condition (margin factor {report.margin_factor:g}):")
    print(f"  min adjacent gap    {report.mean_lhs:.6g} V")
    print(f"  m_H0 form           {report.mean_lhs_literal:.6g} V")
    print(f"  6*sigma_max         {report.mean_rhs:.6g} V")
    print(f"  ratio               {report.mean_ratio:.4g}  [{ok(report.mean_satisfied)}]")
    print(f"variance condition ({report.formula_mode.value} formula, N={report.n}):")
    for i in range(3):
        print(
            f"  pair {i + 1}: gap {report.var_gaps[i]:.6g}  "
            f"spread {report.var_spreads[i]:.6g}  "
            f"ratio {report.var_ratios[i]:.4g}  [{ok(report.var_ratios[i] >= report.margin_factor)}]"
        )
    print(f"overall: {ok(report.satisfied)}")
    for w in report.warnings:
        print(f"warning: {w}")
    return 0


def cmd_derive(args) -> int:
    scheme_config, channel, _ = _load(args)
    sub0, sub1 = derive_subchannels(scheme_config)
    constants = derive_constants(sub0, sub1)
    banks = {
        scheme.value: threshold_bank(scheme, sub0, sub1, sigma_w=channel.sigma_w)
        for scheme in Scheme
    }
    if args.json:
        payload = {
            "sub0": {"m_L": sub0.m_L, "m_H": sub0.m_H, "var_0": sub0.var_0, "var_1": sub0.var_1},
            "sub1": {"m_L": sub1.m_L, "m_H": sub1.m_H, "var_0": sub1.var_0, "var_1": sub1.var_1},
            "means": list(constants.means),
            "variances": list(constants.variances),
            "mean_thresholds": list(constants.mean_thresholds),
            "var_thresholds": list(constants.var_thresholds),
            "banks": {
                name: {
                    "mean_thresholds": list(bank.mean_thresholds),
                    "var_thresholds": list(bank.var_thresholds),
                }
                for name, bank in banks.items()
            },
        }
        print(json.dumps(payload, indent=2))
        return 0
    print(f"sub0: m_L={sub0.m_L:.6g}  m_H={sub0.m_H:.6g}  var_0={sub0.var_0:.6g}  var_1={sub0.var_1:.6g}")
    print(f"sub1: m_L={sub1.m_L:.6g}  m_H={sub1.m_H:.6g}  var_0={sub1.var_0:.6g}  var_1={sub1.var_1:.6g}")
    print("composite means      " + "  ".join(f"{m:.6g}" for m in constants.means))
    print("composite variances  " + "  ".join(f"{v:.6g}" for v in constants.variances))
    print("mean thresholds      " + "  ".join(f"{t:.6g}" for t in constants.mean_thresholds))
    print("var thresholds       " + "  ".join(f"{t:.6g}" for t in constants.var_thresholds))
    for name in ("gqnm", "kljn"):
        bank = banks[name]
        mean_part = (
            "  ".join(f"{t:.6g}" for t in bank.mean_thresholds) if bank.mean_thresholds else "-"
        )
        var_part = "  ".join(f"{t:.6g}" for t in bank.var_thresholds)
        print(f"{name} thresholds: mean {mean_part}  var {var_part}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="noisemod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte Carlo BEP sweep")
    sim.add_argument("--scheme", choices=sorted(_SCHEME_CHOICES), default="all")
    sim.add_argument("--config", help="JSON config file (defaults built in)")
    sim.add_argument("--n", help="samples per bit/symbol: INT or A:B:STEP")
    sim.add_argument("--sigma-w", dest="sigma_w", help="channel noise sd: FLOAT or A:B:STEP")
    sim.add_argument("--min-bits", dest="min_bits", type=int, default=100_000)
    sim.add_argument("--seed", type=int, default=1)
    sim.add_argument("--fairness", choices=[f.value for f in Fairness], default="per-bit")
    sim.add_argument(
        "--threshold-mode", dest="threshold_mode",
        choices=[m.value for m in ThresholdMode], default="noise-adjusted",
    )
    sim.add_argument(
        "--variance-formula", dest="variance_formula",
        choices=[f.value for f in SpreadFormula], default="corrected",
        help="spread formula for the pre-flight margin note",
    )
    sim.add_argument("--out", default="-", help="output path, '-' for stdout")
    sim.add_argument("--format", choices=["csv", "json"], default="csv")
    sim.add_argument("--workers", type=int, default=1)
    sim.set_defaults(func=cmd_simulate)

    chk = sub.add_parser("check", help="report distinguishability margins")
    chk.add_argument("--config")
    chk.add_argument("--n", type=int)
    chk.add_argument(
        "--variance-formula", dest="variance_formula",
        choices=[f.value for f in SpreadFormula], default="corrected",
    )
    chk.add_argument("--margin-factor", dest="margin_factor", type=float, default=1.0)
    chk.add_argument("--json", action="store_true")
    chk.set_defaults(func=cmd_check)

    der = sub.add_parser("derive", help="print derived constants and thresholds")
    der.add_argument("--config")
    der.add_argument("--json", action="store_true")
    der.set_defaults(func=cmd_derive)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (ConfigError, DegenerateLevelsError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
