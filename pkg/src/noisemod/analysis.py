"""Distinguishability margins of the composite level sets.

Adjacent mean levels must sit far apart relative to the widest component
spread, and adjacent variance levels far apart relative to the spread of
the block variance estimator, for midpoint detection to work.  These
checks quantify both margins so a configuration can be vetted before it
is simulated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .params import DerivedConstants, SchemeConfig, derive_constants, derive_subchannels


class SpreadFormula(Enum):
    """Formula for the variance of the block variance estimator.

    CHI_SQUARE is the exact result for the 1/N-divisor estimator,
    2*sigma^4*(N-1)/N^2 (N times the estimate over sigma^2 is chi-square
    with N-1 degrees of freedom).  FOURTH_MOMENT evaluates the alternative
    gamma-ratio expression sigma^2 * E{e^4} / N^4 - sigma^4 verbatim; it
    mixes units and can go negative, and is reported as-is.
    """

    FOURTH_MOMENT = "paper"
    CHI_SQUARE = "corrected"


def chi_square_moment(k: float, m: int) -> float:
    """Raw moment E{X^m} of X ~ chi-square with k degrees of freedom.

    Computed as the rising product prod_{j<m}(k + 2j), which stays finite
    where a quotient of two gamma evaluations would overflow.
    """
    if not k > 0:
        raise ValueError(f"degrees of freedom must be positive, got {k!r}")
    if m != int(m) or m < 0:
        raise ValueError(f"moment order must be a non-negative integer, got {m!r}")
    out = 1.0
    for j in range(int(m)):
        out *= k + 2.0 * j
    return out


def sample_variance_spread(
    sigma2: float, n: int, formula: SpreadFormula = SpreadFormula.CHI_SQUARE
) -> float:
    """Variance of the 1/N-divisor sample variance of an n-sample block.

    FOURTH_MOMENT may return a negative value; it is never clamped.
    """
    if n < 2:
        raise ValueError(f"n >= 2 required, got {n}")
    if not sigma2 > 0.0:
        raise ValueError(f"sigma2 must be positive, got {sigma2!r}")
    if formula is SpreadFormula.CHI_SQUARE:
        return 2.0 * sigma2 * sigma2 * (n - 1) / (n * n)
    # gamma((n-1)/2 + 4) / gamma((n-1)/2) == chi_square_moment(n-1, 4) / 16
    m4 = chi_square_moment(float(n - 1), 4)
    return sigma2 * m4 / float(n) ** 4 - sigma2 * sigma2


def _ratio(lhs: float, rhs: float) -> float:
    if math.isnan(rhs):
        return math.nan
    if rhs > 0.0:
        return lhs / rhs
    return math.inf if lhs > 0.0 else 0.0


@dataclass(frozen=True)
class MeanConditionResult:
    """Margin of the mean-level detector.

    lhs_gap is the smallest adjacent mean gap; lhs_literal the coarser
    m_H0 form of the same quantity; rhs is six standard deviations of the
    largest composite variance.
    """

    lhs_gap: float
    lhs_literal: float
    rhs: float
    ratio: float
    ratio_literal: float
    satisfied: bool
    margin_factor: float


def check_mean_condition(
    constants: DerivedConstants,
    config: SchemeConfig,
    margin_factor: float = 1.0,
) -> MeanConditionResult:
    """Check that adjacent mean levels separate beyond the component spread."""
    gaps = [b - a for a, b in zip(constants.means, constants.means[1:])]
    lhs = min(gaps)
    rhs = 6.0 * math.sqrt(constants.variances[-1])
    ratio = _ratio(lhs, rhs)
    literal = derive_subchannels(config)[0].m_H
    return MeanConditionResult(
        lhs_gap=lhs,
        lhs_literal=literal,
        rhs=rhs,
        ratio=ratio,
        ratio_literal=_ratio(literal, rhs),
        satisfied=bool(ratio >= margin_factor),
        margin_factor=margin_factor,
    )


@dataclass(frozen=True)
class VariancePairCheck:
    """Margin of one adjacent variance-level pair at block length n."""

    level_low: float
    level_high: float
    gap: float
    spread: float  # 3*(sd of estimator at low level) + 3*(sd at high level)
    ratio: float
    satisfied: bool


def check_variance_condition(
    constants: DerivedConstants,
    n: int,
    formula: SpreadFormula = SpreadFormula.CHI_SQUARE,
    margin_factor: float = 1.0,
) -> list[VariancePairCheck]:
    """Check every adjacent variance pair, not only the closest one.

    Under the canonical scaling the top pair's gap equals the bottom
    pair's while its estimator spread is larger, so the top pair is the
    binding one; all three are therefore reported.
    """
    sds = []
    for v in constants.variances:
        est_var = sample_variance_spread(v, n, formula)
        sds.append(math.sqrt(est_var) if est_var >= 0.0 else math.nan)
    out = []
    for f in range(3):
        gap = constants.variances[f + 1] - constants.variances[f]
        spread = 3.0 * sds[f] + 3.0 * sds[f + 1]
        ratio = _ratio(gap, spread)
        out.append(
            VariancePairCheck(
                level_low=constants.variances[f],
                level_high=constants.variances[f + 1],
                gap=gap,
                spread=spread,
                ratio=ratio,
                satisfied=bool(ratio >= margin_factor),
            )
        )
    return out


@dataclass(frozen=True)
class DistinguishabilityReport:
    """Combined mean- and variance-domain margins for one configuration."""

    mean_lhs: float
    mean_lhs_literal: float
    mean_rhs: float
    mean_ratio: float
    mean_satisfied: bool
    var_gaps: tuple[float, float, float]
    var_spreads: tuple[float, float, float]
    var_ratios: tuple[float, float, float]
    var_satisfied: bool
    formula_mode: SpreadFormula
    n: int
    margin_factor: float
    warnings: tuple[str, ...]

    @property
    def satisfied(self) -> bool:
        return self.mean_satisfied and self.var_satisfied

    def to_dict(self) -> dict:
        return {
            "mean_lhs": self.mean_lhs,
            "mean_lhs_literal": self.mean_lhs_literal,
            "mean_rhs": self.mean_rhs,
            "mean_ratio": self.mean_ratio,
            "mean_satisfied": self.mean_satisfied,
            "var_gaps": list(self.var_gaps),
            "var_spreads": list(self.var_spreads),
            "var_ratios": list(self.var_ratios),
            "var_satisfied": self.var_satisfied,
            "satisfied": self.satisfied,
            "formula_mode": self.formula_mode.value,
            "n": self.n,
            "margin_factor": self.margin_factor,
            "warnings": list(self.warnings),
        }


def build_report(
    config: SchemeConfig,
    n: int,
    formula: SpreadFormula = SpreadFormula.CHI_SQUARE,
    margin_factor: float = 1.0,
) -> DistinguishabilityReport:
    """Evaluate both distinguishability conditions for one configuration."""
    sub0, sub1 = derive_subchannels(config)
    constants = derive_constants(sub0, sub1)
    mean_res = check_mean_condition(constants, config, margin_factor)
    pairs = check_variance_condition(constants, n, formula, margin_factor)
    warnings = []
    if formula is SpreadFormula.FOURTH_MOMENT:
        warnings.append(
            "fourth-moment spread formula mixes units and can go negative; "
            "values reported verbatim"
        )
    for i, p in enumerate(pairs):
        if math.isnan(p.spread):
            warnings.append(f"estimator spread undefined for variance pair {i + 1} "
                            "(negative variance-of-estimator value)")
    return DistinguishabilityReport(
        mean_lhs=mean_res.lhs_gap,
        mean_lhs_literal=mean_res.lhs_literal,
        mean_rhs=mean_res.rhs,
        mean_ratio=mean_res.ratio,
        mean_satisfied=mean_res.satisfied,
        var_gaps=tuple(p.gap for p in pairs),
        var_spreads=tuple(p.spread for p in pairs),
        var_ratios=tuple(p.ratio for p in pairs),
        var_satisfied=all(p.satisfied for p in pairs),
        formula_mode=formula,
        n=n,
        margin_factor=margin_factor,
        warnings=tuple(warnings),
    )
