"""Noise-modulation link simulation.

Three schemes share one pipeline: bits pick a Gaussian (mean, variance)
state, a symbol is a block of samples from that state plus channel noise,
and midpoint threshold detectors on the block's sample mean/variance
recover the bits.  KLJN carries 1 bit on the variance, GQNM 2 bits on
(mean, variance), and the composite scheme sums two GQNM outputs for
4 bits over 4x4 levels.
"""

from ._kernels import BACKEND
from .analysis import (
    DistinguishabilityReport,
    MeanConditionResult,
    SpreadFormula,
    VariancePairCheck,
    build_report,
    check_mean_condition,
    check_variance_condition,
    chi_square_moment,
    sample_variance_spread,
)
from .detect import (
    BlockEstimates,
    ThresholdBank,
    ThresholdMode,
    detect_mean_bits,
    detect_symbol,
    detect_var_bits,
    estimate,
    threshold_bank,
)
from .harness import (
    BepEstimate,
    Fairness,
    RunRecord,
    SweepResult,
    SweepSpec,
    SweepVariable,
    emit,
    run_point,
    run_sweep,
    stable_stream_id,
    wilson_interval,
)
from .modem import NoiseSource, SampleBlock, Scheme, SymbolBits, awgn, modulate, select_state
from .params import (
    ChannelConfig,
    ConfigError,
    DEFAULT_CHANNEL,
    DEFAULT_SAMPLES_PER_SYMBOL,
    DEFAULT_SCHEME,
    DegenerateLevelsError,
    DerivedConstants,
    Mode,
    SchemeConfig,
    SubchannelParams,
    derive_constants,
    derive_subchannels,
    load_config,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BepEstimate",
    "BlockEstimates",
    "ChannelConfig",
    "ConfigError",
    "DEFAULT_CHANNEL",
    "DEFAULT_SAMPLES_PER_SYMBOL",
    "DEFAULT_SCHEME",
    "DegenerateLevelsError",
    "DerivedConstants",
    "DistinguishabilityReport",
    "Fairness",
    "MeanConditionResult",
    "Mode",
    "NoiseSource",
    "RunRecord",
    "SampleBlock",
    "Scheme",
    "SchemeConfig",
    "SpreadFormula",
    "SubchannelParams",
    "SweepResult",
    "SweepSpec",
    "SweepVariable",
    "SymbolBits",
    "ThresholdBank",
    "ThresholdMode",
    "VariancePairCheck",
    "awgn",
    "build_report",
    "check_mean_condition",
    "check_variance_condition",
    "chi_square_moment",
    "derive_constants",
    "derive_subchannels",
    "detect_mean_bits",
    "detect_symbol",
    "detect_var_bits",
    "emit",
    "estimate",
    "load_config",
    "modulate",
    "run_point",
    "run_sweep",
    "sample_variance_spread",
    "select_state",
    "stable_stream_id",
    "threshold_bank",
    "wilson_interval",
]
