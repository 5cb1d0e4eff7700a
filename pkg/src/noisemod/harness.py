"""Monte Carlo bit-error-probability engine, sweeps, and result emission.

A sweep is a grid of cells (scheme x swept value).  Every cell owns an
independent noise stream derived from the master seed and a stable hash
of its coordinates, so results are byte-identical however many workers
run the grid.
"""

from __future__ import annotations

import hashlib
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._kernels import compute_moments
from .analysis import SpreadFormula
from .detect import ThresholdMode, threshold_bank
from .modem import NoiseSource, Scheme
from .params import ChannelConfig, Mode, SchemeConfig, derive_subchannels

# Per-chunk sample cap; bounds the numpy fallback's array size (~32 MB
# of float64) and the per-chunk detection arrays.
CHUNK_SAMPLE_BUDGET = 4_000_000

WILSON_Z = 1.96  # two-sided 95%


class SweepVariable(Enum):
    SAMPLES_N = "n"
    SIGMA_W = "sigma_w"


class Fairness(Enum):
    """How the per-symbol sample count is derived from the swept/fixed N.

    PER_BIT treats N as samples per bit, so a symbol gets N * bits-per-
    symbol samples (all schemes share the sampling rate); PER_SYMBOL uses
    N samples per symbol regardless of scheme.
    """

    PER_BIT = "per-bit"
    PER_SYMBOL = "per-symbol"


@dataclass(frozen=True)
class BepEstimate:
    """Bit-error estimate for one point, with a Wilson 95% interval."""

    errors: int
    bits: int
    bep: float
    ci_low: float
    ci_high: float


def wilson_interval(errors: int, bits: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (sane at 0 errors)."""
    if bits <= 0:
        raise ValueError("bits must be positive")
    p = errors / bits
    z2 = z * z
    denom = 1.0 + z2 / bits
    center = (p + z2 / (2.0 * bits)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / bits + z2 / (4.0 * bits * bits))
    # the interval always contains p analytically; rounding can break that
    # at the 0/1 boundary, so widen to p before clamping
    return max(0.0, min(center - half, p)), min(1.0, max(center + half, p))


def _state_tables(scheme, sub0, sub1):
    """Level lookup tables (means, standard deviations) indexed by bit value."""
    if scheme is Scheme.CGQNM:
        means = np.array([
            sub0.m_L + sub1.m_L,
            sub0.m_H + sub1.m_L,
            sub0.m_L + sub1.m_H,
            sub0.m_H + sub1.m_H,
        ])
        variances = np.array([
            sub0.var_0 + sub1.var_0,
            sub0.var_1 + sub1.var_0,
            sub0.var_0 + sub1.var_1,
            sub0.var_1 + sub1.var_1,
        ])
    elif scheme is Scheme.GQNM:
        means = np.array([sub0.m_L, sub0.m_H])
        variances = np.array([sub0.var_0, sub0.var_1])
    else:
        means = np.zeros(2)
        variances = np.array([sub0.var_0, sub0.var_1])
    return means, np.sqrt(variances)


def _symbol_states(scheme, bits, mean_table, sigma_table):
    if scheme is Scheme.CGQNM:
        return (
            mean_table[bits[:, 0] + 2 * bits[:, 2]],
            sigma_table[bits[:, 1] + 2 * bits[:, 3]],
        )
    if scheme is Scheme.GQNM:
        return mean_table[bits[:, 0]], sigma_table[bits[:, 1]]
    return mean_table[bits[:, 0]], sigma_table[bits[:, 0]]


def _detect_bits(scheme, mean_hat, var_hat, mean_th, var_th):
    """Vectorized threshold detection; ties resolve to the upper region."""
    out = np.empty((mean_hat.size, scheme.bits_per_symbol), dtype=np.int8)
    vidx = np.searchsorted(var_th, var_hat, side="right")
    if scheme is Scheme.CGQNM:
        midx = np.searchsorted(mean_th, mean_hat, side="right")
        out[:, 0] = midx & 1
        out[:, 1] = vidx & 1
        out[:, 2] = midx >> 1
        out[:, 3] = vidx >> 1
    elif scheme is Scheme.GQNM:
        out[:, 0] = np.searchsorted(mean_th, mean_hat, side="right")
        out[:, 1] = vidx
    else:
        out[:, 0] = vidx
    return out


def run_point(
    scheme: Scheme,
    config: SchemeConfig,
    channel: ChannelConfig,
    n: int,
    min_bits: int,
    rng: NoiseSource,
    *,
    threshold_mode: ThresholdMode = ThresholdMode.NOISE_ADJUSTED,
) -> BepEstimate:
    """Estimate the BEP of one scheme at one operating point.

    Uniform random bits select symbol states, each symbol is a block of n
    Gaussian samples pushed through the channel and detected, and errors
    accumulate over all bit positions until at least min_bits bits are
    counted.  The stream is consumed in fixed chunk order (bits first,
    then the per-sample noise draws), so a given NoiseSource key fully
    determines the estimate.
    """
    if min_bits < 1:
        raise ValueError("min_bits must be >= 1")
    if n < 2:
        raise ValueError("n >= 2 required")
    sub0, sub1 = derive_subchannels(config)
    bank = threshold_bank(scheme, sub0, sub1, mode=threshold_mode, sigma_w=channel.sigma_w)
    mean_table, sigma_table = _state_tables(scheme, sub0, sub1)
    mean_th = np.asarray(bank.mean_thresholds)
    var_th = np.asarray(bank.effective_var_thresholds)
    bps = scheme.bits_per_symbol
    total_symbols = -(-min_bits // bps)
    chunk_cap = max(1, CHUNK_SAMPLE_BUDGET // n)
    gen = rng.generator
    sigma_w = channel.sigma_w
    errors = 0
    done = 0
    while done < total_symbols:
        n_sym = min(chunk_cap, total_symbols - done)
        bits = gen.integers(0, 2, size=(n_sym, bps), dtype=np.int8)
        m_sym, s_sym = _symbol_states(scheme, bits, mean_table, sigma_table)
        mean_dev, var_hat = compute_moments(gen, s_sym, n, sigma_w)
        detected = _detect_bits(scheme, m_sym + mean_dev, var_hat, mean_th, var_th)
        errors += int(np.count_nonzero(detected != bits))
        done += n_sym
    bits_counted = total_symbols * bps
    low, high = wilson_interval(errors, bits_counted)
    return BepEstimate(errors, bits_counted, errors / bits_counted, low, high)


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: which variable moves, over which values, and how."""

    variable: SweepVariable
    values: tuple
    scheme_config: SchemeConfig
    channel: ChannelConfig
    n: int
    schemes: tuple[Scheme, ...] = (Scheme.KLJN, Scheme.GQNM, Scheme.CGQNM)
    min_bits: int = 100_000
    seed: int = 1
    fairness: Fairness = Fairness.PER_BIT
    threshold_mode: ThresholdMode = ThresholdMode.NOISE_ADJUSTED
    variance_formula: SpreadFormula = SpreadFormula.CHI_SQUARE

    def __post_init__(self):
        if not self.values:
            raise ValueError("sweep values must be non-empty")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError(f"sweep values must be strictly ascending: {self.values!r}")
        if self.min_bits < 1000:
            raise ValueError(f"min_bits >= 1000 required, got {self.min_bits}")
        if not self.schemes:
            raise ValueError("at least one scheme required")
        if self.n < 2:
            raise ValueError("n >= 2 required")


@dataclass(frozen=True)
class RunRecord:
    """One sweep cell's outcome plus enough metadata to reproduce it."""

    scheme: Scheme
    variable: SweepVariable
    value: float | int
    n: int
    sigma_w: float
    estimate: BepEstimate
    seed: int
    fingerprint: str
    wall_s: float


@dataclass(frozen=True)
class CellFailure:
    scheme: Scheme
    value: float | int
    error: str


@dataclass(frozen=True)
class SweepResult:
    records: tuple[RunRecord, ...]
    failures: tuple[CellFailure, ...]


def stable_stream_id(*parts) -> int:
    """64-bit stream id from a stable hash of the given parts."""
    digest = hashlib.sha256("\x1f".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _config_payload(config: SchemeConfig) -> dict:
    payload = {"mode": config.mode.value}
    if config.mode is Mode.DERIVED:
        payload.update(
            m_L0=config.m_L0, alpha=config.alpha, beta=config.beta,
            var_00=config.var_00, eta=config.eta, gamma=config.gamma,
        )
    else:
        for name, sub in (("sub0", config.explicit_sub0), ("sub1", config.explicit_sub1)):
            payload[name] = [sub.m_L, sub.m_H, sub.var_0, sub.var_1]
    return payload


def _fingerprint(spec: SweepSpec, scheme: Scheme, index: int, n_symbol: int,
                 sigma_w: float, stream_id: int) -> str:
    payload = {
        "scheme": scheme.value,
        "variable": spec.variable.value,
        "index": index,
        "value": float(spec.values[index]),
        "n_symbol": n_symbol,
        "sigma_w": sigma_w,
        "min_bits": spec.min_bits,
        "seed": spec.seed,
        "stream_id": stream_id,
        "fairness": spec.fairness.value,
        "threshold_mode": spec.threshold_mode.value,
        "config": _config_payload(spec.scheme_config),
    }
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _run_cell(spec: SweepSpec, scheme: Scheme, index: int) -> RunRecord:
    value = spec.values[index]
    n_point = int(value) if spec.variable is SweepVariable.SAMPLES_N else spec.n
    sigma_w = float(value) if spec.variable is SweepVariable.SIGMA_W else spec.channel.sigma_w
    scale = scheme.bits_per_symbol if spec.fairness is Fairness.PER_BIT else 1
    n_symbol = n_point * scale
    stream_id = stable_stream_id(scheme.value, index)
    rng = NoiseSource(spec.seed, stream_id)
    t0 = time.perf_counter()
    est = run_point(
        scheme, spec.scheme_config, ChannelConfig(sigma_w), n_symbol, spec.min_bits, rng,
        threshold_mode=spec.threshold_mode,
    )
    wall = time.perf_counter() - t0
    return RunRecord(
        scheme=scheme,
        variable=spec.variable,
        value=value,
        n=n_point,
        sigma_w=sigma_w,
        estimate=est,
        seed=spec.seed,
        fingerprint=_fingerprint(spec, scheme, index, n_symbol, sigma_w, stream_id),
        wall_s=wall,
    )


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Run every (scheme x value) cell of a sweep.

    Cell failures are collected, not raised, and the remaining cells still
    run.  Records come back in grid order regardless of worker count, and
    their contents are independent of it.
    """
    cells = [(scheme, i) for scheme in spec.schemes for i in range(len(spec.values))]
    records: dict[tuple, RunRecord] = {}
    failures: list[CellFailure] = []
    if workers <= 1:
        for scheme, i in cells:
            try:
                records[(scheme, i)] = _run_cell(spec, scheme, i)
            except Exception as e:  # noqa: BLE001 - cell isolation by contract
                failures.append(CellFailure(scheme, spec.values[i], str(e)))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {(scheme, i): pool.submit(_run_cell, spec, scheme, i)
                       for scheme, i in cells}
            for scheme, i in cells:
                try:
                    records[(scheme, i)] = futures[(scheme, i)].result()
                except Exception as e:  # noqa: BLE001
                    failures.append(CellFailure(scheme, spec.values[i], str(e)))
    ordered = tuple(records[key] for key in cells if key in records)
    return SweepResult(records=ordered, failures=tuple(failures))


CSV_COLUMNS = (
    "scheme", "variable", "value", "N", "sigma_w", "bits", "errors",
    "bep", "ci_low", "ci_high", "seed", "fingerprint",
)


def _fmt(value) -> str:
    # 17 significant digits round-trips every float64 exactly.
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _record_cells(r: RunRecord) -> dict:
    return {
        "scheme": r.scheme.value,
        "variable": r.variable.value,
        "value": r.value,
        "N": r.n,
        "sigma_w": r.sigma_w,
        "bits": r.estimate.bits,
        "errors": r.estimate.errors,
        "bep": r.estimate.bep,
        "ci_low": r.estimate.ci_low,
        "ci_high": r.estimate.ci_high,
        "seed": r.seed,
        "fingerprint": r.fingerprint,
    }


def emit(records, format: str = "csv", path: str = "-") -> None:
    """Write run records as CSV or JSON; path '-' writes to stdout."""
    records = list(records)
    if not records:
        raise ValueError("no records to emit")
    if format not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {format!r}")
    if format == "csv":
        lines = [",".join(CSV_COLUMNS)]
        for r in records:
            cells = _record_cells(r)
            lines.append(",".join(_fmt(cells[c]) for c in CSV_COLUMNS))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps([_record_cells(r) for r in records], indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise OSError(f"cannot write {path}: {e}") from e
