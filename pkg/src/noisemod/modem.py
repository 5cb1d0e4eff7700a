"""Noise modulators and the additive white Gaussian channel.

Information bits select the mean and variance of a Gaussian state; a
symbol is a block of independent samples drawn from that state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .params import SubchannelParams


class Scheme(Enum):
    KLJN = "kljn"
    GQNM = "gqnm"
    CGQNM = "cgqnm"

    @property
    def bits_per_symbol(self) -> int:
        return {Scheme.KLJN: 1, Scheme.GQNM: 2, Scheme.CGQNM: 4}[self]


@dataclass(frozen=True)
class SymbolBits:
    """One symbol's information bits.

    Layouts: KLJN (b1,) — variance bit only; GQNM (b0, b1) — mean bit,
    variance bit; CGQNM (b00, b10, b01, b11) — subchannel-0 mean and
    variance bits followed by the subchannel-1 pair.
    """

    scheme: Scheme
    bits: tuple[int, ...]

    def __post_init__(self):
        want = self.scheme.bits_per_symbol
        if len(self.bits) != want:
            raise ValueError(f"{self.scheme.value} needs {want} bits, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"bits must be 0 or 1, got {self.bits!r}")


@dataclass(frozen=True, eq=False)
class SampleBlock:
    """One symbol duration of baseband samples plus its generating state."""

    samples: np.ndarray
    true_mean: float
    true_var: float

    def __post_init__(self):
        if self.samples.size < 2:
            raise ValueError("a sample block needs at least 2 samples")
        if self.true_var < 0.0:
            raise ValueError(f"true_var must be >= 0, got {self.true_var!r}")

    def __len__(self) -> int:
        return self.samples.size


@dataclass
class NoiseSource:
    """Reproducible Gaussian stream keyed by (seed, stream_id).

    Two sources built with the same key produce identical streams, and
    distinct stream ids give statistically independent streams.  A source
    owns its generator state; never share one across concurrent tasks.
    """

    seed: int
    stream_id: int = 0
    _gen: np.random.Generator | None = field(default=None, repr=False, compare=False)

    @property
    def generator(self) -> np.random.Generator:
        if self._gen is None:
            ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
            self._gen = np.random.Generator(np.random.SFC64(ss))
        return self._gen


def select_state(
    bits: SymbolBits,
    sub0: SubchannelParams,
    sub1: SubchannelParams | None = None,
) -> tuple[float, float]:
    """Map a symbol's bits to the (mean, variance) of its Gaussian state.

    Composite symbols sum the two subchannel contributions; GQNM uses
    subchannel 0 alone; KLJN is zero-mean with the variance bit choosing
    between subchannel 0's two variances.
    """
    if bits.scheme is Scheme.CGQNM:
        if sub1 is None:
            raise ValueError("composite scheme needs both subchannels")
        b00, b10, b01, b11 = bits.bits
        mean = (sub0.m_H if b00 else sub0.m_L) + (sub1.m_H if b01 else sub1.m_L)
        var = (sub0.var_1 if b10 else sub0.var_0) + (sub1.var_1 if b11 else sub1.var_0)
        return mean, var
    if bits.scheme is Scheme.GQNM:
        b0, b1 = bits.bits
        return (sub0.m_H if b0 else sub0.m_L), (sub0.var_1 if b1 else sub0.var_0)
    (b1,) = bits.bits
    return 0.0, (sub0.var_1 if b1 else sub0.var_0)


def modulate(
    bits: SymbolBits,
    state: tuple[float, float],
    n: int,
    rng: NoiseSource,
) -> SampleBlock:
    """Draw one symbol block: n independent Normal(mean, variance) samples."""
    del bits  # state already encodes the symbol; kept for call-site symmetry
    if n < 2:
        raise ValueError(f"n >= 2 required, got {n}")
    mean, var = state
    if var < 0.0:
        raise ValueError(f"variance must be >= 0, got {var!r}")
    z = rng.generator.standard_normal(n)
    return SampleBlock(mean + math.sqrt(var) * z, mean, var)


def awgn(block: SampleBlock, sigma_w: float, rng: NoiseSource) -> SampleBlock:
    """Add independent zero-mean channel noise of standard deviation sigma_w.

    sigma_w == 0 returns the block unchanged and consumes no draws.
    """
    if sigma_w < 0.0:
        raise ValueError(f"sigma_w must be >= 0, got {sigma_w!r}")
    if sigma_w == 0.0:
        return block
    w = rng.generator.standard_normal(block.samples.size)
    return SampleBlock(
        block.samples + sigma_w * w,
        block.true_mean,
        block.true_var + sigma_w * sigma_w,
    )
