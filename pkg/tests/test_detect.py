"""Estimator and threshold-detector tests, including round trips."""

import itertools

import numpy as np
import pytest

from noisemod import (
    NoiseSource,
    SampleBlock,
    Scheme,
    SymbolBits,
    ThresholdMode,
    detect_mean_bits,
    detect_symbol,
    detect_var_bits,
    estimate,
    modulate,
    select_state,
    threshold_bank,
)


def _block(values):
    x = np.asarray(values, dtype=float)
    return SampleBlock(x, float(x.mean()), float(x.var()))


class TestEstimate:
    def test_hand_arithmetic(self):
        est = estimate(_block([1.0, 2.0, 3.0]))
        assert est.mean_hat == 2.0
        assert est.var_hat == pytest.approx(2.0 / 3.0, rel=1e-15)

    def test_two_samples(self):
        est = estimate(_block([0.0, 2.0]))
        assert est == type(est)(1.0, 1.0)

    def test_constant_block(self):
        est = estimate(_block([7.0] * 64))
        assert est.mean_hat == 7.0 and est.var_hat == 0.0

    def test_bessel_flag(self):
        assert estimate(_block([1.0, 2.0, 3.0]), bessel=True).var_hat == pytest.approx(1.0)


@pytest.fixture
def cg_bank(canonical_subs):
    return threshold_bank(Scheme.CGQNM, *canonical_subs, sigma_w=0.0)


class TestMeanBits:
    def test_region_two(self, cg_bank):
        assert detect_mean_bits(5e-2, cg_bank) == (1, 0)

    def test_above_all(self, cg_bank):
        assert detect_mean_bits(0.2, cg_bank) == (1, 1)

    def test_below_all(self, cg_bank):
        assert detect_mean_bits(-10.0, cg_bank) == (0, 0)

    def test_tie_goes_to_upper_region(self, cg_bank):
        assert detect_mean_bits(cg_bank.mean_thresholds[0], cg_bank) == (1, 0)
        assert detect_mean_bits(cg_bank.mean_thresholds[2], cg_bank) == (1, 1)

    def test_region_changes_exactly_three_times(self, cg_bank):
        grid = np.linspace(-0.01, 0.2, 20_001)
        regions = [detect_mean_bits(v, cg_bank) for v in grid]
        changes = sum(a != b for a, b in zip(regions, regions[1:]))
        assert changes == 3

    def test_needs_three_thresholds(self, canonical_subs):
        bank = threshold_bank(Scheme.GQNM, canonical_subs[0])
        with pytest.raises(ValueError):
            detect_mean_bits(0.0, bank)


class TestVarBits:
    def test_region_two(self, cg_bank):
        assert detect_var_bits(5e-9, cg_bank) == (1, 0)

    def test_zero_variance(self, cg_bank):
        assert detect_var_bits(0.0, cg_bank) == (0, 0)

    def test_above_all(self, cg_bank):
        assert detect_var_bits(2e-8, cg_bank) == (1, 1)

    def test_noise_adjusted_shift(self, canonical_subs):
        plain = threshold_bank(
            Scheme.CGQNM, *canonical_subs, mode=ThresholdMode.MIDPOINT, sigma_w=2e-5
        )
        shifted = threshold_bank(
            Scheme.CGQNM, *canonical_subs, mode=ThresholdMode.NOISE_ADJUSTED, sigma_w=2e-5
        )
        # between the base threshold (2.3e-9) and the shifted one (2.7e-9)
        assert detect_var_bits(2.4e-9, plain) == (1, 0)
        assert detect_var_bits(2.4e-9, shifted) == (0, 0)


class TestDetectSymbol:
    def test_composite_round_trip_single_state(self, canonical_subs, cg_bank):
        # state (third mean level, second variance level) <-> bits (0,1,1,0)
        bits = SymbolBits(Scheme.CGQNM, (0, 1, 1, 0))
        state = select_state(bits, *canonical_subs)
        block = modulate(bits, state, 10_000, NoiseSource(31))
        assert detect_symbol(block, Scheme.CGQNM, cg_bank) == bits

    def test_kljn_constant_block(self, canonical_subs):
        bank = threshold_bank(Scheme.KLJN, canonical_subs[0])
        block = SampleBlock(np.zeros(100), 0.0, 0.0)
        assert detect_symbol(block, Scheme.KLJN, bank).bits == (0,)

    def test_gqnm_mean_high_var_zero(self, canonical_subs):
        sub0 = canonical_subs[0]
        bank = threshold_bank(Scheme.GQNM, sub0)
        block = SampleBlock(np.full(100, sub0.m_H), sub0.m_H, 0.0)
        assert detect_symbol(block, Scheme.GQNM, bank).bits == (1, 0)

    def test_arity_mismatch_rejected(self, canonical_subs, cg_bank):
        block = SampleBlock(np.zeros(10), 0.0, 0.0)
        with pytest.raises(ValueError, match="arity"):
            detect_symbol(block, Scheme.KLJN, cg_bank)

    def test_exact_recovery_from_true_moments(self, canonical_subs, cg_bank):
        for pattern in itertools.product((0, 1), repeat=4):
            bits = SymbolBits(Scheme.CGQNM, pattern)
            mean, var = select_state(bits, *canonical_subs)
            b00, b01 = detect_mean_bits(mean, cg_bank)
            b10, b11 = detect_var_bits(var, cg_bank)
            assert (b00, b10, b01, b11) == pattern

    def test_round_trip_all_patterns_large_blocks(self, canonical_subs, cg_bank):
        # noiseless channel, blocks long enough that symbol errors are ~1e-5
        rng = NoiseSource(33)
        blocks_per_pattern = 100
        n = 100_000
        errors = 0
        total = 0
        for pattern in itertools.product((0, 1), repeat=4):
            bits = SymbolBits(Scheme.CGQNM, pattern)
            state = select_state(bits, *canonical_subs)
            for _ in range(blocks_per_pattern):
                block = modulate(bits, state, n, rng)
                errors += detect_symbol(block, Scheme.CGQNM, cg_bank) != bits
                total += 1
        assert errors / total <= 1e-3

    def test_estimator_statistics(self, canonical_subs):
        # mean/variance of the block estimators over many blocks
        m_f, var_f = 6e-3, 2.1e-9
        n, reps = 100, 10_000
        gen = NoiseSource(34).generator
        x = m_f + np.sqrt(var_f) * gen.standard_normal((reps, n))
        mean_hats = x.mean(axis=1)
        var_hats = x.var(axis=1)
        assert abs(mean_hats.mean() - m_f) < 5.0 * np.sqrt(var_f / (n * reps))
        assert var_hats.mean() == pytest.approx((n - 1) / n * var_f, rel=1e-2)
