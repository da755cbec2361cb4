import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import assert_patterns_close, make_pattern
from wavefield import (
    DimMismatch,
    Kernel,
    WavePattern,
    ZeroEnergy,
    energy,
    normalize,
    phase_shift,
    random_pattern,
    resonance_coherence,
    resonance_energy,
    scale,
    superpose,
)

TWO_PI = 2 * np.pi


# -- construction and invariants ------------------------------------------


def test_construction_wraps_phases():
    p = WavePattern([1.0, 1.0, 1.0], [TWO_PI + 0.5, -0.5, 7 * np.pi])
    assert np.all(p.phase >= 0.0)
    assert np.all(p.phase < TWO_PI)
    assert p.phase[0] == pytest.approx(0.5)
    assert p.phase[1] == pytest.approx(TWO_PI - 0.5)
    assert p.phase[2] == pytest.approx(np.pi)


def test_construction_tiny_negative_phase_stays_in_range():
    p = WavePattern([1.0], [-1e-20])
    assert 0.0 <= p.phase[0] < TWO_PI


def test_zero_amplitude_forces_zero_phase():
    p = WavePattern([0.0, 2.0], [1.5, 1.5])
    assert p.phase[0] == 0.0
    assert p.phase[1] == pytest.approx(1.5)


def test_construction_rejects_bad_input():
    with pytest.raises(ValueError):
        WavePattern([-1.0], [0.0])
    with pytest.raises(ValueError):
        WavePattern([np.nan], [0.0])
    with pytest.raises(ValueError):
        WavePattern([1.0], [np.inf])
    with pytest.raises(DimMismatch):
        WavePattern([1.0, 2.0], [0.0])
    with pytest.raises(ValueError):
        WavePattern([], [])


def test_equality_is_elementwise():
    a = WavePattern([1.0, 2.0], [0.5, 1.0])
    b = WavePattern([1.0, 2.0], [0.5, 1.0])
    c = WavePattern([1.0, 2.0], [0.5, 1.1])
    assert a == b
    assert a != c
    assert a != WavePattern([1.0], [0.5])


def test_arrays_are_immutable():
    p = WavePattern([1.0], [0.0])
    with pytest.raises(ValueError):
        p.amplitude[0] = 2.0


def test_from_real_sign_to_phase():
    p = WavePattern.from_real([0.5, -0.3, 0.0])
    assert p.amplitude.tolist() == [0.5, 0.3, 0.0]
    assert p.phase[0] == 0.0
    assert p.phase[1] == pytest.approx(np.pi)
    assert p.phase[2] == 0.0


def test_from_complex_roundtrip(rng):
    p = make_pattern(32, rng)
    assert_patterns_close(WavePattern.from_complex(p.to_complex()), p, tol=1e-12)


# -- energy ----------------------------------------------------------------


def test_energy_three_four_is_twentyfive():
    assert energy(WavePattern([3.0, 4.0], [1.0, 2.0])) == 25.0


def test_energy_zero_pattern():
    assert energy(WavePattern.zeros(5)) == 0.0


def test_energy_matches_complex_oracle(rng):
    p = make_pattern(64, rng)
    assert energy(p) == pytest.approx(
        oracles.energy_of(oracles.complex_form(p)), abs=1e-9
    )


# -- superpose ---------------------------------------------------------------


def test_superpose_additive_identity(rng):
    p = make_pattern(16, rng)
    assert_patterns_close(superpose(p, WavePattern.zeros(16)), p, tol=1e-12)


def test_superpose_anti_phase_cancels(rng):
    p = make_pattern(16, rng)
    assert energy(superpose(p, phase_shift(p, np.pi))) < 1e-9


def test_superpose_matches_complex_oracle(rng):
    a, b = make_pattern(32, rng), make_pattern(32, rng)
    expected = oracles.add(oracles.complex_form(a), oracles.complex_form(b))
    np.testing.assert_allclose(superpose(a, b).to_complex(), expected, atol=1e-9)


def test_superpose_dim_mismatch():
    with pytest.raises(DimMismatch):
        superpose(WavePattern.zeros(4), WavePattern.zeros(5))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_superpose_commutative_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (make_pattern(24, rng) for _ in range(3))
    assert_patterns_close(superpose(a, b), superpose(b, a), tol=1e-9)
    assert_patterns_close(
        superpose(superpose(a, b), c), superpose(a, superpose(b, c)), tol=1e-9
    )


# -- phase_shift -------------------------------------------------------------


def test_phase_shift_identity_is_exact(rng):
    p = make_pattern(16, rng)
    assert phase_shift(p, 0.0) == p


def test_phase_shift_double_negation(rng):
    p = make_pattern(16, rng)
    assert_patterns_close(phase_shift(phase_shift(p, np.pi), np.pi), p, tol=1e-9)


def test_phase_shift_quarter_turn_multiplies_by_i(rng):
    p = make_pattern(16, rng)
    np.testing.assert_allclose(
        phase_shift(p, np.pi / 2).to_complex(), oracles.multiply_by_i(p), atol=1e-9
    )


def test_phase_shift_preserves_energy_exactly(rng):
    p = make_pattern(64, rng)
    for delta in (0.1, np.pi, 5.5):
        assert energy(phase_shift(p, delta)) == energy(p)


def test_phase_shift_mask_and_errors(rng):
    p = make_pattern(4, rng)
    mask = np.array([0.0, np.pi, 1.0, 2.0])
    shifted = phase_shift(p, mask)
    np.testing.assert_allclose(
        shifted.phase, np.mod(p.phase + mask, TWO_PI), atol=1e-12
    )
    with pytest.raises(DimMismatch):
        phase_shift(p, np.zeros(5))


def test_phase_shift_keeps_zero_amplitude_phase_zero():
    p = WavePattern([0.0, 1.0], [0.0, 1.0])
    shifted = phase_shift(p, 1.2)
    assert shifted.phase[0] == 0.0


# -- resonance kernels -------------------------------------------------------


def test_coherence_self_is_exactly_one(rng):
    p = make_pattern(32, rng)
    score = resonance_coherence(p, p)
    assert score.value == 1.0
    assert score.kernel is Kernel.COHERENCE


def test_coherence_anti_phase_is_minus_one(rng):
    p = make_pattern(32, rng)
    assert resonance_coherence(p, phase_shift(p, np.pi)).value == pytest.approx(
        -1.0, abs=1e-12
    )


def test_coherence_matches_cosine_on_sign_encoded_vectors():
    v1, v2 = [1.0, 2.0, -2.0], [2.0, 1.0, 2.0]
    score = resonance_coherence(WavePattern.from_real(v1), WavePattern.from_real(v2))
    assert score.value == 0.0
    assert oracles.cosine(v1, v2) == 0.0


def test_coherence_positive_scaling_is_one(rng):
    p = make_pattern(16, rng)
    assert resonance_coherence(p, scale(p, 3.5)).value == pytest.approx(1.0, abs=1e-12)


def test_energy_kernel_self_is_one(rng):
    p = make_pattern(32, rng)
    score = resonance_energy(p, p)
    assert score.value == 1.0
    assert score.kernel is Kernel.ENERGY


def test_energy_kernel_anti_phase_is_zero(rng):
    p = make_pattern(32, rng)
    assert resonance_energy(p, phase_shift(p, np.pi)).value < 1e-12


def test_energy_kernel_ranking_matches_coherence_on_equal_energy(rng):
    # Monte-Carlo over candidate sets: same full ordering under both kernels.
    for _ in range(100):
        probe = make_pattern(24, rng)
        candidates = [make_pattern(24, rng) for _ in range(6)]
        by_coh = sorted(
            range(6), key=lambda i: -resonance_coherence(probe, candidates[i]).value
        )
        by_en = sorted(
            range(6), key=lambda i: -resonance_energy(probe, candidates[i]).value
        )
        assert by_coh == by_en


def test_kernel_errors(rng):
    p = make_pattern(8, rng)
    with pytest.raises(DimMismatch):
        resonance_coherence(p, make_pattern(9, rng))
    with pytest.raises(ZeroEnergy):
        resonance_coherence(p, WavePattern.zeros(8))
    with pytest.raises(ZeroEnergy):
        resonance_energy(WavePattern.zeros(8), p)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_coherence_symmetric_and_bounded(seed):
    rng = np.random.default_rng(seed)
    a, b = make_pattern(32, rng), make_pattern(32, rng)
    ab, ba = resonance_coherence(a, b), resonance_coherence(b, a)
    assert ab.value == ba.value
    assert abs(ab.value) <= 1.0
    assert 0.0 <= resonance_energy(a, b).value <= 1.0


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_cosine_reduction_property(seed):
    rng = np.random.default_rng(seed)
    u = rng.uniform(0.1, 1.0, 48) * rng.choice([-1.0, 1.0], 48)
    v = rng.uniform(0.1, 1.0, 48) * rng.choice([-1.0, 1.0], 48)
    got = resonance_coherence(WavePattern.from_real(u), WavePattern.from_real(v))
    assert got.value == pytest.approx(oracles.cosine(u.tolist(), v.tolist()), abs=1e-6)


def test_kernels_against_naive_oracle(rng):
    for _ in range(100):
        kind = ["gaussian", "unitary", "phasor"][int(rng.integers(3))]
        a = random_pattern(64, rng, kind)
        b = random_pattern(64, rng, "phasor")
        assert resonance_coherence(a, b).value == pytest.approx(
            oracles.coherence(a, b), abs=1e-7
        )
        assert resonance_energy(a, b).value == pytest.approx(
            oracles.energy_kernel(a, b), abs=1e-7
        )


# -- normalize and scale -----------------------------------------------------


def test_normalize_three_four():
    p = normalize(WavePattern([3.0, 4.0], [0.0, 1.0]))
    np.testing.assert_allclose(p.amplitude, [0.6, 0.8], atol=1e-12)


def test_normalize_idempotent(rng):
    p = normalize(make_pattern(16, rng))
    assert_patterns_close(normalize(p), p, tol=1e-9)


def test_normalize_unit_energy(rng):
    p = WavePattern(rng.uniform(0.1, 5.0, 32), rng.uniform(0, TWO_PI, 32))
    assert energy(normalize(p)) == pytest.approx(1.0, abs=1e-9)


def test_normalize_zero_energy():
    with pytest.raises(ZeroEnergy):
        normalize(WavePattern.zeros(4))


def test_scale_rejects_negative(rng):
    with pytest.raises(ValueError):
        scale(make_pattern(4, rng), -0.5)


# -- random pattern kinds ----------------------------------------------------


@pytest.mark.parametrize("kind", ["gaussian", "unitary", "phasor"])
def test_random_patterns_are_unit_energy(kind, rng):
    p = random_pattern(128, rng, kind)
    assert energy(p) == pytest.approx(1.0, abs=1e-9)


def test_unitary_pattern_has_flat_spectrum(rng):
    p = random_pattern(64, rng, "unitary")
    mags = np.abs(np.fft.fft(p.to_complex()))
    np.testing.assert_allclose(mags, 1.0, atol=1e-9)


def test_random_pattern_unknown_kind(rng):
    with pytest.raises(ValueError):
        random_pattern(8, rng, "bogus")
