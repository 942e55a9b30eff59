import numpy as np
import pytest
from numpy.testing import assert_allclose

from anisoprofile.filterbank import make_binning_bank, make_cake_bank
from anisoprofile.profile import (
    AngularProfile,
    DegenerateProfileError,
    angular_profile,
    circular_shift_profile,
    normalize_profile,
    principal_orientation,
)
from anisoprofile.spectral import periodogram, rotate_bilinear


def test_angular_profile_matches_double_loop():
    rng = np.random.default_rng(0)
    psd = rng.random((8, 8))
    psd[4, 4] = 0.0
    bank = make_cake_bank((8, 8), 4)
    got = angular_profile(psd, bank).values
    expected = np.zeros(4)
    for m in range(4):
        for i in range(8):
            for j in range(8):
                expected[m] += bank.masks[m, i, j] * psd[i, j]
    assert_allclose(got, expected, rtol=1e-12)


def test_angular_profile_is_linear():
    rng = np.random.default_rng(1)
    s1 = rng.random((16, 16))
    s2 = rng.random((16, 16))
    bank = make_cake_bank((16, 16), 12)
    lhs = angular_profile(2.5 * s1 + 0.5 * s2, bank).values
    rhs = 2.5 * angular_profile(s1, bank).values + 0.5 * angular_profile(s2, bank).values
    assert_allclose(lhs, rhs, rtol=1e-12)


def test_angular_profile_shape_mismatch():
    bank = make_cake_bank((16, 16), 8)
    with pytest.raises(ValueError):
        angular_profile(np.zeros((8, 8)), bank)


def test_binning_profile_conserves_power():
    rng = np.random.default_rng(2)
    x = rng.standard_normal((24, 24))
    psd = periodogram(x)
    bank = make_binning_bank((24, 24), 18)
    total = angular_profile(psd, bank).values.sum()
    assert_allclose(total, psd.sum(), rtol=1e-9)


# ---------------------------------------------------------------- normalize


def test_normalize_sums_to_one_and_idempotent():
    p = AngularProfile(np.array([0.5, 0.25, 0.125, 0.125]))
    n1 = normalize_profile(p)
    assert n1.normalized
    assert_allclose(n1.values.sum(), 1.0)
    n2 = normalize_profile(n1)
    assert_allclose(n2.values, n1.values, rtol=1e-15)


def test_normalize_rejects_zero_profile():
    with pytest.raises(DegenerateProfileError):
        normalize_profile(AngularProfile(np.zeros(8)))


# ---------------------------------------------------------------- orientation


def test_orientation_grid_peak_without_refinement():
    v = np.zeros(36)
    v[7] = 3.0
    est = principal_orientation(AngularProfile(v), refine=False)
    assert est.eta_deg == 7 * 5.0
    assert est.grid_index == 7
    assert est.peak_value == 3.0
    assert not est.refined


def test_orientation_tie_takes_smallest_index():
    v = np.array([1.0, 5.0, 5.0, 1.0])
    est = principal_orientation(AngularProfile(v), refine=False)
    assert est.grid_index == 1


def test_orientation_parabolic_refinement_recovers_vertex():
    m_tot = 36
    m_true = 10.3  # between grid indices 10 and 11
    m = np.arange(m_tot, dtype=float)
    v = np.maximum(0.0, 10.0 - (m - m_true) ** 2)
    est = principal_orientation(AngularProfile(v), refine=True)
    assert est.refined
    assert_allclose(est.eta_deg, m_true * 5.0, atol=1e-9)


def test_orientation_flat_profile_keeps_grid_angle():
    est = principal_orientation(AngularProfile(np.ones(12)), refine=True)
    assert est.eta_deg == 0.0
    assert est.grid_index == 0


def test_orientation_wraps_into_half_circle():
    # peak at index 0 with a heavier left (wrap) neighbour pushes eta negative,
    # which must fold into [0, 180)
    v = np.array([10.0, 6.0, 1.0, 1.0, 1.0, 1.0, 1.0, 8.0])
    est = principal_orientation(AngularProfile(v), refine=True)
    assert 0.0 <= est.eta_deg < 180.0


# ---------------------------------------------------------------- shift


def test_shift_by_grid_step_is_a_roll():
    rng = np.random.default_rng(3)
    v = rng.random(24)
    p = AngularProfile(v)
    shifted = circular_shift_profile(p, 2 * p.spacing_deg)
    assert_allclose(shifted.values, np.roll(v, 2), rtol=1e-15)


def test_shift_zero_is_identity():
    v = np.arange(8.0)
    assert_allclose(circular_shift_profile(AngularProfile(v), 0.0).values, v)


def test_shift_half_step_interpolates():
    p = AngularProfile(np.array([0.0, 1.0, 2.0, 3.0]))  # spacing 45
    got = circular_shift_profile(p, 22.5).values
    assert_allclose(got, [1.5, 0.5, 1.5, 2.5])


def test_shift_preserves_sum_and_flag():
    rng = np.random.default_rng(4)
    p = normalize_profile(AngularProfile(rng.random(36) + 0.1))
    s = circular_shift_profile(p, 37.3)
    assert s.normalized
    assert_allclose(s.values.sum(), 1.0, rtol=1e-12)


# ---------------------------------------------------------------- pipeline


def test_profile_shift_matches_image_rotation():
    # smooth oriented texture: rotating the image by delta shifts the profile
    rng = np.random.default_rng(5)
    c, r = np.meshgrid(np.arange(96, dtype=float), np.arange(96, dtype=float))
    beta = np.deg2rad(40.0)
    x = np.cos(2 * np.pi * (c * np.cos(beta) + r * np.sin(beta)) / 10.0)
    x += 0.05 * rng.standard_normal((96, 96))
    bank = make_cake_bank((96, 96), 60)
    p0 = normalize_profile(angular_profile(periodogram(x), bank))
    delta = 18.0  # 6 grid steps of 3 degrees
    p1 = normalize_profile(angular_profile(periodogram(rotate_bilinear(x, delta)), bank))
    expected = circular_shift_profile(p0, delta)
    assert np.abs(p1.values - expected.values).max() < 0.02


def test_angles_deg_property():
    p = AngularProfile(np.ones(9))
    assert_allclose(p.angles_deg, np.arange(9) * 20.0)
    assert p.spacing_deg == 20.0
