import numpy as np
import pytest
from numpy.testing import assert_allclose

from anisoprofile.filterbank import (
    METHODS,
    bresenham_line,
    line_points,
    make_binning_bank,
    make_cake_bank,
    make_filter_bank,
    make_ridge_bank,
)

from oracles import bresenham_ref


def all_banks(shape=(16, 16), n_angles=8):
    return [
        make_cake_bank(shape, n_angles),
        make_ridge_bank(shape, n_angles),
        make_binning_bank(shape, n_angles),
    ]


def rot90_centered(a):
    """Move centered-grid content at frequency angle t to t + 90 degrees."""
    n = a.shape[0]
    idx = (2 * (n // 2) - np.arange(n)) % n
    return a[idx, :].T


def test_rot90_centered_helper_moves_axis_delta():
    a = np.zeros((8, 8))
    a[4, 4 + 3] = 1.0  # (xi1=3, xi2=0), angle 0
    b = rot90_centered(a)
    assert b[4 + 3, 4] == 1.0  # (xi1=0, xi2=3), angle 90
    assert b.sum() == 1.0


# ---------------------------------------------------------------- generic


def test_bank_layout():
    for bank in all_banks((16, 20), 12):
        assert bank.masks.shape == (12, 16, 20)
        assert bank.n_angles == 12
        assert_allclose(bank.angles_deg, np.arange(12) * 15.0)


def test_masks_nonnegative_and_zero_at_dc():
    for bank in all_banks():
        assert np.all(bank.masks >= 0.0), bank.method
        assert np.all(bank.masks[:, 8, 8] == 0.0), bank.method


@pytest.mark.parametrize("shape", [(16, 16), (17, 17), (16, 22)])
def test_masks_exactly_centrally_symmetric(shape):
    h, w = shape
    r0 = 1 if h % 2 == 0 else 0
    c0 = 1 if w % 2 == 0 else 0
    for bank in all_banks(shape, 9):
        for m in range(0, 9, 4):
            sub = bank.masks[m, r0:, c0:]
            assert np.array_equal(sub, np.flip(sub)), (bank.method, m)


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        make_cake_bank((16, 16), 3)
    with pytest.raises(ValueError):
        make_cake_bank((4, 16), 8)
    with pytest.raises(ValueError):
        make_cake_bank((16, 16), 8, r_lo=0.5, r_hi=0.4)
    with pytest.raises(ValueError):
        make_ridge_bank((16, 16), 8, sigma_perp=0.0)
    with pytest.raises(ValueError):
        make_cake_bank((16, 16), 8, overlap=-1.0)
    with pytest.raises(ValueError):
        make_filter_bank("gabor", (16, 16))
    with pytest.raises(ValueError):
        make_filter_bank("binning", (16, 16), r_lo=0.1)


def test_rejects_empty_annulus():
    # on an 8x8 grid no bin radius falls inside [3.72, 3.74]
    with pytest.raises(ValueError):
        make_cake_bank((8, 8), 4, r_lo=0.93, r_hi=0.935)


# ---------------------------------------------------------------- cake


def test_cake_partition_of_unity_on_annulus():
    bank = make_cake_bank((32, 32), 12)
    total = bank.masks.sum(axis=0)
    xi = np.arange(32) - 16
    r = np.hypot(xi[None, :], xi[:, None])
    band = (r >= 0.02 * 16) & (r <= 16) & (r > 0)
    assert np.all(np.abs(total[band] - 1.0) <= 1e-9)
    assert np.all(total[~band] == 0.0)


def test_cake_on_grid_angle_takes_the_max():
    bank = make_cake_bank((16, 16), 4)
    # bin (xi1=3, xi2=3) sits exactly at 45 degrees = theta_1
    col = bank.masks[:, 8 + 3, 8 + 3]
    assert col[1] == col.max()
    assert col[1] > col[0]


def test_cake_respects_radial_band():
    bank = make_cake_bank((32, 32), 8, r_lo=0.25, r_hi=0.75)
    xi = np.arange(32) - 16
    r = np.hypot(xi[None, :], xi[:, None])
    outside = (r < 0.25 * 16) | (r > 0.75 * 16)
    assert np.all(bank.masks[:, outside] == 0.0)


def test_cake_90_degree_rotation_covariance():
    bank = make_cake_bank((16, 16), 8)
    for m in range(8):
        expected = rot90_centered(bank.masks[m])
        assert_allclose(bank.masks[(m + 4) % 8], expected, rtol=0, atol=1e-15)


# ---------------------------------------------------------------- ridge


def test_ridge_value_at_one_sigma():
    bank = make_ridge_bank((16, 16), 8, sigma_perp=2.0)
    # theta_0 = 0: perpendicular distance of bin (xi1=5, xi2=2) is exactly 2
    assert_allclose(bank.masks[0, 8 + 2, 8 + 5], np.exp(-0.5), rtol=1e-15)


def test_ridge_peak_on_the_line():
    bank = make_ridge_bank((16, 16), 8)
    assert bank.masks[0, 8, 8 + 4] == 1.0  # on the 0-degree line
    assert bank.masks[4, 8 + 4, 8] == 1.0  # on the 90-degree line


def test_ridge_is_not_a_partition():
    bank = make_ridge_bank((16, 16), 8)
    total = bank.masks.sum(axis=0)
    on_band = total[total > 0]
    assert np.abs(on_band - 1.0).max() > 0.01


def test_ridge_90_degree_rotation_covariance_exact():
    bank = make_ridge_bank((16, 16), 10)
    for m in range(10):
        assert np.array_equal(bank.masks[(m + 5) % 10], rot90_centered(bank.masks[m])), m


# ---------------------------------------------------------------- binning


def test_binning_is_a_binary_partition_of_nonzero_bins():
    bank = make_binning_bank((16, 16), 10)
    assert set(np.unique(bank.masks)) <= {0.0, 1.0}
    total = bank.masks.sum(axis=0)
    assert total[8, 8] == 0.0
    total[8, 8] = 1.0
    assert np.all(total == 1.0)


def test_binning_matches_nearest_angle_oracle():
    m_tot = 10
    bank = make_binning_bank((12, 12), m_tot)
    thetas = np.arange(m_tot) * 180.0 / m_tot
    for i in range(12):
        for j in range(12):
            xi2, xi1 = i - 6, j - 6
            if xi1 == 0 and xi2 == 0:
                continue
            alpha = np.degrees(np.arctan2(xi2, xi1)) % 180.0
            d = np.abs(alpha - thetas) % 180.0
            d = np.minimum(d, 180.0 - d)
            won = np.flatnonzero(bank.masks[:, i, j] == 1.0)
            assert len(won) == 1
            # skip near-ties: the oracle cannot adjudicate them independently
            order = np.sort(d)
            if order[1] - order[0] > 1e-9:
                assert won[0] == np.argmin(d), (xi1, xi2)


def test_binning_axis_angle_collects_more_bins_than_oblique():
    # the 0-degree bin swallows the whole axis row; an oblique angle has no
    # exactly aligned bins at all
    bank = make_binning_bank((32, 32), 36)
    count0 = bank.masks[0].sum()
    count30 = bank.masks[6].sum()
    assert count0 > count30


def test_binning_90_degree_rotation_covariance_exact():
    # column xi1 = -8 is excluded: its rotated source bin falls off the grid
    bank = make_binning_bank((16, 16), 8)
    for m in range(8):
        got = bank.masks[(m + 4) % 8][:, 1:]
        expected = rot90_centered(bank.masks[m])[:, 1:]
        assert np.array_equal(got, expected), m


# ---------------------------------------------------------------- bresenham


def test_bresenham_frozen_example():
    assert bresenham_line((0, 0), (5, 2)) == [(0, 0), (1, 0), (2, 1), (3, 1), (4, 2), (5, 2)]


def test_bresenham_endpoints_and_connectivity():
    rng = np.random.default_rng(0)
    for _ in range(50):
        p0 = tuple(rng.integers(-20, 20, 2))
        p1 = tuple(rng.integers(-20, 20, 2))
        pts = bresenham_line(p0, p1)
        assert pts[0] == tuple(p0) and pts[-1] == tuple(p1)
        assert len(pts) == max(abs(p1[0] - p0[0]), abs(p1[1] - p0[1])) + 1
        for (xa, ya), (xb, yb) in zip(pts, pts[1:]):
            assert max(abs(xb - xa), abs(yb - ya)) == 1
        assert pts == bresenham_ref(p0, p1)


def test_line_points_axis_and_diagonal():
    horiz = line_points((16, 16), 0.0)
    assert all(y == 8 for _, y in horiz)
    assert {x for x, _ in horiz} == set(range(16))
    vert = line_points((16, 16), 90.0)
    assert all(x == 8 for x, _ in vert)
    diag = line_points((16, 16), 45.0)
    assert (8, 8) in diag
    assert all(x == y for x, y in diag)


def test_methods_tuple():
    assert METHODS == ("cake", "ridge", "binning")
