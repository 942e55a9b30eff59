"""Oriented spectral filter banks over a half-circle angle grid.

A bank holds ``M`` non-negative masks on the centered frequency grid, one per
angle ``theta_m = m * 180 / M`` degrees.  Frequency angles are folded to
``[0, 180)`` so every mask is centrally symmetric, and every mask is zero at
DC.

Three constructions are provided:

* ``cake``    -- raised-cosine angular wedges with overlap, renormalized
                 per-frequency to a partition of unity on the annulus;
* ``ridge``   -- Gaussian falloff with perpendicular distance from the line
                 at ``theta_m`` (not normalized);
* ``binning`` -- hard nearest-angle assignment of every nonzero frequency
                 (binary partition, conserves total non-DC power).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import freq_coords

__all__ = [
    "METHODS",
    "FilterBank",
    "make_cake_bank",
    "make_ridge_bank",
    "make_binning_bank",
    "make_filter_bank",
    "bresenham_line",
    "line_points",
]

METHODS = ("cake", "ridge", "binning")

MIN_ANGLES = 4


@dataclass(frozen=True, eq=False)
class FilterBank:
    """Stack of angular masks plus the grid/angle bookkeeping."""

    method: str
    angles_deg: np.ndarray  # (M,)
    masks: np.ndarray  # (M, H, W)
    params: dict = field(default_factory=dict)

    @property
    def n_angles(self) -> int:
        return len(self.angles_deg)

    @property
    def shape(self) -> tuple[int, int]:
        return self.masks.shape[1:]


def _check_bank_args(shape, n_angles):
    h, w = shape
    h, w = int(h), int(w)
    if h < 8 or w < 8:
        raise ValueError(f"grid too small for a filter bank: {h}x{w}")
    if int(n_angles) != n_angles or n_angles < MIN_ANGLES:
        raise ValueError(f"need an integer n_angles >= {MIN_ANGLES}, got {n_angles}")
    return h, w, int(n_angles)


def _freq_squares(h, w):
    """xi1^2, xi2^2, 2*xi1*xi2 and r^2 fields on the centered grid.

    All four are even polynomials in (xi1, xi2), hence exactly invariant under
    frequency negation -- downstream masks inherit exact central symmetry.
    """
    xi1 = freq_coords(w)[None, :]
    xi2 = freq_coords(h)[:, None]
    sq1 = xi1 * xi1
    sq2 = xi2 * xi2
    r2 = sq1 + sq2
    cross = 2.0 * (xi1 * xi2)
    return sq1, sq2, cross, r2


def _doubled_angle_fields(h, w):
    """cos(2*alpha) and sin(2*alpha) of the frequency angle, plus r^2."""
    sq1, sq2, cross, r2 = _freq_squares(h, w)
    denom = r2.copy()
    denom[h // 2, w // 2] = 1.0  # DC: value irrelevant, avoids 0/0
    cos2a = (sq1 - sq2) / denom
    sin2a = cross / denom
    return cos2a, sin2a, r2


def _bank_trig(n_angles, doubled):
    """cos/sin of the (possibly doubled) bank angles.

    For even M the upper half is derived algebraically from the lower half, so
    that the 90-degree frequency-grid rotation maps mask values onto each
    other exactly, not just to rounding error.
    """
    theta = np.deg2rad(np.arange(n_angles) * (180.0 / n_angles))
    if doubled:
        c = np.cos(2.0 * theta)
        s = np.sin(2.0 * theta)
        if n_angles % 2 == 0:
            half = n_angles // 2
            c[half:] = -c[:half]
            s[half:] = -s[:half]
    else:
        c = np.cos(theta)
        s = np.sin(theta)
        if n_angles % 2 == 0:
            half = n_angles // 2
            c[half:] = -s[:half]
            s[half:] = c[:half]
    return c, s


def _radial_band(r2, h, w, r_lo, r_hi):
    if not (0.0 <= r_lo < r_hi <= 1.0):
        raise ValueError(f"need 0 <= r_lo < r_hi <= 1, got r_lo={r_lo}, r_hi={r_hi}")
    r_nyq = min(h, w) / 2.0
    band = (r2 >= (r_lo * r_nyq) ** 2) & (r2 <= (r_hi * r_nyq) ** 2)
    band[h // 2, w // 2] = False  # DC never participates
    if not band.any():
        raise ValueError(f"radial band [{r_lo}, {r_hi}] contains no frequency bin on a {h}x{w} grid")
    return band


def _angles_deg(n_angles):
    return np.arange(n_angles) * (180.0 / n_angles)


def make_cake_bank(shape, n_angles=180, *, overlap=2.0, power=2.0, r_lo=0.02, r_hi=1.0):
    """Raised-cosine angular wedges, renormalized to a partition of unity.

    Each raw mask is ``cos(pi/2 * d/Delta)**power`` for circular half-circle
    distance ``d < Delta`` between the frequency angle and ``theta_m``, with
    ``Delta = overlap * 180 / M`` degrees, restricted to the annulus
    ``r_lo*r_nyq <= r <= r_hi*r_nyq``.  The stack is then divided per-bin by
    its angular sum, so on the annulus the masks sum to exactly one.
    """
    h, w, m_tot = _check_bank_args(shape, n_angles)
    if overlap <= 0.0:
        raise ValueError(f"overlap must be positive, got {overlap}")
    if power <= 0.0:
        raise ValueError(f"power must be positive, got {power}")
    cos2a, sin2a, r2 = _doubled_angle_fields(h, w)
    band = _radial_band(r2, h, w, r_lo, r_hi)
    c2, s2 = _bank_trig(m_tot, doubled=True)
    delta_max = overlap * (180.0 / m_tot)
    p = int(power) if float(power).is_integer() else power

    masks = np.zeros((m_tot, h, w))
    for m in range(m_tot):
        dot = np.clip(cos2a * c2[m] + sin2a * s2[m], -1.0, 1.0)
        d = 0.5 * np.degrees(np.arccos(dot))  # distance between lines, [0, 90]
        # clamp the argument to pi/2 before exponentiating: cos of anything
        # past the support edge is negative, and negative**fractional is nan
        a = np.cos((0.5 * np.pi / delta_max) * np.minimum(d, delta_max)) ** p
        masks[m] = np.where(band & (d < delta_max), a, 0.0)

    total = masks.sum(axis=0)
    covered = band & (total > 0.0)
    np.divide(masks, total, out=masks, where=covered)
    masks[:, ~covered] = 0.0
    params = dict(overlap=overlap, power=power, r_lo=r_lo, r_hi=r_hi)
    return FilterBank("cake", _angles_deg(m_tot), masks, params)


def make_ridge_bank(shape, n_angles=180, *, sigma_perp=1.5, r_lo=0.02, r_hi=1.0):
    """Gaussian ridge masks: exp(-d_perp^2 / (2 sigma^2)) on the annulus.

    ``d_perp`` is the perpendicular distance (in frequency bins) from the bin
    to the line through DC at angle ``theta_m``.  Not normalized: a bin on the
    line has mask value 1.
    """
    h, w, m_tot = _check_bank_args(shape, n_angles)
    if sigma_perp <= 0.0:
        raise ValueError(f"sigma_perp must be positive, got {sigma_perp}")
    xi1 = freq_coords(w)[None, :]
    xi2 = freq_coords(h)[:, None]
    _, _, _, r2 = _freq_squares(h, w)
    band = _radial_band(r2, h, w, r_lo, r_hi)
    cs, sn = _bank_trig(m_tot, doubled=False)
    inv = 1.0 / (2.0 * sigma_perp * sigma_perp)

    masks = np.zeros((m_tot, h, w))
    for m in range(m_tot):
        d = xi1 * sn[m] - xi2 * cs[m]
        masks[m] = np.where(band, np.exp(-(d * d) * inv), 0.0)
    params = dict(sigma_perp=sigma_perp, r_lo=r_lo, r_hi=r_hi)
    return FilterBank("ridge", _angles_deg(m_tot), masks, params)


def make_binning_bank(shape, n_angles=180):
    """Hard nearest-angle binning of every nonzero frequency.

    Each nonzero bin is assigned to the single closest ``theta_m`` on the
    half-circle (ties toward smaller m), giving a binary partition that
    conserves total non-DC power.  No radial band is applied.
    """
    h, w, m_tot = _check_bank_args(shape, n_angles)
    cos2a, sin2a, _ = _doubled_angle_fields(h, w)
    c2, s2 = _bank_trig(m_tot, doubled=True)

    best = np.full((h, w), np.inf)
    assign = np.zeros((h, w), dtype=np.intp)
    for m in range(m_tot):
        dot = np.clip(cos2a * c2[m] + sin2a * s2[m], -1.0, 1.0)
        d = np.arccos(dot)  # monotone in the angular distance; scan keeps first min
        closer = d < best
        assign[closer] = m
        best[closer] = d[closer]

    masks = np.zeros((m_tot, h, w))
    nonzero = np.ones((h, w), dtype=bool)
    nonzero[h // 2, w // 2] = False
    for m in range(m_tot):
        masks[m][(assign == m) & nonzero] = 1.0
    return FilterBank("binning", _angles_deg(m_tot), masks, {})


def make_filter_bank(method, shape, n_angles=180, **params):
    """Build a bank by method name ("cake", "ridge" or "binning")."""
    if method == "cake":
        return make_cake_bank(shape, n_angles, **params)
    if method == "ridge":
        return make_ridge_bank(shape, n_angles, **params)
    if method == "binning":
        if params:
            raise ValueError(f"binning takes no extra parameters, got {sorted(params)}")
        return make_binning_bank(shape, n_angles)
    raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")


def bresenham_line(p0, p1):
    """Integer 8-connected line from p0 to p1, endpoints inclusive.

    Points are (x, y) pairs; the classic integer error-accumulator walk.
    """
    x0, y0 = (int(v) for v in p0)
    x1, y1 = (int(v) for v in p1)
    dx = abs(x1 - x0)
    sx = 1 if x0 < x1 else -1
    dy = -abs(y1 - y0)
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    points = []
    x, y = x0, y0
    while True:
        points.append((x, y))
        if x == x1 and y == y1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy
    return points


def _reach(center, n, d):
    # how many unit steps fit along signed direction d without leaving [0, n-1]
    if d > 1e-12:
        return (n - 1 - center) / d
    if d < -1e-12:
        return center / -d
    return np.inf


def line_points(shape, angle_deg):
    """Rasterized diameter of the frequency grid through DC at ``angle_deg``.

    Diagnostic view of the angular line a binning bank collapses onto; returns
    (x, y) = (col, row) index pairs.
    """
    h, w = shape
    ic, jc = h // 2, w // 2
    th = np.deg2rad(angle_deg % 180.0)
    dx, dy = np.cos(th), np.sin(th)
    t_fwd = int(np.floor(min(_reach(jc, w, dx), _reach(ic, h, dy))))
    t_bwd = int(np.floor(min(_reach(jc, w, -dx), _reach(ic, h, -dy))))
    p1 = (jc + int(round(t_fwd * dx)), ic + int(round(t_fwd * dy)))
    p0 = (jc - int(round(t_bwd * dx)), ic - int(round(t_bwd * dy)))
    return bresenham_line(p0, p1)
