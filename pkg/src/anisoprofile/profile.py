"""Angular power profiles and principal-orientation estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filterbank import FilterBank

__all__ = [
    "DegenerateProfileError",
    "AngularProfile",
    "OrientationEstimate",
    "angular_profile",
    "normalize_profile",
    "principal_orientation",
    "circular_shift_profile",
]

REFINE_EPS = 1e-12


class DegenerateProfileError(ValueError):
    """Raised when a profile carries no usable power (all-zero / non-finite)."""


@dataclass(frozen=True, eq=False)
class AngularProfile:
    """Power per bank angle over the half-circle grid ``m * 180 / M``."""

    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or len(v) < 2:
            raise ValueError(f"profile values must be a 1-d array of length >= 2, got shape {v.shape}")
        object.__setattr__(self, "values", v)

    @property
    def n_angles(self) -> int:
        return len(self.values)

    @property
    def spacing_deg(self) -> float:
        return 180.0 / self.n_angles

    @property
    def angles_deg(self) -> np.ndarray:
        return np.arange(self.n_angles) * self.spacing_deg


def angular_profile(psd, bank: FilterBank) -> AngularProfile:
    """Accumulate PSD mass under each bank mask: rho_m = sum(mask_m * psd)."""
    s = np.asarray(psd, dtype=np.float64)
    if s.shape != bank.shape:
        raise ValueError(f"psd shape {s.shape} does not match bank grid {bank.shape}")
    if not np.all(np.isfinite(s)):
        raise ValueError("psd contains non-finite values")
    values = np.tensordot(bank.masks, s, axes=([1, 2], [0, 1]))
    return AngularProfile(values, normalized=False)


def normalize_profile(profile: AngularProfile) -> AngularProfile:
    """Scale a profile to unit sum."""
    total = profile.values.sum()
    if not np.isfinite(total) or total <= 0.0:
        raise DegenerateProfileError("degenerate profile: no positive power to normalize")
    return AngularProfile(profile.values / total, normalized=True)


@dataclass(frozen=True)
class OrientationEstimate:
    eta_deg: float
    grid_index: int
    peak_value: float
    refined: bool


def principal_orientation(profile: AngularProfile, refine: bool = True) -> OrientationEstimate:
    """Angle of the profile maximum, optionally sub-grid refined.

    The grid argmax takes the smallest index on ties.  Refinement fits a
    parabola through the peak and its two circular neighbours and shifts by
    ``delta = 0.5 * (l - r) / (l - 2p + r)`` grid steps (``delta = 0`` when
    the curvature magnitude falls below 1e-12), clamped to half a step.
    """
    v = profile.values
    m_tot = len(v)
    m0 = int(np.argmax(v))
    peak = float(v[m0])
    delta = 0.0
    if refine and m_tot >= 3:
        left = float(v[(m0 - 1) % m_tot])
        right = float(v[(m0 + 1) % m_tot])
        denom = left - 2.0 * peak + right
        if abs(denom) >= REFINE_EPS:
            delta = 0.5 * (left - right) / denom
            delta = float(np.clip(delta, -0.5, 0.5))
    eta = (m0 + delta) * profile.spacing_deg % 180.0
    return OrientationEstimate(eta_deg=eta, grid_index=m0, peak_value=peak, refined=refine)


def circular_shift_profile(profile: AngularProfile, delta_deg: float) -> AngularProfile:
    """Resample the profile at angles ``theta_m - delta_deg``.

    Circular linear interpolation on the half-circle grid; shifting by an
    exact multiple of the grid spacing reduces to an index roll.  This is the
    profile-domain image of rotating the underlying image by ``delta_deg``.
    """
    v = profile.values
    m_tot = len(v)
    q = (np.arange(m_tot) - delta_deg / profile.spacing_deg) % m_tot
    lo = np.floor(q).astype(np.intp) % m_tot
    frac = q - np.floor(q)
    hi = (lo + 1) % m_tot
    shifted = (1.0 - frac) * v[lo] + frac * v[hi]
    return AngularProfile(shifted, normalized=profile.normalized)
