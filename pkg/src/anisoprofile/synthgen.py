"""Seeded synthetic image generators with ground-truth records.

Three families: oriented Gabor-atom mixtures (von Mises distributed
orientations), single oriented oscillations, and band-limited isotropic
noise.  Every generator standardizes its output to zero mean and unit
max-abs, and is bit-deterministic for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GroundTruth",
    "GaborMixSpec",
    "gabor_h",
    "gabor_atom",
    "sample_orientation_deg",
    "gen_gabor_image",
    "gen_oriented_oscillation",
    "gen_isotropic",
]


@dataclass(frozen=True)
class GroundTruth:
    """What a generated image actually contains.

    kind is one of "isotropic", "single-angle" (with ``angle_deg``) or
    "von-mises" (with ``mu_deg`` and ``sigma``).
    """

    kind: str
    angle_deg: float | None = None
    mu_deg: float | None = None
    sigma: float | None = None


@dataclass(frozen=True)
class GaborMixSpec:
    """Parameters of a Gabor-atom mixture image."""

    mu_deg: float
    sigma: float
    n_atoms: int = 300
    scale_range: tuple[float, float] = (4.0, 12.0)
    center_fraction: float = 0.8
    size: int | tuple[int, int] = 256
    seed: int = 0


def _shape_of(size) -> tuple[int, int]:
    if np.isscalar(size):
        h = w = int(size)
    else:
        h, w = (int(v) for v in size)
    if h < 8 or w < 8:
        raise ValueError(f"image size too small: {h}x{w}")
    return h, w


def _standardize(x: np.ndarray) -> np.ndarray:
    x = x - x.mean()
    peak = np.abs(x).max()
    if peak < 1e-12:
        raise ValueError("degenerate synthetic image: no signal after centering")
    return x / peak


def gabor_h(a, b, theta_deg, wavenumber=1.0):
    """Oriented Gabor kernel: exp(-a^2 - b^2) * cos(k * (a sin(t) - b cos(t)))."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    t = np.deg2rad(theta_deg)
    return np.exp(-a * a - b * b) * np.cos(wavenumber * (a * np.sin(t) - b * np.cos(t)))


# Atoms carry one full oscillation cycle per unit of the dilated coordinate,
# i.e. the scale parameter is the carrier wavelength in pixels.  Without this
# factor the carrier would sit at 2*pi*scale px -- essentially DC -- and the
# atoms would be too weakly oriented to carry an orientation signal.
ATOM_WAVENUMBER = 2.0 * np.pi


def gabor_atom(shape, theta_deg, scale, u, v):
    """Dilated Gabor atom on a pixel grid, centered at (u, v) = (x, y).

    ``scale`` is both the envelope scale and the carrier wavelength in px.
    The kernel's first axis is mapped to -y so that the atom's spectral power
    lies at frequency angle ``theta_deg`` (the calibration tests pin this
    identity); value at the center pixel is 1.
    """
    h, w = _shape_of(shape)
    if scale <= 0.0:
        raise ValueError(f"atom scale must be positive, got {scale}")
    rows = np.arange(h, dtype=np.float64)[:, None]
    cols = np.arange(w, dtype=np.float64)[None, :]
    a = (v - rows) / scale
    b = (cols - u) / scale
    return gabor_h(a, b, theta_deg, ATOM_WAVENUMBER)


def sample_orientation_deg(rng, mu_deg, sigma, size=None):
    """Half-circle von Mises orientation sample(s), mode at ``mu_deg``.

    A von Mises draw on (-pi, pi] (Best-Fisher rejection sampling, via
    numpy's generator) is halved to (-90, 90] degrees and recentered, so the
    result lives on [0, 180).  ``sigma`` is the concentration; 0 gives the
    uniform distribution.
    """
    if sigma < 0.0:
        raise ValueError(f"concentration must be >= 0, got {sigma}")
    psi = rng.vonmises(0.0, sigma, size=size)
    return (mu_deg + psi * (90.0 / np.pi)) % 180.0


def _accumulate_atom(img, theta_deg, scale, u, v):
    """Add one atom, evaluated on a window where the envelope is non-negligible."""
    h, w = img.shape
    reach = 4.5 * scale  # envelope below exp(-20) outside
    r0 = max(0, int(np.floor(v - reach)))
    r1 = min(h, int(np.ceil(v + reach)) + 1)
    c0 = max(0, int(np.floor(u - reach)))
    c1 = min(w, int(np.ceil(u + reach)) + 1)
    if r0 >= r1 or c0 >= c1:
        return
    rows = np.arange(r0, r1, dtype=np.float64)[:, None]
    cols = np.arange(c0, c1, dtype=np.float64)[None, :]
    img[r0:r1, c0:c1] += gabor_h(
        (v - rows) / scale, (cols - u) / scale, theta_deg, ATOM_WAVENUMBER
    )


def gen_gabor_image(spec: GaborMixSpec) -> tuple[np.ndarray, GroundTruth]:
    """Sum of oriented Gabor atoms with von Mises distributed angles.

    Atom angles are drawn with mode ``spec.mu_deg`` and concentration
    ``spec.sigma``; scales uniformly from ``spec.scale_range``; centers
    uniformly over the central ``center_fraction`` of each axis.
    """
    h, w = _shape_of(spec.size)
    if spec.n_atoms < 1:
        raise ValueError(f"need at least one atom, got {spec.n_atoms}")
    s_lo, s_hi = spec.scale_range
    if not (0.0 < s_lo <= s_hi):
        raise ValueError(f"bad scale range {spec.scale_range}")
    if not (0.0 < spec.center_fraction <= 1.0):
        raise ValueError(f"bad center fraction {spec.center_fraction}")

    rng = np.random.default_rng(spec.seed)
    thetas = sample_orientation_deg(rng, spec.mu_deg, spec.sigma, size=spec.n_atoms)
    scales = rng.uniform(s_lo, s_hi, size=spec.n_atoms)
    margin = (1.0 - spec.center_fraction) / 2.0
    us = rng.uniform(margin * (w - 1), (1.0 - margin) * (w - 1), size=spec.n_atoms)
    vs = rng.uniform(margin * (h - 1), (1.0 - margin) * (h - 1), size=spec.n_atoms)

    img = np.zeros((h, w))
    for theta, s, u, v in zip(thetas, scales, us, vs):
        _accumulate_atom(img, theta, s, u, v)
    truth = GroundTruth("von-mises", mu_deg=spec.mu_deg % 180.0, sigma=spec.sigma)
    return _standardize(img), truth


def gen_oriented_oscillation(angle_deg, wavelength_px=8.0, size=256):
    """Plane-wave grating whose spectral power lies at ``angle_deg``."""
    h, w = _shape_of(size)
    if wavelength_px < 2.0:
        raise ValueError(f"wavelength must be >= 2 px, got {wavelength_px}")
    beta = np.deg2rad(angle_deg)
    rows = np.arange(h, dtype=np.float64)[:, None]
    cols = np.arange(w, dtype=np.float64)[None, :]
    x = np.cos(2.0 * np.pi * (cols * np.cos(beta) + rows * np.sin(beta)) / wavelength_px)
    truth = GroundTruth("single-angle", angle_deg=angle_deg % 180.0)
    return _standardize(x), truth


def gen_isotropic(size=256, seed=0, band=(0.15, 0.75), edge=0.1):
    """Band-limited white noise with a radially symmetric spectral envelope."""
    h, w = _shape_of(size)
    lo, hi = band
    if not (0.0 < lo < hi <= 1.0) or edge <= 0.0:
        raise ValueError(f"bad spectral band {band} / edge {edge}")
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((h, w))
    spec = np.fft.fftshift(np.fft.fft2(noise))
    r_nyq = min(h, w) / 2.0
    yy = np.arange(h, dtype=np.float64)[:, None] - h // 2
    xx = np.arange(w, dtype=np.float64)[None, :] - w // 2
    r = np.hypot(xx, yy) / r_nyq
    up = np.clip((r - (lo - edge)) / edge, 0.0, 1.0)
    down = np.clip(((hi + edge) - r) / edge, 0.0, 1.0)
    weight = (0.5 - 0.5 * np.cos(np.pi * up)) * (0.5 - 0.5 * np.cos(np.pi * down))
    x = np.real(np.fft.ifft2(np.fft.ifftshift(spec * weight)))
    return _standardize(x), GroundTruth("isotropic")
