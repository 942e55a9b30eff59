"""Core grid operations: centered spectra, windows, rotation, periodograms.

All images are 2-d float64 arrays indexed ``[row, col]``.  The image x-axis is
the column index and the y-axis is the row index.  Spectra use a centered
frequency layout where the bin at index ``(H // 2, W // 2)`` is DC and the
integer frequency offsets along an axis of length ``n`` run from ``-(n // 2)``
to ``(n - 1) // 2`` inclusive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "MIN_SIDE",
    "WindowSpec",
    "validate_image",
    "freq_coords",
    "window_field",
    "apply_window",
    "rotate_bilinear",
    "dft2",
    "periodogram",
    "reflect_centered",
]

MIN_SIDE = 8

WINDOW_KINDS = ("disk-hann", "none")


def validate_image(image) -> np.ndarray:
    """Coerce ``image`` to a float64 2-d array and check basic sanity.

    Raises
    ------
    ValueError
        If the array is not 2-d, smaller than ``MIN_SIDE`` on a side, or
        contains NaN/Inf samples.
    """
    x = np.asarray(image, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"expected a 2-d image, got array of shape {x.shape}")
    h, w = x.shape
    if h < MIN_SIDE or w < MIN_SIDE:
        raise ValueError(f"image too small: {h}x{w}, need at least {MIN_SIDE} per side")
    if not np.all(np.isfinite(x)):
        raise ValueError("image contains non-finite samples")
    return x


def freq_coords(n: int) -> np.ndarray:
    """Integer frequency offsets for an axis of length ``n``, centered layout."""
    return np.arange(n, dtype=np.float64) - (n // 2)


def reflect_centered(a: np.ndarray) -> np.ndarray:
    """Map every bin of a centered-layout array to its negated-frequency bin.

    Bins whose exact mirror falls off the grid (the leftmost row/column of an
    even-sized axis) map to themselves along that axis.
    """
    out = np.asarray(a)
    for axis, n in enumerate(out.shape):
        idx = (2 * (n // 2) - np.arange(n)) % n
        out = np.take(out, idx, axis=axis)
    return out


@dataclass(frozen=True)
class WindowSpec:
    """Spatial window applied before spectral estimation.

    kind "disk-hann" is a Hann profile over a centered disk of radius
    ``radius * min(H, W) / 2``; "none" disables windowing.
    """

    kind: str = "disk-hann"
    radius: float = 1.0

    def __post_init__(self):
        if self.kind not in WINDOW_KINDS:
            raise ValueError(f"unknown window kind {self.kind!r}, expected one of {WINDOW_KINDS}")
        if not (0.0 < self.radius <= 1.0):
            raise ValueError(f"window radius fraction must be in (0, 1], got {self.radius}")


def window_field(shape: tuple[int, int], window: WindowSpec = WindowSpec()) -> np.ndarray:
    """Evaluate the window weights on a pixel grid of the given shape."""
    h, w = shape
    if window.kind == "none":
        return np.ones((h, w))
    cy = (h - 1) / 2.0
    cx = (w - 1) / 2.0
    rad = window.radius * min(h, w) / 2.0
    yy = np.arange(h, dtype=np.float64)[:, None] - cy
    xx = np.arange(w, dtype=np.float64)[None, :] - cx
    r = np.hypot(xx, yy)
    field = 0.5 * (1.0 + np.cos(np.pi * r / rad))
    field[r > rad] = 0.0
    return field


def apply_window(image, window: WindowSpec = WindowSpec()) -> np.ndarray:
    x = validate_image(image)
    if window.kind == "none":
        return x.copy()
    return x * window_field(x.shape, window)


def rotate_bilinear(image, angle_deg: float) -> np.ndarray:
    """Rotate an image about its center by ``angle_deg`` degrees.

    The output at pixel ``u`` is the bilinear sample of the input at
    ``R(angle)^-1 (u - c) + c`` where ``c = ((W-1)/2, (H-1)/2)``; samples whose
    source coordinate falls outside the input domain are set to 0.  Content at
    spectral angle ``a`` moves to ``a + angle_deg``.

    Parameters
    ----------
    image : array_like
        2-d image.
    angle_deg : float
        Rotation angle in degrees, must lie in ``[0, 360)``.
    """
    x = validate_image(image)
    if not (0.0 <= angle_deg < 360.0):
        raise ValueError(f"rotation angle must be in [0, 360), got {angle_deg}")
    h, w = x.shape
    cy = (h - 1) / 2.0
    cx = (w - 1) / 2.0
    t = np.deg2rad(angle_deg)
    ct, st = np.cos(t), np.sin(t)
    dy = np.arange(h, dtype=np.float64)[:, None] - cy
    dx = np.arange(w, dtype=np.float64)[None, :] - cx
    # inverse rotation of the output offsets gives the source coordinate
    sx = ct * dx + st * dy + cx
    sy = -st * dx + ct * dy + cy

    # tolerate rounding residue (e.g. cos(pi) != -1 exactly) at the domain edge
    eps = 1e-9
    inside = (sx >= -eps) & (sx <= w - 1.0 + eps) & (sy >= -eps) & (sy <= h - 1.0 + eps)
    sx = np.clip(sx, 0.0, w - 1.0)
    sy = np.clip(sy, 0.0, h - 1.0)
    x0 = np.floor(sx)
    y0 = np.floor(sy)
    fx = sx - x0
    fy = sy - y0
    x0 = x0.astype(np.intp)
    y0 = y0.astype(np.intp)
    x0c = np.clip(x0, 0, w - 1)
    x1c = np.clip(x0 + 1, 0, w - 1)
    y0c = np.clip(y0, 0, h - 1)
    y1c = np.clip(y0 + 1, 0, h - 1)

    v00 = x[y0c, x0c]
    v01 = x[y0c, x1c]
    v10 = x[y1c, x0c]
    v11 = x[y1c, x1c]
    top = (1.0 - fx) * v00 + fx * v01
    bot = (1.0 - fx) * v10 + fx * v11
    out = (1.0 - fy) * top + fy * bot
    out[~inside] = 0.0
    return out


def dft2(image) -> np.ndarray:
    """Unnormalized forward 2-d DFT, re-indexed to the centered layout."""
    x = validate_image(image)
    return np.fft.fftshift(np.fft.fft2(x))


def periodogram(image, window: WindowSpec = WindowSpec()) -> np.ndarray:
    """Squared-magnitude spectrum of the windowed image, DC bin zeroed."""
    xw = apply_window(image, window)
    s = np.abs(dft2(xw)) ** 2
    h, w = s.shape
    s[h // 2, w // 2] = 0.0
    return s
