"""Angular registration of two rotated copies of an image.

The rotation angle between the two images is estimated from their principal
orientations; the inherent 180-degree ambiguity of spectral orientations is
resolved by comparing pixel-domain mean squared errors of the two candidate
angles.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .filterbank import FilterBank, make_filter_bank
from .profile import angular_profile, normalize_profile, principal_orientation
from .spectral import WindowSpec, rotate_bilinear, periodogram, validate_image

# fraction of the inscribed radius kept when comparing candidate rotations;
# pixels outside are rotation fill-in and would bias the comparison
MSE_RADIUS_FRACTION = 0.9

# below this peak-to-mean ratio a profile carries almost no orientation signal
ISOTROPY_RATIO = 1.05


@dataclass(frozen=True)
class RegistrationResult:
    """Outcome of registering two images.

    gamma_deg is the selected angle in [0, 360); candidates holds the two
    hypotheses (180 degrees apart) and mses their disk-masked errors.
    """

    gamma_deg: float
    candidates: tuple[float, float]
    mses: tuple[float, float]
    theta1_deg: float
    theta2_deg: float


def masked_mse(x1, x2, gamma_deg):
    """Mean squared error between x1 and x2 un-rotated by gamma_deg.

    The mean runs over the central disk of radius MSE_RADIUS_FRACTION times
    the inscribed radius, so fill-in pixels introduced by the rotation do not
    contribute.
    """
    x1 = validate_image(x1)
    x2 = validate_image(x2)
    if x1.shape != x2.shape:
        raise ValueError(f"image shapes differ: {x1.shape} vs {x2.shape}")
    back = rotate_bilinear(x2, (-float(gamma_deg)) % 360.0)
    h, w = x1.shape
    rows = np.arange(h, dtype=np.float64)[:, None] - (h - 1) / 2.0
    cols = np.arange(w, dtype=np.float64)[None, :] - (w - 1) / 2.0
    inside = rows * rows + cols * cols <= (MSE_RADIUS_FRACTION * min(h, w) / 2.0) ** 2
    diff = x1 - back
    return float(np.mean(diff[inside] ** 2))


def register(x1, x2, method="cake", window=WindowSpec(), n_angles=180,
             refine=True, bank=None, **bank_params):
    """Estimate the angle gamma in [0, 360) such that x2 is x1 rotated by gamma.

    A prebuilt ``bank`` (matching the image shape) skips bank construction;
    otherwise one is built from ``method``/``n_angles``/``bank_params``.
    Returns a RegistrationResult; near-isotropic inputs trigger a warning and
    an unreliable (but still formally computed) angle.
    """
    x1 = validate_image(x1)
    x2 = validate_image(x2)
    if x1.shape != x2.shape:
        raise ValueError(f"image shapes differ: {x1.shape} vs {x2.shape}")
    if bank is None:
        bank = make_filter_bank(method, x1.shape, n_angles, **bank_params)
    elif not isinstance(bank, FilterBank) or bank.shape != x1.shape:
        raise ValueError("prebuilt bank does not match the image shape")

    thetas = []
    for label, x in (("first", x1), ("second", x2)):
        prof = normalize_profile(angular_profile(periodogram(x, window), bank))
        ratio = float(prof.values.max()) * prof.n_angles
        if ratio < ISOTROPY_RATIO:
            warnings.warn(
                f"{label} image is nearly isotropic (peak-to-mean {ratio:.4f}); "
                "the registration angle is unreliable"
            )
        thetas.append(principal_orientation(prof, refine=refine).eta_deg)

    gamma1 = (thetas[1] - thetas[0]) % 360.0
    gamma2 = (gamma1 + 180.0) % 360.0
    mse1 = masked_mse(x1, x2, gamma1)
    mse2 = masked_mse(x1, x2, gamma2)
    gamma = gamma1 if mse1 <= mse2 else gamma2
    return RegistrationResult(
        gamma_deg=gamma,
        candidates=(gamma1, gamma2),
        mses=(mse1, mse2),
        theta1_deg=thetas[0],
        theta2_deg=thetas[1],
    )
