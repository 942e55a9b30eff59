"""Rotation-aware spectral analysis of oriented image content.

The pipeline: window an image, take its centered periodogram, integrate the
power over oriented spectral masks (cake wedges, Gaussian ridges, or hard
angular bins) into an angular profile on [0, 180), and read off the principal
orientation.  Rotating the image circularly shifts the profile, which is what
the registration and equivariance tooling builds on.
"""

from .filterbank import (
    METHODS,
    FilterBank,
    make_binning_bank,
    make_cake_bank,
    make_filter_bank,
    make_ridge_bank,
)
from .metrics import (
    MetricReport,
    angular_distance,
    profile_distance_db,
    profile_equivariance_error,
    reference_profile_for,
    registration_equivariance_error,
    von_mises_reference_profile,
)
from .profile import (
    AngularProfile,
    DegenerateProfileError,
    OrientationEstimate,
    angular_profile,
    circular_shift_profile,
    normalize_profile,
    principal_orientation,
)
from .registration import RegistrationResult, masked_mse, register
from .spectral import (
    WindowSpec,
    apply_window,
    dft2,
    freq_coords,
    periodogram,
    rotate_bilinear,
    validate_image,
    window_field,
)
from .synthgen import (
    GaborMixSpec,
    GroundTruth,
    gabor_atom,
    gabor_h,
    gen_gabor_image,
    gen_isotropic,
    gen_oriented_oscillation,
    sample_orientation_deg,
)

__version__ = "0.1.0"

__all__ = [
    "METHODS",
    "FilterBank",
    "make_binning_bank",
    "make_cake_bank",
    "make_filter_bank",
    "make_ridge_bank",
    "MetricReport",
    "angular_distance",
    "profile_distance_db",
    "profile_equivariance_error",
    "reference_profile_for",
    "registration_equivariance_error",
    "von_mises_reference_profile",
    "AngularProfile",
    "DegenerateProfileError",
    "OrientationEstimate",
    "angular_profile",
    "circular_shift_profile",
    "normalize_profile",
    "principal_orientation",
    "RegistrationResult",
    "masked_mse",
    "register",
    "WindowSpec",
    "apply_window",
    "dft2",
    "freq_coords",
    "periodogram",
    "rotate_bilinear",
    "validate_image",
    "window_field",
    "GaborMixSpec",
    "GroundTruth",
    "gabor_atom",
    "gabor_h",
    "gen_gabor_image",
    "gen_isotropic",
    "gen_oriented_oscillation",
    "sample_orientation_deg",
    "__version__",
]
