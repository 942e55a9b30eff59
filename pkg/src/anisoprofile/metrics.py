"""Evaluation metrics: angular distances, profile distances in dB, reference
profiles, and rotation-equivariance errors."""

from dataclasses import dataclass, field

import numpy as np

from .filterbank import make_filter_bank
from .profile import (
    AngularProfile,
    angular_profile,
    circular_shift_profile,
    normalize_profile,
    principal_orientation,
)
from .registration import register
from .spectral import WindowSpec, periodogram, rotate_bilinear, validate_image

# -10*log10 of the clamped MSE floor 1e-30
DB_CAP = 300.0
MSE_FLOOR = 1e-30


@dataclass(frozen=True)
class MetricReport:
    """Mean/std summary of one metric for one method."""

    method: str
    metric: str
    mean: float
    std: float
    n: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"sample count must be >= 1, got {self.n}")
        if not (self.std >= 0.0):
            raise ValueError(f"standard deviation must be >= 0, got {self.std}")


def angular_distance(a, b, period=180.0):
    """Circular distance between two angles, in [0, period/2]."""
    if period not in (180.0, 360.0):
        raise ValueError(f"period must be 180 or 360 degrees, got {period}")
    d = abs(float(a) - float(b)) % period
    return min(d, period - d)


def profile_distance_db(estimated: AngularProfile, reference: AngularProfile):
    """-10*log10 of the mean squared error between two normalized profiles.

    Larger is better; exact matches are clamped at 300 dB.
    """
    if estimated.n_angles != reference.n_angles:
        raise ValueError(
            f"profile lengths differ: {estimated.n_angles} vs {reference.n_angles}"
        )
    if not (estimated.normalized and reference.normalized):
        raise ValueError("profile_distance_db requires sum-normalized profiles")
    mse = float(np.mean((estimated.values - reference.values) ** 2))
    return -10.0 * np.log10(max(mse, MSE_FLOOR))


def von_mises_reference_profile(mu_deg, sigma, n_angles=180) -> AngularProfile:
    """Doubled-angle von Mises density on the half-circle grid, sum 1.

    The density is proportional to exp(sigma * cos(2*(theta - mu))); sigma 0
    gives the uniform profile.
    """
    if sigma < 0.0:
        raise ValueError(f"concentration must be >= 0, got {sigma}")
    theta = np.arange(n_angles, dtype=np.float64) * (180.0 / n_angles)
    # subtracting the max exponent keeps large concentrations finite
    log_density = sigma * (np.cos(2.0 * np.deg2rad(theta - mu_deg)) - 1.0)
    values = np.exp(log_density)
    return AngularProfile(values / values.sum(), normalized=True)


def reference_profile_for(truth, n_angles=180) -> AngularProfile:
    """Ground-truth angular profile for a generated image's descriptor."""
    if truth.kind == "isotropic":
        values = np.full(n_angles, 1.0 / n_angles)
        return AngularProfile(values, normalized=True)
    if truth.kind == "single-angle":
        spacing = 180.0 / n_angles
        values = np.zeros(n_angles)
        values[int(round(truth.angle_deg / spacing)) % n_angles] = 1.0
        return AngularProfile(values, normalized=True)
    if truth.kind == "von-mises":
        return von_mises_reference_profile(truth.mu_deg, truth.sigma, n_angles)
    raise ValueError(f"unknown ground-truth kind: {truth.kind!r}")


def _stratified_angles(rng, trials, span):
    """One angle per equal sector of [0, span), jittered within its sector."""
    jitter = rng.uniform(0.0, 1.0, size=trials)
    return (np.arange(trials) + jitter) * (span / trials)


def profile_equivariance_error(image, method="cake", trials=36, rng=None,
                               n_angles=180, window=WindowSpec(), bank=None,
                               **bank_params):
    """How well rotating the image shifts its profile, in dB (higher better).

    Per trial a rotation angle is drawn from [0, 180); the profile of the
    rotated image is compared against the circularly shifted profile of the
    original.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    x = validate_image(image)
    if rng is None:
        rng = np.random.default_rng(0)
    if bank is None:
        bank = make_filter_bank(method, x.shape, n_angles, **bank_params)
    base = normalize_profile(angular_profile(periodogram(x, window), bank))
    scores = []
    for alpha in _stratified_angles(rng, trials, 180.0):
        rotated = rotate_bilinear(x, float(alpha))
        prof = normalize_profile(angular_profile(periodogram(rotated, window), bank))
        shifted = circular_shift_profile(base, float(alpha))
        scores.append(profile_distance_db(prof, shifted))
    scores = np.asarray(scores)
    return MetricReport(
        method=method,
        metric="profile_equivariance_db",
        mean=float(scores.mean()),
        std=float(scores.std()),
        n=trials,
        params={"n_angles": bank.n_angles, "trials": trials},
    )


def registration_equivariance_error(x1, x2, method="cake", trials=36, rng=None,
                                    n_angles=180, window=WindowSpec(), bank=None,
                                    **bank_params):
    """Stability of the registration angle under a common random rotation.

    Reports the mean/std angular distance (period 360) between the baseline
    registration of (x1, x2) and the registration of the rotated pair.
    Failing trials (degenerate profiles) are excluded and counted in params.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    a = validate_image(x1)
    b = validate_image(x2)
    if rng is None:
        rng = np.random.default_rng(0)
    if bank is None:
        bank = make_filter_bank(method, a.shape, n_angles, **bank_params)
    gamma0 = register(a, b, window=window, bank=bank).gamma_deg
    errors = []
    failures = 0
    for alpha in _stratified_angles(rng, trials, 360.0):
        try:
            res = register(rotate_bilinear(a, float(alpha)),
                           rotate_bilinear(b, float(alpha)),
                           window=window, bank=bank)
        except ValueError:
            failures += 1
            continue
        errors.append(angular_distance(res.gamma_deg, gamma0, 360.0))
    if not errors:
        raise ValueError(f"all {trials} registration trials failed")
    errors = np.asarray(errors)
    return MetricReport(
        method=method,
        metric="registration_equivariance_deg",
        mean=float(errors.mean()),
        std=float(errors.std()),
        n=len(errors),
        params={"n_angles": bank.n_angles, "trials": trials, "failures": failures},
    )
