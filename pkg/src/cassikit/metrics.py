"""Reconstruction quality metrics and SNR-calibrated noise injection.

PSNR uses the peak of the reference cube and the *mean* squared error.
A zero-error comparison yields math.inf as the documented infinite-PSNR
sentinel; callers that serialize reports print it as "inf".

The acquisition SNR convention is 10*log10(mu/sigma), where mu is the mean
of the clean measurements and sigma the noise standard deviation (an
amplitude ratio inside 10*log10, kept exactly as conventionally defined
for this instrument class).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cube import HyperCube, MeasurementVector
from .errors import DomainError, SizeError


def _check_same_dims(reference: HyperCube, estimate: HyperCube):
    if reference.data.shape != estimate.data.shape:
        raise SizeError(f"cube shapes differ: {reference.data.shape} vs {estimate.data.shape}")


def psnr(reference: HyperCube, estimate: HyperCube) -> float:
    """10*log10(peak^2 / MSE) over all voxels; math.inf when MSE is 0."""
    _check_same_dims(reference, estimate)
    peak2 = float(np.max(reference.data**2))
    if peak2 == 0.0:
        raise DomainError("reference cube is identically zero")
    mse = float(np.mean((estimate.data - reference.data) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak2 / mse)


def band_psnr(reference: HyperCube, estimate: HyperCube) -> list[float]:
    """Per-band PSNR, with the peak taken within each band."""
    _check_same_dims(reference, estimate)
    out = []
    for lam in range(reference.bands):
        ref = reference.data[:, :, lam]
        est = estimate.data[:, :, lam]
        peak2 = float(np.max(ref**2))
        if peak2 == 0.0:
            raise DomainError(f"reference band {lam} is identically zero")
        mse = float(np.mean((est - ref) ** 2))
        out.append(math.inf if mse == 0.0 else 10.0 * math.log10(peak2 / mse))
    return out


@dataclass
class EvaluationReport:
    per_band_psnr: list[float]
    average_psnr: float
    # (x, y) -> (estimated L-vector, reference L-vector)
    signatures: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]]


def evaluate(reference: HyperCube, estimate: HyperCube,
             signature_pixels: list[tuple[int, int]] = ()) -> EvaluationReport:
    """Per-band PSNRs, their average, and spectral signatures at chosen pixels."""
    per_band = band_psnr(reference, estimate)
    finite = [p for p in per_band if math.isfinite(p)]
    average = math.inf if not finite else (
        math.inf if len(finite) < len(per_band) else sum(finite) / len(finite))
    sigs = {}
    for (x, y) in signature_pixels:
        if not (0 <= x < reference.m_rows and 0 <= y < reference.n_cols):
            raise DomainError(f"signature pixel ({x}, {y}) outside the cube")
        sigs[(x, y)] = (estimate.data[x, y, :].copy(), reference.data[x, y, :].copy())
    return EvaluationReport(per_band, average, sigs)


def noise_sigma_for_snr(clean_measurements: MeasurementVector, snr_db: float) -> float:
    """Noise standard deviation achieving the requested SNR in dB."""
    mu = float(np.mean(clean_measurements.values))
    if mu <= 0:
        raise DomainError(f"mean measurement must be positive for SNR calibration, got {mu}")
    return mu / (10.0 ** (snr_db / 10.0))


def add_gaussian_noise(g: MeasurementVector, sigma: float, seed: int) -> MeasurementVector:
    """Seeded i.i.d. zero-mean Gaussian noise of standard deviation sigma."""
    if sigma < 0:
        raise DomainError(f"noise sigma must be nonnegative, got {sigma}")
    if sigma == 0:
        return g
    rng = np.random.default_rng(seed)
    return MeasurementVector(g.values + sigma * rng.standard_normal(len(g)))
