"""Subband-adaptive Wiener shrinkage and its averaged derivative.

Statistics are pooled globally within each (spectral index, wavelet subband)
group: every coefficient is shrunk toward its group mean with gain

    gain = max(0, v - sigma2) / v

where v is the biased group variance and sigma2 the scalar-channel noise
estimate. The derivative of the shrinkage with respect to its input, with
the group statistics held fixed, is exactly that gain; averaging it over
all coefficients gives the correction scalar the solver feeds back into
the residual update.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cube import HyperCube
from .errors import DomainError
from .transform import (CoefficientCube, SubbandLayout, TransformSpec,
                        analyze, subband_layout, synthesize)


@dataclass(frozen=True, eq=False)
class SubbandStats:
    """Per-group empirical means and biased variances of coefficients."""

    means: np.ndarray      # (G,)
    variances: np.ndarray  # (G,), always >= 0
    layout: SubbandLayout

    def gains(self, sigma2: float) -> np.ndarray:
        """Per-group shrinkage gain max(0, v - sigma2)/v, in [0, 1]."""
        if sigma2 < 0:
            raise DomainError(f"noise variance must be nonnegative, got {sigma2}")
        v = self.variances
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.where(v > 0, np.maximum(0.0, v - sigma2) / np.where(v > 0, v, 1.0), 0.0)
        return g


def subband_stats(coeffs: CoefficientCube, layout: SubbandLayout) -> SubbandStats:
    """Empirical mean and biased (divide-by-count) variance per group."""
    ids = layout.group_ids().ravel()
    vals = coeffs.data.ravel()
    counts = np.bincount(ids, minlength=layout.n_groups).astype(np.float64)
    sums = np.bincount(ids, weights=vals, minlength=layout.n_groups)
    means = sums / counts
    sq = np.bincount(ids, weights=vals * vals, minlength=layout.n_groups)
    variances = np.maximum(0.0, sq / counts - means**2)
    return SubbandStats(means, variances, layout)


def wiener_shrink(coeffs: CoefficientCube, stats: SubbandStats, sigma2: float) -> CoefficientCube:
    """Affine shrinkage of each coefficient toward its group mean."""
    gains = stats.gains(sigma2)
    ids = stats.layout.group_ids()
    out = gains[ids] * (coeffs.data - stats.means[ids]) + stats.means[ids]
    return CoefficientCube(out, coeffs.spec)


def onsager_average(stats: SubbandStats, sigma2: float, layout: SubbandLayout) -> float:
    """Mean shrinkage gain over all n coefficients; always in [0, 1]."""
    gains = stats.gains(sigma2)
    sizes = layout.group_sizes()
    return float(np.dot(gains, sizes) / sizes.sum())


def denoise_cube(q: HyperCube, sigma2: float, spec: TransformSpec) -> tuple[HyperCube, float]:
    """Denoise a noisy cube; returns (denoised cube, averaged derivative)."""
    if sigma2 < 0:
        raise DomainError(f"noise variance must be nonnegative, got {sigma2}")
    layout = subband_layout(spec)
    coeffs = analyze(q, spec)
    stats = subband_stats(coeffs, layout)
    shrunk = wiener_shrink(coeffs, stats, sigma2)
    return synthesize(shrunk), onsager_average(stats, sigma2, layout)
