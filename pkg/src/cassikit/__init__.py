"""Compressive hyperspectral imaging: CASSI simulation and AMP reconstruction.

The dispersion kernels run through a compiled Cython extension when it was
built, falling back to pure numpy otherwise; ``cassikit.backend.BACKEND``
names the active one.
"""

from .backend import BACKEND
from .cube import (CodedAperture, HyperCube, MeasurementVector, complement,
                   crop_dyadic, make_cube, random_aperture)
from .metrics import add_gaussian_noise, band_psnr, noise_sigma_for_snr, psnr
from .operator import (CassiModel, Order, adjoint, column_norm_squares, densify,
                       forward, measurement_count, measurement_rate)
from .solver import IterationReport, SolverConfig, run_amp
from .transform import (CoefficientCube, SubbandLayout, TransformSpec,
                        WaveletFamily, analyze, subband_layout, synthesize)
from .wiener import SubbandStats, denoise_cube, onsager_average, subband_stats, wiener_shrink

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CodedAperture", "HyperCube", "MeasurementVector", "complement",
    "crop_dyadic", "make_cube", "random_aperture", "add_gaussian_noise",
    "band_psnr", "noise_sigma_for_snr", "psnr", "CassiModel", "Order", "adjoint",
    "column_norm_squares", "densify", "forward", "measurement_count",
    "measurement_rate", "IterationReport", "SolverConfig", "run_amp",
    "CoefficientCube", "SubbandLayout", "TransformSpec", "WaveletFamily",
    "analyze", "subband_layout", "synthesize", "SubbandStats", "denoise_cube",
    "onsager_average", "subband_stats", "wiener_shrink",
]
