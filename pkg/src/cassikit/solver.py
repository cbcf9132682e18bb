"""Damped AMP reconstruction loop with the subband Wiener denoiser.

Per iteration: corrected residual (with the averaged-derivative feedback
scaled by 1/R, R = m/n), residual damping, scalar channel q = H^T r + f,
noise estimate sigma2 = ||r||^2 / m, denoise, estimate damping. Both
damping steps share the same weight alpha. Initial state f = 0, r = 0, so
the feedback term vanishes at the first iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cube import HyperCube, MeasurementVector
from .errors import DivergenceError, DomainError, SizeError
from .metrics import psnr
from .operator import CassiModel, adjoint, forward, measurement_count
from .transform import TransformSpec
from .wiener import denoise_cube

# sigma2 blow-up factor over its first value that declares divergence
DIVERGENCE_FACTOR = 1e3


@dataclass(frozen=True)
class SolverConfig:
    transform: TransformSpec
    damping: float = 0.2
    max_iters: int = 400
    record_trace: bool = True
    # optional plateau stop: relative sigma2 change < plateau_tol over
    # plateau_window consecutive iterations; disabled by default
    plateau_stop: bool = False
    plateau_tol: float = 1e-6
    plateau_window: int = 10

    def __post_init__(self):
        if not 0.0 < self.damping <= 1.0:
            raise DomainError(f"damping must be in (0, 1], got {self.damping}")
        if self.max_iters < 1:
            raise DomainError("max_iters must be positive")


@dataclass
class IterationReport:
    """Per-iteration diagnostics; PSNR only when ground truth was supplied."""

    sigma2: list[float] = field(default_factory=list)
    onsager: list[float] = field(default_factory=list)
    psnr: list[float] = field(default_factory=list)
    iterations: int = 0


def estimate_noise_variance(r: MeasurementVector | np.ndarray) -> float:
    """Mean squared residual entry."""
    v = r.values if isinstance(r, MeasurementVector) else np.asarray(r)
    return float(np.mean(v * v))


def damp(new_value: np.ndarray, old_value: np.ndarray, alpha: float) -> np.ndarray:
    """Convex blend alpha*new + (1-alpha)*old."""
    new_value = np.asarray(new_value, dtype=np.float64)
    old_value = np.asarray(old_value, dtype=np.float64)
    if new_value.shape != old_value.shape:
        raise SizeError(f"damp shape mismatch: {new_value.shape} vs {old_value.shape}")
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"damping weight must be in (0, 1], got {alpha}")
    return alpha * new_value + (1.0 - alpha) * old_value


def residual_step(model: CassiModel, g: MeasurementVector, f_t: HyperCube,
                  r_prev: np.ndarray, onsager_prev: float, rate: float) -> np.ndarray:
    """Residual with the derivative feedback: g - H f + (1/R) * r_prev * <eta'>."""
    if rate <= 0:
        raise DomainError(f"measurement rate must be positive, got {rate}")
    hf = forward(model, f_t).values
    if hf.shape != g.values.shape or r_prev.shape != g.values.shape:
        raise SizeError("residual_step operand lengths disagree")
    return g.values - hf + (onsager_prev / rate) * r_prev


def run_amp(model: CassiModel, g: MeasurementVector, config: SolverConfig,
            ground_truth: HyperCube | None = None) -> tuple[HyperCube, IterationReport]:
    """Run the full damped iteration; returns the estimate and its trace."""
    m = measurement_count(model)
    if len(g) != m:
        raise SizeError(f"expected {m} measurements, got {len(g)}")
    spec = config.transform
    if (spec.m_rows, spec.n_cols, spec.bands) != (model.m_rows, model.n_cols, model.bands):
        raise SizeError("transform spec dimensions do not match the model")

    rate = m / model.n_voxels
    alpha = config.damping
    f = np.zeros((model.m_rows, model.n_cols, model.bands))
    r = np.zeros(m)
    onsager_prev = 0.0
    sigma2_first = None
    prev_sigma2 = None
    report = IterationReport()
    plateau_run = 0

    for t in range(1, config.max_iters + 1):
        r_new = residual_step(model, g, HyperCube(f), r, onsager_prev, rate)
        r = damp(r_new, r, alpha)
        q = adjoint(model, MeasurementVector(r)).data + f
        sigma2 = estimate_noise_variance(MeasurementVector(r))

        if not np.isfinite(sigma2):
            raise DivergenceError(t, f"non-finite noise estimate at iteration {t}")
        if sigma2_first is None:
            sigma2_first = sigma2
        elif sigma2_first > 0 and sigma2 > DIVERGENCE_FACTOR * sigma2_first:
            raise DivergenceError(
                t, f"noise estimate grew {sigma2 / sigma2_first:.1e}-fold by iteration {t}")

        denoised, onsager_prev = denoise_cube(HyperCube(q), sigma2, spec)
        f = damp(denoised.data, f, alpha)
        if not np.isfinite(f).all():
            raise DivergenceError(t, f"non-finite estimate at iteration {t}")

        report.iterations = t
        if config.record_trace:
            report.sigma2.append(sigma2)
            report.onsager.append(onsager_prev)
            if ground_truth is not None:
                report.psnr.append(psnr(ground_truth, HyperCube(f)))

        if config.plateau_stop and prev_sigma2 is not None and prev_sigma2 > 0:
            if abs(sigma2 - prev_sigma2) / prev_sigma2 < config.plateau_tol:
                plateau_run += 1
                if plateau_run >= config.plateau_window:
                    break
            else:
                plateau_run = 0
        prev_sigma2 = sigma2

    return HyperCube(f), report
