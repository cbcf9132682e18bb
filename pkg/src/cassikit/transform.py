"""Orthonormal sparsifying transform: 2D wavelet per band, DCT across bands.

The transform is separable: a J-level 2D orthonormal discrete wavelet
transform (Haar or Daubechies-4 with periodic extension) is applied to each
spectral band, then an orthonormal DCT-II runs along the spectral axis at
every spatial-frequency location. Both stages are orthonormal, so the
composition is an isometry and the inverse is the transpose.

Coefficients use the standard nested layout: after level j, the quadrant
[0:M/2^j, 0:N/2^j] holds the approximation; detail subbands live in the
three sibling quadrants of each level.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.fft import dct, idct

from .cube import HyperCube
from .errors import DomainError, SizeError

_SQRT3 = np.sqrt(3.0)

_FILTERS = {
    "haar": np.array([1.0, 1.0]) / np.sqrt(2.0),
    "db4": np.array([1.0 + _SQRT3, 3.0 + _SQRT3, 3.0 - _SQRT3, 1.0 - _SQRT3])
    / (4.0 * np.sqrt(2.0)),
}


class WaveletFamily(enum.Enum):
    HAAR = "haar"
    DAUBECHIES4 = "db4"


@dataclass(frozen=True)
class TransformSpec:
    wavelet: WaveletFamily = WaveletFamily.HAAR
    levels: int = 3
    m_rows: int = 0
    n_cols: int = 0
    bands: int = 0

    def __post_init__(self):
        if self.levels < 1:
            raise DomainError("at least one wavelet level is required")
        step = 1 << self.levels
        for dim, name in ((self.m_rows, "rows"), (self.n_cols, "cols")):
            if dim <= 0 or dim % step:
                raise DomainError(
                    f"{name}={dim} must be a positive multiple of 2^levels={step}")
        if self.bands <= 0:
            raise DomainError("bands must be positive")

    @property
    def n_subbands(self) -> int:
        return 3 * self.levels + 1

    @property
    def n_groups(self) -> int:
        return self.bands * self.n_subbands


@dataclass(frozen=True, eq=False)
class CoefficientCube:
    """Transform coefficients, same (M, N, L) shape as the source cube."""

    data: np.ndarray
    spec: TransformSpec

    def __post_init__(self):
        object.__setattr__(self, "data", np.ascontiguousarray(self.data, dtype=np.float64))


def _check_dims(shape, spec: TransformSpec):
    if shape != (spec.m_rows, spec.n_cols, spec.bands):
        raise SizeError(f"cube shape {shape} does not match transform spec "
                        f"({spec.m_rows}, {spec.n_cols}, {spec.bands})")


def _dwt_step(a: np.ndarray, h: np.ndarray, axis: int) -> np.ndarray:
    """One periodic analysis step along ``axis``; low half then high half."""
    n = a.shape[axis]
    half = n // 2
    taps = h.size
    lo = np.zeros_like(np.take(a, range(half), axis=axis))
    hi = np.zeros_like(lo)
    k = np.arange(half)
    for m in range(taps):
        idx = (2 * k + m) % n
        piece = np.take(a, idx, axis=axis)
        lo += h[m] * piece
        # quadrature mirror: g[m] = (-1)^m h[taps-1-m]
        hi += ((-1) ** m) * h[taps - 1 - m] * piece
    return np.concatenate([lo, hi], axis=axis)


def _idwt_step(a: np.ndarray, h: np.ndarray, axis: int) -> np.ndarray:
    """Transpose of _dwt_step (exact inverse by orthonormality)."""
    n = a.shape[axis]
    half = n // 2
    taps = h.size
    lo = np.take(a, range(half), axis=axis)
    hi = np.take(a, range(half, n), axis=axis)
    out = np.zeros_like(a)
    mov = np.moveaxis(out, axis, 0)
    lo_m = np.moveaxis(lo, axis, 0)
    hi_m = np.moveaxis(hi, axis, 0)
    k = np.arange(half)
    for m in range(taps):
        idx = (2 * k + m) % n
        mov[idx] += h[m] * lo_m + ((-1) ** m) * h[taps - 1 - m] * hi_m
    return out


def _dwt2(data: np.ndarray, spec: TransformSpec) -> np.ndarray:
    """J-level 2D DWT on axes (0, 1); the band axis rides along as a batch."""
    h = _FILTERS[spec.wavelet.value]
    out = np.array(data, dtype=np.float64)
    m, n = spec.m_rows, spec.n_cols
    for _ in range(spec.levels):
        block = _dwt_step(out[:m, :n], h, axis=0)
        out[:m, :n] = _dwt_step(block, h, axis=1)
        m //= 2
        n //= 2
    return out


def _idwt2(data: np.ndarray, spec: TransformSpec) -> np.ndarray:
    h = _FILTERS[spec.wavelet.value]
    out = np.array(data, dtype=np.float64)
    m = spec.m_rows >> spec.levels
    n = spec.n_cols >> spec.levels
    for _ in range(spec.levels):
        m *= 2
        n *= 2
        block = _idwt_step(out[:m, :n], h, axis=1)
        out[:m, :n] = _idwt_step(block, h, axis=0)
    return out


def analyze(cube: HyperCube, spec: TransformSpec) -> CoefficientCube:
    """Forward transform: per-band 2D DWT, then orthonormal DCT-II over bands."""
    _check_dims(cube.data.shape, spec)
    coeffs = _dwt2(cube.data, spec)
    coeffs = dct(coeffs, type=2, norm="ortho", axis=2)
    return CoefficientCube(coeffs, spec)


def synthesize(coeffs: CoefficientCube) -> HyperCube:
    """Inverse transform (transpose of ``analyze``)."""
    spec = coeffs.spec
    _check_dims(coeffs.data.shape, spec)
    data = idct(coeffs.data, type=2, norm="ortho", axis=2)
    return HyperCube(_idwt2(data, spec))


@dataclass(frozen=True, eq=False)
class SubbandLayout:
    """Partition of coefficient indices into (spectral index, subband) groups.

    Subband labels within a 2D plane: 0 is the coarsest approximation LL_J;
    detail subbands at depth j (j = J coarsest ... 1 finest) get labels
    3*(J-j)+1 (low-rows/high-cols), +2 (high-rows/low-cols), +3 (both high).
    The group id of a coefficient at (x, y, lam) is
    lam * (3J+1) + label(x, y); ids are contiguous in 0..L*(3J+1)-1.
    """

    spec: TransformSpec
    labels: np.ndarray  # (M, N) int subband label per spatial location

    @property
    def n_groups(self) -> int:
        return self.spec.n_groups

    def group_ids(self) -> np.ndarray:
        """(M, N, L) array of group ids."""
        nb = self.spec.n_subbands
        lam = np.arange(self.spec.bands)
        return lam[None, None, :] * nb + self.labels[:, :, None]

    def group_sizes(self) -> np.ndarray:
        return np.bincount(self.group_ids().ravel(), minlength=self.n_groups)

    def groups(self):
        """Flat band-major index arrays, one per group id (test/inspection)."""
        ids = self.group_ids().transpose(2, 1, 0).ravel()
        order = np.argsort(ids, kind="stable")
        bounds = np.searchsorted(ids[order], np.arange(self.n_groups + 1))
        return [order[bounds[i]:bounds[i + 1]] for i in range(self.n_groups)]


@lru_cache(maxsize=8)
def subband_layout(spec: TransformSpec) -> SubbandLayout:
    """Deterministic subband partition for a transform spec."""
    labels = np.zeros((spec.m_rows, spec.n_cols), dtype=np.int64)
    J = spec.levels
    for depth in range(1, J + 1):
        m2 = spec.m_rows >> depth
        n2 = spec.n_cols >> depth
        base = 3 * (J - depth) + 1
        labels[:m2, n2:2 * n2] = base
        labels[m2:2 * m2, :n2] = base + 1
        labels[m2:2 * m2, n2:2 * n2] = base + 2
    labels.flags.writeable = False
    return SubbandLayout(spec, labels)
