"""Core data types: spectral image cubes, coded apertures, measurement vectors.

Linearization convention
------------------------
A cube of spatial size M x N with L spectral bands is flattened band-major:
the flat index of voxel (x, y, lam) is

    i = lam * M * N + y * M + x

i.e. the band index lam is outermost, then the column y, then the row x.
Each 2D band is therefore contiguous in the flat vector. Internally cubes
are stored as a (M, N, L) float64 array; ``flat()`` and ``make_cube()``
convert to and from the canonical ordering above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SizeError, ValidationError


def _as_readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class HyperCube:
    """M x N x L spectral image cube, immutable after construction."""

    data: np.ndarray  # shape (M, N, L), axes (x, y, lam)

    def __post_init__(self):
        if self.data.ndim != 3:
            raise SizeError(f"cube array must be 3D, got {self.data.ndim}D")
        object.__setattr__(self, "data", _as_readonly(self.data))

    @property
    def m_rows(self) -> int:
        return self.data.shape[0]

    @property
    def n_cols(self) -> int:
        return self.data.shape[1]

    @property
    def bands(self) -> int:
        return self.data.shape[2]

    @property
    def size(self) -> int:
        return self.data.size

    def flat(self) -> np.ndarray:
        """Band-major flat vector (lam outermost, then y, then x)."""
        return self.data.transpose(2, 1, 0).ravel()

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))


@dataclass(frozen=True, eq=False)
class CodedAperture:
    """Binary M x N transmission mask: 1 = open, 0 = opaque."""

    mask: np.ndarray  # shape (M, N), uint8

    def __post_init__(self):
        m = np.asarray(self.mask)
        if m.ndim != 2:
            raise SizeError(f"aperture mask must be 2D, got {m.ndim}D")
        if not np.isin(m, (0, 1)).all():
            raise ValidationError("aperture mask entries must be 0 or 1")
        m = np.ascontiguousarray(m, dtype=np.uint8)
        m.flags.writeable = False
        object.__setattr__(self, "mask", m)

    @property
    def m_rows(self) -> int:
        return self.mask.shape[0]

    @property
    def n_cols(self) -> int:
        return self.mask.shape[1]


@dataclass(frozen=True, eq=False)
class MeasurementVector:
    """Flat FPA measurement vector.

    Layout: shot-major, then FPA row x, then FPA column j. For shot k the
    value at FPA pixel (x, j) sits at index k*M*C + x*C + j, where C is the
    number of FPA columns (N+L-1 standard, N+L+1 higher order).
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise SizeError("measurement vector must be 1D")
        object.__setattr__(self, "values", _as_readonly(v))

    def __len__(self) -> int:
        return self.values.size


def make_cube(m_rows: int, n_cols: int, bands: int, values) -> HyperCube:
    """Build a validated cube from band-major flat values."""
    if m_rows <= 0 or n_cols <= 0 or bands <= 0:
        raise DomainError("cube dimensions must be positive")
    v = np.asarray(values, dtype=np.float64)
    n = m_rows * n_cols * bands
    if v.size != n:
        raise SizeError(f"expected {n} values for {m_rows}x{n_cols}x{bands} cube, got {v.size}")
    if not np.isfinite(v).all():
        raise ValidationError("cube values must be finite")
    data = v.reshape(bands, n_cols, m_rows).transpose(2, 1, 0)
    return HyperCube(data)


def cube_from_array(data: np.ndarray) -> HyperCube:
    """Build a cube from an (M, N, L) array, validating finiteness."""
    data = np.asarray(data, dtype=np.float64)
    if not np.isfinite(data).all():
        raise ValidationError("cube values must be finite")
    return HyperCube(data)


def flat_index(m_rows: int, n_cols: int, x: int, y: int, lam: int) -> int:
    """Canonical band-major flat index of voxel (x, y, lam)."""
    return lam * m_rows * n_cols + y * m_rows + x


def random_aperture(m_rows: int, n_cols: int, open_fraction: float, seed: int) -> CodedAperture:
    """I.i.d. Bernoulli(open_fraction) mask from a seeded PCG64 generator.

    The same seed always reproduces the same mask bit-for-bit.
    """
    if m_rows <= 0 or n_cols <= 0:
        raise DomainError("aperture dimensions must be positive")
    if not 0.0 <= open_fraction <= 1.0:
        raise DomainError(f"open_fraction must be in [0, 1], got {open_fraction}")
    rng = np.random.default_rng(seed)
    mask = (rng.random((m_rows, n_cols)) < open_fraction).astype(np.uint8)
    return CodedAperture(mask)


def complement(aperture: CodedAperture) -> CodedAperture:
    """Pointwise complement: open becomes opaque and vice versa."""
    return CodedAperture(1 - aperture.mask)


def _is_pow2(k: int) -> bool:
    return k > 0 and (k & (k - 1)) == 0


def crop_dyadic(cube: HyperCube, target_m: int, target_n: int) -> HyperCube:
    """Top-left spatial crop to a power-of-two size (wavelet-compatible)."""
    if not _is_pow2(target_m) or not _is_pow2(target_n):
        raise DomainError(f"crop targets must be powers of two, got {target_m}x{target_n}")
    if target_m > cube.m_rows or target_n > cube.n_cols:
        raise DomainError("crop targets exceed the source dimensions")
    return HyperCube(cube.data[:target_m, :target_n, :])
