"""Matrix-free forward/adjoint operator for standard and higher-order CASSI.

The forward model codes each spectral band with a binary aperture, shifts
band ``lam`` by ``lam`` columns along y (unit dispersion per band), and sums
onto the FPA. Higher-order mode spreads each coded voxel over three adjacent
FPA columns with configurable weights and a one-column guard on each side,
so one shot yields M*(N+L+1) measurements instead of M*(N+L-1).

The dense matrix is never formed on the main path; ``densify`` exists only
as a small-scale test oracle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .cube import CodedAperture, HyperCube, MeasurementVector
from .errors import DomainError, SizeError, ValidationError

DEFAULT_HIGHER_ORDER_WEIGHTS = (0.25, 0.5, 0.25)

_DENSIFY_GUARD = 10**6


class Order(enum.Enum):
    STANDARD = "standard"
    HIGHER_ORDER = "higher-order"


@dataclass(frozen=True)
class CassiModel:
    """Acquisition description: K shots, model order, dispersion along y."""

    m_rows: int
    n_cols: int
    bands: int
    shots: tuple[CodedAperture, ...]
    order: Order = Order.STANDARD
    higher_order_weights: tuple[float, float, float] = DEFAULT_HIGHER_ORDER_WEIGHTS

    def __post_init__(self):
        if min(self.m_rows, self.n_cols, self.bands) <= 0:
            raise DomainError("model dimensions must be positive")
        if len(self.shots) < 1:
            raise DomainError("at least one shot is required")
        object.__setattr__(self, "shots", tuple(self.shots))
        for ap in self.shots:
            if (ap.m_rows, ap.n_cols) != (self.m_rows, self.n_cols):
                raise SizeError(
                    f"aperture {ap.m_rows}x{ap.n_cols} does not match model "
                    f"{self.m_rows}x{self.n_cols}")
        w = self.higher_order_weights
        if len(w) != 3 or any(wi < 0 for wi in w):
            raise DomainError("higher-order weights must be 3 nonnegative reals")
        if self.order is Order.HIGHER_ORDER and abs(sum(w) - 1.0) > 1e-12:
            raise ValidationError(f"higher-order weights must sum to 1, got {sum(w)}")

    @property
    def n_shots(self) -> int:
        return len(self.shots)

    @property
    def fpa_cols(self) -> int:
        extra = 1 if self.order is Order.HIGHER_ORDER else -1
        return self.n_cols + self.bands + extra

    @property
    def n_voxels(self) -> int:
        return self.m_rows * self.n_cols * self.bands

    def masks_array(self) -> np.ndarray:
        return np.ascontiguousarray(
            np.stack([ap.mask for ap in self.shots]).astype(np.float64))


def measurement_count(model: CassiModel) -> int:
    """Total FPA pixels over K shots: K*M*(N+L-1) or K*M*(N+L+1)."""
    return model.n_shots * model.m_rows * model.fpa_cols


def measurement_rate(model: CassiModel) -> float:
    """m/n, the ratio of measurements to voxels."""
    return measurement_count(model) / model.n_voxels


def forward(model: CassiModel, cube: HyperCube) -> MeasurementVector:
    """Apply the acquisition operator: code, disperse, project onto the FPA."""
    if (cube.m_rows, cube.n_cols, cube.bands) != (model.m_rows, model.n_cols, model.bands):
        raise SizeError(
            f"cube {cube.m_rows}x{cube.n_cols}x{cube.bands} does not match model "
            f"{model.m_rows}x{model.n_cols}x{model.bands}")
    masks = model.masks_array()
    data = np.ascontiguousarray(cube.data)
    out = np.empty((model.n_shots, model.m_rows, model.fpa_cols))
    if model.order is Order.STANDARD:
        kernels.forward_standard(masks, data, out)
    else:
        w = np.asarray(model.higher_order_weights, dtype=np.float64)
        kernels.forward_higher(masks, data, w, out)
    return MeasurementVector(out.ravel())


def adjoint(model: CassiModel, g: MeasurementVector) -> HyperCube:
    """Exact transpose of ``forward`` under the standard inner products."""
    m = measurement_count(model)
    if len(g) != m:
        raise SizeError(f"expected {m} measurements, got {len(g)}")
    masks = model.masks_array()
    g3 = np.ascontiguousarray(
        g.values.reshape(model.n_shots, model.m_rows, model.fpa_cols))
    out = np.empty((model.m_rows, model.n_cols, model.bands))
    if model.order is Order.STANDARD:
        kernels.adjoint_standard(masks, g3, out)
    else:
        w = np.asarray(model.higher_order_weights, dtype=np.float64)
        kernels.adjoint_higher(masks, g3, w, out)
    return HyperCube(out)


def column_norm_squares(model: CassiModel) -> HyperCube:
    """Squared column norms of the operator, voxel-wise.

    A voxel at (x, y, lam) contributes to shot k only when T_k(x, y) = 1,
    with a single unit entry (standard) or the three dispersion weights
    (higher order), so the squared norm is independent of lam.
    """
    open_count = np.zeros((model.m_rows, model.n_cols))
    for ap in model.shots:
        open_count += ap.mask
    if model.order is Order.STANDARD:
        per_open = 1.0
    else:
        per_open = float(sum(w * w for w in model.higher_order_weights))
    norms2 = np.repeat((per_open * open_count)[:, :, None], model.bands, axis=2)
    return HyperCube(norms2)


def densify(model: CassiModel) -> np.ndarray:
    """Explicit m x n matrix of the operator, via unit-impulse probing.

    Test oracle only; refuses to build anything above 10^6 entries.
    """
    m = measurement_count(model)
    n = model.n_voxels
    if m * n > _DENSIFY_GUARD:
        raise DomainError(f"densify refused: {m}x{n} exceeds the {_DENSIFY_GUARD}-entry guard")
    H = np.zeros((m, n))
    impulse = np.zeros(n)
    for j in range(n):
        impulse[j] = 1.0
        cube = HyperCube(
            impulse.reshape(model.bands, model.n_cols, model.m_rows).transpose(2, 1, 0))
        H[:, j] = forward(model, cube).values
        impulse[j] = 0.0
    return H
