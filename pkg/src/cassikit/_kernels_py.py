"""Pure-numpy fallback for the dispersion kernels.

Same call signatures as the compiled extension in _kernels.pyx. Each band
is a contiguous 2D slice shifted along the column axis, so the forward and
adjoint reduce to L slice-accumulates per shot.
"""

import numpy as np

BACKEND = "python"


def forward_standard(masks: np.ndarray, cube: np.ndarray, out: np.ndarray) -> None:
    """masks (K,M,N), cube (M,N,L) -> out (K,M,N+L-1), overwritten."""
    _, _, bands = cube.shape
    n_cols = cube.shape[1]
    out[:] = 0.0
    for k in range(masks.shape[0]):
        coded = masks[k, :, :, None] * cube  # (M, N, L)
        for lam in range(bands):
            out[k, :, lam:lam + n_cols] += coded[:, :, lam]


def adjoint_standard(masks: np.ndarray, g: np.ndarray, out: np.ndarray) -> None:
    """masks (K,M,N), g (K,M,N+L-1) -> out (M,N,L), overwritten."""
    m_rows, n_cols, bands = out.shape
    out[:] = 0.0
    for k in range(masks.shape[0]):
        for lam in range(bands):
            out[:, :, lam] += masks[k] * g[k, :, lam:lam + n_cols]


def forward_higher(masks: np.ndarray, cube: np.ndarray, weights: np.ndarray,
                   out: np.ndarray) -> None:
    """masks (K,M,N), cube (M,N,L), weights (3,) -> out (K,M,N+L+1).

    Voxel (x,y,lam) spills onto FPA columns y+lam+d for d in {0,1,2}
    (a one-column guard on each side keeps all energy on the detector).
    """
    _, n_cols, bands = cube.shape
    out[:] = 0.0
    for k in range(masks.shape[0]):
        coded = masks[k, :, :, None] * cube
        for lam in range(bands):
            for d in range(3):
                out[k, :, lam + d:lam + d + n_cols] += weights[d] * coded[:, :, lam]


def adjoint_higher(masks: np.ndarray, g: np.ndarray, weights: np.ndarray,
                   out: np.ndarray) -> None:
    """masks (K,M,N), g (K,M,N+L+1) -> out (M,N,L), overwritten."""
    m_rows, n_cols, bands = out.shape
    out[:] = 0.0
    for k in range(masks.shape[0]):
        for lam in range(bands):
            acc = np.zeros((m_rows, n_cols))
            for d in range(3):
                acc += weights[d] * g[k, :, lam + d:lam + d + n_cols]
            out[:, :, lam] += masks[k] * acc
