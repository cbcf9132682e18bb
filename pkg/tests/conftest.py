"""Shared fixtures and independent oracles.

The oracles here re-derive the operator and transform from their defining
formulas with plain Python loops; they deliberately share no code with the
package internals they check.
"""

import numpy as np
import pytest

from cassikit import CassiModel, Order
from cassikit.cube import flat_index


def naive_dense_matrix(model: CassiModel) -> np.ndarray:
    """Dense operator built entry-by-entry from the dispersion definition."""
    M, N, L = model.m_rows, model.n_cols, model.bands
    C = model.fpa_cols
    H = np.zeros((model.n_shots * M * C, M * N * L))
    if model.order is Order.STANDARD:
        spills = [(0, 1.0)]
    else:
        spills = list(enumerate(model.higher_order_weights))
    for k, ap in enumerate(model.shots):
        for x in range(M):
            for y in range(N):
                t = float(ap.mask[x, y])
                for lam in range(L):
                    col = flat_index(M, N, x, y, lam)
                    for d, w in spills:
                        j = y + lam + d
                        H[k * M * C + x * C + j, col] += t * w
    return H


def naive_dwt1(x: np.ndarray, h: np.ndarray) -> np.ndarray:
    """One periodic orthonormal analysis step on a 1D signal, by loops."""
    n = len(x)
    taps = len(h)
    g = [(-1) ** m * h[taps - 1 - m] for m in range(taps)]
    out = np.zeros(n)
    for k in range(n // 2):
        for m in range(taps):
            out[k] += h[m] * x[(2 * k + m) % n]
            out[n // 2 + k] += g[m] * x[(2 * k + m) % n]
    return out


def naive_dwt2(band: np.ndarray, h: np.ndarray, levels: int) -> np.ndarray:
    out = band.astype(float).copy()
    m, n = band.shape
    for _ in range(levels):
        block = out[:m, :n].copy()
        for col in range(n):
            block[:, col] = naive_dwt1(block[:, col], h)
        for row in range(m):
            block[row, :] = naive_dwt1(block[row, :], h)
        out[:m, :n] = block
        m //= 2
        n //= 2
    return out


def naive_analyze(data: np.ndarray, h: np.ndarray, levels: int) -> np.ndarray:
    """Per-band 2D DWT then explicit orthonormal DCT-II matrix over bands."""
    M, N, L = data.shape
    out = np.zeros_like(data, dtype=float)
    for lam in range(L):
        out[:, :, lam] = naive_dwt2(data[:, :, lam], h, levels)
    dct_mat = np.zeros((L, L))
    for i in range(L):
        scale = np.sqrt(1.0 / L) if i == 0 else np.sqrt(2.0 / L)
        for j in range(L):
            dct_mat[i, j] = scale * np.cos(np.pi * i * (2 * j + 1) / (2 * L))
    return np.einsum("il,xyl->xyi", dct_mat, out)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
