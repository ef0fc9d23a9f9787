"""Shared test oracles, deliberately independent of the library code paths.

The convolution oracle works on a doubled grid where products of band-limited
inputs cannot alias; paraproduct oracles re-sum block pairs directly from the
multiplier tables. Everything here trades speed for obviousness.
"""

from __future__ import annotations

import numpy as np

from cnlab.fields import SpectralVectorField, TensorField
from cnlab.grid import Grid


def embed_coeffs(small: Grid, coeffs: np.ndarray, big: Grid) -> np.ndarray:
    """Place a coefficient array onto a finer grid, preserving frequencies."""
    assert big.res >= small.res and big.dim == small.dim
    axes = tuple(range(-small.dim, 0))
    shifted = np.fft.fftshift(coeffs, axes=axes)
    out = np.zeros(coeffs.shape[: -small.dim] + big.shape, dtype=np.complex128)
    off = (big.res - small.res) // 2
    sel = (Ellipsis,) + tuple(slice(off, off + small.res) for _ in range(small.dim))
    out[sel] = shifted
    return np.fft.ifftshift(out, axes=axes)


def restrict_coeffs(big: Grid, coeffs: np.ndarray, small: Grid) -> np.ndarray:
    """Extract the centered small-grid spectrum from a finer grid."""
    axes = tuple(range(-small.dim, 0))
    shifted = np.fft.fftshift(coeffs, axes=axes)
    off = (big.res - small.res) // 2
    sel = (Ellipsis,) + tuple(slice(off, off + small.res) for _ in range(small.dim))
    return np.fft.ifftshift(shifted[sel], axes=axes)


def exact_product_coeffs(grid: Grid, ca: np.ndarray, cb: np.ndarray) -> np.ndarray:
    """Alias-free coefficients of the pointwise product of two scalar fields.

    Zero-pads both spectra onto a grid of twice the resolution, multiplies in
    physical space there (no wraparound is possible since max |k_a + k_b| stays
    below the doubled Nyquist), and restricts back.
    """
    big = Grid(grid.dim, grid.res * 2)
    pa = embed_coeffs(grid, ca, big)
    pb = embed_coeffs(grid, cb, big)
    axes = tuple(range(-grid.dim, 0))
    fa = np.fft.ifftn(pa, axes=axes) * big.npoints
    fb = np.fft.ifftn(pb, axes=axes) * big.npoints
    prod = np.fft.fftn(fa * fb, axes=axes) / big.npoints
    return restrict_coeffs(big, prod, grid)


def mode_index(grid: Grid, k: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(ki % grid.res for ki in k)


def single_mode_vector(grid: Grid, k: tuple[int, ...], component: int,
                       amplitude: float = 1.0) -> SpectralVectorField:
    """amplitude * cos(k . x) in one velocity component, exact two-mode spectrum."""
    coeffs = np.zeros((grid.dim,) + grid.shape, dtype=np.complex128)
    coeffs[(component,) + mode_index(grid, k)] = amplitude / 2.0
    coeffs[(component,) + mode_index(grid, tuple(-ki for ki in k))] += amplitude / 2.0
    return SpectralVectorField(grid, coeffs)


def single_mode_scalar(grid: Grid, k: tuple[int, ...], amplitude: float = 1.0) -> np.ndarray:
    coeffs = np.zeros(grid.shape, dtype=np.complex128)
    coeffs[mode_index(grid, k)] = amplitude / 2.0
    coeffs[mode_index(grid, tuple(-ki for ki in k))] += amplitude / 2.0
    return coeffs


def axis_tensor(grid: Grid, m: int, row: int = 1, col: int = 0) -> TensorField:
    """cos(m x_1) placed in one tensor entry; the Oseen-probe extremizer."""
    c = np.zeros((grid.dim, grid.dim) + grid.shape, dtype=np.complex128)
    c[(row, col)] = single_mode_scalar(grid, (m,) + (0,) * (grid.dim - 1))
    return TensorField(grid, c)


def samples_of(grid: Grid, coeffs: np.ndarray) -> np.ndarray:
    axes = tuple(range(-grid.dim, 0))
    return np.fft.ifftn(coeffs, axes=axes).real * grid.npoints


def rel_err(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(np.max(np.abs(b)), 1e-300)
    return float(np.max(np.abs(a - b)) / scale)
