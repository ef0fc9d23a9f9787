"""Low-high paraproducts and the two-term Bony-style product split.

The weakened paraproduct with offset i in {0, 1} pairs cumulative low-pass
pieces of the first factor with dyadic blocks of the second:

    para_i(phi, psi) = sum_{k=0}^{jmax} S_{k+i}(phi) * D_k(psi),

every product dealiased exactly as in pointwise_tensor. The telescoping
identity (for mean-zero factors, so S_0 phi = 0)

    phi * psi = sum_k S_k(phi) D_k(psi) + sum_k S_{k+1}(psi) D_k(phi)

is exact with sharp cutoffs because the dealias projector commutes with the
block multipliers; bony_split exploits it entrywise on tensors so that the two
returned parts reassemble the dealiased pointwise product to roundoff.
"""

from __future__ import annotations

import numpy as np

from .fields import SpectralVectorField, TensorField, _same_grid, dealias, phys_values, spectral_values
from .grid import Grid
from .littlewood_paley import DyadicPartition


def _check_offset(i: int) -> None:
    if i not in (0, 1):
        raise ValueError(f"paraproduct offset must be 0 or 1, got {i}")


def _low_blocks_phys(grid: Grid, coeffs: np.ndarray, part: DyadicPartition, i: int) -> np.ndarray:
    """Physical values of S_{k+i}(f) for k = 0..jmax, batched over components.

    coeffs: (..., *spatial); result: (jmax+1, ..., *spatial).
    """
    sel = part.lowpass[i : part.jmax + 1 + i]
    mults = sel.reshape((part.jmax + 1,) + (1,) * (coeffs.ndim - grid.dim) + grid.shape)
    return phys_values(grid, mults * dealias(grid, coeffs))


def _delta_blocks_phys(grid: Grid, coeffs: np.ndarray, part: DyadicPartition) -> np.ndarray:
    mults = part.delta.reshape((part.jmax + 1,) + (1,) * (coeffs.ndim - grid.dim) + grid.shape)
    return phys_values(grid, mults * dealias(grid, coeffs))


def scalar_paraproduct(i: int, phi: np.ndarray, psi: np.ndarray,
                       part: DyadicPartition) -> np.ndarray:
    """para_i of two scalar coefficient arrays on the partition's grid."""
    _check_offset(i)
    grid = part.grid
    low = _low_blocks_phys(grid, np.asarray(phi, dtype=np.complex128), part, i)
    high = _delta_blocks_phys(grid, np.asarray(psi, dtype=np.complex128), part)
    acc = np.sum(low * high, axis=0)
    return dealias(grid, spectral_values(grid, acc))


def tensor_paraproduct(i: int, f: SpectralVectorField, g: SpectralVectorField,
                       part: DyadicPartition) -> TensorField:
    """Entrywise paraproduct tensor: entry (a, b) = para_i(f_a, g_b)."""
    _check_offset(i)
    _same_grid(f.grid, g.grid)
    if part.grid != f.grid:
        raise ValueError("partition grid does not match the fields")
    grid = f.grid
    low = _low_blocks_phys(grid, f.coeffs, part, i)      # (J, d, *sp)
    high = _delta_blocks_phys(grid, g.coeffs, part)      # (J, d, *sp)
    acc = np.einsum("ka...,kb...->ab...", low, high)
    out = dealias(grid, spectral_values(grid, acc))
    return TensorField(grid, out)


def bony_split(h: SpectralVectorField, g: SpectralVectorField,
               part: DyadicPartition) -> tuple[TensorField, TensorField]:
    """Exact two-part split of the dealiased product h (x) g (sharp cutoffs).

    Returns (A, B) with A = tensor_paraproduct(0, h, g) and
    B[a, b] = scalar_paraproduct(1, g_b, h_a); for mean-zero inputs
    A + B = pointwise_tensor(h, g) to roundoff.
    """
    if part.mode != "sharp":
        raise ValueError("bony_split requires a sharp-mode partition")
    _same_grid(h.grid, g.grid)
    if part.grid != h.grid:
        raise ValueError("partition grid does not match the fields")
    grid = h.grid
    a_part = tensor_paraproduct(0, h, g, part)

    low_g = _low_blocks_phys(grid, g.coeffs, part, 1)    # S_{k+1}(g_b)
    high_h = _delta_blocks_phys(grid, h.coeffs, part)    # D_k(h_a)
    acc = np.einsum("kb...,ka...->ab...", low_g, high_h)
    b_part = TensorField(grid, dealias(grid, spectral_values(grid, acc)))
    return a_part, b_part
