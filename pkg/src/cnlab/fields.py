"""Vector/tensor fields on the torus represented by full complex spectra.

Fields are stored spectrally as complex128 arrays with leading component axes:
(dim, *spatial) for velocity fields, (dim, dim, *spatial) for rank-2 tensors.
Real-valuedness corresponds to Hermitian symmetry c(-k) = conj(c(k)); the
velocity convention downstream is mean-zero (c(0) = 0 per component), upheld by
the profile builders and solvers rather than enforced at construction (tests
use constant fields for quadrature checks).

All operations here are pure: inputs are never mutated and returned fields own
fresh arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .grid import TAU, Grid


@dataclass
class SpectralVectorField:
    """Velocity field as plane-wave coefficients, shape (dim, res, ..., res)."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        expect = (self.grid.dim,) + self.grid.shape
        if self.coeffs.shape != expect:
            raise ValueError(f"coeff shape {self.coeffs.shape} != {expect}")
        if self.coeffs.dtype != np.complex128:
            self.coeffs = self.coeffs.astype(np.complex128)

    def copy(self) -> "SpectralVectorField":
        return SpectralVectorField(self.grid, self.coeffs.copy())

    def __add__(self, other: "SpectralVectorField") -> "SpectralVectorField":
        _same_grid(self.grid, other.grid)
        return SpectralVectorField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralVectorField") -> "SpectralVectorField":
        _same_grid(self.grid, other.grid)
        return SpectralVectorField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> "SpectralVectorField":
        return SpectralVectorField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralVectorField":
        return SpectralVectorField(self.grid, -self.coeffs)


@dataclass
class TensorField:
    """Rank-2 tensor field, coefficients shaped (dim, dim, res, ..., res)."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        expect = (self.grid.dim, self.grid.dim) + self.grid.shape
        if self.coeffs.shape != expect:
            raise ValueError(f"coeff shape {self.coeffs.shape} != {expect}")
        if self.coeffs.dtype != np.complex128:
            self.coeffs = self.coeffs.astype(np.complex128)

    def copy(self) -> "TensorField":
        return TensorField(self.grid, self.coeffs.copy())

    def __add__(self, other: "TensorField") -> "TensorField":
        _same_grid(self.grid, other.grid)
        return TensorField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "TensorField") -> "TensorField":
        _same_grid(self.grid, other.grid)
        return TensorField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> "TensorField":
        return TensorField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__


Field = SpectralVectorField  # short alias used internally


def _same_grid(a: Grid, b: Grid) -> None:
    if a != b:
        raise ValueError(f"grid mismatch: {a} vs {b}")


# ---------------------------------------------------------------------------
# raw transforms (leading axes arbitrary, spatial axes trailing)
# ---------------------------------------------------------------------------

def phys_values(grid: Grid, coeffs: np.ndarray) -> np.ndarray:
    """Inverse transform to physical samples (real part; fields are Hermitian)."""
    axes = grid.spatial_axes
    return np.fft.ifftn(coeffs, axes=axes).real * grid.npoints


def spectral_values(grid: Grid, samples: np.ndarray) -> np.ndarray:
    """Forward transform of physical samples to plane-wave coefficients."""
    axes = grid.spatial_axes
    return np.fft.fftn(samples, axes=axes) / grid.npoints


def to_physical(f: SpectralVectorField) -> np.ndarray:
    """Physical sample array of shape (dim, res, ..., res)."""
    return phys_values(f.grid, f.coeffs)


def to_spectral(samples: np.ndarray, grid: Grid | None = None) -> SpectralVectorField:
    """Build a field from real physical samples of shape (dim, res, ..., res).

    Exact inverse of to_physical up to roundoff. The grid is inferred from the
    sample shape when not supplied.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if grid is None:
        dim = samples.shape[0]
        grid = Grid(dim, samples.shape[-1])
    expect = (grid.dim,) + grid.shape
    if samples.shape != expect:
        raise ValueError(f"sample shape {samples.shape} != {expect}")
    return SpectralVectorField(grid, spectral_values(grid, samples))


def zero_field(grid: Grid) -> SpectralVectorField:
    return SpectralVectorField(grid, np.zeros((grid.dim,) + grid.shape, dtype=np.complex128))


# ---------------------------------------------------------------------------
# calculus
# ---------------------------------------------------------------------------

def derivative(f: SpectralVectorField, axis: int) -> SpectralVectorField:
    """Partial derivative along a spatial axis: multiply by i*k_axis."""
    if not 0 <= axis < f.grid.dim:
        raise ValueError(f"axis {axis} out of range for dim {f.grid.dim}")
    mult = 1j * f.grid.k_deriv[axis]
    return SpectralVectorField(f.grid, f.coeffs * mult)


def divergence_coeffs(grid: Grid, coeffs: np.ndarray) -> np.ndarray:
    """Spectral divergence sum_a i*k_a c_a(k) of a (dim, *spatial) stack."""
    return 1j * np.sum(grid.k_deriv * coeffs, axis=0)


def divergence_sup(f: SpectralVectorField) -> float:
    """Physical-space sup of |div f|."""
    div = divergence_coeffs(f.grid, f.coeffs)
    return float(np.max(np.abs(phys_values(f.grid, div))))


def project_mean_zero(f: SpectralVectorField) -> SpectralVectorField:
    """Zero the k=0 coefficient of every component."""
    c = f.coeffs.copy()
    c[(slice(None),) + (0,) * f.grid.dim] = 0.0
    return SpectralVectorField(f.grid, c)


# ---------------------------------------------------------------------------
# Hermitian symmetry helpers
# ---------------------------------------------------------------------------

def _conj_reflect(grid: Grid, coeffs: np.ndarray) -> np.ndarray:
    """conj(c(-k)) with -k taken modulo the grid, spatial axes trailing."""
    out = np.conj(coeffs)
    for ax in grid.spatial_axes:
        out = np.roll(np.flip(out, axis=ax), 1, axis=ax)
    return out


def hermitianize(grid: Grid, coeffs: np.ndarray) -> np.ndarray:
    """Project onto the Hermitian (real-field) part of coefficient space."""
    return 0.5 * (coeffs + _conj_reflect(grid, coeffs))


def hermitian_defect(f: SpectralVectorField) -> float:
    """Max |c(k) - conj(c(-k))|; zero for real-valued fields."""
    return float(np.max(np.abs(f.coeffs - _conj_reflect(f.grid, f.coeffs))))


# ---------------------------------------------------------------------------
# products and norms
# ---------------------------------------------------------------------------

def dealias(grid: Grid, coeffs: np.ndarray) -> np.ndarray:
    """Zero every mode with any |k_i| > res/3 (2/3 rule)."""
    return coeffs * grid.dealias_mask


def pointwise_tensor(u: SpectralVectorField, v: SpectralVectorField,
                     use_dealias: bool = True) -> TensorField:
    """Dealiased pointwise tensor product u (x) v.

    Inputs are truncated at |k_i| > res/3, multiplied in physical space, and
    the product spectrum is truncated the same way; surviving modes then carry
    the exact convolution of the truncated inputs (Orszag's 2/3 rule). Passing
    the same object twice reuses each symmetric product, so the result of
    pointwise_tensor(u, u) is symmetric to the bit.
    """
    _same_grid(u.grid, v.grid)
    grid = u.grid
    d = grid.dim
    if use_dealias:
        pu = phys_values(grid, dealias(grid, u.coeffs))
        pv = pu if v is u else phys_values(grid, dealias(grid, v.coeffs))
    else:
        pu = phys_values(grid, u.coeffs)
        pv = pu if v is u else phys_values(grid, v.coeffs)

    out = np.empty((d, d) + grid.shape, dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            if v is u and b < a:
                out[a, b] = out[b, a]
                continue
            prod = spectral_values(grid, pu[a] * pv[b])
            out[a, b] = dealias(grid, prod) if use_dealias else prod
    return TensorField(grid, out)


def _magnitude(grid: Grid, coeffs: np.ndarray) -> np.ndarray:
    """Pointwise Euclidean magnitude over all component axes, in physical space."""
    phys = phys_values(grid, coeffs)
    comp = phys.reshape((-1,) + grid.shape)
    return np.sqrt(np.sum(comp**2, axis=0))


def lp_norm(f: SpectralVectorField | TensorField, p: float) -> float:
    """L^p norm with |f(x)| the Euclidean (Frobenius) length of the value.

    Finite p uses the uniform quadrature ((2*pi/res)^dim * sum_x |f(x)|^p)^(1/p);
    p = inf is the grid max.
    """
    if p < 1:
        raise ValueError(f"p must satisfy 1 <= p <= inf, got {p}")
    mag = _magnitude(f.grid, f.coeffs)
    if math.isinf(p):
        return float(np.max(mag))
    return float((f.grid.cell_volume * np.sum(mag**p)) ** (1.0 / p))


def linf(f: SpectralVectorField | TensorField) -> float:
    return lp_norm(f, math.inf)


def energy(f: SpectralVectorField) -> float:
    """Kinetic energy 0.5 * ||f||_2^2."""
    return 0.5 * lp_norm(f, 2.0) ** 2


# ---------------------------------------------------------------------------
# random fields (seeded; used by tests and the verification suite)
# ---------------------------------------------------------------------------

def random_field(grid: Grid, rng: np.random.Generator, slope: float = 2.0,
                 band: tuple[int, int] | None = None, ncomp: int | None = None,
                 normalize: bool = True) -> np.ndarray:
    """Random Hermitian mean-zero coefficient stack of shape (ncomp, *spatial).

    Gaussian coefficients shaped by |k|^(-slope) on the annulus band[0] <= |k|
    <= band[1] (default [1, res/3]). Normalized to unit sup norm so that norm
    ratios in the verification suite have denominators bounded away from zero.
    """
    d = grid.dim
    ncomp = d if ncomp is None else ncomp
    if band is None:
        band = (1, max(2, grid.res // 3))
    kmod = grid.kmod
    shell = (kmod >= band[0]) & (kmod <= band[1]) & (kmod <= grid.nyquist - 1)
    amp = np.zeros(grid.shape)
    amp[shell] = np.power(np.maximum(kmod[shell], 1.0), -slope)

    shape = (ncomp,) + grid.shape
    c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    c *= amp
    c = hermitianize(grid, c)
    c[(slice(None),) + (0,) * d] = 0.0
    if normalize:
        mag = np.sqrt(np.sum(phys_values(grid, c) ** 2, axis=0))
        peak = float(np.max(mag))
        if peak > 0:
            c /= peak
    return c


def random_vector_field(grid: Grid, rng: np.random.Generator, slope: float = 2.0,
                        band: tuple[int, int] | None = None) -> SpectralVectorField:
    return SpectralVectorField(grid, random_field(grid, rng, slope, band))


def random_tensor_field(grid: Grid, rng: np.random.Generator, slope: float = 2.0,
                        band: tuple[int, int] | None = None) -> TensorField:
    d = grid.dim
    c = random_field(grid, rng, slope, band, ncomp=d * d)
    return TensorField(grid, c.reshape((d, d) + grid.shape))


def stack_states(states: Sequence[SpectralVectorField] | Iterable[SpectralVectorField]) -> np.ndarray:
    """Stack field coefficients into one (nstates, dim, *spatial) array."""
    return np.stack([s.coeffs for s in states])
