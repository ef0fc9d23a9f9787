"""Periodic grids and their cached spectral index tables.

Everything downstream lives on the 2*pi-periodic torus [0, 2*pi)^dim sampled on
a uniform res^dim lattice. Spectral coefficients are indexed by integer
frequency vectors k (numpy FFT ordering, |k_i| <= res/2) and normalized so that

    f(x) = sum_k c(k) * exp(i k . x),

i.e. c = fftn(samples) / res^dim. A Grid is immutable once constructed and safe
to share between threads; the derived tables below are plain caches of pure
functions of (dim, res).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

TAU = 2.0 * math.pi


@dataclass(frozen=True)
class Grid:
    """Uniform spectral grid on the 2*pi-periodic torus.

    Attributes:
        dim: spatial dimension, 2 or 3.
        res: points per axis; a power of two, at least 8.
    """

    dim: int
    res: int

    def __post_init__(self) -> None:
        if self.dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {self.dim}")
        if self.res < 8 or (self.res & (self.res - 1)) != 0:
            raise ValueError(f"res must be a power of two >= 8, got {self.res}")

    @property
    def period(self) -> float:
        return TAU

    @property
    def nyquist(self) -> int:
        return self.res // 2

    @property
    def npoints(self) -> int:
        return self.res**self.dim

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.res,) * self.dim

    @property
    def spatial_axes(self) -> tuple[int, ...]:
        """Axis indices of the spatial dimensions in a (..., res, ..., res) array."""
        return tuple(range(-self.dim, 0))

    @property
    def cell_volume(self) -> float:
        return (TAU / self.res) ** self.dim

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Integer frequency vectors, shape (dim, res, ..., res)."""
        k1 = (np.fft.fftfreq(self.res) * self.res).astype(np.int64)
        mesh = np.meshgrid(*([k1] * self.dim), indexing="ij")
        k = np.stack(mesh)
        k.setflags(write=False)
        return k

    @cached_property
    def ksq(self) -> np.ndarray:
        """|k|^2 with the true Nyquist magnitude; drives heat and dyadic multipliers."""
        ksq = np.sum(self.wavenumbers.astype(np.float64) ** 2, axis=0)
        ksq.setflags(write=False)
        return ksq

    @cached_property
    def kmod(self) -> np.ndarray:
        kmod = np.sqrt(self.ksq)
        kmod.setflags(write=False)
        return kmod

    @cached_property
    def k_deriv(self) -> np.ndarray:
        """Frequency vectors for odd (vector) multipliers, Nyquist entries zeroed.

        The -res/2 mode has no +res/2 partner on an even grid; the trigonometric
        interpolant's derivative vanishes at the sample points there, so zeroing
        is exact and keeps derivatives of real fields real. Divergence and Leray
        projection use the same table so the two agree mode by mode.
        """
        kd = self.wavenumbers.astype(np.float64).copy()
        kd[kd == -self.nyquist] = 0.0
        kd.setflags(write=False)
        return kd

    @cached_property
    def ksq_deriv(self) -> np.ndarray:
        ksq = np.sum(self.k_deriv**2, axis=0)
        ksq.setflags(write=False)
        return ksq

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """Boolean 2/3-rule mask: True where every |k_i| <= res/3."""
        keep = self.res / 3.0
        mask = np.all(np.abs(self.wavenumbers) <= keep, axis=0)
        mask.setflags(write=False)
        return mask

    def coords(self) -> tuple[np.ndarray, ...]:
        """Physical meshgrid arrays x_1..x_dim, each of shape grid.shape."""
        x1 = TAU * np.arange(self.res) / self.res
        return tuple(np.meshgrid(*([x1] * self.dim), indexing="ij"))


def make_grid(dim: int, res: int) -> Grid:
    """Construct a torus grid after validating (dim, res)."""
    return Grid(dim, res)
