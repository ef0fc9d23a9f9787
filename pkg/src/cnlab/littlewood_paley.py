"""Dyadic (Littlewood-Paley) frequency decompositions and Besov norms.

A partition is built from cumulative radial low-pass multipliers L_j(k),
j = 0 .. jmax+1, with dyadic blocks defined by differencing:

    S_0  := L_0            (retains only k = 0 on the integer lattice)
    D_j  := L_{j+1} - L_j  for 0 <= j <= jmax
    S_j  := L_j            (low_pass)

so the identity S_0 + sum_j D_j = L_{jmax+1} = 1 telescopes exactly in both
cutoff modes. jmax = ceil(log2(nyquist * sqrt(dim))) guarantees the top
low-pass is identically 1 on every resolved frequency.

sharp mode:   L_j(k) = 1 if |k| < 2^j else 0, so D_j is the 0/1 indicator of
              the annulus 2^j <= |k| < 2^{j+1}.
smooth mode:  L_j(k) = theta(|k| / 2^j) with the C^inf radial ramp

                  theta(r) = 1                      for r <= 1/2
                           = psi(1-u) / (psi(1-u) + psi(u)),  u = 2r - 1,
                             psi(t) = exp(-1/t)     for 1/2 < r < 1
                           = 0                      for r >= 1

              giving D_j supported in the open annulus 2^{j-1} < |k| < 2^{j+1}
              with consecutive blocks summing to 1 on [2^j, 2^{j+1}].

Besov norms B^{s,inf}_inf take physical-space sup norms of the blocks:
besov_norm(f, s) = max(||S_0 f||_inf, max_j 2^{js} ||D_j f||_inf).
Block index j = -1 addresses S_0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .fields import SpectralVectorField, TensorField
from .grid import Grid


def _smooth_ramp(r: np.ndarray) -> np.ndarray:
    """C^inf cutoff profile: 1 for r <= 1/2, 0 for r >= 1."""
    out = np.ones_like(r)
    out[r >= 1.0] = 0.0
    mid = (r > 0.5) & (r < 1.0)
    u = 2.0 * r[mid] - 1.0
    with np.errstate(over="ignore"):
        psi_u = np.exp(-1.0 / u)
        psi_1mu = np.exp(-1.0 / (1.0 - u))
    out[mid] = psi_1mu / (psi_1mu + psi_u)
    return out


@dataclass(frozen=True)
class DyadicPartition:
    """Cached multiplier tables of one dyadic decomposition of a grid."""

    grid: Grid
    mode: str
    jmax: int
    lowpass: np.ndarray = field(repr=False, compare=False)  # (jmax+2, *spatial)
    delta: np.ndarray = field(repr=False, compare=False)    # (jmax+1, *spatial)

    @property
    def s0(self) -> np.ndarray:
        return self.lowpass[0]

    def partition_sum(self) -> np.ndarray:
        """S_0 + sum_j D_j, identically 1 up to roundoff."""
        return self.s0 + np.sum(self.delta, axis=0)


@lru_cache(maxsize=16)
def build_partition(grid: Grid, mode: str = "sharp") -> DyadicPartition:
    """Build (and cache) the dyadic partition for a grid and cutoff mode."""
    if mode not in ("sharp", "smooth"):
        raise ValueError(f"mode must be 'sharp' or 'smooth', got {mode!r}")
    jmax = math.ceil(math.log2(grid.nyquist * math.sqrt(grid.dim)))
    kmod = grid.kmod
    levels = []
    for j in range(jmax + 2):
        r = kmod / float(2**j)
        if mode == "sharp":
            levels.append((r < 1.0).astype(np.float64))
        else:
            levels.append(_smooth_ramp(r))
    lowpass = np.stack(levels)
    delta = lowpass[1:] - lowpass[:-1]
    lowpass.setflags(write=False)
    delta.setflags(write=False)
    return DyadicPartition(grid, mode, jmax, lowpass, delta)


def _coeffs_of(f) -> np.ndarray:
    if isinstance(f, (SpectralVectorField, TensorField)):
        return f.coeffs
    return np.asarray(f)


def _wrap_like(f, coeffs: np.ndarray):
    if isinstance(f, SpectralVectorField):
        return SpectralVectorField(f.grid, coeffs)
    if isinstance(f, TensorField):
        return TensorField(f.grid, coeffs)
    return coeffs


def block(f, j: int, part: DyadicPartition):
    """Dyadic block D_j f; j = -1 selects the low-frequency piece S_0 f."""
    if not -1 <= j <= part.jmax:
        raise ValueError(f"block index {j} outside [-1, {part.jmax}]")
    mult = part.s0 if j == -1 else part.delta[j]
    return _wrap_like(f, _coeffs_of(f) * mult)


def low_pass(f, j: int, part: DyadicPartition):
    """Cumulative low-pass S_j f for 0 <= j <= jmax+1 (sharp: retains |k| < 2^j)."""
    if not 0 <= j <= part.jmax + 1:
        raise ValueError(f"low-pass index {j} outside [0, {part.jmax + 1}]")
    return _wrap_like(f, _coeffs_of(f) * part.lowpass[j])


def block_sup_norms(grid: Grid, coeffs: np.ndarray, part: DyadicPartition) -> tuple[float, np.ndarray]:
    """(||S_0 f||_inf, array of ||D_j f||_inf) for a (ncomp, *spatial) stack."""
    sups = _stack_block_sups(grid, coeffs[np.newaxis], part)
    return float(sups[0, 0]), sups[0, 1:]


def _stack_block_sups(grid: Grid, stack: np.ndarray, part: DyadicPartition) -> np.ndarray:
    """Per-state block sup norms for a (nstates, ncomp, *spatial) stack.

    Returns (nstates, jmax+2): column 0 is the S_0 sup, column 1+j the D_j sup.
    Transforms are batched per block over states and components.
    """
    axes = grid.spatial_axes
    n = grid.npoints
    nstates = stack.shape[0]
    out = np.empty((nstates, part.jmax + 2))
    mults = np.concatenate([part.s0[np.newaxis], part.delta])
    for col, mult in enumerate(mults):
        phys = np.fft.ifftn(stack * mult, axes=axes).real * n
        mag = np.sqrt(np.sum(phys**2, axis=1))
        out[:, col] = mag.reshape(nstates, -1).max(axis=1)
    return out


def _besov_from_sups(sups: np.ndarray, s: float, jmax: int) -> np.ndarray:
    weights = np.concatenate([[1.0], np.power(2.0, s * np.arange(jmax + 1))])
    return np.max(sups * weights, axis=-1)


def besov_norm(f, s: float, part: DyadicPartition | None = None) -> float:
    """Inhomogeneous Besov norm B^{s,inf}_inf via physical-space block sups.

    Accepts velocity fields, tensor fields, or a bare coefficient array whose
    trailing axes are spatial; the pointwise magnitude is Euclidean over all
    component axes. When no partition is supplied the field's grid gets the
    sharp one (bare arrays must pass a partition).
    """
    if part is None:
        if not isinstance(f, (SpectralVectorField, TensorField)):
            raise ValueError("bare coefficient arrays need an explicit partition")
        part = build_partition(f.grid, "sharp")
    grid = f.grid if isinstance(f, (SpectralVectorField, TensorField)) else part.grid
    coeffs = _coeffs_of(f).reshape((-1,) + grid.shape)
    s0_sup, dsups = block_sup_norms(grid, coeffs, part)
    sups = np.concatenate([[s0_sup], dsups])
    return float(_besov_from_sups(sups, s, part.jmax))


def besov_norm_states(states: Sequence[SpectralVectorField], s: float,
                      part: DyadicPartition) -> np.ndarray:
    """Vector of Besov norms over a trajectory's states (batched transforms)."""
    if len(states) == 0:
        return np.zeros(0)
    grid = states[0].grid
    stack = np.stack([st.coeffs for st in states])
    sups = _stack_block_sups(grid, stack, part)
    return _besov_from_sups(sups, s, part.jmax)


def besov_distance(f, g, s: float, part: DyadicPartition | None = None) -> float:
    """besov_norm(f - g, s); the B^{s,inf}_inf distance."""
    if part is None:
        if not isinstance(f, (SpectralVectorField, TensorField)):
            raise ValueError("bare coefficient arrays need an explicit partition")
        part = build_partition(f.grid, "sharp")
    diff = _coeffs_of(f) - _coeffs_of(g)
    grid = f.grid if isinstance(f, (SpectralVectorField, TensorField)) else part.grid
    coeffs = diff.reshape((-1,) + grid.shape)
    s0_sup, dsups = block_sup_norms(grid, coeffs, part)
    sups = np.concatenate([[s0_sup], dsups])
    return float(_besov_from_sups(sups, s, part.jmax))
