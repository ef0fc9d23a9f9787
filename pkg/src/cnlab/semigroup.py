"""Heat flow, Leray projection, the convective nonlinearity, and the Duhamel
integral operator, all diagonal (or block-diagonal) in frequency.

The Duhamel operator maps a forcing path f(t_0..t_M) to

    L(f)(t_m) = - integral_0^{t_m} e^{(t_m - s) nu Laplacian} f(s) ds,

evaluated per mode with an exponential quadrature that is exact whenever f is
piecewise linear in time: on one interval of length h with lam = nu |k|^2 and
z = -lam h,

    integral = h * [ f_left * (phi1(z) - phi2(z)) + f_right * phi2(z) ],

accumulated by the recursion L(t_{m+1}) = e^{-lam h} L(t_m) - integral_m.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .fields import (SpectralVectorField, TensorField, _same_grid,
                     divergence_sup, linf, pointwise_tensor)
from .grid import Grid
from .phi import phi1, phi2

DIV_FREE_TOL = 1e-8


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing quadrature nodes t_0 <= ... <= t_M = horizon.

    The solvers always build grids starting at t_0 = 0 (uniform / graded do
    this by construction); the Duhamel recursion integrates from the first
    node, whatever it is. A nonzero start is only meaningful for replaying
    stored state sequences.
    """

    nodes: np.ndarray

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=np.float64)
        object.__setattr__(self, "nodes", nodes)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("need at least two time nodes")
        if nodes[0] < 0.0:
            raise ValueError("time grid must start at t >= 0")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("time nodes must be strictly increasing")

    @property
    def horizon(self) -> float:
        return float(self.nodes[-1])

    @property
    def nintervals(self) -> int:
        return self.nodes.size - 1

    @classmethod
    def uniform(cls, horizon: float, intervals: int) -> "TimeGrid":
        if horizon <= 0 or intervals < 1:
            raise ValueError("horizon must be positive and intervals >= 1")
        return cls(np.linspace(0.0, horizon, intervals + 1))

    @classmethod
    def graded(cls, horizon: float, intervals: int, power: float = 2.0) -> "TimeGrid":
        """Nodes horizon * (i/M)^power, clustered near t = 0 for power > 1."""
        if horizon <= 0 or intervals < 1 or power <= 0:
            raise ValueError("horizon, intervals and power must be positive")
        frac = np.arange(intervals + 1) / intervals
        return cls(horizon * frac**power)


def heat(f: SpectralVectorField, t: float, nu: float = 1.0) -> SpectralVectorField:
    """Heat semigroup e^{t nu Laplacian}: multiply modes by exp(-nu t |k|^2)."""
    if t < 0:
        raise ValueError(f"heat flow requires t >= 0, got {t}")
    if nu <= 0:
        raise ValueError(f"viscosity must be positive, got {nu}")
    if t == 0:
        return f.copy()
    return SpectralVectorField(f.grid, f.coeffs * np.exp(-nu * t * f.grid.ksq))


def leray_project(f: SpectralVectorField) -> SpectralVectorField:
    """Project onto divergence-free fields: c -> c - k (k.c)/|k|^2, k = 0 kept."""
    grid = f.grid
    k = grid.k_deriv
    ksq = grid.ksq_deriv
    # k = 0 (and bare Nyquist lines, where k_deriv vanishes) pass through untouched
    safe = np.where(ksq == 0.0, 1.0, ksq)
    kdotc = np.sum(k * f.coeffs, axis=0)
    out = f.coeffs - k * (kdotc / safe)
    return SpectralVectorField(grid, out)


def div_tensor(F: TensorField) -> SpectralVectorField:
    """Row-wise tensor divergence: v_a = sum_b d_b F_ab."""
    grid = F.grid
    out = 1j * np.einsum("b...,ab...->a...", grid.k_deriv, F.coeffs)
    return SpectralVectorField(grid, out)


def nonlinearity(u: SpectralVectorField, use_dealias: bool = True) -> SpectralVectorField:
    """Projected convective term: Leray(sum_b d_b (u_a u_b)), dealiased.

    Rejects inputs whose divergence exceeds DIV_FREE_TOL relative to
    max(1, ||u||_inf); for divergence-free u this equals Leray((u.grad) u).
    """
    gate = DIV_FREE_TOL * max(1.0, linf(u))
    defect = divergence_sup(u)
    if not defect <= gate:  # also trips on NaN
        raise ValueError(f"nonlinearity needs divergence-free input: |div u| = {defect:.3e}")
    tens = pointwise_tensor(u, u, use_dealias)
    return leray_project(div_tensor(tens))


def duhamel_L(path: Sequence[SpectralVectorField] | Iterable[SpectralVectorField],
              tgrid: TimeGrid, nu: float = 1.0) -> list[SpectralVectorField]:
    """Apply the (negative-signed) Duhamel integral along a forcing path.

    path supplies f(t_m) for every node of tgrid, in order; the result list
    gives L(f) at the same nodes, starting with L(f)(0) = 0. Exact for paths
    that are piecewise linear in time between nodes.
    """
    if nu <= 0:
        raise ValueError(f"viscosity must be positive, got {nu}")
    it = iter(path)
    try:
        f_prev = next(it)
    except StopIteration:
        raise ValueError("empty forcing path") from None
    grid = f_prev.grid
    ksq = grid.ksq
    nodes = tgrid.nodes

    acc = np.zeros_like(f_prev.coeffs)
    out = [SpectralVectorField(grid, acc.copy())]
    decay = w_left = w_right = None
    h_cached = None
    for m in range(tgrid.nintervals):
        try:
            f_next = next(it)
        except StopIteration:
            raise ValueError(f"forcing path has fewer fields than time nodes ({m + 1} < {nodes.size})") from None
        _same_grid(grid, f_next.grid)
        h = float(nodes[m + 1] - nodes[m])
        if h != h_cached:  # uniform grids reuse one set of weights
            z = -nu * h * ksq
            decay = np.exp(z)
            p1, p2 = phi1(z), phi2(z)
            w_left = h * (p1 - p2)
            w_right = h * p2
            h_cached = h
        acc = decay * acc - (w_left * f_prev.coeffs + w_right * f_next.coeffs)
        out.append(SpectralVectorField(grid, acc.copy()))
        f_prev = f_next
    return out


def oseen_apply(F: TensorField, t: float, nu: float = 1.0) -> SpectralVectorField:
    """Smoothed projected tensor divergence e^{t nu Laplacian} Leray(div F), t > 0.

    The composite kernel is the Oseen-type operator whose sup norm decays like
    t^{-1/2} for unit-amplitude tensors; commutes with further heat flow.
    """
    if t <= 0:
        raise ValueError(f"oseen_apply requires t > 0, got {t}")
    return heat(leray_project(div_tensor(F)), t, nu)
