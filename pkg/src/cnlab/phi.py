"""Stable exponential quadrature weights phi_1, phi_2, phi_3.

phi_k(z) = (e^z - sum_{j<k} z^j/j!) / z^k = sum_{j>=0} z^j / (j+k)!.

The closed forms cancel catastrophically near z = 0, so below |z| = 0.5 the
functions switch to a Horner-evaluated Taylor series with enough terms
(0.5^19/19! ~ 1e-23) for full double precision on both branches.
"""

from __future__ import annotations

import math

import numpy as np

_SWITCH = 0.5
_TERMS = 18


def _series(z: np.ndarray, k: int) -> np.ndarray:
    acc = np.full_like(z, 1.0 / math.factorial(_TERMS + k))
    for j in range(_TERMS - 1, -1, -1):
        acc = acc * z + 1.0 / math.factorial(j + k)
    return acc


def _phi(z: np.ndarray, k: int) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    small = np.abs(z) < _SWITCH
    zsafe = np.where(small, 1.0, z)
    ez = np.exp(zsafe)
    if k == 1:
        direct = (ez - 1.0) / zsafe
    elif k == 2:
        direct = (ez - 1.0 - zsafe) / zsafe**2
    else:
        direct = (ez - 1.0 - zsafe - 0.5 * zsafe**2) / zsafe**3
    return np.where(small, _series(z, k), direct)


def phi1(z) -> np.ndarray:
    return _phi(z, 1)


def phi2(z) -> np.ndarray:
    return _phi(z, 2)


def phi3(z) -> np.ndarray:
    return _phi(z, 3)
