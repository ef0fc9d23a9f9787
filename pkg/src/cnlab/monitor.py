"""Critical-quantity monitoring along computed trajectories.

Each trajectory state yields one record of the norms that control regularity:
Lebesgue norms (always including p = dim and p = inf), the critical Besov norm
of regularity -1, optionally the Besov distance to a reference profile and the
smallness functional over the remaining horizon, and the kinetic energy.
Records serialize to CSV with full round-trip float precision.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .fields import SpectralVectorField, phys_values
from .littlewood_paley import DyadicPartition, besov_norm_states, build_partition
from .solver import KatoSmallness, Trajectory, kato_smallness

CSV_COLUMNS = ("t", "lp_2", "lp_n", "lp_inf", "besov_m1", "besov_dist_omega",
               "kato_I", "energy")


class FitUndefined(ValueError):
    """Raised when a rate fit has no increasing tail to work with."""


@dataclass
class MonitorRecord:
    t: float
    lp_2: float
    lp_n: float
    lp_inf: float
    besov_m1: float
    besov_dist_omega: float | None
    kato_I: float | None
    energy: float
    extra_lp: dict[float, float] = field(default_factory=dict)


@dataclass
class BVResult:
    total: float
    max_increment: float
    argmax_index: int


@dataclass
class RateFit:
    exponent: float
    intercept: float
    residual: float
    npoints: int


def _state_magnitude(grid, coeffs: np.ndarray) -> np.ndarray:
    """Pointwise Euclidean magnitude, scaled so near-blowup states (finite
    samples up to ~1e308) do not overflow in the squaring."""
    phys = phys_values(grid, coeffs)
    scale = float(np.max(np.abs(phys)))
    if scale == 0.0 or not np.isfinite(scale):
        with np.errstate(over="ignore", invalid="ignore"):
            return np.sqrt(np.sum(phys**2, axis=0))
    return scale * np.sqrt(np.sum((phys / scale) ** 2, axis=0))


def _lp_from_mag(grid, mag: np.ndarray, p: float) -> float:
    if math.isinf(p):
        return float(np.max(mag))
    top = float(np.max(mag))
    if top == 0.0 or not np.isfinite(top):
        with np.errstate(over="ignore", invalid="ignore"):
            return float((grid.cell_volume * np.sum(mag**p)) ** (1.0 / p))
    return float(top * (grid.cell_volume * np.sum((mag / top) ** p)) ** (1.0 / p))


def monitor(traj: Trajectory, p_list: Sequence[float] = (), omega: SpectralVectorField | None = None,
            kato_horizon: float | str | None = None, cutoff: str = "sharp",
            nu: float | None = None) -> list[MonitorRecord]:
    """One record per stored state.

    p_list adds Lebesgue norms beyond the always-computed {2, dim, inf}.
    kato_horizon: None disables the smallness column; "default" uses
    min(1, horizon - t) per record; a number fixes the remaining horizon.
    Works on partial (blow-up) trajectories as-is.
    """
    grid = traj.grid
    nu = float(traj.meta.get("nu", 1.0)) if nu is None else nu
    part = build_partition(grid, cutoff)
    n = float(grid.dim)
    horizon = traj.tgrid.horizon

    # near-blowup states may overflow the block sups; inf columns are honest
    with np.errstate(over="ignore", invalid="ignore"):
        besov = besov_norm_states(traj.states, -1.0, part)
        if omega is not None:
            diffs = [s - omega for s in traj.states]
            dists = besov_norm_states(diffs, -1.0, part)
    records = []
    for m, state in enumerate(traj.states):
        t = float(traj.times[m])
        mag = _state_magnitude(grid, state.coeffs)
        lp2 = _lp_from_mag(grid, mag, 2.0)
        with np.errstate(over="ignore"):
            energy = float(0.5 * np.float64(lp2) * np.float64(lp2))
        rec = MonitorRecord(
            t=t,
            lp_2=lp2,
            lp_n=_lp_from_mag(grid, mag, n),
            lp_inf=float(np.max(mag)),
            besov_m1=float(besov[m]),
            besov_dist_omega=float(dists[m]) if omega is not None else None,
            kato_I=None,
            energy=energy,
            extra_lp={p: _lp_from_mag(grid, mag, p) for p in p_list},
        )
        if kato_horizon is not None:
            rem = min(1.0, horizon - t) if kato_horizon == "default" else float(kato_horizon)
            if rem > 0:
                with np.errstate(over="ignore", invalid="ignore"):
                    rec.kato_I = kato_smallness(state, rem, nu).value
        records.append(rec)
    return records


def kato_functional(traj: Trajectory, index: int, horizon: float | None = None,
                    nu: float | None = None) -> KatoSmallness:
    """Smallness functional of the state at one node over the remaining horizon."""
    t0 = float(traj.times[index])
    if horizon is None:
        horizon = min(1.0, traj.tgrid.horizon - t0)
    if horizon <= 0:
        raise ValueError(f"no horizon remains after t0 = {t0}")
    nu = float(traj.meta.get("nu", 1.0)) if nu is None else nu
    return kato_smallness(traj.states[index], horizon, nu)


def bv_variation(traj: Trajectory, s: float, part: DyadicPartition | None = None) -> BVResult:
    """Discrete variation sum_j ||u(t_{j+1}) - u(t_j)||_{B^{s,inf}} with witness.

    A bounded-variation bound on the trajectory caps this sum independently of
    the node count; the largest single increment localizes where it fails.
    """
    if len(traj.states) < 2:
        raise ValueError("need at least two stored states")
    part = build_partition(traj.grid, "sharp") if part is None else part
    diffs = [b - a for a, b in zip(traj.states[:-1], traj.states[1:])]
    norms = besov_norm_states(diffs, s, part)
    idx = int(np.argmax(norms))
    return BVResult(float(np.sum(norms)), float(norms[idx]), idx)


def expected_blowup_exponent(n: int, p: float) -> float:
    """Lower-bound blow-up rate exponent (1/2)(n/p - 1) for p > n."""
    ratio = 0.0 if math.isinf(p) else n / p
    return 0.5 * (ratio - 1.0)


def _lp_of_record(rec: MonitorRecord, p: float, n: int) -> float:
    if p == 2.0:
        return rec.lp_2
    if p == float(n):
        return rec.lp_n
    if math.isinf(p):
        return rec.lp_inf
    if p in rec.extra_lp:
        return rec.extra_lp[p]
    raise KeyError(f"records carry no L^{p} column")


def giga_rate_fit(records: Sequence[MonitorRecord], p: float, t_star: float,
                    n: int | None = None) -> RateFit:
    """Least-squares slope of log ||u(t)||_p against log(t_star - t).

    Requires at least eight records, all earlier than t_star, with strictly
    increasing norms; otherwise FitUndefined. A norm following
    c (t_star - t)^gamma is recovered with exponent gamma exactly.
    """
    if len(records) < 8:
        raise FitUndefined(f"need >= 8 records, got {len(records)}")
    n = n if n is not None else 3
    ts = np.array([r.t for r in records])
    if np.any(ts >= t_star):
        raise FitUndefined("records must lie strictly before t_star")
    vals = np.array([_lp_of_record(r, p, n) for r in records])
    if np.any(np.diff(vals) <= 0) or np.any(vals <= 0):
        raise FitUndefined("norms are not strictly increasing toward t_star")
    x = np.log(t_star - ts)
    y = np.log(vals)
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.max(np.abs(slope * x + intercept - y)))
    return RateFit(float(slope), float(intercept), resid, len(records))


# ---------------------------------------------------------------------------
# CSV serialization
# ---------------------------------------------------------------------------

def _fmt(x: float | None) -> str:
    return "" if x is None else repr(float(x))


def write_monitor_csv(records: Sequence[MonitorRecord], path: str | Path,
                      config_echo: dict | None = None) -> None:
    lines = []
    if config_echo is not None:
        lines.append("# config: " + json.dumps(config_echo, sort_keys=True))
    lines.append(",".join(CSV_COLUMNS))
    for r in records:
        lines.append(",".join([
            _fmt(r.t), _fmt(r.lp_2), _fmt(r.lp_n), _fmt(r.lp_inf), _fmt(r.besov_m1),
            _fmt(r.besov_dist_omega), _fmt(r.kato_I), _fmt(r.energy),
        ]))
    Path(path).write_text("\n".join(lines) + "\n")


def read_monitor_csv(path: str | Path) -> list[MonitorRecord]:
    records = []
    for line in Path(path).read_text().splitlines():
        if not line or line.startswith("#") or line.startswith("t,"):
            continue
        parts = line.split(",")
        vals = [float(v) if v else None for v in parts]
        records.append(MonitorRecord(vals[0], vals[1], vals[2], vals[3], vals[4],
                                     vals[5], vals[6], vals[7]))
    return records
