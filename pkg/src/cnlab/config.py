"""JSON run configuration with strict key checking.

Configs are plain JSON objects. Every level rejects keys it does not know
about, so a typo like "contraction_toll" fails loudly instead of silently
running with defaults.
"""

from __future__ import annotations

import json
from pathlib import Path

from .solver import EtdrkOptions, PicardOptions, ProfileSpec, SolverConfig
from .verification import CHECKS


class ConfigError(ValueError):
    pass


def _reject_unknown(data: dict, allowed: set[str], where: str) -> None:
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object, got {type(data).__name__}")
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown keys {unknown}; allowed: {sorted(allowed)}")


def load_json(path: str | Path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    return data


_PICARD_KEYS = {"max_iters", "contraction_tol", "node_count", "grading", "grading_power"}
_ETDRK4_KEYS = {"dt"}
_PROFILE_KEYS = {"kind", "amplitude", "slope", "seed", "band"}
_SOLVER_KEYS = {"dim", "res", "nu", "horizon", "dealias", "cross_tol",
                "epsilon_n_probe", "picard", "etdrk4", "profile"}
_MONITOR_KEYS = {"p_list", "kato_horizon", "cutoff"}
_SIMULATE_KEYS = _SOLVER_KEYS | {"monitor"}


def solver_config_from_dict(data: dict, where: str = "config") -> SolverConfig:
    _reject_unknown(data, _SIMULATE_KEYS, where)
    kwargs = {k: data[k] for k in data if k in _SOLVER_KEYS - {"picard", "etdrk4", "profile"}}
    if "picard" in data:
        _reject_unknown(data["picard"], _PICARD_KEYS, f"{where}.picard")
        kwargs["picard"] = PicardOptions(**data["picard"])
    if "etdrk4" in data:
        _reject_unknown(data["etdrk4"], _ETDRK4_KEYS, f"{where}.etdrk4")
        kwargs["etdrk4"] = EtdrkOptions(**data["etdrk4"])
    if "profile" in data:
        _reject_unknown(data["profile"], _PROFILE_KEYS, f"{where}.profile")
        prof = dict(data["profile"])
        if prof.get("band") is not None:
            prof["band"] = tuple(prof["band"])
        kwargs["profile"] = ProfileSpec(**prof)
    try:
        return SolverConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}")


def monitor_options_from_dict(data: dict | None, where: str = "config.monitor") -> dict:
    if data is None:
        return {"p_list": (), "kato_horizon": "default", "cutoff": "sharp"}
    _reject_unknown(data, _MONITOR_KEYS, where)
    opts = {
        "p_list": tuple(data.get("p_list", ())),
        "kato_horizon": data.get("kato_horizon", "default"),
        "cutoff": data.get("cutoff", "sharp"),
    }
    if opts["cutoff"] not in ("sharp", "smooth"):
        raise ConfigError(f"{where}.cutoff must be 'sharp' or 'smooth'")
    kh = opts["kato_horizon"]
    if not (kh is None or kh == "default" or isinstance(kh, (int, float))):
        raise ConfigError(f"{where}.kato_horizon must be null, 'default', or a number")
    for p in opts["p_list"]:
        if not isinstance(p, (int, float)) or p < 1:
            raise ConfigError(f"{where}.p_list entries must be numbers >= 1")
    return opts


_VERIFY_KEYS = {"checks", "seed", "sizes"}
_SIZE_KEYS = {"trials", "res", "res_list", "dim", "dims", "nodes", "pairs",
              "s_list", "T_list"}


def verify_config_from_dict(data: dict, where: str = "config") -> tuple[list[str], int, dict]:
    _reject_unknown(data, _VERIFY_KEYS, where)
    checks = data.get("checks", list(CHECKS))
    if not isinstance(checks, list) or not checks:
        raise ConfigError(f"{where}.checks must be a non-empty list")
    bad = [c for c in checks if c not in CHECKS]
    if bad:
        raise ConfigError(f"{where}.checks: unknown {bad}; available: {sorted(CHECKS)}")
    seed = data.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError(f"{where}.seed must be an integer")
    sizes = data.get("sizes", {})
    _reject_unknown(sizes, set(CHECKS), f"{where}.sizes")
    for name, block in sizes.items():
        _reject_unknown(block, _SIZE_KEYS, f"{where}.sizes.{name}")
    return list(checks), seed, sizes
