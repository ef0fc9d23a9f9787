"""Command-line front end.

Subcommands:
    simulate   run the mild solver on a configured profile, writing state
               snapshots, a monitor CSV, and report.json
    monitor    recompute monitor records from stored snapshots
    verify     run the estimate-verification suite, writing per-check JSON
               reports and a deterministic summary.csv
    profile    materialize configured initial data as a snapshot
    bench      time the core kernels

Exit codes: 0 success, 1 usage or configuration error, 2 verification check
failed, 3 fixed-point iteration did not converge, 4 suspected blow-up. Errors
are emitted as a single JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import (ConfigError, load_json, monitor_options_from_dict,
                     solver_config_from_dict, verify_config_from_dict)
from .fields import linf, lp_norm
from .littlewood_paley import besov_norm
from .monitor import monitor, write_monitor_csv
from .semigroup import TimeGrid
from .snapshots import SnapshotError, read_snapshot, write_snapshot
from .solver import (BlowupSuspected, NonConvergence, SolverConfig, Trajectory,
                     cross_validate, etdrk4_integrate, kato_smallness,
                     picard_solve, profile_from_spec)
from .verification import run_checks, summary_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2
EXIT_NO_CONVERGENCE = 3
EXIT_BLOWUP = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # route argparse failures through the JSON error channel with exit code 1
    def error(self, message: str) -> None:
        raise UsageError(message)


def _emit_error(kind: str, message: str, **extra) -> None:
    payload = {"error": {"type": kind, "message": message, **extra}}
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


def _dump_json(path: Path, obj: dict) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _write_trajectory_artifacts(outdir: Path, traj: Trajectory, method: str,
                                mon_opts: dict, echo: dict) -> dict:
    snapdir = outdir / "snapshots" / method
    snapdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for m, state in enumerate(traj.states):
        p = snapdir / f"state_{m:04d}.snap"
        write_snapshot(p, state, float(traj.times[m]))
        paths.append(str(p))
    records = monitor(traj, p_list=mon_opts["p_list"],
                      kato_horizon=mon_opts["kato_horizon"],
                      cutoff=mon_opts["cutoff"])
    csv_path = outdir / f"monitor_{method}.csv"
    write_monitor_csv(records, csv_path, config_echo=echo)
    return {"snapshots": paths, "monitor_csv": str(csv_path),
            "states": len(traj.states)}


def _cmd_simulate(args: argparse.Namespace) -> int:
    data = load_json(args.config)
    mon_opts = monitor_options_from_dict(data.pop("monitor", None))
    cfg = solver_config_from_dict(data)
    echo = {"solver": cfg.to_dict(), "monitor": mon_opts, "method": args.method}

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = cfg.grid()
    u0 = profile_from_spec(grid, cfg.profile)

    report: dict = {"config": echo, "runs": {}, "cross_validation": None, "error": None}
    code = EXIT_OK
    methods = ["picard", "etdrk4"] if args.method == "both" else [args.method]
    trajs: dict[str, Trajectory] = {}
    for method in methods:
        try:
            if method == "picard":
                traj, conv = picard_solve(u0, cfg)
                run_info = {"convergence": conv.to_dict()}
            else:
                traj = etdrk4_integrate(u0, cfg)
                run_info = {"meta": {k: v for k, v in traj.meta.items() if k != "config"}}
        except NonConvergence as exc:
            traj, run_info = exc.trajectory, {"convergence": exc.report.to_dict()}
            report["error"] = {"type": "NonConvergence", "message": str(exc)}
            code = EXIT_NO_CONVERGENCE
        except BlowupSuspected as exc:
            traj, run_info = exc.trajectory, {"blowup_time": exc.time}
            report["error"] = {"type": "BlowupSuspected", "message": str(exc),
                               "time": exc.time}
            code = EXIT_BLOWUP
        trajs[method] = traj
        run_info.update(_write_trajectory_artifacts(outdir, traj, method, mon_opts, echo))
        report["runs"][method] = run_info
        if code != EXIT_OK:
            break

    if code == EXIT_OK and len(trajs) == 2:
        scale = max(1.0, max(linf(s) for s in trajs["etdrk4"].states))
        shared = min(len(trajs["picard"].states), len(trajs["etdrk4"].states))
        errs = [linf(trajs["picard"].states[m] - trajs["etdrk4"].states[m]) / scale
                for m in range(shared)]
        disc = max(errs)
        report["cross_validation"] = {"discrepancy": disc, "tolerance": cfg.cross_tol,
                                      "passed": disc <= cfg.cross_tol, "node_errors": errs}

    _dump_json(outdir / "report.json", report)
    if report["error"] is not None:
        _emit_error(report["error"]["type"], report["error"]["message"],
                    report_json=str(outdir / "report.json"))
    return code


# ---------------------------------------------------------------------------
# monitor
# ---------------------------------------------------------------------------

def _collect_snapshot_paths(items: list[str]) -> list[Path]:
    paths: list[Path] = []
    for item in items:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.snap")))
        elif p.exists():
            paths.append(p)
        else:
            raise UsageError(f"snapshot path not found: {item}")
    if not paths:
        raise UsageError("no snapshot files found")
    return paths


def _cmd_monitor(args: argparse.Namespace) -> int:
    paths = _collect_snapshot_paths(args.snapshots)
    states, times = [], []
    for p in paths:
        f, t = read_snapshot(p)
        states.append(f)
        times.append(t)
    grid = states[0].grid
    for f in states[1:]:
        if f.grid != grid:
            raise UsageError("snapshots mix different grids")
    if len(times) < 2:
        raise UsageError("need at least two snapshots to form a trajectory")
    try:
        tgrid = TimeGrid(np.array(times))
    except ValueError as exc:
        raise UsageError(f"snapshot times do not form a time grid: {exc}")
    omega = read_snapshot(args.omega)[0] if args.omega else None
    kh = None if args.kato_horizon == "none" else (
        "default" if args.kato_horizon == "default" else float(args.kato_horizon))
    traj = Trajectory(grid, tgrid, states, method="snapshots", meta={"nu": args.nu})
    records = monitor(traj, p_list=tuple(args.p), omega=omega, kato_horizon=kh,
                      cutoff=args.cutoff, nu=args.nu)
    echo = {"nu": args.nu, "cutoff": args.cutoff, "kato_horizon": args.kato_horizon,
            "p_list": args.p, "snapshots": [str(p) for p in paths]}
    write_monitor_csv(records, args.out, config_echo=echo)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _cmd_verify(args: argparse.Namespace) -> int:
    checks, seed, sizes = None, args.seed, {}
    if args.config:
        checks, cfg_seed, sizes = verify_config_from_dict(load_json(args.config))
        if args.seed is None:
            seed = cfg_seed
    if args.checks:
        checks, _, _ = verify_config_from_dict({"checks": args.checks})
    if args.all or checks is None:
        checks, _, _ = verify_config_from_dict({})
    if seed is None:
        seed = 0

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    reports = run_checks(checks, seed=seed, sizes=sizes)
    for rep in reports:
        _dump_json(outdir / f"{rep.name}.json", rep.to_dict())
    (outdir / "summary.csv").write_text(summary_csv(reports))
    failed = [r.name for r in reports if not r.passed]
    if failed:
        _emit_error("CheckFailed", f"{len(failed)} check(s) failed: {failed}",
                    summary_csv=str(outdir / "summary.csv"))
        return EXIT_CHECK_FAILED
    return EXIT_OK


# ---------------------------------------------------------------------------
# profile
# ---------------------------------------------------------------------------

def _cmd_profile(args: argparse.Namespace) -> int:
    data = load_json(args.config)
    data.pop("monitor", None)
    cfg = solver_config_from_dict(data)
    grid = cfg.grid()
    u0 = profile_from_spec(grid, cfg.profile)
    write_snapshot(args.out, u0, 0.0)
    info = {
        "snapshot": str(args.out),
        "kind": cfg.profile.kind,
        "dim": grid.dim,
        "res": grid.res,
        "lp_2": lp_norm(u0, 2.0),
        "lp_n": lp_norm(u0, float(grid.dim)),
        "lp_inf": linf(u0),
        "besov_m1": besov_norm(u0, -1.0),
        "kato_I": kato_smallness(u0, min(1.0, cfg.horizon), cfg.nu).value,
    }
    print(json.dumps(info, indent=2, sort_keys=True))
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def _cmd_bench(args: argparse.Namespace) -> int:
    from .fields import random_vector_field
    from .grid import Grid
    from .littlewood_paley import build_partition
    from .semigroup import duhamel_L, heat, leray_project, nonlinearity

    grid = Grid(args.dim, args.res)
    rng = np.random.default_rng(0)
    u = leray_project(random_vector_field(grid, rng))
    part = build_partition(grid, "smooth")
    tg = TimeGrid.uniform(0.1, 16)
    path = [heat(u, float(t)) for t in tg.nodes]

    def timeit(fn) -> float:
        fn()  # warm caches before timing
        runs = []
        for _ in range(args.reps):
            t0 = time.perf_counter()
            fn()
            runs.append(time.perf_counter() - t0)
        return min(runs)

    results = {
        "grid": {"dim": args.dim, "res": args.res},
        "seconds": {
            "nonlinearity": timeit(lambda: nonlinearity(u)),
            "besov_m1": timeit(lambda: besov_norm(u, -1.0, part)),
            "heat": timeit(lambda: heat(u, 0.1)),
            "duhamel_16_nodes": timeit(lambda: duhamel_L(path, tg)),
        },
    }
    out = json.dumps(results, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(out + "\n")
    print(out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="cnlab", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"cnlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run the mild solver")
    p_sim.add_argument("--config", required=True, help="JSON run configuration")
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.add_argument("--method", choices=["picard", "etdrk4", "both"],
                       default="picard")
    p_sim.set_defaults(func=_cmd_simulate)

    p_mon = sub.add_parser("monitor", help="monitor stored snapshots")
    p_mon.add_argument("--snapshots", nargs="+", required=True,
                       help="snapshot files or directories")
    p_mon.add_argument("--out", required=True, help="output CSV path")
    p_mon.add_argument("--nu", type=float, default=1.0)
    p_mon.add_argument("--p", type=float, nargs="*", default=[],
                       help="extra Lebesgue exponents (kept in memory only)")
    p_mon.add_argument("--kato-horizon", default="default",
                       help="'default', 'none', or a number")
    p_mon.add_argument("--cutoff", choices=["sharp", "smooth"], default="sharp")
    p_mon.add_argument("--omega", default=None,
                       help="reference snapshot for the Besov distance column")
    p_mon.set_defaults(func=_cmd_monitor)

    p_ver = sub.add_parser("verify", help="run estimate verification checks")
    p_ver.add_argument("--all", action="store_true", help="run every check")
    p_ver.add_argument("--checks", nargs="*", default=None,
                       help="subset of check names")
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.add_argument("--config", default=None,
                       help="optional JSON with checks/seed/sizes")
    p_ver.add_argument("--out", required=True, help="output directory")
    p_ver.set_defaults(func=_cmd_verify)

    p_prof = sub.add_parser("profile", help="materialize initial data")
    p_prof.add_argument("--config", required=True)
    p_prof.add_argument("--out", required=True, help="snapshot path")
    p_prof.set_defaults(func=_cmd_profile)

    p_bench = sub.add_parser("bench", help="time core kernels")
    p_bench.add_argument("--dim", type=int, default=2)
    p_bench.add_argument("--res", type=int, default=64)
    p_bench.add_argument("--reps", type=int, default=3)
    p_bench.add_argument("--out", default=None)
    p_bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _emit_error("UsageError", str(exc))
        return EXIT_USAGE
    except ConfigError as exc:
        _emit_error("ConfigError", str(exc))
        return EXIT_USAGE
    except SnapshotError as exc:
        _emit_error("SnapshotError", str(exc))
        return EXIT_USAGE
    except ValueError as exc:
        _emit_error("ValueError", str(exc))
        return EXIT_USAGE
    except NonConvergence as exc:
        _emit_error("NonConvergence", str(exc))
        return EXIT_NO_CONVERGENCE
    except BlowupSuspected as exc:
        _emit_error("BlowupSuspected", str(exc), time=exc.time)
        return EXIT_BLOWUP


if __name__ == "__main__":
    sys.exit(main())
