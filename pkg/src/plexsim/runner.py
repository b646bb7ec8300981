"""Scenario orchestration: run one config, or sweep a field over values.

Every run writes its CSV outputs plus ``run_manifest.json`` with the
resolved config, the conversion constants, package and numpy versions,
the kernel backend, wall time, and a sha256 per output file.  Identical
config and seed give byte-identical CSVs.
"""

import concurrent.futures
import hashlib
import json
import platform
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .basis import build_basis
from .config import ScenarioConfig, load_config
from .constants import CODATA
from .drive import DriveSpec
from .dynamics import (
    RecordSpec,
    detect_steady_state,
    propagate_lindblad,
    propagate_nonhermitian,
    write_trajectory_csv,
)
from .entanglement import concurrence_trajectory, write_concurrence_csv
from .errors import InvalidArgumentError
from .kernels import backend_name
from .manifold import run_fifty_dot_scenario
from .spectra import spectrum_pipeline, write_spectrum_csv


@dataclass
class RunResult:
    out_dir: Path
    files: dict            # name -> sha256
    info: dict
    results: dict = field(default_factory=dict)   # in-memory leg results


def _solver_legs(solver):
    return ("lindblad", "nonhermitian") if solver == "both" else (solver,)


def _sha256(path: Path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _run_spectrum(config: ScenarioConfig, out: Path, files, results, info):
    basis = build_basis(config.n_dots, config.n_pl)
    drive = DriveSpec.from_params(config.params)
    for solver in _solver_legs(config.solver):
        traj, spectrum = spectrum_pipeline(
            config.params, basis, solver, drive,
            config.t_end, config.dt, config.record_dt, config.omega_grid(),
        )
        tpath = out / f"trajectory_{solver}.csv"
        spath = out / f"spectrum_{solver}.csv"
        write_trajectory_csv(traj, tpath)
        write_spectrum_csv(spectrum, spath)
        files.extend([tpath, spath])
        results[solver] = (traj, spectrum)


def _run_dynamics_cw(config: ScenarioConfig, out: Path, files, results, info):
    basis = build_basis(config.n_dots, config.n_pl)
    drive = DriveSpec.from_params(config.params)
    record = RecordSpec(record_dt=config.record_dt, snapshots=True)
    for solver in _solver_legs(config.solver):
        psi0 = basis.unit_vector(0, (0,) * basis.n_dots)
        if solver == "lindblad":
            traj = propagate_lindblad(
                np.outer(psi0, psi0.conj()), config.params, basis, drive,
                config.t_end, config.dt, record,
            )
            window = 100.0
            steady = (
                detect_steady_state(traj, window=window, tol=1e-3)
                if config.t_end > 2 * window
                else None
            )
            info[f"steady_state_fs_{solver}"] = steady
        else:
            traj = propagate_nonhermitian(
                psi0, config.params, basis, drive, config.t_end, config.dt, record
            )
        tpath = out / f"trajectory_{solver}.csv"
        write_trajectory_csv(traj, tpath)
        files.append(tpath)
        results[solver] = traj


def _run_entangle(config: ScenarioConfig, out: Path, files, results, info):
    if config.n_dots != 2:
        raise InvalidArgumentError("entangle scenario needs exactly two dots")
    basis = build_basis(config.n_dots, config.n_pl)
    drive = DriveSpec.from_params(config.params) if config.params.E_L > 0 else None
    record = RecordSpec(record_dt=config.record_dt, snapshots=True)
    for solver in _solver_legs(config.solver):
        psi0 = basis.unit_vector(0, (1, 0))
        if solver == "lindblad":
            traj = propagate_lindblad(
                np.outer(psi0, psi0.conj()), config.params, basis, drive,
                config.t_end, config.dt, record,
            )
        else:
            traj = propagate_nonhermitian(
                psi0, config.params, basis, drive, config.t_end, config.dt, record
            )
        times, conc = concurrence_trajectory(traj, lost_norm=config.lost_norm)
        tpath = out / f"trajectory_{solver}.csv"
        cpath = out / f"concurrence_{solver}.csv"
        write_trajectory_csv(traj, tpath)
        write_concurrence_csv(times, conc, cpath)
        files.extend([tpath, cpath])
        results[solver] = (traj, times, conc)


def _run_manifold(config: ScenarioConfig, out: Path, files, results, info):
    modes = ("homogeneous", "inhomogeneous") if config.mode == "both" else (config.mode,)
    for mode in modes:
        res = run_fifty_dot_scenario(
            config.params,
            mode=mode,
            seed=config.seed,
            t_end=config.t_end,
            sample_dt=config.record_dt,
            n_dots=config.n_dots,
            coupling_mean=config.coupling_mean,
            coupling_std=config.coupling_std,
        )
        tpath = out / f"trajectory_{mode}.csv"
        cpath = out / f"concurrence_{mode}.csv"
        mpath = out / f"metadata_{mode}.json"
        write_trajectory_csv(res.trajectory, tpath)
        write_concurrence_csv(res.concurrence_times, res.average_concurrence, cpath)
        mpath.write_text(
            json.dumps(
                {
                    "mode": mode,
                    "seed": config.seed,
                    "n_dots": config.n_dots,
                    "couplings_eV": list(res.couplings),
                    "negative_couplings": int(np.sum(res.couplings < 0)),
                },
                indent=2,
            )
        )
        files.extend([tpath, cpath, mpath])
        results[mode] = res


_SCENARIO_RUNNERS = {
    "spectrum": _run_spectrum,
    "dynamics-cw": _run_dynamics_cw,
    "entangle": _run_entangle,
    "manifold-N": _run_manifold,
}


def run(config: ScenarioConfig, out_dir=None) -> RunResult:
    """Execute one scenario config and write its outputs plus a manifest."""
    out = Path(out_dir if out_dir is not None else config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files, results, info = [], {}, {}
    start = time.perf_counter()
    _SCENARIO_RUNNERS[config.scenario](config, out, files, results, info)
    wall = time.perf_counter() - start
    hashes = {p.name: _sha256(p) for p in files}
    manifest = {
        "config": config.resolved_dict(),
        "constants": {
            "hbar_eV_fs": CODATA.hbar,
            "debye_to_Cm": CODATA.debye_to_Cm,
            "au_field_to_V_per_m": CODATA.au_field_to_Vpm,
            "eps0_F_per_m": CODATA.eps0,
            "c_m_per_s": CODATA.c,
            "debye_au_to_eV": CODATA.debye_au_to_eV,
        },
        "versions": {
            "plexsim": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "kernel_backend": backend_name(),
        "wall_time_s": wall,
        "files": hashes,
        "info": info,
    }
    manifest_path = out / "run_manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2))
    return RunResult(out_dir=out, files=hashes, info=info, results=results)


def _sweep_leg(raw_doc, axis, value, leg_dir):
    doc = dict(raw_doc)
    doc.pop("sweep", None)
    doc[axis] = value
    doc["out_dir"] = str(leg_dir)
    cfg = load_config(doc)
    return run(cfg)


def sweep(config: ScenarioConfig, axis=None, values=None, jobs=1):
    """Independent runs for each value of one numeric config field.

    Falls back to the config's own ``sweep`` block when axis or values
    are not supplied.  Legs land in value-suffixed subdirectories of the
    output directory; failures are reported per value, not raised on the
    first one.  Returns a list of (value, RunResult or exception).
    """
    if axis is None or values is None:
        if not config.sweep:
            raise InvalidArgumentError("no sweep axis/values given and the config has no sweep block")
        axis = config.sweep["axis"]
        values = config.sweep["values"]
    parent = Path(config.out_dir)
    parent.mkdir(parents=True, exist_ok=True)
    legs = [(v, parent / f"{axis}={v:g}") for v in values]
    outcomes = []
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_sweep_leg, config.raw, axis, v, d) for v, d in legs
            ]
            for (v, _), fut in zip(legs, futures):
                try:
                    outcomes.append((v, fut.result()))
                except Exception as exc:
                    outcomes.append((v, exc))
    else:
        for v, d in legs:
            try:
                outcomes.append((v, _sweep_leg(config.raw, axis, v, d)))
            except Exception as exc:
                outcomes.append((v, exc))
    summary = {
        "axis": axis,
        "values": [v for v, _ in outcomes],
        "status": {
            f"{v:g}": ("ok" if isinstance(r, RunResult) else f"error: {r}")
            for v, r in outcomes
        },
    }
    (parent / "sweep_manifest.json").write_text(json.dumps(summary, indent=2))
    return outcomes
