"""Scenario configuration: JSON documents validated against a flat schema.

A config names a scenario (spectrum, dynamics-cw, entangle, manifold-N),
picks parameter set 1 or 2, and may override any physical field, basis
size, solver choice, timing, or output setting.  Unknown keys and type
mismatches are rejected with the offending path.  The machine-readable
schema ships in ``plexsim/presets/config.schema.json``.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .constants import HBAR_EV_FS
from .errors import SchemaError
from .parameters import ParameterSet, default_parameters

SCENARIOS = ("spectrum", "dynamics-cw", "entangle", "manifold-N")
SOLVERS = ("lindblad", "nonhermitian", "both")
MODES = ("homogeneous", "inhomogeneous", "both")

PHYSICAL_KEYS = (
    "omega0", "omega_pl", "omega_L", "gamma1", "gamma2_star", "gamma_pl",
    "d0", "d_pl", "E_L", "t_c", "tau_L", "n_med",
)

_ALLOWED_KEYS = set(PHYSICAL_KEYS) | {
    "scenario", "parameter_set", "g", "cw_mode",
    "n_dots", "n_pl", "solver",
    "t_end_fs", "dt_fs", "record_dt_fs",
    "omega_min_eV", "omega_max_eV", "omega_step_eV",
    "out_dir", "seed",
    "mode", "coupling_mean_eV", "coupling_std_eV",
    "lost_norm", "sweep",
}

SWEEP_AXES = set(PHYSICAL_KEYS) | {"g", "t_end_fs", "dt_fs", "record_dt_fs", "seed"}


@dataclass
class ScenarioConfig:
    scenario: str
    parameter_set: int
    params: ParameterSet
    n_dots: int
    n_pl: int
    solver: str
    t_end: float
    dt: float
    record_dt: float
    omega_min: float
    omega_max: float
    omega_step: float
    out_dir: str
    seed: int
    mode: str
    coupling_mean: float
    coupling_std: float
    lost_norm: str
    sweep: dict = None
    raw: dict = field(default_factory=dict)

    def omega_grid(self):
        n = int(round((self.omega_max - self.omega_min) / self.omega_step)) + 1
        return self.omega_min + self.omega_step * np.arange(n)

    def resolved_dict(self):
        """Fully resolved values, suitable for the run manifest."""
        return {
            "scenario": self.scenario,
            "parameter_set": self.parameter_set,
            "params": {
                "omega0": self.params.omega0,
                "omega_pl": self.params.omega_pl,
                "omega_L": self.params.omega_L,
                "g": list(self.params.g),
                "gamma1": self.params.gamma1,
                "gamma2_star": self.params.gamma2_star,
                "gamma_pl": self.params.gamma_pl,
                "d0": self.params.d0,
                "d_pl": self.params.d_pl,
                "E_L": self.params.E_L,
                "t_c": self.params.t_c,
                "tau_L": self.params.tau_L,
                "n_med": self.params.n_med,
                "cw_mode": self.params.cw_mode,
            },
            "n_dots": self.n_dots,
            "n_pl": self.n_pl,
            "solver": self.solver,
            "t_end_fs": self.t_end,
            "dt_fs": self.dt,
            "record_dt_fs": self.record_dt,
            "omega_min_eV": self.omega_min,
            "omega_max_eV": self.omega_max,
            "omega_step_eV": self.omega_step,
            "out_dir": self.out_dir,
            "seed": self.seed,
            "mode": self.mode,
            "coupling_mean_eV": self.coupling_mean,
            "coupling_std_eV": self.coupling_std,
            "lost_norm": self.lost_norm,
            "sweep": self.sweep,
        }


_SCENARIO_DEFAULTS = {
    "spectrum": dict(n_dots=1, n_pl=5, solver="both", t_end=3000.0, record_dt=0.5),
    "dynamics-cw": dict(n_dots=1, n_pl=15, solver="both", t_end=2000.0),
    "entangle": dict(n_dots=2, n_pl=5, solver="both", t_end=2500.0, record_dt=1.0),
    "manifold-N": dict(n_dots=50, n_pl=2, solver="nonhermitian", t_end=2500.0, record_dt=1.0),
}


def _expect(doc, key, kinds, path, predicate=None, what=""):
    value = doc[key]
    if isinstance(value, bool) and bool not in kinds:
        raise SchemaError(f"{path}.{key}", f"expected {what or 'a number'}, got a boolean")
    if not isinstance(value, tuple(kinds)):
        raise SchemaError(f"{path}.{key}", f"expected {what or kinds}, got {type(value).__name__}")
    if predicate is not None and not predicate(value):
        raise SchemaError(f"{path}.{key}", f"invalid value {value!r}")
    return value


def _validate_sweep(sweep):
    if not isinstance(sweep, dict):
        raise SchemaError("$.sweep", "expected an object with axis and values")
    unknown = set(sweep) - {"axis", "values"}
    if unknown:
        raise SchemaError(f"$.sweep.{sorted(unknown)[0]}", "unknown key")
    if "axis" not in sweep or "values" not in sweep:
        raise SchemaError("$.sweep", "both axis and values are required")
    axis = sweep["axis"]
    if not isinstance(axis, str) or axis not in SWEEP_AXES:
        raise SchemaError("$.sweep.axis", f"axis must be one of {sorted(SWEEP_AXES)}")
    values = sweep["values"]
    if not isinstance(values, list) or not values:
        raise SchemaError("$.sweep.values", "expected a non-empty list of numbers")
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SchemaError(f"$.sweep.values[{i}]", "expected a number")
    return {"axis": axis, "values": [float(v) for v in values]}


def load_config(source, overrides=None):
    """Load and validate a scenario configuration.

    ``source`` is a JSON file path or an already-parsed dict; ``overrides``
    (e.g. from CLI flags) take precedence over file values.  Omitted
    physical fields fall back to the chosen parameter set's defaults.
    """
    if isinstance(source, (str, Path)):
        path = Path(source)
        if not path.exists():
            raise SchemaError("$", f"config file not found: {path}")
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"not valid JSON: {exc}") from exc
    else:
        doc = dict(source)
    if not isinstance(doc, dict):
        raise SchemaError("$", "config document must be a JSON object")
    doc = dict(doc)
    if overrides:
        doc.update({k: v for k, v in overrides.items() if v is not None})

    unknown = sorted(set(doc) - _ALLOWED_KEYS)
    if unknown:
        raise SchemaError(f"$.{unknown[0]}", "unknown key")

    scenario = doc.get("scenario", "spectrum")
    if scenario not in SCENARIOS:
        raise SchemaError("$.scenario", f"expected one of {SCENARIOS}, got {scenario!r}")
    parameter_set = doc.get("parameter_set", 1)
    if parameter_set not in (1, 2) or isinstance(parameter_set, bool):
        raise SchemaError("$.parameter_set", "expected 1 or 2")

    sdef = _SCENARIO_DEFAULTS[scenario]
    n_dots = doc.get("n_dots", sdef["n_dots"])
    if "n_dots" in doc:
        _expect(doc, "n_dots", [int], "$", lambda v: v >= 1, "a positive integer")
    n_pl = doc.get("n_pl", sdef["n_pl"])
    if "n_pl" in doc:
        _expect(doc, "n_pl", [int], "$", lambda v: v >= 2, "an integer >= 2")

    base = default_parameters(parameter_set, n_dots=n_dots)
    nonneg = {"gamma1", "gamma2_star", "gamma_pl", "d0", "d_pl", "E_L", "tau_L"}
    phys = {}
    for key in PHYSICAL_KEYS:
        if key in doc:
            value = float(_expect(doc, key, [int, float], "$"))
            if key in nonneg and value < 0:
                raise SchemaError(f"$.{key}", "must be >= 0")
            if key == "n_med" and value < 1:
                raise SchemaError("$.n_med", "must be >= 1")
            phys[key] = value
    if "cw_mode" in doc:
        phys["cw_mode"] = _expect(doc, "cw_mode", [bool], "$", what="a boolean")
    elif scenario == "dynamics-cw":
        phys["cw_mode"] = True
    if "g" in doc:
        g = doc["g"]
        if isinstance(g, (int, float)) and not isinstance(g, bool):
            phys["g"] = (float(g),) * n_dots
        elif isinstance(g, list) and g and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in g
        ):
            if len(g) != n_dots:
                raise SchemaError("$.g", f"expected {n_dots} couplings, got {len(g)}")
            phys["g"] = tuple(float(x) for x in g)
        else:
            raise SchemaError("$.g", "expected a number or a list of numbers")
    try:
        params = base.with_overrides(**phys)
    except ValueError as exc:
        raise SchemaError("$.params", str(exc)) from exc

    solver = doc.get("solver", sdef["solver"])
    if solver not in SOLVERS:
        raise SchemaError("$.solver", f"expected one of {SOLVERS}, got {solver!r}")
    if scenario == "manifold-N" and solver != "nonhermitian":
        raise SchemaError(
            "$.solver",
            "manifold-N runs are non-Hermitian only; a density-matrix solve "
            "at this dot count is out of scale",
        )
    if scenario == "spectrum" and params.cw_mode:
        raise SchemaError("$.cw_mode", "spectrum scenarios need a pulsed drive, not cw")

    t_end = float(doc.get("t_end_fs", sdef["t_end"]))
    # dynamics-cw defaults to drive-period-synchronous sampling so the
    # recorded series show the envelope, not 2*omega_L micro-oscillation.
    if scenario == "dynamics-cw":
        period = 2.0 * math.pi * HBAR_EV_FS / params.omega_L
        record_dt = float(doc.get("record_dt_fs", period))
        dt = float(doc.get("dt_fs", period / 406.0))
    else:
        record_dt = float(doc.get("record_dt_fs", sdef.get("record_dt", 0.5)))
        dt = float(doc.get("dt_fs", 0.005))
    for key in ("t_end_fs", "dt_fs", "record_dt_fs"):
        if key in doc:
            _expect(doc, key, [int, float], "$", lambda v: v > 0, "a positive number")
    if dt <= 0 or t_end <= 0 or record_dt <= 0:
        raise SchemaError("$.dt_fs", "timing values must be positive")

    omega_min = float(doc.get("omega_min_eV", params.omega_pl - 0.192))
    omega_max = float(doc.get("omega_max_eV", params.omega_pl + 0.208))
    omega_step = float(doc.get("omega_step_eV", 0.0002))
    for key in ("omega_min_eV", "omega_max_eV", "omega_step_eV"):
        if key in doc:
            _expect(doc, key, [int, float], "$", lambda v: v > 0, "a positive number")
    if omega_min >= omega_max:
        raise SchemaError("$.omega_min_eV", "omega_min_eV must be below omega_max_eV")

    out_dir = doc.get("out_dir", "out")
    if not isinstance(out_dir, str):
        raise SchemaError("$.out_dir", "expected a string path")
    seed = doc.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise SchemaError("$.seed", "expected an integer")

    mode = doc.get("mode", "homogeneous")
    if mode not in MODES:
        raise SchemaError("$.mode", f"expected one of {MODES}, got {mode!r}")
    coupling_mean = doc.get("coupling_mean_eV", params.g[0])
    coupling_std = doc.get("coupling_std_eV", coupling_mean)
    for key in ("coupling_mean_eV", "coupling_std_eV"):
        if key in doc:
            _expect(doc, key, [int, float], "$")
    if coupling_std < 0:
        raise SchemaError("$.coupling_std_eV", "must be >= 0")

    lost_norm = doc.get("lost_norm", "ground")
    if lost_norm not in ("ground", "renormalize"):
        raise SchemaError("$.lost_norm", "expected 'ground' or 'renormalize'")

    sweep = _validate_sweep(doc["sweep"]) if "sweep" in doc else None

    return ScenarioConfig(
        scenario=scenario,
        parameter_set=parameter_set,
        params=params,
        n_dots=n_dots,
        n_pl=n_pl,
        solver=solver,
        t_end=t_end,
        dt=dt,
        record_dt=record_dt,
        omega_min=omega_min,
        omega_max=omega_max,
        omega_step=omega_step,
        out_dir=out_dir,
        seed=seed,
        mode=mode,
        coupling_mean=float(coupling_mean),
        coupling_std=float(coupling_std),
        lost_norm=lost_norm,
        sweep=sweep,
        raw=doc,
    )
