"""Command line interface.

    plexsim run   --config cfg.json [--out DIR --seed N --solver S --set 1|2]
    plexsim run   --preset fig1 [...]
    plexsim sweep --preset fig2 [--axis FIELD --values a,b,c --jobs N]
    plexsim presets

Flags override file values.  Exit codes: 0 success, 1 config error,
2 numerical diagnostic, 3 I/O error.
"""

import sys
from importlib import resources

import click

from .config import SOLVERS, load_config
from .errors import (
    InsufficientPropagationError,
    InvalidArgumentError,
    PropagationDiagnosticError,
    SchemaError,
)
from .runner import RunResult, run as run_scenario, sweep as sweep_scenario

EXIT_CONFIG = 1
EXIT_DIAGNOSTIC = 2
EXIT_IO = 3


def _preset_path(name):
    base = resources.files("plexsim") / "presets"
    path = base / f"{name}.json"
    if not path.is_file():
        available = sorted(p.name[:-5] for p in base.iterdir() if p.name.endswith(".json"))
        raise SchemaError("$.preset", f"unknown preset {name!r}, available: {available}")
    return str(path)


def _resolve_config(config_path, preset, overrides):
    if (config_path is None) == (preset is None):
        raise SchemaError("$", "give exactly one of --config or --preset")
    source = config_path if config_path is not None else _preset_path(preset)
    return load_config(source, overrides)


def _exit_code(exc):
    if isinstance(exc, (SchemaError, InvalidArgumentError)):
        return EXIT_CONFIG
    if isinstance(exc, (PropagationDiagnosticError, InsufficientPropagationError)):
        return EXIT_DIAGNOSTIC
    if isinstance(exc, OSError):
        return EXIT_IO
    raise exc


@click.group()
def main():
    """Dot-plasmon simulator: spectra, CW dynamics, and entanglement runs."""


@main.command(name="run")
@click.option("--config", "config_path", type=str, default=None, help="Config JSON path.")
@click.option("--preset", type=str, default=None, help="Bundled preset name (fig1..fig6).")
@click.option("--out", "out_dir", type=str, default=None, help="Output directory.")
@click.option("--seed", type=int, default=None, help="Random seed override.")
@click.option("--solver", type=click.Choice(SOLVERS), default=None, help="Solver override.")
@click.option("--set", "parameter_set", type=click.IntRange(1, 2), default=None,
              help="Parameter set override (1 or 2).")
def run_command(config_path, preset, out_dir, seed, solver, parameter_set):
    """Run one scenario and write CSV outputs plus a manifest."""
    overrides = {
        "out_dir": out_dir,
        "seed": seed,
        "solver": solver,
        "parameter_set": parameter_set,
    }
    try:
        config = _resolve_config(config_path, preset, overrides)
        result = run_scenario(config)
    except Exception as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(_exit_code(exc))
    click.echo(f"wrote {len(result.files)} files to {result.out_dir}")


@main.command(name="sweep")
@click.option("--config", "config_path", type=str, default=None)
@click.option("--preset", type=str, default=None)
@click.option("--axis", type=str, default=None, help="Config field to sweep.")
@click.option("--values", type=str, default=None, help="Comma-separated values.")
@click.option("--jobs", type=int, default=1, help="Concurrent runs.")
@click.option("--out", "out_dir", type=str, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--solver", type=click.Choice(SOLVERS), default=None)
@click.option("--set", "parameter_set", type=click.IntRange(1, 2), default=None)
def sweep_command(config_path, preset, axis, values, jobs, out_dir, seed, solver, parameter_set):
    """Run one scenario per value of a swept field."""
    overrides = {
        "out_dir": out_dir,
        "seed": seed,
        "solver": solver,
        "parameter_set": parameter_set,
    }
    try:
        config = _resolve_config(config_path, preset, overrides)
        parsed = [float(v) for v in values.split(",")] if values is not None else None
        outcomes = sweep_scenario(config, axis=axis, values=parsed, jobs=jobs)
    except Exception as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(_exit_code(exc))
    failures = [(v, r) for v, r in outcomes if not isinstance(r, RunResult)]
    for v, r in outcomes:
        status = "ok" if isinstance(r, RunResult) else f"error: {r}"
        click.echo(f"{v:g}: {status}")
    if failures:
        sys.exit(_exit_code(failures[0][1]))


@main.command(name="presets")
def presets_command():
    """List bundled scenario presets."""
    base = resources.files("plexsim") / "presets"
    for path in sorted(base.iterdir()):
        if path.name.endswith(".json") and not path.name.endswith("schema.json"):
            click.echo(path.name[:-5])


if __name__ == "__main__":
    main()
