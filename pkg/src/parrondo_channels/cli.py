import logging
from functools import wraps
from pathlib import Path

import click

from . import commands
from .exceptions import (
    ClaimFailureError,
    ConfigurationError,
    InsufficientSamplesError,
    ParameterError,
    SimulationError,
)
from .experiment import FORMATS, ROLES, ExperimentConfig
from .report import Table, failed_claims, render
from .utilities import output_file


EXIT_CLAIM_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_IO_ERROR = 3


def exit_codes(func):
    """Map package errors to the documented exit codes."""

    @wraps(func)
    def wrapped(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (ClaimFailureError, InsufficientSamplesError) as e:
            click.echo(f"Error: {e}", err=True)
            raise SystemExit(EXIT_CLAIM_FAILURE)
        except (ConfigurationError, ParameterError, SimulationError) as e:
            click.echo(f"Configuration error: {e}", err=True)
            raise SystemExit(EXIT_CONFIG_ERROR)
        except OSError as e:
            click.echo(f"I/O error: {e}", err=True)
            raise SystemExit(EXIT_IO_ERROR)

    return wrapped


_EXPERIMENT_OPTIONS = [
    click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
                 help="Experiment JSON file (default: nearest .parrondo.json)."),
    click.option("--seed", type=int, default=None, help="Base seed of the ensembles."),
    click.option("--trials", type=int, default=None, help="Trajectories per ensemble."),
    click.option("--uses", type=int, default=None, help="Channel uses per trajectory."),
    click.option("--m0", type=int, default=None, help="Gate threshold M0 for every role."),
    click.option("--lambda", "lam", type=float, default=None, help="Mixing weight of the mixture role."),
    click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=None, help="Output directory."),
    click.option("--format", "fmt", type=click.Choice(FORMATS), default=None, help="Report format."),
    click.option("--workers", type=int, default=None, help="Worker processes for the ensembles."),
]


def experiment_options(func):
    for option in reversed(_EXPERIMENT_OPTIONS):
        func = option(func)
    return func


def _load(config_path, lam=None, fmt=None, **flags) -> ExperimentConfig:
    return ExperimentConfig.load(config_path, overrides={**flags, "lambda": lam, "format": fmt})


def _emit(tables: list[Table], config: ExperimentConfig, name: str | None = None) -> None:
    text = render(tables, config.format)
    click.echo(text, nl=False)
    if name is not None:
        path = output_file(config.out, f"{name}.{config.format}", mkdir=True)
        path.write_text(text)
        logging.info("Report written to %s", path)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log debug messages to stderr.")
def main(verbose: bool):
    """Simulate shared-memory erasure channels and reproduce their capacity analysis."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        force=True,
    )


@main.command()
@experiment_options
@exit_codes
def stationary(**options):
    """Closed-form residue distributions, success probabilities and drifts."""
    config = _load(**options)
    _emit(commands.stationary_tables(config), config)


@main.command()
@experiment_options
@click.option("--role", "roles", type=click.Choice(ROLES), multiple=True, help="Roles to simulate (default: all).")
@click.option("--record/--no-record", "record_trajectories", default=None, help="Write per-use trajectory CSVs.")
@exit_codes
def simulate(roles, **options):
    """Run ensembles and write JSON summaries (and trajectory CSVs)."""
    config = _load(**options)
    _emit(commands.simulate_tables(config, roles or ROLES), config)


@main.command()
@experiment_options
@exit_codes
def parrondo(**options):
    """Check that A and B lose memory while their mixture gains it."""
    config = _load(**options)
    _emit(commands.parrondo_tables(config), config)


@main.command()
@experiment_options
@exit_codes
def capacity(**options):
    """Capacities of the late-window effective channels."""
    config = _load(**options)
    tables = commands.capacity_tables(config)
    _emit(tables, config)
    if roles := commands.inconclusive_roles(tables):
        raise InsufficientSamplesError(
            f"Capacity inconclusive for role(s) {', '.join(roles)}: too few late-window samples."
        )


@main.command()
@experiment_options
@exit_codes
def reproduce(**options):
    """Compare every published value with its closed form and Monte Carlo estimate."""
    config = _load(**options)
    tables = commands.reproduce_tables(config)
    _emit(tables, config, "reproduce")
    if failed := failed_claims(tables):
        raise ClaimFailureError(f"{len(failed)} claim(s) missed at 3 sigma: {', '.join(failed)}")


@main.command()
@experiment_options
@click.option("--steps", type=click.IntRange(min=1), default=20, show_default=True, help="Grid intervals on [0, 1].")
@exit_codes
def sweep(steps, **options):
    """Mixture drift across mixing weights."""
    config = _load(**options)
    _emit(commands.sweep_tables(config, steps), config)


if __name__ == "__main__":
    main()
