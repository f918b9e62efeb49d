"""Command-line experiment driver.

Exit codes: 0 success, 1 check/criterion failure, 2 bad config,
3 infeasible parameters, 4 unwritable output.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .experiment import ConfigError, ExperimentConfig, OutputError, run_experiment
from .params import ParameterError

EXIT_CHECK_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_BAD_PARAMS = 3
EXIT_BAD_OUTPUT = 4


def _load_config(path: str, kind: str, seed, out) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    cfg = ExperimentConfig.from_dict(raw)
    if cfg.kind != kind:
        raise ConfigError(f"config kind {cfg.kind!r} does not match command {kind!r}")
    if seed is not None:
        cfg.master_seed = seed
    if out is not None:
        cfg.output_dir = out
    return cfg


def _execute(config_path: str, kind: str, seed, jobs, out) -> None:
    try:
        cfg = _load_config(config_path, kind, seed, out)
        status, manifest = run_experiment(cfg, jobs)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_BAD_CONFIG)
    except ParameterError as exc:
        click.echo(f"parameter error: {exc}", err=True)
        sys.exit(EXIT_BAD_PARAMS)
    except OutputError as exc:
        click.echo(f"output error: {exc}", err=True)
        sys.exit(EXIT_BAD_OUTPUT)
    click.echo(f"manifest: {manifest}")
    if status:
        click.echo("one or more checks failed (see checks.json)", err=True)
    sys.exit(status)


_common = [
    click.option("--config", "config_path", required=True, type=click.Path(exists=False),
                 help="experiment config JSON"),
    click.option("--seed", type=int, default=None, help="override master seed"),
    click.option("--jobs", type=int, default=None, envvar="SCORELAW_JOBS",
                 help="parallel replica workers"),
    click.option("--out", type=str, default=None, help="override output directory"),
]


def _with_common(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


@click.group()
def main() -> None:
    """Scale-free score/weight evolution: simulation, analytics, checks."""


@main.command()
@_with_common
def simulate(config_path, seed, jobs, out):
    """Run a score-evolution (population) experiment."""
    _execute(config_path, "model_s", seed, jobs, out)


@main.command()
@_with_common
def graph(config_path, seed, jobs, out):
    """Run an interaction-graph experiment."""
    _execute(config_path, "n_interactions", seed, jobs, out)


@main.command()
@_with_common
def analytic(config_path, seed, jobs, out):
    """Tabulate the analytic limit distribution and its identities."""
    _execute(config_path, "analytic_only", seed, jobs, out)


@main.command()
@click.argument("suite", type=str)
@click.option("--out", type=str, default="acceptance_out",
              help="directory for the artifacts the long-run criteria emit")
def acceptance(suite, out):
    """Run the acceptance suite (fast | full)."""
    from .acceptance import run_suite

    try:
        results = run_suite(suite, out_dir=Path(out))
    except ValueError as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_BAD_CONFIG)
    failed = [r for r in results if not r.passed]
    if failed:
        click.echo(f"{len(failed)} criterion(s) failed: "
                   + ", ".join(r.name for r in failed), err=True)
    sys.exit(EXIT_CHECK_FAILED if failed else 0)


@main.command()
@click.argument("manifest", type=click.Path(exists=True))
def report(manifest):
    """Summarize a run from its manifest."""
    data = json.loads(Path(manifest).read_text())
    click.echo(f"config hash: {data['config_hash']}")
    base = Path(manifest).parent
    for art in data["artifacts"]:
        click.echo(f"  [{art['kind']}] {art['path']}")
        if art["kind"] in ("check_report", "fit_report", "concentration_report"):
            body = json.loads((base / art["path"]).read_text())
            click.echo("    " + json.dumps(body, sort_keys=True))


if __name__ == "__main__":
    main()
