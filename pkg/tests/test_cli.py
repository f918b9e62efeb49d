"""Command-line driver: exit codes, overrides, and the report command."""

import json

import pytest
from click.testing import CliRunner

from scorelaw.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def _write_config(tmp_path, raw, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(raw))
    return str(path)


MODEL_S = {
    "kind": "model_s",
    "params": {"a": 0.5, "b": 0.0, "m": 2.0, "t": 4, "u": 1},
    "n_max": 100,
    "checks": ["mass_identity"],
    "s_max": 1000,
}


def test_simulate_success(runner, tmp_path):
    cfg = _write_config(tmp_path, {**MODEL_S, "output_dir": str(tmp_path / "o")})
    result = runner.invoke(main, ["simulate", "--config", cfg])
    assert result.exit_code == 0, result.output
    assert "manifest:" in result.output
    assert (tmp_path / "o" / "manifest.json").exists()


def test_missing_config_file(runner, tmp_path):
    result = runner.invoke(main, ["simulate", "--config", str(tmp_path / "no.json")])
    assert result.exit_code == 2


def test_malformed_json(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    result = runner.invoke(main, ["simulate", "--config", str(bad)])
    assert result.exit_code == 2


def test_kind_mismatch(runner, tmp_path):
    cfg = _write_config(tmp_path, {**MODEL_S, "output_dir": str(tmp_path / "o")})
    result = runner.invoke(main, ["graph", "--config", cfg])
    assert result.exit_code == 2


def test_infeasible_params(runner, tmp_path):
    raw = {**MODEL_S, "params": {**MODEL_S["params"], "m": 9.0},
           "output_dir": str(tmp_path / "o")}
    result = runner.invoke(main, ["simulate", "--config", _write_config(tmp_path, raw)])
    assert result.exit_code == 3


def test_unwritable_output(runner, tmp_path):
    blocker = tmp_path / "blocked"
    blocker.write_text("")  # a plain file where the output dir should go
    cfg = _write_config(tmp_path, {**MODEL_S, "output_dir": str(blocker)})
    result = runner.invoke(main, ["simulate", "--config", cfg])
    assert result.exit_code == 4


def test_seed_and_out_overrides(runner, tmp_path):
    cfg = _write_config(tmp_path, {**MODEL_S, "output_dir": str(tmp_path / "a")})
    r1 = runner.invoke(main, ["simulate", "--config", cfg, "--seed", "5",
                              "--out", str(tmp_path / "b")])
    assert r1.exit_code == 0
    assert (tmp_path / "b" / "manifest.json").exists()
    assert not (tmp_path / "a").exists()


def test_analytic_and_report(runner, tmp_path):
    raw = {
        "kind": "analytic_only",
        "params": {"a": 0.5, "b": 0.0, "m": 2.0, "t": 4, "u": 1},
        "s_max": 500,
        "checks": ["mass_identity"],
        "output_dir": str(tmp_path / "an"),
    }
    r1 = runner.invoke(main, ["analytic", "--config", _write_config(tmp_path, raw)])
    assert r1.exit_code == 0
    r2 = runner.invoke(main, ["report", str(tmp_path / "an" / "manifest.json")])
    assert r2.exit_code == 0
    assert "config hash:" in r2.output
    assert "limit_distribution" in r2.output


def test_graph_command(runner, tmp_path):
    raw = {
        "kind": "n_interactions",
        "params": {"N": 3, "p": 0.75, "r": 0.75, "q": 0.75},
        "n_max": 500,
        "output_dir": str(tmp_path / "g"),
    }
    result = runner.invoke(main, ["graph", "--config", _write_config(tmp_path, raw)])
    assert result.exit_code == 0


def test_acceptance_rejects_unknown_suite(runner, tmp_path):
    result = runner.invoke(main, ["acceptance", "nope", "--out", str(tmp_path / "x")])
    assert result.exit_code == 2
