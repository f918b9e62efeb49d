"""Experiment driver: config parsing, deterministic multi-replica
orchestration, artifact persistence and verdict evaluation."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analytic, graph, io, model_s, stats
from .histogram import Histogram
from .params import GraphParams, ParameterError, SimParams
from .seeding import replica_seed

KINDS = ("model_s", "n_interactions", "analytic_only")
CHECKS = ("limit_compare", "tail_fit", "concentration", "mass_identity", "oracle_compare")


class ConfigError(ValueError):
    """Malformed experiment configuration."""


class OutputError(OSError):
    """Output directory cannot be created or written."""


@dataclass
class ExperimentConfig:
    kind: str
    params: dict
    n_max: int = 1000
    snapshots: list[int] = field(default_factory=list)
    replicas: int = 1
    master_seed: int = 0
    output_dir: str = "out"
    checks: list[str] = field(default_factory=list)
    check_options: dict = field(default_factory=dict)
    s_max: int = 10_000

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(raw) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        try:
            cfg = cls(**raw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        if cfg.kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, got {cfg.kind!r}")
        for c in cfg.checks:
            if c not in CHECKS:
                raise ConfigError(f"unknown check {c!r}; valid: {CHECKS}")
        if cfg.replicas < 1:
            raise ConfigError(f"replicas must be >= 1, got {cfg.replicas}")
        if cfg.snapshots != sorted(cfg.snapshots):
            raise ConfigError("snapshots must be sorted ascending")
        if not cfg.snapshots:
            cfg.snapshots = [cfg.n_max]
        return cfg

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params,
            "n_max": self.n_max,
            "snapshots": self.snapshots,
            "replicas": self.replicas,
            "master_seed": self.master_seed,
            "output_dir": self.output_dir,
            "checks": self.checks,
            "check_options": self.check_options,
            "s_max": self.s_max,
        }

    def sim_params(self, seed: int | None = None) -> SimParams:
        p = dict(self.params)
        if seed is not None:
            p["seed"] = seed
        try:
            return SimParams(**p)
        except TypeError as exc:
            raise ConfigError(f"bad model parameters: {exc}") from None

    def graph_params(self, seed: int | None = None) -> GraphParams:
        p = dict(self.params)
        if "tracked_M" in p:
            p["tracked_M"] = frozenset(p["tracked_M"])
        if seed is not None:
            p["seed"] = seed
        p.setdefault("n_max", self.n_max)
        p["n_max"] = self.n_max
        try:
            return GraphParams(**p)
        except TypeError as exc:
            raise ConfigError(f"bad graph parameters: {exc}") from None


def _model_s_replica(args) -> list[Histogram]:
    cfg, seed = args
    return model_s.run(cfg.sim_params(seed), cfg.n_max, cfg.snapshots)


def _graph_replica(args):
    cfg, seed = args
    result, _ = graph.run_graph(cfg.graph_params(seed), cfg.snapshots)
    return result


def _map_replicas(fn, cfg: ExperimentConfig, jobs: int) -> list:
    seeds = [replica_seed(cfg.master_seed, i) for i in range(cfg.replicas)]
    tasks = [(cfg, s) for s in seeds]
    if jobs > 1 and cfg.replicas > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, tasks))
    return [fn(task) for task in tasks]


def _mean_histogram(hists: list[Histogram]) -> dict[int, float]:
    keys = sorted({s for h in hists for s in h.counts})
    return {s: sum(h.get(s) for h in hists) / len(hists) for s in keys}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, **self.detail}


def run_experiment(config: ExperimentConfig, jobs: int | None = None) -> tuple[int, Path]:
    """Execute the experiment; returns (exit status, manifest path).

    Exit status is 0 when every enabled check passed, 1 otherwise.
    """
    jobs = jobs or int(os.environ.get("SCORELAW_JOBS", "1"))
    out = Path(config.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise OutputError(f"output directory {out} is not writable: {exc}") from exc

    opts = config.check_options
    artifacts: list[tuple[Path, str]] = []
    results: list[CheckResult] = []

    if config.kind == "analytic_only":
        params = config.sim_params(seed=0)
        limit = analytic.c_recurrence(params.u, config.s_max, params.a, params.b, params.m)
        path = out / "limit_distribution.csv"
        io.write_limit_csv(limit, path)
        artifacts.append((path, "limit_distribution"))
        if "mass_identity" in config.checks:
            results.append(_check_mass_identity(params, config.s_max, opts))
    elif config.kind == "model_s":
        replica_hists = _map_replicas(_model_s_replica, config, jobs)
        for i, hists in enumerate(replica_hists):
            for h in hists:
                path = out / f"histogram_r{i:04d}_n{h.n}.csv"
                io.write_histogram_csv(h, path)
                artifacts.append((path, "histogram"))
        finals = [hists[-1] for hists in replica_hists]
        mean = _mean_histogram(finals)
        path = out / "histogram_mean.csv"
        io._write_csv(path, ["s", "mean_count"], sorted(mean.items()))
        artifacts.append((path, "histogram_aggregate"))
        params = config.sim_params(seed=0)
        n = finals[0].n
        if "limit_compare" in config.checks:
            res, rows = _check_limit_compare(finals[0], params, opts)
            cmp_path = out / "limit_compare.csv"
            io.write_comparison_csv(rows, cmp_path)
            artifacts.append((cmp_path, "comparison"))
            results.append(res)
        if "tail_fit" in config.checks:
            dist = {s: float(c) for s, c in finals[0].items_sorted()}
            results.append(_check_tail_fit(dist, 1.0 + 1.0 / params.a, opts, out, artifacts))
        if "concentration" in config.checks:
            results.append(_check_concentration(finals, opts, out, artifacts))
        if "oracle_compare" in config.checks:
            results.append(_check_oracle(finals, params, opts))
        if "mass_identity" in config.checks:
            results.append(_check_mass_identity(params, config.s_max, opts))
    else:  # n_interactions
        replica_results = _map_replicas(_graph_replica, config, jobs)
        gp = config.graph_params(seed=0)
        for i, res in enumerate(replica_results):
            for M, h in sorted(res.histograms.items()):
                path = out / f"weights_r{i:04d}_M{M}.csv"
                io.write_weight_histogram_csv(h, M, path)
                artifacts.append((path, "weight_histogram"))
            path = out / f"vertices_r{i:04d}.csv"
            io.write_vertex_trace_csv(res.v_trace, path)
            artifacts.append((path, "vertex_trace"))
        if "tail_fit" in config.checks:
            if not gp.power_law_regime:
                results.append(CheckResult(
                    "tail_fit", False,
                    {"error": "weighted-choice drift a=0; no power-law tail to fit"}))
            else:
                for M in sorted(gp.tracked_M):
                    dp = graph.derived_params(gp.N, M, gp.p, gp.r, gp.q)
                    if dp.exponent is None:
                        continue
                    h = replica_results[0].histograms[M]
                    dist = {w: float(c) for w, c in h.items_sorted()}
                    results.append(_check_tail_fit(
                        dist, dp.exponent, opts, out, artifacts, tag=f"M{M}"))

    report = {
        "checks": [r.to_dict() for r in results],
        "passed": all(r.passed for r in results),
    }
    report_path = out / "checks.json"
    io.write_json(report, report_path)
    artifacts.append((report_path, "check_report"))
    manifest = io.write_manifest(out, io.config_hash(config.to_dict()), artifacts)
    return (0 if report["passed"] else 1), manifest


def _check_mass_identity(params: SimParams, s_max: int, opts: dict) -> CheckResult:
    residual = analytic.mass_identity_check(params.u, params.a, params.b, params.m, s_max)
    bound = opts.get("mass_residual_bound", 2e-4)
    passed = 0 < residual < bound
    return CheckResult("mass_identity", passed,
                       {"residual": residual, "bound": bound, "s_max": s_max})


def _check_limit_compare(hist: Histogram, params: SimParams, opts: dict):
    s_cut = opts.get("s_cut", 20)
    tol = opts.get("tol_rel", 0.05)
    limit = analytic.c_recurrence(params.u, s_cut, params.a, params.b, params.m)
    dist = stats.normalize(hist)
    ok, rows = stats.compare_to_limit(dist, limit, s_cut, tol, hist.n)
    return CheckResult("limit_compare", ok, {"s_cut": s_cut, "tol_rel": tol}), rows


def _check_tail_fit(dist, target: float, opts: dict, out: Path, artifacts, tag: str = ""):
    w_min = opts.get("w_min", 10)
    tolerance = opts.get("exponent_tolerance", 0.3)
    name = f"tail_fit_{tag}" if tag else "tail_fit"
    try:
        reports = [
            stats.fit_tail(dist, w_min, method).judge(target, tolerance)
            for method in ("ccdf_regression", "discrete_mle")
        ]
    except stats.FitError as exc:
        return CheckResult(name, False, {"error": str(exc)})
    for rep in reports:
        path = out / f"{name}_{rep.method}.json"
        io.write_json(rep.to_dict(), path)
        artifacts.append((path, "fit_report"))
    passed = all(r.verdict == "pass" for r in reports)
    return CheckResult(name, passed, {"reports": [r.to_dict() for r in reports]})


def _check_concentration(finals: list[Histogram], opts: dict, out: Path, artifacts):
    s_range = tuple(opts.get("s_range", (1, 5)))
    try:
        report = stats.concentration_scan(finals, s_range)
    except ValueError as exc:
        return CheckResult("concentration", False, {"error": str(exc)})
    path = out / "concentration.json"
    io.write_json(report.to_dict(), path)
    artifacts.append((path, "concentration_report"))
    return CheckResult("concentration", report.violations == 0, report.to_dict())


def _check_oracle(finals: list[Histogram], params: SimParams, opts: dict) -> CheckResult:
    s_hi = opts.get("oracle_s_cut", 8)
    n = finals[0].n
    grid = analytic.expected_histogram_oracle(params, params.n0 + n, s_hi + 4 * 3)
    R = len(finals)
    worst = 0.0
    for s in range(params.u, s_hi + 1):
        xs = np.array([h.get(s) for h in finals], dtype=float)
        se = xs.std(ddof=1) / math.sqrt(R) if R > 1 else float("inf")
        gap = abs(xs.mean() - grid.value(params.n0 + n, s))
        worst = max(worst, gap / se if se > 0 else math.inf)
    passed = worst <= 4.0
    return CheckResult("oracle_compare", passed,
                       {"max_gap_in_stderr": worst, "bound": 4.0, "replicas": R})
