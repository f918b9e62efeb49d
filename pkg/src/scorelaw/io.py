"""CSV/JSON artifact serialization and the run manifest.

Floats are written with repr's shortest round-trip representation so that
repeated runs with the same seed produce byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

from .analytic import ExpectationGrid, LimitDistribution
from .histogram import Histogram
from .stats import ComparisonRow


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, float) else str(x)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_histogram_csv(hist: Histogram, path: Path) -> None:
    _write_csv(path, ["s", "count"], hist.items_sorted())


def read_histogram_csv(path: Path, n: int = 0) -> Histogram:
    """Read an s,count file. The step count n is not stored in this schema;
    pass it explicitly when known."""
    with open(path) as fh:
        reader = csv.DictReader(fh)
        counts = {int(row["s"]): int(row["count"]) for row in reader}
    return Histogram(counts, n=n)


def write_weight_histogram_csv(hist: Histogram, M: int, path: Path) -> None:
    _write_csv(path, ["M", "w", "count", "n"],
               ((M, w, c, hist.n) for w, c in hist.items_sorted()))


def write_vertex_trace_csv(trace: list[tuple[int, int]], path: Path) -> None:
    _write_csv(path, ["n", "V"], trace)


def write_limit_csv(limit: LimitDistribution, path: Path) -> None:
    _write_csv(path, ["s", "c"], zip(limit.support.tolist(), limit.values.tolist()))


def write_expectation_csv(grid: ExpectationGrid, path: Path, every: int = 1) -> None:
    n0, u = grid.params.n0, grid.params.u
    rows = []
    for i in range(0, grid.E.shape[0], every):
        for j, v in enumerate(grid.E[i]):
            if v > 0:
                rows.append((n0 + i, u + j, float(v)))
    _write_csv(path, ["n", "s", "expectation"], rows)


def write_comparison_csv(rows: list[ComparisonRow], path: Path) -> None:
    _write_csv(path, ["s", "empirical", "analytic", "rel_err"],
               ((r.s, r.empirical, r.analytic, r.rel_err) for r in rows))


def write_json(obj: dict, path: Path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def write_manifest(out_dir: Path, cfg_hash: str, artifacts: list[tuple[Path, str]]) -> Path:
    """artifacts: (path, kind) pairs; paths are stored relative to out_dir."""
    manifest = {
        "config_hash": cfg_hash,
        "artifacts": [
            {"path": str(p.relative_to(out_dir)), "sha256": sha256_file(p), "kind": kind}
            for p, kind in sorted(artifacts, key=lambda a: str(a[0]))
        ],
    }
    path = out_dir / "manifest.json"
    write_json(manifest, path)
    return path
