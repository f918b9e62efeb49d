"""Empirical verification layer: normalization, discrete power-law tail
fitting, analytic-vs-empirical comparison and concentration-event scans."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.special import zeta
from sklearn.base import BaseEstimator

from .analytic import LimitDistribution, deviation_threshold
from .histogram import Histogram


class FitError(RuntimeError):
    """The tail carries too little support for a meaningful fit."""


@dataclass
class FitReport:
    exponent_hat: float
    stderr: float
    fit_range: tuple[int, int]
    method: str  # "ccdf_regression" | "discrete_mle"
    n_tail_points: int
    target_exponent: float | None = None
    verdict: str | None = None
    margin: float | None = None

    def judge(self, target: float, tolerance: float) -> "FitReport":
        self.target_exponent = target
        self.margin = abs(self.exponent_hat - target)
        self.verdict = "pass" if self.margin <= tolerance else "fail"
        return self

    def to_dict(self) -> dict:
        return {
            "exponent_hat": self.exponent_hat,
            "stderr": self.stderr,
            "fit_range": list(self.fit_range),
            "method": self.method,
            "n_tail_points": self.n_tail_points,
            "target_exponent": self.target_exponent,
            "verdict": self.verdict,
            "margin": self.margin,
        }


@dataclass
class ConcentrationReport:
    runs: int
    n: int
    s_range: tuple[int, int]
    violations: int
    total_events: int

    def to_dict(self) -> dict:
        return {
            "runs": self.runs,
            "n": self.n,
            "s_range": list(self.s_range),
            "violations": self.violations,
            "total_events": self.total_events,
        }


def normalize(hist: Histogram, n: int | None = None) -> dict[int, float]:
    """Per-step-normalized histogram s -> X_n(s)/n."""
    n = hist.n if n is None else n
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return {s: c / n for s, c in hist.items_sorted()}


def _tail_arrays(dist: dict[int, float], w_min: int, w_max: int | None):
    """Full tail (w >= w_min) plus the upper edge of the regression window.

    The default w_max keeps points worth at least five of the smallest
    positive mass unit, which is scale invariant and coincides with
    "count >= 5" for integer counts whose deep tail holds singletons.
    """
    support = np.array(sorted(w for w, v in dist.items() if v > 0))
    tail = support[support >= w_min]
    if len(tail) == 0:
        raise FitError(f"no support at or above w_min={w_min}")
    y = np.array([dist[w] for w in tail], dtype=float)
    if w_max is None:
        heavy = tail[y >= 5 * y.min()]
        w_max = int(heavy.max()) if len(heavy) else int(tail.max())
    if np.count_nonzero(tail <= w_max) < 10:
        raise FitError(
            f"need at least 10 tail support points in [{w_min}, {w_max}], "
            f"got {int(np.count_nonzero(tail <= w_max))}"
        )
    return tail.astype(int), y, int(w_max)


def _fit_ccdf(w: np.ndarray, y: np.ndarray, w_max: int) -> tuple[float, float]:
    # CCDF over the whole tail; regression restricted to [w_min, w_max] so
    # the fitted window is not distorted by its own truncation
    ccdf = np.cumsum(y[::-1])[::-1]
    window = w <= w_max
    wf = w[window].astype(float)
    z_all = np.log(ccdf[window] / y.sum())
    # evaluate on a geometric grid: an integer support grid piles almost all
    # points into the top decade, where finite-size truncation bends the CCDF
    targets = np.geomspace(wf[0], wf[-1], 256)
    idx = np.unique(np.searchsorted(wf, targets, side="right") - 1)
    idx = idx[idx >= 0]
    x = np.log(wf[idx])
    z = z_all[idx]
    slope, intercept = np.polyfit(x, z, 1)
    resid = z - (slope * x + intercept)
    dof = max(len(x) - 2, 1)
    sxx = np.sum((x - x.mean()) ** 2)
    stderr = math.sqrt(float(np.sum(resid**2)) / dof / sxx)
    return 1.0 + abs(float(slope)), stderr


def _fit_discrete_mle(w: np.ndarray, y: np.ndarray, w_min: int) -> tuple[float, float]:
    n_tot = float(y.sum())
    mean_log = float(np.sum(y * np.log(w.astype(float)))) / n_tot
    h = 1e-5

    def log_zeta(alpha: float) -> float:
        return math.log(zeta(alpha, w_min))

    def score(alpha: float) -> float:
        # d/dalpha of the mean log-likelihood
        return -mean_log - (log_zeta(alpha + h) - log_zeta(alpha - h)) / (2 * h)

    lo, hi = 1.05, 50.0
    if score(lo) < 0:
        raise FitError("likelihood maximized at the lower exponent bound")
    alpha = brentq(score, lo, hi, xtol=1e-10)
    z0 = zeta(alpha, w_min)
    z1 = (zeta(alpha + h, w_min) - zeta(alpha - h, w_min)) / (2 * h)
    z2 = (zeta(alpha + h, w_min) - 2 * z0 + zeta(alpha - h, w_min)) / h**2
    fisher = z2 / z0 - (z1 / z0) ** 2
    stderr = 1.0 / math.sqrt(n_tot * fisher)
    return float(alpha), stderr


def fit_tail(
    dist: dict[int, float],
    w_min: int = 10,
    method: str = "ccdf_regression",
    w_max: int | None = None,
) -> FitReport:
    """Estimate the power-law tail exponent of a score/weight distribution.

    ccdf_regression: least-squares slope of log CCDF against log w,
    exponent = 1 + |slope|. discrete_mle: zeta-likelihood maximizer over
    integer observations >= w_min, with the asymptotic standard error.
    """
    if method not in ("ccdf_regression", "discrete_mle"):
        raise ValueError(f"unknown method {method!r}")
    w, y, w_hi = _tail_arrays(dist, w_min, w_max)
    if method == "ccdf_regression":
        exponent, stderr = _fit_ccdf(w, y, w_hi)
        n_points = int(np.count_nonzero(w <= w_hi))
    else:
        # the MLE keeps the full tail; dropping sparse extreme observations
        # would bias a likelihood fit
        exponent, stderr = _fit_discrete_mle(w, y, w_min)
        n_points = len(w)
        w_hi = int(w.max())
    return FitReport(
        exponent_hat=exponent,
        stderr=stderr,
        fit_range=(int(w_min), w_hi),
        method=method,
        n_tail_points=n_points,
    )


class PowerLawTailFitter(BaseEstimator):
    """Estimator-style wrapper around fit_tail.

    fit() accepts either a 1-D array of integer observations or a
    {value: count} mapping; fitted attributes follow the trailing
    underscore convention (exponent_, stderr_, report_).
    """

    def __init__(self, w_min: int = 10, method: str = "ccdf_regression",
                 w_max: int | None = None):
        self.w_min = w_min
        self.method = method
        self.w_max = w_max

    def fit(self, X, y=None):
        if isinstance(X, dict):
            dist = {int(k): float(v) for k, v in X.items()}
        else:
            arr = np.asarray(X)
            if arr.ndim != 1:
                raise ValueError("expected a 1-D array of observations or a mapping")
            values, counts = np.unique(arr.astype(int), return_counts=True)
            dist = dict(zip(values.tolist(), counts.astype(float).tolist()))
        self.report_ = fit_tail(dist, self.w_min, self.method, self.w_max)
        self.exponent_ = self.report_.exponent_hat
        self.stderr_ = self.report_.stderr
        return self


@dataclass
class ComparisonRow:
    s: int
    empirical: float
    analytic: float
    rel_err: float
    checked: bool


def compare_to_limit(
    dist: dict[int, float],
    limit: LimitDistribution,
    s_cut: int,
    tol_rel: float,
    n: int,
) -> tuple[bool, list[ComparisonRow]]:
    """Per-score relative error of an n-normalized distribution against the
    analytic limit; passes iff every score whose expected count c(u,s)*n is
    at least 1000 sits within tol_rel."""
    rows = []
    ok = True
    for s in range(limit.u, s_cut + 1):
        c = limit[s]
        emp = dist.get(s, 0.0)
        rel = abs(emp - c) / c
        checked = c * n >= 1000
        if checked and rel > tol_rel:
            ok = False
        rows.append(ComparisonRow(s, emp, c, rel, checked))
    return ok, rows


def concentration_scan(
    runs: list[Histogram], s_range: tuple[int, int]
) -> ConcentrationReport:
    """Count deviation events |X_n(s) - cross-run mean| >= s*sqrt(n)*ln(n)
    over replicated histograms taken at a common step count."""
    if len(runs) < 100:
        raise ValueError(f"need at least 100 runs, got {len(runs)}")
    n = runs[0].n
    if any(h.n != n for h in runs):
        raise ValueError("histograms were taken at different step counts")
    s_lo, s_hi = s_range
    violations = 0
    for s in range(s_lo, s_hi + 1):
        xs = np.array([h.get(s) for h in runs], dtype=float)
        mean = xs.mean()
        violations += int(np.count_nonzero(np.abs(xs - mean) >= deviation_threshold(s, n)))
    total = len(runs) * (s_hi - s_lo + 1)
    return ConcentrationReport(len(runs), n, s_range, violations, total)
