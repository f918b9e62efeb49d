"""Tail-exponent estimators, limit comparison, and concentration scan."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import zeta
from sklearn.base import clone

from scorelaw import analytic, stats
from scorelaw.histogram import Histogram


def _zipf_counts(alpha, size, seed, n=200_000):
    rng = np.random.default_rng(seed)
    vals, counts = np.unique(rng.zipf(alpha, n), return_counts=True)
    return dict(zip(vals.tolist(), counts.astype(float).tolist()))


def _analytic_dist(a, s_max=200_000):
    limit = analytic.c_recurrence(1, s_max, a, 0.0, 2.0)
    return dict(zip(limit.support.tolist(), limit.values.tolist()))


class TestFitTail:
    def test_ccdf_on_analytic_tail(self):
        # exact exponent 4 for a = 1/3
        report = stats.fit_tail(_analytic_dist(1 / 3), w_min=20)
        assert report.exponent_hat == pytest.approx(4.0, abs=0.05)

    def test_mle_on_zipf_samples(self):
        report = stats.fit_tail(_zipf_counts(3.0, 200_000, 5), w_min=2,
                                method="discrete_mle")
        assert report.exponent_hat == pytest.approx(3.0, abs=3 * report.stderr)
        assert 0 < report.stderr < 0.2

    def test_ccdf_on_zipf_samples(self):
        # sample-truncation bias at the extreme tail leaves ~0.1 slack
        report = stats.fit_tail(_zipf_counts(3.0, 200_000, 5), w_min=2)
        assert report.exponent_hat == pytest.approx(3.0, abs=0.15)

    @given(scale=st.floats(1e-6, 1e6))
    @settings(max_examples=20, deadline=None)
    def test_scale_invariance(self, scale):
        dist = _analytic_dist(0.5, 50_000)
        base = stats.fit_tail(dist, w_min=15)
        scaled = stats.fit_tail({w: v * scale for w, v in dist.items()}, w_min=15)
        assert scaled.exponent_hat == pytest.approx(base.exponent_hat, rel=1e-9)

    def test_insufficient_tail_raises(self):
        with pytest.raises(stats.FitError):
            stats.fit_tail({w: 1.0 for w in range(1, 15)}, w_min=10)

    def test_unknown_method_raises(self):
        with pytest.raises(ValueError):
            stats.fit_tail(_analytic_dist(0.5, 1000), method="nope")

    def test_report_judgement(self):
        report = stats.fit_tail(_analytic_dist(1 / 3), w_min=20)
        report.judge(4.0, 0.05)
        assert report.verdict == "pass"
        report.judge(5.0, 0.05)
        assert report.verdict == "fail"
        d = report.to_dict()
        assert d["method"] == "ccdf_regression"
        assert d["exponent_hat"] == report.exponent_hat


def test_fitter_estimator_api():
    fitter = stats.PowerLawTailFitter(w_min=2, method="discrete_mle")
    assert clone(fitter).get_params()["w_min"] == 2
    rng = np.random.default_rng(0)
    fitter.fit(rng.zipf(3.0, 100_000))
    assert fitter.exponent_ == pytest.approx(3.0, abs=0.1)
    assert fitter.report_.n_tail_points > 0
    # mapping input gives the same result as the raw samples it tabulates
    samples = rng.zipf(2.5, 50_000)
    vals, counts = np.unique(samples, return_counts=True)
    from_map = stats.PowerLawTailFitter(w_min=2, method="discrete_mle").fit(
        dict(zip(vals.tolist(), counts.astype(float).tolist()))
    )
    from_raw = stats.PowerLawTailFitter(w_min=2, method="discrete_mle").fit(samples)
    assert from_map.exponent_ == from_raw.exponent_


def test_hurwitz_zeta_normalisation_sanity():
    # the MLE's likelihood normaliser: zeta(alpha, w_min) must match the sum
    alpha, w_min = 3.0, 4
    tail = sum(w**-alpha for w in range(w_min, 100_000))
    assert zeta(alpha, w_min) == pytest.approx(tail, rel=1e-6)


class TestCompareToLimit:
    def test_perfect_agreement(self):
        limit = analytic.c_recurrence(1, 500, 0.5, 0.0, 2.0)
        n = 10_000
        dist = {int(s): limit[int(s)] for s in limit.support}
        ok, rows = stats.compare_to_limit(dist, limit, s_cut=500, tol_rel=0.01, n=n)
        assert ok
        checked = [r for r in rows if r.checked]
        assert checked and all(r.rel_err < 1e-12 for r in checked)

    def test_sparse_scores_not_checked(self):
        limit = analytic.c_recurrence(1, 500, 0.5, 0.0, 2.0)
        ok, rows = stats.compare_to_limit({1: 15.0}, limit, s_cut=500,
                                          tol_rel=0.01, n=10)
        # expected counts are all far below the reliability floor
        assert all(not r.checked for r in rows)
        assert ok

    def test_detects_disagreement(self):
        limit = analytic.c_recurrence(1, 500, 0.5, 0.0, 2.0)
        n = 10_000
        dist = {int(s): limit[int(s)] * 1.5 for s in limit.support}
        ok, _ = stats.compare_to_limit(dist, limit, s_cut=500, tol_rel=0.01, n=n)
        assert not ok


class TestConcentrationScan:
    @staticmethod
    def _runs(shift=0.0, count=120, n=2_000, seed=0):
        rng = np.random.default_rng(seed)
        runs = []
        expected = {s: analytic.c_gamma(1, s, 0.5, 0.0, 2.0) * n for s in range(1, 6)}
        for _ in range(count):
            counts = {
                s: max(0, int(rng.normal(mu + shift, np.sqrt(mu))))
                for s, mu in expected.items()
            }
            runs.append(Histogram(counts, n))
        return runs

    def test_no_violations_at_scale(self):
        report = stats.concentration_scan(self._runs(), (1, 5))
        assert report.violations == 0
        assert report.runs == 120

    def test_planted_violation_detected(self):
        # push a few runs past the s*sqrt(n)*ln(n) envelope around the
        # cross-run mean; shifting all of them would move the mean along
        bad = self._runs()
        jump = int(50 * np.sqrt(2_000) * np.log(2_000))
        for h in bad[:5]:
            h.counts = {s: c + jump for s, c in h.counts.items()}
        report = stats.concentration_scan(bad, (1, 5))
        assert report.violations > 0

    def test_requires_enough_runs(self):
        with pytest.raises(ValueError):
            stats.concentration_scan(self._runs(count=20), (1, 5))


def test_normalize():
    hist = Histogram({1: 6, 2: 3}, n=3)
    assert stats.normalize(hist, 3) == {1: 2.0, 2: 1.0}
