"""Population process: stepping, invariants, and agreement with the oracle."""

import math

import numpy as np
import pytest
from scipy import stats as sps

from scorelaw import analytic, model_s
from scorelaw.params import ParameterError, SimParams

CANON = dict(a=0.5, b=0.0, m=2.0, t=4, u=1)


def test_init_population():
    state = model_s.init_population(SimParams(**CANON, seed=1))
    assert state.scores == [1, 1]
    assert state.step_index == 1
    assert state.total_weight == pytest.approx(1.0)


def test_fractional_m_initial_population():
    state = model_s.init_population(SimParams(a=0.5, m=1.5, t=2, seed=1))
    assert len(state.scores) == 2  # ceil(m) founders


class TestStepInvariants:
    def test_long_trajectory(self):
        params = SimParams(**CANON, seed=42)
        state = model_s.init_population(params)
        for _ in range(5_000):
            before = len(state.scores)
            score_before = sum(state.scores)
            model_s.step(state, params)
            births = len(state.scores) - before
            assert 0 <= births <= params.t
            assert 0 <= sum(state.scores) - score_before - births * params.u <= params.t
        assert state.clamp_events == 0
        assert state.weight_drift() < 1e-9
        assert state.step_index == 5_001

    def test_population_size_deterministic_for_integer_m(self):
        params = SimParams(**CANON, seed=7)
        hists = model_s.run(params, 10)
        assert hists[0].total() == 2 + 2 * 10
        assert hists[0].n == 10

    def test_fractional_m_mean_growth(self):
        params = SimParams(a=0.5, m=1.25, t=2, seed=3)
        hist = model_s.run(params, 4_000)[0]
        growth = (hist.total() - 2) / 4_000
        assert growth == pytest.approx(1.25, abs=3 * math.sqrt(0.25 * 0.75 / 4000))


def test_determinism():
    params = SimParams(**CANON, seed=123)
    assert model_s.run(params, 500) == model_s.run(params, 500)
    other = SimParams(**CANON, seed=124)
    assert model_s.run(params, 500) != model_s.run(other, 500)


def test_snapshots_are_cumulative_prefixes():
    params = SimParams(**CANON, seed=9)
    snaps = model_s.run(params, 300, snapshot_at=[100, 300])
    assert [h.n for h in snaps] == [100, 300]
    assert snaps[0] == model_s.run(params, 100)[0]


def test_one_step_increment_is_binomial():
    # From the frozen initial state (two scores of 1, n=1) each individual's
    # increment is Binomial(t, 1/8); chi-square against that law.
    params = SimParams(**CANON)
    counts = np.zeros(5)
    reps = 4_000
    for seed in range(reps):
        state = model_s.init_population(SimParams(**CANON, seed=seed))
        model_s.step(state, params)
        counts[state.scores[0] - 1] += 1
    expected = reps * sps.binom.pmf(np.arange(5), 4, 1 / 8)
    keep = expected > 5
    chi2 = ((counts[keep] - expected[keep]) ** 2 / expected[keep]).sum()
    assert chi2 < sps.chi2.ppf(0.999, keep.sum() - 1)


def test_matches_expectation_oracle():
    params = SimParams(**CANON)
    n, reps, s_max = 60, 400, 12
    grid = analytic.expected_histogram_oracle(params, n + 1, 4 * n)
    acc = np.zeros(s_max + 1)
    for seed in range(reps):
        hist = model_s.run(SimParams(**CANON, seed=seed), n)[0]
        for s, c in hist.counts.items():
            if s <= s_max:
                acc[s] += c
    acc /= reps
    for s in range(1, s_max + 1):
        mean = grid.value(1 + n, s)
        se = math.sqrt(max(mean, 1.0) / reps)  # crude Poisson-scale bound
        assert abs(acc[s] - mean) < 5 * se


def test_parameter_validation():
    with pytest.raises(ParameterError):
        SimParams(a=0.0)
    with pytest.raises(ParameterError):
        SimParams(a=0.5, m=3.0, t=2)  # ceil(m) > t
    with pytest.raises(ParameterError):
        SimParams(a=0.5, seed=-1)
    with pytest.raises(ParameterError):
        SimParams(a=0.5, u=0)
