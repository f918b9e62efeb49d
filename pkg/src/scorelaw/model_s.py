"""Score-evolution population process.

Each step at time n runs t independent selection trials against the
start-of-step weights (a trial selects individual i with probability
(a*S(i)+b)/(t*n) and is otherwise a no-op), applies the accumulated
increments, then adds floor(m) + Bernoulli(m - floor(m)) newcomers of
score u. Freezing the weights within a step makes each individual's
one-step increment exactly Binomial(t, (a*S+b)/(t*n)), which is what the
exact expectation recursion in `analytic` integrates.
"""

from __future__ import annotations

import math

import numpy as np

from .fenwick import WeightedSampler
from .histogram import Histogram
from .params import ParameterError, SimParams


class ScoreTable:
    """Population state: per-individual scores plus a weight sampler."""

    def __init__(self, params: SimParams):
        self.params = params
        size = math.ceil(params.m)
        self.scores: list[int] = [params.u] * size
        w = params.weight(params.u)
        self.sampler = WeightedSampler([w] * size)
        self.step_index = params.n0
        self.clamp_events = 0
        self.rng = np.random.default_rng(params.seed)

    def __len__(self) -> int:
        return len(self.scores)

    @property
    def total_weight(self) -> float:
        return self.sampler.total

    def weight_drift(self) -> float:
        """Relative gap between the maintained and recomputed total weight."""
        exact = self.sampler.recomputed_total()
        return abs(self.sampler.total - exact) / max(exact, 1e-300)

    def histogram(self) -> Histogram:
        return Histogram.from_values(self.scores, self.step_index - self.params.n0)


def init_population(params: SimParams) -> ScoreTable:
    return ScoreTable(params)


def step(state: ScoreTable, params: SimParams) -> ScoreTable:
    """Advance the population by one step, in place."""
    n = state.step_index
    t = params.t
    cap = t * n
    sampler = state.sampler
    total = sampler.total
    if total > cap:
        # Only reachable when a score is of order n; count and carry on with
        # the maximal feasible selection probability.
        state.clamp_events += 1
        span = total
    else:
        span = cap

    draws = state.rng.random(t)
    hits: dict[int, int] = {}
    for d in draws:
        x = d * span
        if x < total:
            i = sampler.find(x)
            hits[i] = hits.get(i, 0) + 1

    a = params.a
    scores = state.scores
    for i, k in hits.items():
        scores[i] += k
        sampler.update(i, a * k)

    births = math.floor(params.m)
    frac = params.m - births
    if frac > 0 and state.rng.random() < frac:
        births += 1
    w_new = params.weight(params.u)
    for _ in range(births):
        scores.append(params.u)
        sampler.append(w_new)

    state.step_index = n + 1
    return state


def run(
    params: SimParams, n_max: int, snapshot_at: list[int] | None = None
) -> list[Histogram]:
    """Run n_max steps from a fresh population; return a histogram after
    completing each step index listed in snapshot_at (1-based)."""
    snapshot_at = sorted(snapshot_at if snapshot_at is not None else [n_max])
    if n_max < 1:
        raise ParameterError(f"n_max must be >= 1, got {n_max}")
    for k in snapshot_at:
        if not (1 <= k <= n_max):
            raise ParameterError(f"snapshot index {k} outside [1, {n_max}]")

    state = init_population(params)
    wanted = set(snapshot_at)
    out: list[Histogram] = []
    for k in range(1, n_max + 1):
        step(state, params)
        if k in wanted:
            out.append(Histogram.from_values(state.scores, k))
    return out
