"""Clique-interaction random graph.

The graph starts as a single N-clique. Each step exactly one interaction
happens on a set of N vertices: with probability p a new vertex joins
N-1 old ones (the old set drawn from the (N-1)-clique weights with
probability r, else uniformly), otherwise N old vertices interact (the
set drawn from the N-clique weights with probability q, else uniformly).
An interaction increments the weight of every sub-clique of the N-set of
size >= 2; a sub-clique that did not exist before is created and ends the
step at weight 1, so the total weight of size-M cliques grows by exactly
C(N, M) every step. Only interaction-born cliques exist; no clique
detection on the underlying simple graph is ever performed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .fenwick import WeightedSampler
from .histogram import Histogram
from .params import GraphParams, ParameterError

_SHIFT = 24  # vertex ids packed 24 bits apart into one int key


class ProbeError(RuntimeError):
    """No clique matches the requested probe target."""


def _pack(vertices: tuple[int, ...]) -> int:
    key = 0
    for v in vertices:
        key = (key << _SHIFT) | v
    return key


@dataclass(frozen=True)
class DerivedParams:
    """Score-process coefficients induced for size-M cliques."""

    N: int
    M: int
    a: float
    mu: float

    @property
    def exponent(self) -> float | None:
        """Tail exponent 1 + 1/a of the weight distribution; None when
        a = 0 (weights stay bounded, no power law to fit)."""
        return 1.0 + 1.0 / self.a if self.a > 0 else None


def derived_params(N: int, M: int, p: float, r: float, q: float) -> DerivedParams:
    """Per-size drift a and expected newcomer rate mu of the weight process."""
    if not (2 <= M <= N):
        raise ParameterError(f"M={M} outside [2, N={N}]")
    a = p * r * (N - M) / N + (1 - p) * q
    mu = (
        p * math.comb(N - 1, M - 1)
        + p * (1 - r) * math.comb(N - 1, M)
        + (1 - p) * (1 - q) * math.comb(N, M)
    )
    return DerivedParams(N, M, a, mu)


class _SizeRegistry:
    """Cliques of one size: canonical key -> slot, weights per slot, and
    (for sampled sizes) the vertex tuples and a Fenwick sampler."""

    __slots__ = ("index", "weights", "vertices", "sampler")

    def __init__(self, sampled: bool):
        self.index: dict[int, int] = {}
        self.weights: list[int] = []
        self.vertices: list[tuple[int, ...]] | None = [] if sampled else None
        self.sampler: WeightedSampler | None = WeightedSampler() if sampled else None

    def __len__(self) -> int:
        return len(self.weights)

    def total_weight(self) -> int:
        return sum(self.weights)

    def bump(self, vertices: tuple[int, ...]) -> bool:
        """Register one interaction touching this clique; returns True when
        the clique was created by it."""
        key = _pack(vertices)
        slot = self.index.get(key)
        if slot is None:
            self.index[key] = len(self.weights)
            self.weights.append(1)
            if self.vertices is not None:
                self.vertices.append(vertices)
                self.sampler.append(1.0)
            return True
        self.weights[slot] += 1
        if self.sampler is not None:
            self.sampler.update(slot, 1.0)
        return False


class CliqueRegistry:
    """Full graph state: per-size clique registries plus the vertex count."""

    def __init__(self, params: GraphParams):
        self.params = params
        N = params.N
        # sizes N-1 and N always carry samplers; other sizes are kept only
        # when their weight histogram was requested.
        self.sizes: dict[int, _SizeRegistry] = {}
        for M in sorted(set(params.tracked_M) | {N - 1, N}):
            self.sizes[M] = _SizeRegistry(sampled=M >= N - 1)
        self.vertex_count = N
        self.step_index = 0
        self.rng = np.random.default_rng(params.seed)
        seed = tuple(range(N))
        for M, reg in self.sizes.items():
            if M == N:
                reg.bump(seed)
            else:
                for sub in combinations(seed, M):
                    reg.bump(sub)
        # newcomer statistics start after the seed clique
        self.new_clique_counts = {M: 0 for M in self.sizes}
        self.new_clique_sumsq = {M: 0 for M in self.sizes}

    def clique_count(self, M: int) -> int:
        return len(self.sizes[M])

    def histogram(self, M: int) -> Histogram:
        return Histogram.from_values(self.sizes[M].weights, self.step_index)

    def sampler_drift(self, M: int) -> float:
        reg = self.sizes[M]
        exact = float(reg.total_weight())
        return abs(reg.sampler.total - exact) / max(exact, 1.0)


def init_graph(params: GraphParams) -> CliqueRegistry:
    return CliqueRegistry(params)


def interact(registry: CliqueRegistry, vertex_set: tuple[int, ...]) -> dict[int, int]:
    """Apply one interaction on N distinct vertices: increment (creating at
    weight 1 where absent) every registered sub-clique size. Returns the
    number of cliques created per size."""
    N = registry.params.N
    vs = tuple(sorted(set(vertex_set)))
    if len(vs) != N:
        raise ParameterError(f"interaction needs {N} distinct vertices, got {vertex_set}")
    if vs[-1] >= registry.vertex_count:
        raise ParameterError(f"vertex id {vs[-1]} outside population of {registry.vertex_count}")
    created: dict[int, int] = {}
    for M, reg in registry.sizes.items():
        if M == N:
            made = int(reg.bump(vs))
        else:
            made = 0
            for sub in combinations(vs, M):
                made += reg.bump(sub)
        created[M] = made
        registry.new_clique_counts[M] += made
        registry.new_clique_sumsq[M] += made * made
    return created


def _uniform_distinct(rng, population: int, k: int) -> tuple[int, ...]:
    # rejection over independent draws; k <= 8 makes collisions rare
    while True:
        picks = rng.integers(0, population, size=k)
        s = set(picks.tolist())
        if len(s) == k:
            return tuple(sorted(s))


def _choose_interaction_set(registry: CliqueRegistry) -> tuple[tuple[int, ...], bool]:
    """Draw the step's N-set per the evolution law; returns (vertices,
    vertex_was_added). Does not mutate the registry."""
    params = registry.params
    N = params.N
    rng = registry.rng
    if rng.random() < params.p:
        if rng.random() < params.r:
            reg = registry.sizes[N - 1]
            old = reg.vertices[reg.sampler.find(rng.random() * reg.sampler.total)]
        else:
            old = _uniform_distinct(rng, registry.vertex_count, N - 1)
        return old + (registry.vertex_count,), True
    if rng.random() < params.q:
        reg = registry.sizes[N]
        return reg.vertices[reg.sampler.find(rng.random() * reg.sampler.total)], False
    return _uniform_distinct(rng, registry.vertex_count, N), False


def step_graph(registry: CliqueRegistry) -> None:
    vertices, births = _choose_interaction_set(registry)
    if births:
        registry.vertex_count += 1
    interact(registry, vertices)
    registry.step_index += 1


@dataclass
class GraphRunResult:
    params: GraphParams
    histograms: dict[int, Histogram]
    v_trace: list[tuple[int, int]]  # (step, vertex count)
    clique_counts: dict[int, int]  # E_n per tracked size at the end
    newcomer_rate: dict[int, float]  # mean new size-M cliques per step
    newcomer_rate_stderr: dict[int, float]


def run_graph(
    params: GraphParams, snapshot_at: list[int] | None = None
) -> tuple[GraphRunResult, CliqueRegistry]:
    """Run the interaction process for n_max steps.

    Emits weight histograms for every tracked size at each snapshot (final
    step by default) plus the vertex-count trace at the snapshots.
    """
    snapshot_at = sorted(snapshot_at if snapshot_at is not None else [params.n_max])
    for k in snapshot_at:
        if not (1 <= k <= params.n_max):
            raise ParameterError(f"snapshot index {k} outside [1, {params.n_max}]")
    registry = init_graph(params)
    wanted = set(snapshot_at)
    histograms: dict[int, Histogram] = {}
    v_trace: list[tuple[int, int]] = []
    for k in range(1, params.n_max + 1):
        step_graph(registry)
        if k in wanted:
            v_trace.append((k, registry.vertex_count))
            for M in sorted(params.tracked_M):
                histograms[M] = registry.histogram(M)
    n = registry.step_index
    rates = {M: c / n for M, c in registry.new_clique_counts.items()}
    stderrs = {
        M: math.sqrt(max(registry.new_clique_sumsq[M] / n - rates[M] ** 2, 0.0) / n)
        for M in registry.sizes
    }
    result = GraphRunResult(
        params=params,
        histograms=histograms,
        v_trace=v_trace,
        clique_counts={M: registry.clique_count(M) for M in registry.sizes},
        newcomer_rate=rates,
        newcomer_rate_stderr=stderrs,
    )
    return result, registry


def weight_transition_probe(
    registry: CliqueRegistry, M: int, w: int, samples: int
) -> tuple[float, float]:
    """Estimate the one-step weight-increment probability of a size-M clique
    of weight w by resampling the next interaction from the frozen state.

    Returns (rate, standard error). The registry is never mutated; each
    resample draws a prospective N-set and tests whether it covers the
    target clique.
    """
    reg = registry.sizes.get(M)
    if reg is None:
        raise ProbeError(f"size {M} is not maintained by this registry")
    try:
        slot = reg.weights.index(w)
    except ValueError:
        raise ProbeError(f"no size-{M} clique of weight {w} present") from None
    if reg.vertices is not None:
        target = set(reg.vertices[slot])
    else:
        key = next(k for k, v in reg.index.items() if v == slot)
        target = set()
        for _ in range(M):
            target.add(key & ((1 << _SHIFT) - 1))
            key >>= _SHIFT
    hits = 0
    for _ in range(samples):
        vertices, _ = _choose_interaction_set(registry)
        if target.issubset(vertices):
            hits += 1
    rate = hits / samples
    stderr = math.sqrt(max(rate * (1 - rate), 1e-300) / samples)
    return rate, stderr
