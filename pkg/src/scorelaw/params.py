"""Parameter records for the population process and the clique-interaction graph."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

MAX_SEED = 2**64 - 1


class ParameterError(ValueError):
    """A parameter set violates its validity constraints."""


def _check_seed(seed: int) -> None:
    if not isinstance(seed, int) or not (0 <= seed <= MAX_SEED):
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed!r}")


@dataclass(frozen=True)
class SimParams:
    """Parameters of the score-evolution population process.

    a, b: coefficients of the per-individual selection weight a*score + b.
    m: expected number of newcomers per step (may be fractional).
    t: per-step cap on births and on the total score increase.
    u: score of every newcomer.
    n0: time index of the initial state.
    """

    a: float
    b: float = 0.0
    m: float = 1.0
    t: int = 1
    u: int = 1
    n0: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.a > 0:
            raise ParameterError(f"a must be positive, got {self.a}")
        if self.b < 0:
            raise ParameterError(f"b must be nonnegative, got {self.b}")
        if not self.m > 0:
            raise ParameterError(f"m must be positive, got {self.m}")
        if not isinstance(self.t, int) or self.t < 1:
            raise ParameterError(f"t must be a positive integer, got {self.t}")
        if math.ceil(self.m) > self.t:
            raise ParameterError(
                f"ceil(m)={math.ceil(self.m)} exceeds the per-step birth cap t={self.t}"
            )
        if not isinstance(self.u, int) or self.u < 1:
            raise ParameterError(f"u must be a positive integer, got {self.u}")
        if not isinstance(self.n0, int) or self.n0 < 1:
            raise ParameterError(f"n0 must be a positive integer, got {self.n0}")
        _check_seed(self.seed)

    def weight(self, score: float) -> float:
        return self.a * score + self.b


@dataclass(frozen=True)
class GraphParams:
    """Parameters of the N-vertex interaction graph process.

    Each step: with probability p a new vertex joins and interacts with N-1
    old vertices (weighted clique choice with probability r, else uniform);
    otherwise N old vertices interact (weighted choice with probability q,
    else uniform).
    """

    N: int
    p: float
    r: float
    q: float
    n_max: int = 1000
    seed: int = 0
    tracked_M: frozenset[int] = field(default=frozenset())

    def __post_init__(self) -> None:
        if not isinstance(self.N, int) or self.N < 3:
            raise ParameterError(f"N must be an integer >= 3, got {self.N}")
        if not (0 < self.p <= 1):
            raise ParameterError(f"p must be in (0, 1], got {self.p}")
        if not (0 <= self.r <= 1):
            raise ParameterError(f"r must be in [0, 1], got {self.r}")
        if not (0 <= self.q <= 1):
            raise ParameterError(f"q must be in [0, 1], got {self.q}")
        if not isinstance(self.n_max, int) or self.n_max < 1:
            raise ParameterError(f"n_max must be a positive integer, got {self.n_max}")
        _check_seed(self.seed)
        tracked = frozenset(self.tracked_M) or frozenset(range(2, self.N + 1))
        for M in tracked:
            if not (2 <= M <= self.N):
                raise ParameterError(f"tracked clique size {M} outside [2, N={self.N}]")
        object.__setattr__(self, "tracked_M", tracked)

    @property
    def power_law_regime(self) -> bool:
        """Whether the weighted-choice mechanisms are active enough for the
        clique weights to develop a power-law tail (r > 0 or (1-p)q > 0)."""
        return self.r > 0 or (1 - self.p) * self.q > 0
