"""Score/weight histograms, the central observable of both processes."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass


@dataclass
class Histogram:
    """Counts of individuals (or cliques) per integer score (or weight).

    n is the number of completed evolution steps at the moment the
    histogram was taken.
    """

    counts: dict[int, int]
    n: int

    @classmethod
    def from_values(cls, values, n: int) -> "Histogram":
        return cls(dict(Counter(values)), n)

    def total(self) -> int:
        return sum(self.counts.values())

    def get(self, s: int) -> int:
        return self.counts.get(s, 0)

    def items_sorted(self):
        return sorted(self.counts.items())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Histogram)
            and self.n == other.n
            and self.counts == other.counts
        )
