"""Fenwick-tree sampler for weighted random selection with incremental updates."""

from __future__ import annotations


class WeightedSampler:
    """Prefix-sum sampler over a growable array of nonnegative weights.

    append, update and find are all O(log n). The tree is 1-based
    internally; the public API is 0-based.
    """

    def __init__(self, weights=()):
        self._tree = [0.0]  # _tree[0] unused
        self._weights: list[float] = []
        self._total = 0.0
        for w in weights:
            self.append(w)

    def __len__(self) -> int:
        return len(self._weights)

    @property
    def total(self) -> float:
        return self._total

    def weight(self, i: int) -> float:
        return self._weights[i]

    def append(self, w: float) -> None:
        i = len(self._weights) + 1
        # node i covers the range (i - lowbit(i), i]
        node = w
        j = i - 1
        lo = i - (i & -i)
        tree = self._tree
        while j > lo:
            node += tree[j]
            j -= j & -j
        tree.append(node)
        self._weights.append(w)
        self._total += w

    def update(self, i: int, delta: float) -> None:
        self._weights[i] += delta
        self._total += delta
        j = i + 1
        tree = self._tree
        n = len(tree)
        while j < n:
            tree[j] += delta
            j += j & -j

    def find(self, x: float) -> int:
        """Index i such that prefix_sum(i) <= x < prefix_sum(i+1).

        x must lie in [0, total); an x at or slightly past total (float
        round-off) returns the last index.
        """
        size = len(self._weights)
        idx = 0
        bit = 1 << (size.bit_length() - 1) if size else 0
        tree = self._tree
        while bit:
            nxt = idx + bit
            if nxt <= size and tree[nxt] <= x:
                x -= tree[nxt]
                idx = nxt
            bit >>= 1
        return min(idx, size - 1)

    def recomputed_total(self) -> float:
        """From-scratch sum of the weight array, for drift checks."""
        return sum(self._weights)
