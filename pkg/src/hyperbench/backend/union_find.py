"""Disjoint sets over dense integer ids, with the reason of every merge."""

import numpy as np

from hyperbench.utils.logger import get_logger

logger = get_logger()


class UnionFind:
    """Union by size with path halving.

    Each successful :meth:`union` appends ``(a, b, reason)`` to ``merges``, so a
    caller can explain why two ids ended up in one class.
    """

    def __init__(self, n: int) -> None:
        """Start with ``n`` singleton classes ``0..n-1``."""
        self.parent = np.arange(n, dtype=np.int64)
        self.size = np.ones(n, dtype=np.int64)
        self.merges: list[tuple[int, int, str]] = []

    def __len__(self) -> int:
        """Number of ids."""
        return int(self.parent.shape[0])

    def find(self, x: int) -> int:
        """Root of the class of ``x``."""
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = int(parent[x])
        return int(x)

    def union(self, a: int, b: int, reason: str = "") -> bool:
        """Merge the classes of ``a`` and ``b``.

        Returns:
          ``True`` if two distinct classes were merged.
        """
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.merges.append((int(a), int(b), reason))
        return True

    def same(self, a: int, b: int) -> bool:
        """Whether ``a`` and ``b`` are in one class."""
        return self.find(a) == self.find(b)

    def roots(self) -> np.ndarray:
        """Root of every id."""
        return np.array([self.find(x) for x in range(len(self))], dtype=np.int64)

    def count(self) -> int:
        """Number of classes."""
        return int(np.unique(self.roots()).shape[0])
