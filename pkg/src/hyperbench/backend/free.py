"""Normal forms for ``M1 (x) M2`` when ``M2`` is free.

If ``M2`` is free over ``T`` with base ``b_1, ..., b_k`` then every class has a
unique expansion ``sum v_i (x) b_i``, so the tensor is ``M1^k`` with
coordinatewise addition. ``v (x) y`` with ``y = sum a_i b_i`` encodes as the
vector ``(v a_i)_i``.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from hyperbench.backend.errors import StructureError
from hyperbench.backend.module import TModule, coordinates, direct_sum, is_free_base
from hyperbench.backend.pair import Pair, SurpassingRelation
from hyperbench.backend.report import ReportOfViolations, ViolationCollector
from hyperbench.backend.tensor import CongruenceClosure
from hyperbench.utils.logger import get_logger

logger = get_logger()


@dataclass(frozen=True, eq=False)
class FreeCodec:
    """Bijection between tensor classes and coordinate vectors over ``M1``.

    Attributes:
      left: ``M1``.
      right: ``M2``, free with base ``base``.
      base: Carrier indices of the base of ``M2``.
      coords: ``coords[y]`` are the ``T``-coordinates of ``y`` over the base.
    """

    left: TModule = field(repr=False)
    right: TModule = field(repr=False)
    base: tuple[int, ...]
    coords: np.ndarray = field(repr=False)

    @property
    def rank(self) -> int:
        """Number of base elements."""
        return len(self.base)

    @property
    def size(self) -> int:
        """Number of vectors, ``|M1| ** rank``."""
        return self.left.order**self.rank

    def vector_index(self, vec: Sequence[int]) -> int:
        """Mixed-radix index of a coordinate vector, first coordinate most significant."""
        n1 = self.left.order
        out = 0
        for v in vec:
            out = out * n1 + int(v)
        return out

    def vector(self, index: int) -> tuple[int, ...]:
        """Coordinates of the vector with the given index."""
        n1 = self.left.order
        out = []
        for _ in range(self.rank):
            index, v = divmod(index, n1)
            out.append(v)
        return tuple(reversed(out))

    def simple(self, v: int, y: int) -> tuple[int, ...]:
        """Vector of ``v (x) y``."""
        return tuple(int(self.left.ract[a, v]) for a in self.coords[y])

    def encode(self, pairs: Iterable[tuple[int, int]]) -> int:
        """Vector index of a nonempty sum of simple tensors ``(v, y)``.

        Raises:
          StructureError: For the empty sum.
        """
        total: list[int] | None = None
        add = self.left.add
        for v, y in pairs:
            vec = self.simple(v, y)
            if total is None:
                total = list(vec)
            else:
                total = [int(add[a, b]) for a, b in zip(total, vec, strict=True)]
        if total is None:
            logger.error("free codec: cannot encode the empty sum")
            raise StructureError("free codec: cannot encode the empty sum")
        return self.vector_index(total)

    def decode(self, index: int) -> list[tuple[int, int]]:
        """The normal form ``sum v_i (x) b_i`` of a vector, as pairs."""
        return list(zip(self.vector(index), self.base, strict=True))

    def as_module(self) -> TModule:
        """``M1^rank`` with coordinatewise operations."""
        m = self.left
        for _ in range(self.rank - 1):
            m = direct_sum(m, self.left)
        return m

    def as_pair(self, p1: Pair) -> Pair:
        """Coordinatewise pair: a vector is in ``A0`` when every coordinate is.

        The relation is the coordinatewise product of ``p1``'s relation.
        """
        module = self.as_module()
        inside = p1.zero_mask()
        r1 = p1.relation.rel
        vectors = [self.vector(i) for i in range(self.size)]
        zero = frozenset(i for i, vec in enumerate(vectors) if all(inside[v] for v in vec))
        rel = np.ones((self.size, self.size), dtype=bool)
        for k in range(self.rank):
            col = np.array([vec[k] for vec in vectors])
            rel &= r1[col[:, None], col[None, :]]
        one = None
        if p1.one is not None:
            one = self.encode([(p1.one, self.base[0])])
        return Pair(module, zero, one=one, surpassing=SurpassingRelation(rel, "coordinatewise"))


def free_normal_form(m1: TModule, m2: TModule, base: Sequence[int]) -> FreeCodec:
    """Build the codec for ``M1 (x) M2`` over a free base of ``M2``.

    Raises:
      StructureError: If ``base`` is not a free base of ``M2`` or the right
        action of ``M1`` is not over ``M2``'s monoid.
    """
    if not m1.same_monoid(m2.monoid, right=True):
        logger.error("free_normal_form: factors are not over the same monoid")
        raise StructureError("free_normal_form: factors are not over the same monoid")
    if not is_free_base(m2, base):
        logger.error(f"free_normal_form: {list(base)} is not a free base")
        raise StructureError("free_normal_form: base is not free")
    coords = np.array([coordinates(m2, base, y) for y in range(m2.order)], dtype=np.int64)
    logger.debug(f"free codec: rank {len(base)}, {m1.order ** len(base)} vectors")
    return FreeCodec(m1, m2, tuple(int(b) for b in base), coords)


def codec_partition_matches(codec: FreeCodec, closure: CongruenceClosure) -> ReportOfViolations:
    """Compare the closure's classes with the codec's vectors on every enumerated term.

    Returns:
      Violations ``merged_apart`` (same class, different vectors) and
      ``split_together`` (same vector, different classes).
    """
    out = ViolationCollector("free_codec")
    n2 = closure.n2
    vec_of_class: dict[int, int] = {}
    class_of_vec: dict[int, int] = {}
    for tid, t in enumerate(closure.terms):
        c = int(closure.term_class[tid])
        vec = codec.encode(divmod(g, n2) for g in t)
        if vec_of_class.setdefault(c, vec) != vec:
            out.add("merged_apart", (tid,))
        if class_of_vec.setdefault(vec, c) != c:
            out.add("split_together", (tid,))
    out.fact("classes", closure.order)
    out.fact("vectors_reached", len(class_of_vec))
    return out.build()


def structure_constants(m2: TModule, base: Sequence[int], mul2: np.ndarray) -> np.ndarray:
    """``a[i, j, k]`` with ``b_i b_j = sum_k a[i, j, k] b_k`` for a multiplication on ``M2``."""
    k = len(base)
    out = np.empty((k, k, k), dtype=np.int64)
    for i, bi in enumerate(base):
        for j, bj in enumerate(base):
            out[i, j] = coordinates(m2, base, int(mul2[bi, bj]))
    return out


def free_semialgebra_product(
    codec: FreeCodec, mul1: np.ndarray, constants: np.ndarray,
) -> np.ndarray:
    """Multiplication of vectors from structure constants.

    ``(sum v_i b_i)(sum w_j b_j)`` has ``k``-th coordinate
    ``sum_{i,j} (v_i w_j) a[i, j, k]``.

    Args:
      codec: The free codec.
      mul1: Multiplication table on ``M1``.
      constants: Structure constants as returned by :func:`structure_constants`.

    Returns:
      ``size x size`` table of vector indices.
    """
    m1 = codec.left
    rank = codec.rank
    vectors = [codec.vector(i) for i in range(codec.size)]
    table = np.empty((codec.size, codec.size), dtype=np.int64)
    for x, vx in enumerate(vectors):
        for y, vy in enumerate(vectors):
            out = []
            for k in range(rank):
                acc = m1.zero
                for i in range(rank):
                    for j in range(rank):
                        term = int(m1.ract[constants[i, j, k], mul1[vx[i], vy[j]]])
                        acc = m1.plus(acc, term)
                out.append(acc)
            table[x, y] = codec.vector_index(out)
    return table
