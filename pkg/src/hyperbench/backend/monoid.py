"""Finite monoids given by Cayley tables.

Elements are dense indices ``0..n-1``; labels are only used for display and
file I/O. Checks are vectorized over the full table with numpy.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from hyperbench.backend.errors import StructureError
from hyperbench.backend.report import ReportOfViolations, ViolationCollector
from hyperbench.utils.logger import get_logger

logger = get_logger()


def as_table(
    rows: Sequence[Sequence[int]] | np.ndarray,
    shape: tuple[int, ...],
    name: str,
) -> np.ndarray:
    """Convert ``rows`` to a read-only int64 table and validate its shape.

    Args:
      rows: Nested sequence or array of element indices.
      shape: Expected shape.
      name: Table name used in error messages.

    Returns:
      The validated table.

    Raises:
      StructureError: If the shape is wrong or an entry is not an integer.
    """
    try:
        table = np.array(rows, dtype=np.int64)
    except (TypeError, ValueError) as e:
        logger.error(f"{name}: non-index entry ({e})")
        raise StructureError(f"{name}: non-index entry ({e})") from e
    if table.shape != shape:
        logger.error(f"{name}: expected shape {shape}, got {table.shape}")
        raise StructureError(f"{name}: expected shape {shape}, got {table.shape}")
    table.setflags(write=False)
    return table


def check_range(table: np.ndarray, size: int, name: str) -> None:
    """Raise ``StructureError`` if an entry of ``table`` is not in ``0..size-1``."""
    bad = np.argwhere((table < 0) | (table >= size))
    if len(bad):
        where = tuple(int(i) for i in bad[0])
        logger.error(f"{name}: entry at {where} is not an element index")
        raise StructureError(f"{name}: entry at {where} is not an element index")


@dataclass(frozen=True, eq=False)
class FiniteMonoid:
    """A finite monoid ``(T, op)`` with an optional absorbing element.

    Construction validates only the table shape and entry range; the axioms are
    checked by :func:`check_monoid`.

    Attributes:
      labels: Element labels, one per index.
      op: ``n x n`` table, ``op[a, b]`` is the product ``ab``.
      identity: Index of the unit.
      absorbing: Index of the adjoined absorbing element, if any.
    """

    labels: tuple[str, ...]
    op: np.ndarray = field(repr=False)
    identity: int = 0
    absorbing: int | None = None

    def __post_init__(self) -> None:
        """Validate shape and ranges."""
        n = len(self.labels)
        if n == 0:
            logger.error("monoid: empty carrier")
            raise StructureError("monoid: empty carrier")
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "op", as_table(self.op, (n, n), "monoid.op"))
        check_range(self.op, n, "monoid.op")
        for name, idx in (("identity", self.identity), ("absorbing", self.absorbing)):
            if idx is not None and not 0 <= idx < n:
                logger.error(f"monoid: {name} index {idx} out of range")
                raise StructureError(f"monoid: {name} index {idx} out of range")

    @property
    def order(self) -> int:
        """Number of elements."""
        return len(self.labels)

    def mul(self, a: int, b: int) -> int:
        """Return the product ``ab``."""
        return int(self.op[a, b])

    def index(self, label: str) -> int:
        """Return the index of ``label``.

        Raises:
          StructureError: If the label is unknown.
        """
        try:
            return self.labels.index(str(label))
        except ValueError:
            logger.error(f"monoid: unknown element {label!r}")
            raise StructureError(f"monoid: unknown element {label!r}")

    def is_commutative(self) -> bool:
        """Whether ``ab = ba`` for all elements."""
        return bool(np.array_equal(self.op, self.op.T))

    def non_absorbing(self) -> list[int]:
        """Indices of every element except the absorbing one."""
        return [a for a in range(self.order) if a != self.absorbing]

    def units(self) -> list[int]:
        """Indices of invertible elements."""
        e = self.identity
        return [
            a
            for a in range(self.order)
            if np.any((self.op[a, :] == e) & (self.op[:, a] == e))
        ]

    def is_subgroup(self, members: Sequence[int]) -> bool:
        """Whether ``members`` is a group under ``op`` containing the identity."""
        group = set(members)
        if self.identity not in group:
            return False
        for a in group:
            if any(self.mul(a, b) not in group for b in group):
                return False
            if not any(self.mul(a, b) == self.identity for b in group):
                return False
        return True


def check_monoid(m: FiniteMonoid) -> ReportOfViolations:
    """Exhaustively verify associativity, unit and absorbing laws.

    Args:
      m: The monoid to check.

    Returns:
      A report whose witnesses are index triples ``(a, b, c)`` for
      associativity and single elements for the unit and absorbing laws.
    """
    out = ViolationCollector("monoid")
    op = m.op
    n = m.order
    idx = np.arange(n)
    # left[a, b, c] = (ab)c, right[a, b, c] = a(bc)
    out.add_mask("associativity", op[op, :] != op[:, op])
    out.add_mask("left_identity", op[m.identity, :] != idx)
    out.add_mask("right_identity", op[:, m.identity] != idx)
    if m.absorbing is not None:
        z = m.absorbing
        out.add_mask("left_absorbing", op[z, :] != z)
        out.add_mask("right_absorbing", op[:, z] != z)
    out.fact("order", n)
    out.fact("commutative", m.is_commutative())
    return out.build()


def monoid_from_rows(
    labels: Sequence[str],
    rows: Sequence[Sequence[int]],
    identity: int = 0,
    absorbing: int | None = None,
) -> FiniteMonoid:
    """Build a monoid from plain Python rows."""
    return FiniteMonoid(tuple(labels), np.array(rows), identity, absorbing)


def trivial_monoid() -> FiniteMonoid:
    """The one-element monoid ``{1}``."""
    return FiniteMonoid(("1",), np.zeros((1, 1), dtype=np.int64), 0)


def cyclic_group(n: int) -> FiniteMonoid:
    """The additive group ``Z/n`` labelled ``0..n-1``."""
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    return FiniteMonoid(tuple(str(i) for i in range(n)), table, 0)


def product_monoid(t1: FiniteMonoid, t2: FiniteMonoid) -> FiniteMonoid:
    """Direct product ``T1 x T2``; element ``(a1, a2)`` has index ``a1 * |T2| + a2``."""
    n2 = t2.order
    labels = tuple(f"({x},{y})" for x in t1.labels for y in t2.labels)
    a1 = np.repeat(np.arange(t1.order), n2)
    a2 = np.tile(np.arange(n2), t1.order)
    op = t1.op[a1[:, None], a1[None, :]] * n2 + t2.op[a2[:, None], a2[None, :]]
    return FiniteMonoid(labels, op, t1.identity * n2 + t2.identity)
