"""Hypermagmas: subset-valued additions on a finite carrier.

Subsets are stored as integer bit masks over carrier indices (bit ``i`` set
means element ``i`` is a member), so ``add[a, b]`` is the mask of ``a + b``.
The empty set is the mask 0 and is absorbing for the power-set extension.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from hyperbench.backend.errors import StructureError
from hyperbench.backend.monoid import as_table, check_range
from hyperbench.backend.report import ReportOfViolations, ViolationCollector
from hyperbench.utils.logger import get_logger

logger = get_logger()

MAX_CARRIER = 30


def to_mask(items: Iterable[int]) -> int:
    """Encode element indices as a bit mask."""
    mask = 0
    for i in items:
        mask |= 1 << int(i)
    return mask


def bits(mask: int) -> list[int]:
    """Decode a bit mask into sorted element indices."""
    mask = int(mask)
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_label(labels: Sequence[str], mask: int) -> str:
    """Render a mask as ``{a,b}``."""
    return "{" + ",".join(labels[i] for i in bits(mask)) + "}"


@dataclass(frozen=True, eq=False)
class Hypermagma:
    """A finite carrier with a subset-valued addition.

    Attributes:
      labels: Carrier labels.
      add: ``n x n`` table of masks.
      zero: Index of the hyperzero, if any.
      mul: Optional ``n x n`` multiplication table of element indices.
      one: Index of the multiplicative unit; for builtins without
        multiplication this is the element used as ``1`` of the hyperpair.
    """

    labels: tuple[str, ...]
    add: np.ndarray = field(repr=False)
    zero: int | None = 0
    mul: np.ndarray | None = field(default=None, repr=False)
    one: int | None = None

    def __post_init__(self) -> None:
        """Validate shapes, mask ranges and indices."""
        n = len(self.labels)
        if not 0 < n <= MAX_CARRIER:
            logger.error(f"hypermagma: carrier size {n} outside 1..{MAX_CARRIER}")
            raise StructureError(f"hypermagma: carrier size {n} outside 1..{MAX_CARRIER}")
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        add = as_table(self.add, (n, n), "hypermagma.add")
        check_range(add, 1 << n, "hypermagma.add")
        object.__setattr__(self, "add", add)
        if self.mul is not None:
            mul = as_table(self.mul, (n, n), "hypermagma.mul")
            check_range(mul, n, "hypermagma.mul")
            object.__setattr__(self, "mul", mul)
        for name, idx in (("zero", self.zero), ("one", self.one)):
            if idx is not None and not 0 <= idx < n:
                logger.error(f"hypermagma: {name} index {idx} out of range")
                raise StructureError(f"hypermagma: {name} index {idx} out of range")

    @property
    def order(self) -> int:
        """Number of elements."""
        return len(self.labels)

    @property
    def full(self) -> int:
        """Mask of the whole carrier."""
        return (1 << self.order) - 1

    def index(self, label: str) -> int:
        """Return the index of ``label``.

        Raises:
          StructureError: If the label is unknown.
        """
        try:
            return self.labels.index(str(label))
        except ValueError:
            logger.error(f"hypermagma: unknown element {label!r}")
            raise StructureError(f"hypermagma: unknown element {label!r}")

    def scale(self, a: int, s: int) -> int:
        """Elementwise product ``a.S`` as a mask.

        Raises:
          StructureError: If no multiplication is attached.
        """
        if self.mul is None:
            logger.error("hypermagma: no multiplication attached")
            raise StructureError("hypermagma: no multiplication attached")
        return to_mask(int(self.mul[a, x]) for x in bits(s))

    def product(self, s1: int, s2: int) -> int:
        """Elementwise product ``S1.S2`` as a mask."""
        out = 0
        for a in bits(s1):
            out |= self.scale(a, s2)
        return out


def powerset_add(h: Hypermagma, s1: int, s2: int) -> int:
    """Return ``S1 + S2``, the union of ``a + b`` over ``a`` in ``S1``, ``b`` in ``S2``.

    Args:
      h: The hypermagma.
      s1: Left operand mask.
      s2: Right operand mask.

    Returns:
      The sum mask; empty whenever an operand is empty.
    """
    out = 0
    right = bits(s2)
    for a in bits(s1):
        row = h.add[a]
        for b in right:
            out |= int(row[b])
    return out


def set_then_element(add: np.ndarray, left: np.ndarray) -> np.ndarray:
    """Vectorized ``S + c`` for an array of masks ``S``; result has a trailing ``c`` axis."""
    n = add.shape[-1]
    out = np.zeros((*left.shape, n), dtype=np.int64)
    for x in range(n):
        has = ((left >> x) & 1).astype(bool)
        out |= np.where(has[..., None], add[..., x, :], 0)
    return out


def element_then_set(add: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Vectorized ``a + S`` for an array of masks ``S``; result has a leading ``a`` axis."""
    n = add.shape[-1]
    out = np.zeros((n, *right.shape), dtype=np.int64)
    tail = (1,) * right.ndim
    for x in range(n):
        has = ((right >> x) & 1).astype(bool)
        out |= np.where(has[None, ...], add[:, x].reshape((n, *tail)), 0)
    return out


def check_hypersemigroup(h: Hypermagma) -> ReportOfViolations:
    """Exhaustive associativity and hyperzero test.

    Args:
      h: The hypermagma.

    Returns:
      The violation report, with associativity witnesses ``(a, b, c)``.
    """
    out = ViolationCollector("hypersemigroup")
    add = h.add
    # [a, b, c]: (a + b) + c against a + (b + c)
    out.add_mask("associativity", set_then_element(add, add) != element_then_set(add, add))
    if h.zero is not None:
        singles = np.int64(1) << np.arange(h.order, dtype=np.int64)
        out.add_mask("hyperzero_left", add[h.zero, :] != singles)
        out.add_mask("hyperzero_right", add[:, h.zero] != singles)
    out.fact("commutative", bool(np.array_equal(add, add.T)))
    out.fact("empty_sums", int(np.count_nonzero(add == 0)))
    return out.build()


def hypernegatives(h: Hypermagma) -> list[list[int]]:
    """``N(a) = {b : 0 in a + b}`` for every element ``a``.

    Raises:
      StructureError: If ``h`` has no hyperzero.
    """
    if h.zero is None:
        logger.error("hypernegatives: no hyperzero")
        raise StructureError("hypernegatives: no hyperzero")
    has_zero = ((h.add >> h.zero) & 1).astype(bool)
    return [np.flatnonzero(row).tolist() for row in has_zero]


def negation_table(h: Hypermagma) -> np.ndarray | None:
    """The hypernegation ``a -> -a`` when every element has exactly one hypernegative."""
    negs = hypernegatives(h)
    if any(len(n) != 1 for n in negs):
        return None
    return np.array([n[0] for n in negs], dtype=np.int64)


def map_mask(table: np.ndarray, mask: int) -> int:
    """Image of a mask under an elementwise map."""
    return to_mask(int(table[x]) for x in bits(mask))


def check_hypergroup(h: Hypermagma) -> ReportOfViolations:
    """Unique hypernegatives, involution, anti-automorphism and reversibility.

    Hypersemigroup violations are included. On success the negation table is
    stored in the ``negation`` fact.

    Args:
      h: The hypermagma, which must have a hyperzero.

    Returns:
      The violation report.
    """
    base = check_hypersemigroup(h)
    out = ViolationCollector("hypergroup")
    negs = hypernegatives(h)
    for a, n in enumerate(negs):
        if len(n) != 1:
            out.add("unique_hypernegative", (a,), 1)
    neg = negation_table(h)
    if neg is not None:
        n = h.order
        idx = np.arange(n)
        out.add_mask("involution", neg[neg] != idx)
        for a in range(n):
            for b in range(n):
                if map_mask(neg, int(h.add[a, b])) != int(h.add[neg[b], neg[a]]):
                    out.add("anti_automorphism", (a, b))
        # a3 in a1 + a2  iff  a2 in a3 + (-a1)
        for a1 in range(n):
            for a2 in range(n):
                s = int(h.add[a1, a2])
                for a3 in range(n):
                    lhs = bool((s >> a3) & 1)
                    rhs = bool((int(h.add[a3, neg[a1]]) >> a2) & 1)
                    if lhs != rhs:
                        out.add("reversibility", (a1, a2, a3))
        out.fact("negation", [int(x) for x in neg])
    merged = out.build()
    return ReportOfViolations(
        "hypergroup",
        base.violations + merged.violations,
        {**base.facts, **merged.facts},
    )


def check_hyperfield(h: Hypermagma) -> ReportOfViolations:
    """Hypergroup axioms, multiplicative group on nonzero elements, both distributive laws.

    Raises:
      StructureError: If ``h`` has no multiplication or no hyperzero.
    """
    if h.mul is None or h.zero is None:
        logger.error("check_hyperfield: needs a multiplication table and a hyperzero")
        raise StructureError("check_hyperfield: needs a multiplication table and a hyperzero")
    group = check_hypergroup(h)
    out = ViolationCollector("hyperfield")
    mul, z, n = h.mul, h.zero, h.order
    out.add_mask("mul_associative", mul[mul, :] != mul[:, mul])
    out.add_mask("zero_absorbing", (mul[z, :] != z) | (mul[:, z] != z))
    one = h.one
    nonzero = [a for a in range(n) if a != z]
    if one is None or one == z:
        out.add("mul_unit", (), 1)
    else:
        for a in range(n):
            if mul[one, a] != a or mul[a, one] != a:
                out.add("mul_unit", (a,))
        for a in nonzero:
            if not any(mul[a, b] == one and mul[b, a] == one for b in nonzero):
                out.add("mul_group", (a,))
        for a in nonzero:
            for b in nonzero:
                if mul[a, b] == z:
                    out.add("mul_group", (a, b))
    for a in range(n):
        for b in range(n):
            for c in range(n):
                bc = int(h.add[b, c])
                left = h.scale(a, bc)
                if left != powerset_add(h, 1 << int(mul[a, b]), 1 << int(mul[a, c])):
                    out.add("left_distributive", (a, b, c))
                right = h.product(bc, 1 << a)
                if right != powerset_add(h, 1 << int(mul[b, a]), 1 << int(mul[c, a])):
                    out.add("right_distributive", (a, b, c))
    out.fact("mul_commutative", bool(np.array_equal(mul, mul.T)))
    own = out.build()
    return ReportOfViolations(
        "hyperfield",
        group.violations + own.violations,
        {**group.facts, **own.facts},
    )


@dataclass(frozen=True)
class WeaklyNeutralFamily:
    """All subsets ``S`` with ``a`` in ``a + S`` for every ``a``, and the closure check."""

    members: frozenset[int]
    report: ReportOfViolations


def weakly_neutral_family(h: Hypermagma) -> WeaklyNeutralFamily:
    """Enumerate weakly neutral subsets and assert the family is closed under ``+``.

    Args:
      h: A hypersemigroup.

    Returns:
      The family as masks with a report of closure failures.
    """
    n = h.order
    members = set()
    for s in range(1, 1 << n):
        if all((powerset_add(h, 1 << a, s) >> a) & 1 for a in range(n)):
            members.add(s)
    out = ViolationCollector("weakly_neutral")
    ordered = sorted(members)
    for s1 in ordered:
        for s2 in ordered:
            if powerset_add(h, s1, s2) not in members:
                out.add("sum_closed", (s1, s2))
    out.fact("size", len(members))
    return WeaklyNeutralFamily(frozenset(members), out.build())
