"""Finite T-modules and (T1, T2)-bimodules.

A module is a finite commutative monoid ``(M, +, 0)`` with a left action of a
monoid ``T`` and a right action of a monoid ``T2``. Both action tables are
stored, with ``action[a, b] = a.b`` and ``right_action[a, b] = b.a``. When no
right action is given the left one is reused, which is only a valid right
action when ``T`` is commutative.
"""

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from hyperbench.backend.errors import StructureError
from hyperbench.backend.monoid import FiniteMonoid, as_table, check_range, trivial_monoid
from hyperbench.backend.report import ReportOfViolations, ViolationCollector
from hyperbench.utils.logger import get_logger

logger = get_logger()


@dataclass(frozen=True, eq=False)
class TModule:
    """A finite left T-module, right T2-module.

    Attributes:
      labels: Carrier labels.
      add: ``n x n`` addition table.
      zero: Index of the additive zero.
      monoid: The left acting monoid ``T``.
      action: ``|T| x n`` left action table.
      right_monoid: The right acting monoid (defaults to ``monoid``).
      right_action: ``|T2| x n`` right action table (defaults to ``action``).
    """

    labels: tuple[str, ...]
    add: np.ndarray = field(repr=False)
    zero: int
    monoid: FiniteMonoid = field(repr=False)
    action: np.ndarray = field(repr=False)
    right_monoid: FiniteMonoid | None = field(default=None, repr=False)
    right_action: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        """Validate table shapes and entry ranges."""
        n = len(self.labels)
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "add", as_table(self.add, (n, n), "module.add"))
        check_range(self.add, n, "module.add")
        if not 0 <= self.zero < n:
            logger.error(f"module: zero index {self.zero} out of range")
            raise StructureError(f"module: zero index {self.zero} out of range")
        action = as_table(self.action, (self.monoid.order, n), "module.action")
        check_range(action, n, "module.action")
        object.__setattr__(self, "action", action)
        right_monoid = self.right_monoid or self.monoid
        right = self.right_action if self.right_action is not None else action
        right = as_table(right, (right_monoid.order, n), "module.right_action")
        check_range(right, n, "module.right_action")
        object.__setattr__(self, "right_monoid", right_monoid)
        object.__setattr__(self, "right_action", right)

    @property
    def order(self) -> int:
        """Number of elements."""
        return len(self.labels)

    @property
    def ract(self) -> np.ndarray:
        """The right action table, never ``None`` after construction."""
        assert self.right_action is not None
        return self.right_action

    @property
    def rmonoid(self) -> FiniteMonoid:
        """The right acting monoid, never ``None`` after construction."""
        assert self.right_monoid is not None
        return self.right_monoid

    def plus(self, a: int, b: int) -> int:
        """Return ``a + b``."""
        return int(self.add[a, b])

    def act(self, a: int, b: int) -> int:
        """Return the left action ``a.b``."""
        return int(self.action[a, b])

    def sum(self, items: Iterable[int]) -> int:
        """Fold ``+`` over ``items``, starting from zero."""
        total = self.zero
        for b in items:
            total = int(self.add[total, b])
        return total

    def index(self, label: str) -> int:
        """Return the index of ``label``.

        Raises:
          StructureError: If the label is unknown.
        """
        try:
            return self.labels.index(str(label))
        except ValueError:
            logger.error(f"module: unknown element {label!r}")
            raise StructureError(f"module: unknown element {label!r}")

    def negation(self) -> np.ndarray | None:
        """Additive inverse table, or ``None`` if some element has no inverse."""
        hits = self.add == self.zero
        if not np.all(hits.any(axis=1)):
            return None
        return np.argmax(hits, axis=1).astype(np.int64)

    def is_regular(self) -> bool:
        """Whether this is ``T`` acting on itself by multiplication."""
        t = self.monoid
        return t.order == self.order and bool(np.array_equal(self.action, t.op))

    def same_monoid(self, other: FiniteMonoid, right: bool = False) -> bool:
        """Whether ``other`` has the same table as the (left or right) acting monoid."""
        mine = self.rmonoid if right else self.monoid
        return mine is other or (
            mine.order == other.order and bool(np.array_equal(mine.op, other.op))
        )


def check_module(m: TModule) -> ReportOfViolations:
    """Exhaustively verify the module and bimodule axioms.

    Args:
      m: The module to check; its monoids are assumed to pass ``check_monoid``.

    Returns:
      The violation report; facts record commutativity of the monoid, the
      presence of additive inverses and whether an absorbing element of ``T``
      acts as zero.
    """
    out = ViolationCollector("module")
    add, act, ract = m.add, m.action, m.ract
    t, t2 = m.monoid, m.rmonoid
    idx = np.arange(m.order)
    out.add_mask("add_commutative", add != add.T)
    out.add_mask("add_associative", add[add, :] != add[:, add])
    out.add_mask("zero_neutral", add[m.zero, :] != idx)
    out.add_mask("unit_acts_trivially", act[t.identity, :] != idx)
    # [a1, a2, b]: a1.(a2.b) against (a1 a2).b
    out.add_mask("action_compatible", act[:, act] != act[t.op, :])
    out.add_mask("action_fixes_zero", act[:, m.zero] != m.zero)
    # [a, b1, b2]: a.(b1 + b2) against a.b1 + a.b2
    out.add_mask("action_distributive", act[:, add] != add[act[:, :, None], act[:, None, :]])
    out.add_mask("right_unit", ract[t2.identity, :] != idx)
    # [a2, a1, b]: (b a1) a2 against b (a1 a2)
    out.add_mask("right_action_compatible", ract[:, ract] != ract[t2.op.T, :])
    out.add_mask("right_action_fixes_zero", ract[:, m.zero] != m.zero)
    out.add_mask(
        "right_action_distributive",
        ract[:, add] != add[ract[:, :, None], ract[:, None, :]],
    )
    # [a1, a2, b]: (a1.b).a2 against a1.(b.a2)
    a1 = np.arange(t.order)[:, None, None]
    a2 = np.arange(t2.order)[None, :, None]
    out.add_mask("bimodule", ract[a2, act[a1, idx]] != act[a1, ract[a2, idx]])
    out.fact("order", m.order)
    out.fact("monoid_commutative", t.is_commutative())
    out.fact("has_negation", m.negation() is not None)
    if t.absorbing is not None:
        out.fact("absorbing_acts_as_zero", bool(np.all(act[t.absorbing] == m.zero)))
    return out.build()


def module_from_rows(
    labels: Sequence[str],
    add: Sequence[Sequence[int]],
    zero: int,
    monoid: FiniteMonoid | None = None,
    action: Sequence[Sequence[int]] | None = None,
) -> TModule:
    """Build a module from plain rows; the default is the trivial monoid acting trivially."""
    t = monoid or trivial_monoid()
    if action is None:
        action = [list(range(len(labels)))] * t.order
    return TModule(tuple(labels), np.array(add), zero, t, np.array(action))


def regular_module(
    t: FiniteMonoid, add: Sequence[Sequence[int]] | np.ndarray, zero: int,
) -> TModule:
    """``T`` acting on itself by left multiplication, with the given addition."""
    return TModule(t.labels, np.array(add), zero, t, t.op, t, t.op.T)


def boolean_module() -> TModule:
    """``B = {0, 1}`` with ``1 + 1 = 1`` over the trivial monoid."""
    return module_from_rows(("0", "1"), [[0, 1], [1, 1]], 0)


def boolean_semiring_module() -> TModule:
    """The boolean semiring acting on itself by multiplication (0 absorbing)."""
    t = FiniteMonoid(("0", "1"), np.array([[0, 0], [0, 1]]), identity=1, absorbing=0)
    return regular_module(t, [[0, 1], [1, 1]], 0)


def cyclic_module(n: int) -> TModule:
    """``Z/n`` under addition over the trivial monoid."""
    idx = np.arange(n)
    return module_from_rows(
        tuple(str(i) for i in range(n)),
        ((idx[:, None] + idx[None, :]) % n).tolist(),
        0,
    )


def direct_sum(m1: TModule, m2: TModule) -> TModule:
    """Product carrier with coordinatewise operations.

    Element ``(x, y)`` has index ``x * |M2| + y``.

    Raises:
      StructureError: If the two modules are over different monoids.
    """
    if not (m2.same_monoid(m1.monoid) and m2.same_monoid(m1.rmonoid, right=True)):
        logger.error("direct_sum: summands are over different monoids")
        raise StructureError("direct_sum: summands are over different monoids")
    n2 = m2.order
    x = np.repeat(np.arange(m1.order), n2)
    y = np.tile(np.arange(n2), m1.order)
    labels = tuple(f"({a},{b})" for a in m1.labels for b in m2.labels)
    add = m1.add[x[:, None], x[None, :]] * n2 + m2.add[y[:, None], y[None, :]]
    action = m1.action[:, x] * n2 + m2.action[:, y]
    right = m1.ract[:, x] * n2 + m2.ract[:, y]
    zero = m1.zero * n2 + m2.zero
    return TModule(labels, add, zero, m1.monoid, action, m1.rmonoid, right)


def free_module(regular: TModule, rank: int) -> tuple[TModule, tuple[int, ...]]:
    """The ``rank``-fold direct sum of a regular module, with its standard base.

    Args:
      regular: ``T`` acting on itself (see :func:`regular_module`).
      rank: Number of summands, at least 1.

    Returns:
      The module and the indices of the base vectors ``e_1, ..., e_rank``.

    Raises:
      StructureError: If ``regular`` is not regular or ``rank < 1``.
    """
    if rank < 1 or not regular.is_regular():
        logger.error(f"free_module: need a regular module and rank >= 1, got rank {rank}")
        raise StructureError("free_module: need a regular module and rank >= 1")
    one = regular.monoid.identity
    m = regular
    for _ in range(rank - 1):
        m = direct_sum(m, regular)
    n = regular.order
    base = []
    for i in range(rank):
        coords = [regular.zero] * rank
        coords[i] = one
        base.append(sum(c * n ** (rank - 1 - j) for j, c in enumerate(coords)))
    return m, tuple(base)


def coordinate_map(m: TModule, base: Sequence[int]) -> dict[int, list[tuple[int, ...]]]:
    """Map each element to every coefficient tuple ``(a_i)`` with ``sum a_i.b_i`` equal to it."""
    coeffs: dict[int, list[tuple[int, ...]]] = {b: [] for b in range(m.order)}
    for tup in itertools.product(range(m.monoid.order), repeat=len(base)):
        value = m.sum(m.act(a, b) for a, b in zip(tup, base, strict=True))
        coeffs[value].append(tup)
    return coeffs


def is_free_base(m: TModule, base: Sequence[int]) -> bool:
    """Whether ``T^k -> M, (a_i) -> sum a_i.b_i`` is a bijection."""
    if not base:
        return False
    return all(len(v) == 1 for v in coordinate_map(m, base).values())


def coordinates(m: TModule, base: Sequence[int], b: int) -> tuple[int, ...]:
    """The unique coefficients of ``b`` over a free base.

    Raises:
      StructureError: If ``base`` is not free or ``b`` has no unique coefficients.
    """
    found = coordinate_map(m, base)[b]
    if len(found) != 1:
        logger.error(f"coordinates: element {m.labels[b]} has {len(found)} expansions")
        raise StructureError(f"coordinates: element {m.labels[b]} has {len(found)} expansions")
    return found[0]
