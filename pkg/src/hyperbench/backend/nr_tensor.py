"""Tensor of hypermagmas whose sums only combine tensors sharing a factor.

The carrier is the set of simple tensors ``v (x) w``, with index
``v * |H2| + w``. Sums are

* ``(v (x) w) + (v' (x) w) = (v + v') (x) w`` for ``v != v'``,
* ``(v (x) w) + (v (x) w') = v (x) (w + w')`` for ``w != w'``,
* ``(v (x) w) + (v (x) w) = (v + v) (x) w  u  v (x) (w + w)``,
* empty when the two tensors differ in both factors.

This is the least hypermagma in which both factor additions distribute over
``(x)``. The empty set absorbs, which breaks associativity even for bipotent
factors.
"""

from dataclasses import dataclass, field

import numpy as np

from hyperbench.backend.builtins import tropical_chain
from hyperbench.backend.errors import CapExceededError, StructureError
from hyperbench.backend.hyper import (
    MAX_CARRIER,
    Hypermagma,
    bits,
    check_hypersemigroup,
    mask_label,
    powerset_add,
)
from hyperbench.backend.module import TModule
from hyperbench.backend.report import ReportOfViolations, ViolationCollector
from hyperbench.backend.tensor import TENSOR_SIGN, CongruenceClosure
from hyperbench.utils.logger import get_logger

logger = get_logger()

EMPTY_SET = "∅"


def module_hypermagma(m: TModule) -> Hypermagma:
    """A module's addition with every sum a singleton."""
    return Hypermagma(m.labels, np.left_shift(1, m.add), m.zero)


@dataclass(frozen=True, eq=False)
class NRTensor:
    """Simple tensors of two hypermagmas with the partial hyperaddition.

    Attributes:
      left: First factor.
      right: Second factor.
      hypermagma: The tensor as a hypermagma on simple tensors, without a hyperzero.
    """

    left: Hypermagma = field(repr=False)
    right: Hypermagma = field(repr=False)
    hypermagma: Hypermagma = field(repr=False)

    @property
    def order(self) -> int:
        """Number of simple tensors."""
        return self.hypermagma.order

    def simple(self, v: int, w: int) -> int:
        """Index of ``v (x) w``."""
        return v * self.right.order + w

    def factors(self, x: int) -> tuple[int, int]:
        """The factors ``(v, w)`` of a simple tensor."""
        v, w = divmod(int(x), self.right.order)
        return v, w

    def render(self, mask: int) -> str:
        """A set of simple tensors as ``{a⊗b,...}``, or ``∅``."""
        if not mask:
            return EMPTY_SET
        return mask_label(self.hypermagma.labels, mask)


def _lift_left(n2: int, s: int, w: int) -> int:
    return sum(1 << (v * n2 + w) for v in bits(s))


def _lift_right(n2: int, v: int, s: int) -> int:
    return sum(1 << (v * n2 + w) for w in bits(s))


def nr_tensor(h1: Hypermagma, h2: Hypermagma) -> NRTensor:
    """Build the tensor of two hypermagmas.

    Raises:
      CapExceededError: If there are more simple tensors than a hypermagma carrier holds.
    """
    n1, n2 = h1.order, h2.order
    n = n1 * n2
    if n > MAX_CARRIER:
        logger.error(f"nr_tensor: {n} simple tensors, at most {MAX_CARRIER} are supported")
        raise CapExceededError(MAX_CARRIER, n, "simple tensors")
    add = np.zeros((n, n), dtype=np.int64)
    for x in range(n):
        v, w = divmod(x, n2)
        for y in range(n):
            v2, w2 = divmod(y, n2)
            if v != v2 and w != w2:
                continue
            s = 0
            if w == w2:
                s |= _lift_left(n2, int(h1.add[v, v2]), w)
            if v == v2:
                s |= _lift_right(n2, v, int(h2.add[w, w2]))
            add[x, y] = s
    labels = tuple(f"{a}{TENSOR_SIGN}{b}" for a in h1.labels for b in h2.labels)
    logger.debug(f"nr_tensor: {n} simple tensors, {int(np.count_nonzero(add == 0))} empty sums")
    return NRTensor(h1, h2, Hypermagma(labels, add, None))


def nr_add(t: NRTensor, x: int, y: int) -> int:
    """Sum of two simple tensors as a mask; 0 is the empty set.

    Raises:
      StructureError: If an index is not a simple tensor of ``t``.
    """
    for z in (x, y):
        if not 0 <= z < t.order:
            logger.error(f"nr_add: {z} is not a simple tensor")
            raise StructureError(f"nr_add: {z} is not a simple tensor")
    return int(t.hypermagma.add[x, y])


def nr_sum(t: NRTensor, s1: int, s2: int) -> int:
    """Sum of two sets of simple tensors; the empty set absorbs."""
    return powerset_add(t.hypermagma, s1, s2)


def check_nr_tensor(t: NRTensor) -> ReportOfViolations:
    """Associativity of the tensor and the emptiness of every mixed sum.

    Associativity failures are reported as ``associativity`` with a witness
    ``(x, y, z)``.
    """
    base = check_hypersemigroup(t.hypermagma)
    out = ViolationCollector("nr_tensor")
    n = t.order
    for x in range(n):
        v, w = t.factors(x)
        for y in range(n):
            v2, w2 = t.factors(y)
            if v != v2 and w != w2 and t.hypermagma.add[x, y]:
                out.add("mixed_sum_nonempty", (x, y))
    own = out.build()
    return ReportOfViolations(
        "nr_tensor", base.violations + own.violations, {**base.facts, **own.facts},
    )


@dataclass(frozen=True)
class AssociativityWitness:
    """Two bracketings of ``v1⊗w1 + v1⊗w2 + v2⊗w1 + v2⊗w2`` that disagree.

    Attributes:
      labels: Labels of ``v1``, ``v2``, ``w1``, ``w2``.
      grouped: ``(v1⊗w1 + v1⊗w2) + (v2⊗w1 + v2⊗w2)``.
      chained: ``v1⊗w1 + ((v1⊗w2 + v2⊗w1) + v2⊗w2)``.
      rendered: Both results as set labels.
    """

    labels: tuple[str, str, str, str]
    grouped: int
    chained: int
    rendered: tuple[str, str]

    @property
    def associative(self) -> bool:
        """Whether the two bracketings agree."""
        return self.grouped == self.chained

    def to_dict(self) -> dict[str, object]:
        """Return a JSON-ready mapping."""
        v1, v2, w1, w2 = self.labels
        return {
            "v1": v1,
            "v2": v2,
            "w1": w1,
            "w2": w2,
            "grouped": self.rendered[0],
            "chained": self.rendered[1],
            "associative": self.associative,
        }


def nr_assoc_counterexample(k: int = 2) -> AssociativityWitness:
    """Evaluate both bracketings on the tropical chain of length ``k``.

    With ``v1 = w1 = k`` and ``v2 = w2 = k - 1`` the factors are bipotent on
    these elements: ``v1 + v2 = {v1}``. The grouped sum is ``{v1⊗w1}``; the
    chained one passes through a mixed sum and is empty.

    Raises:
      StructureError: If ``k < 2``.
    """
    if k < 2:
        logger.error(f"nr_assoc_counterexample: needs a chain of length >= 2, got {k}")
        raise StructureError("nr_assoc_counterexample: needs a chain of length >= 2")
    h = tropical_chain(k)
    t = nr_tensor(h, h)
    v1, v2 = k, k - 1
    w1, w2 = k, k - 1

    def one(v: int, w: int) -> int:
        return 1 << t.simple(v, w)

    grouped = nr_sum(
        t,
        nr_sum(t, one(v1, w1), one(v1, w2)),
        nr_sum(t, one(v2, w1), one(v2, w2)),
    )
    inner = nr_sum(t, nr_sum(t, one(v1, w2), one(v2, w1)), one(v2, w2))
    chained = nr_sum(t, one(v1, w1), inner)
    labels = (h.labels[v1], h.labels[v2], h.labels[w1], h.labels[w2])
    witness = AssociativityWitness(
        labels, grouped, chained, (t.render(grouped), t.render(chained)),
    )
    logger.info(f"nr tensor bracketings: {witness.rendered[0]} against {witness.rendered[1]}")
    return witness


def nr_collapse_report(t: NRTensor, closure: CongruenceClosure) -> ReportOfViolations:
    """Compare two-term sums of the tensor with the classes of a congruence closure.

    ``t`` must be the tensor of the singleton hypermagmas of the closure's
    factors (see :func:`module_hypermagma`). Every member of a nonempty sum
    must lie in the closure class of the two-term sum (``outside_class``).
    Sums that are empty are listed in the ``collapsed`` fact, and closure
    classes all of whose two-term representatives are empty sums in
    ``lost_classes``.

    Raises:
      StructureError: If the carriers differ from the closure's factors.
    """
    if (t.left.order, t.right.order) != (closure.left.order, closure.n2):
        logger.error("nr_collapse_report: tensor and closure are over different carriers")
        raise StructureError("nr_collapse_report: tensor and closure are over different carriers")
    out = ViolationCollector("nr_collapse")
    labels = t.hypermagma.labels
    collapsed: list[list[str]] = []
    reached: dict[int, bool] = {}
    for x in range(t.order):
        for y in range(x, t.order):
            c = closure.class_of([x, y])
            s = int(t.hypermagma.add[x, y])
            reached[c] = reached.get(c, False) or bool(s)
            if not s:
                collapsed.append([labels[x], labels[y], closure.label(c)])
                continue
            for z in bits(s):
                if int(closure.term_class[z]) != c:
                    out.add("outside_class", (x, y, z))
    lost = sorted(c for c, hit in reached.items() if not hit)
    out.fact("pairs", t.order * (t.order + 1) // 2)
    out.fact("collapsed", collapsed)
    out.fact("lost_classes", [closure.label(c) for c in lost])
    logger.info(f"nr collapse: {len(collapsed)} empty sums, {len(lost)} classes lost")
    return out.build()
