"""Currying maps on products and tensors into maps between map modules.

``f -> (w -> f(-, w))`` sends a map on ``M1 x M2`` (or on ``M1 (x) M2``) to a
map ``M2 -> Maps(M1, M3)``; ``g -> ((v, w) -> g(w)(v))`` goes back. The inner
maps ``M1 -> M3`` form a module with

- pointwise addition,
- ``(a h)(v) = h(v a)``, so that currying turns balance into multiplicativity,
- ``(h a)(v) = h(v) a``,

and a pair with zero set the maps into ``A0''`` and the pointwise relation.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from hyperbench.backend.errors import StructureError
from hyperbench.backend.free import free_normal_form
from hyperbench.backend.hyperpair import Hyperpair, is_intersection_closed
from hyperbench.backend.morphism import (
    DEFAULT_MAP_CAP,
    MapModule,
    classify,
    classify_all,
    map_module,
)
from hyperbench.backend.morphism_tensor import meet_on_classes
from hyperbench.backend.pair import Pair, SurpassingRelation
from hyperbench.backend.report import ReportOfViolations, ViolationCollector
from hyperbench.backend.tensor import (
    CongruenceClosure,
    MonoidFactor,
    all_maps,
    same_carrier,
    tensor_preorder,
)
from hyperbench.backend.tensor_maps import class_pair
from hyperbench.utils.logger import get_logger

logger = get_logger()

WEAK_COLAX = ("colax", "paired")


@dataclass(frozen=True, eq=False)
class InnerMaps:
    """Maps ``M1 -> M3`` carrying given flags, as a module and a pair.

    Attributes:
      maps: The maps and their module, or a report of why they are not closed.
      pair: The pair on ``maps.module``, ``None`` if the maps are not closed.
      flags: The flags every member carries.
    """

    maps: MapModule = field(repr=False)
    pair: Pair | None = field(repr=False)
    flags: tuple[str, ...]

    def index_of(self, h: np.ndarray) -> int | None:
        """Index of a map, ``None`` if it is not a member."""
        key = np.ascontiguousarray(h, dtype=np.int64).tobytes()
        return self._index.get(key)

    @property
    def _index(self) -> dict[bytes, int]:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {f.tobytes(): i for i, f in enumerate(self.maps.maps)}
            object.__setattr__(self, "_index_cache", cached)
        return cached


def inner_maps(
    m1: Pair, m3: Pair, flags: Sequence[str] = WEAK_COLAX, cap: int = DEFAULT_MAP_CAP,
) -> InnerMaps:
    """The multiplicative maps ``M1 -> M3`` with every flag in ``flags``."""
    maps = [
        np.asarray(r.table, dtype=np.int64) for r in classify_all(m1, m3, cap)
        if all(r.has(x) for x in flags)
    ]
    module = m1.module
    result = map_module(maps, m3.module, (module.rmonoid, module.ract), "inner")
    if result.module is None:
        return InnerMaps(result, None, tuple(flags))
    inside = m3.zero_mask()
    zero = frozenset(i for i, h in enumerate(maps) if bool(np.all(inside[h])))
    r3 = m3.relation.rel
    stacked = np.array(maps, dtype=np.int64)
    rel = np.all(r3[stacked[:, None, :], stacked[None, :, :]], axis=2)
    pair = Pair(result.module, zero, surpassing=SurpassingRelation(rel, "pointwise"))
    return InnerMaps(result, pair, tuple(flags))


@dataclass(frozen=True, eq=False)
class AdjointCorrespondence:
    """Outcome of an adjoint verification.

    Attributes:
      left: Number of maps on the product or tensor side.
      right: Number of curried maps.
      inner: Number of inner maps ``M1 -> M3``.
      report: Violations and facts of the verification.
    """

    left: int
    right: int
    inner: int
    report: ReportOfViolations = field(repr=False)

    def to_dict(self) -> dict[str, object]:
        """Return a JSON-ready mapping."""
        return {
            "left": self.left,
            "right": self.right,
            "inner": self.inner,
            "report": self.report.to_dict(),
        }


def _holds(rel: np.ndarray, lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Per candidate, whether ``rel[lhs, rhs]`` holds in every cell."""
    return np.all(rel[lhs, rhs].reshape(len(lhs), -1), axis=1)


def _product_maps(m1: Pair, m2: Pair, m3: Pair, cap: int) -> np.ndarray:
    """Maps ``M1 x M2 -> M3`` that curry into the nested weak colax maps.

    In each variable the map must be multiplicative, monotone, colax and
    paired; the ``T`` actions in the middle must balance.
    """
    a, b = m1.module, m2.module
    if not (b.same_monoid(a.rmonoid) and b.same_monoid(m3.module.rmonoid, right=True)):
        logger.error("adjoint_wmor: the middle or right monoids of the modules differ")
        raise StructureError("adjoint_wmor: the middle or right monoids of the modules differ")
    c = m3.module
    n1, n2 = a.order, b.order
    psi = all_maps(n1 * n2, c.order, cap, "maps on the product").reshape(-1, n1, n2)
    eq = np.eye(c.order, dtype=bool)
    r1, r2, r3 = m1.relation.rel, m2.relation.rel, m3.relation.rel
    in3 = m3.zero_mask()
    keep = np.all(psi[:, a.zero, :] == c.zero, axis=1) & np.all(psi[:, :, b.zero] == c.zero, axis=1)
    for t in range(a.monoid.order):
        keep &= _holds(eq, psi[:, a.action[t], :], c.action[t][psi])
    for t in range(a.rmonoid.order):
        keep &= _holds(eq, psi[:, a.ract[t], :], c.ract[t][psi])
    for t in range(b.monoid.order):
        keep &= _holds(eq, psi[:, :, b.action[t]], psi[:, a.ract[t], :])
    for t in range(b.rmonoid.order):
        keep &= _holds(eq, psi[:, :, b.ract[t]], c.ract[t][psi])
    for x in range(n1):
        for y in range(n1):
            if r1[x, y]:
                keep &= _holds(r3, psi[:, x, :], psi[:, y, :])
            keep &= _holds(r3, psi[:, a.add[x, y], :], c.add[psi[:, x, :], psi[:, y, :]])
    for x in range(n2):
        for y in range(n2):
            if r2[x, y]:
                keep &= _holds(r3, psi[:, :, x], psi[:, :, y])
            keep &= _holds(r3, psi[:, :, b.add[x, y]], c.add[psi[:, :, x], psi[:, :, y]])
    for z in m1.zero_set:
        keep &= np.all(in3[psi[:, z, :]], axis=1)
    for z in m2.zero_set:
        keep &= np.all(in3[psi[:, :, z]], axis=1)
    return psi[keep]


def adjoint_wmor(
    m1: Pair, m2: Pair, m3: Pair, cap: int = DEFAULT_MAP_CAP,
) -> AdjointCorrespondence:
    """Verify that currying is a bijection onto the nested weak colax maps.

    The left side is every map on ``M1 x M2`` that is multiplicative,
    monotone, colax and paired in each variable and balanced in the middle.
    The right side is every colax paired map ``M2 -> Inner`` with ``Inner``
    the colax paired maps ``M1 -> M3``. Violations: ``inner_closed``,
    ``phi_lands``, ``psi_lands``, ``psi_phi_identity``, ``phi_psi_identity``
    and ``cardinality``.

    Raises:
      StructureError: If the modules are not over matching monoids.
      CapExceededError: If an enumeration exceeds ``cap``.
    """
    out = ViolationCollector("adjoint_wmor")
    inner = inner_maps(m1, m3, WEAK_COLAX, cap)
    if inner.pair is None:
        out.add("inner_closed", ())
        report = out.build().merged(inner.maps.report)
        return AdjointCorrespondence(0, 0, len(inner.maps.maps), report)
    outer = [
        np.asarray(r.table, dtype=np.int64) for r in classify_all(m2, inner.pair, cap)
        if all(r.has(x) for x in WEAK_COLAX)
    ]
    left = _product_maps(m1, m2, m3, cap)
    left_keys = {f.tobytes() for f in left}
    outer_keys = {g.tobytes() for g in outer}
    n2 = m2.module.order
    for k, f in enumerate(left):
        found = [inner.index_of(f[:, w]) for w in range(n2)]
        g = np.array([-1 if i is None else i for i in found], dtype=np.int64)
        if np.any(g < 0) or g.tobytes() not in outer_keys:
            out.add("phi_lands", (k,))
            continue
        back = _uncurry(inner, g)
        if not np.array_equal(back, f):
            out.add("psi_phi_identity", (k,))
    for k, g in enumerate(outer):
        f = _uncurry(inner, g)
        if f.tobytes() not in left_keys:
            out.add("psi_lands", (k,))
            continue
        again = np.array([inner.index_of(f[:, w]) for w in range(n2)], dtype=np.int64)
        if not np.array_equal(again, g):
            out.add("phi_psi_identity", (k,))
    if len(left) != len(outer):
        out.add("cardinality", (len(left), len(outer)))
    logger.info(f"adjoint_wmor: {len(left)} product maps, {len(outer)} curried maps")
    return AdjointCorrespondence(len(left), len(outer), len(inner.maps.maps), out.build())


def _uncurry(inner: InnerMaps, g: np.ndarray) -> np.ndarray:
    """``(v, w) -> g(w)(v)`` as a ``|M1| x |M2|`` table."""
    return np.stack([inner.maps.maps[int(i)] for i in g], axis=1).astype(np.int64)


def adjoint_section(
    m1: Pair,
    m2: Pair,
    m3: Pair,
    base: Sequence[int],
    cap: int = DEFAULT_MAP_CAP,
) -> AdjointCorrespondence:
    """Verify that uncurrying base-supported maps gives a section of currying.

    A curried map ``g: M2 -> Inner`` is base-supported when it is the zero map
    off the multiples ``a b`` of base elements. Its uncurried map on the free
    normal forms of ``M1 (x) M2`` is ``g(b_j)(v_j)`` on a single summand
    ``v_j (x) b_j`` and zero on longer ones. Violations: ``phi_lands``,
    ``section`` (currying back must give ``g``), ``injective`` and
    ``defined_sum_below`` (``v (x) b + v' (x) b``). The full colax law is
    reported in the ``colax`` fact.

    Raises:
      StructureError: If ``base`` is not a free base of ``M2``.
      CapExceededError: If an enumeration exceeds ``cap``.
    """
    out = ViolationCollector("adjoint_section")
    codec = free_normal_form(m1.module, m2.module, base)
    inner = inner_maps(m1, m3, WEAK_COLAX, cap)
    if inner.pair is None or inner.maps.module is None:
        out.add("inner_closed", ())
        report = out.build().merged(inner.maps.report)
        return AdjointCorrespondence(0, 0, len(inner.maps.maps), report)
    zero_map = inner.maps.module.zero
    b = m2.module
    multiples = {b.act(t, y) for t in range(b.monoid.order) for y in base}
    off = np.array([w for w in range(b.order) if w not in multiples], dtype=np.int64)
    supported = [
        r.table for r in classify_all(m2, inner.pair, cap)
        if r.has("colax") and bool(np.all(r.table[off] == zero_map))
    ]
    src = codec.as_pair(m1)
    z1, z3 = m1.module.zero, m3.module.zero
    add3, r3 = m3.module.add, m3.relation.rel
    seen: dict[bytes, int] = {}
    colax = 0
    for k, g in enumerate(supported):
        psi = np.full(codec.size, z3, dtype=np.int64)
        single = np.full(codec.size, -1, dtype=np.int64)
        for x in range(codec.size):
            vec = codec.vector(x)
            support = [j for j, v in enumerate(vec) if v != z1]
            if len(support) <= 1:
                j = support[0] if support else 0
                single[x] = j
                psi[x] = inner.maps.maps[int(g[base[j]])][vec[j]]
        if seen.setdefault(psi.tobytes(), k) != k:
            out.add("injective", (seen[psi.tobytes()], k))
        for w in range(b.order):
            h = np.array([psi[codec.encode([(v, w)])] for v in range(m1.module.order)])
            i = inner.index_of(h)
            if i is None:
                out.add("phi_lands", (k, w))
            elif i != int(g[w]):
                out.add("section", (k, w))
        add = src.module.add
        for x in np.flatnonzero(single >= 0):
            for y in np.flatnonzero(single == single[x]):
                s = int(add[x, y])
                if single[s] >= 0 and not r3[psi[s], add3[psi[x], psi[y]]]:
                    out.add("defined_sum_below", (k, int(x), int(y)))
        colax += classify(psi, src, m3).has("colax")
    out.fact("sections", len(supported))
    out.fact("colax", colax)
    logger.info(f"adjoint_section: {len(supported)} base-supported maps, {colax} colax")
    return AdjointCorrespondence(len(supported), len(supported), len(inner.maps.maps), out.build())


def adjoint_canonical(
    m1: Pair,
    m2: Pair,
    target: Hyperpair,
    closure: CongruenceClosure,
    cap: int = DEFAULT_MAP_CAP,
) -> AdjointCorrespondence:
    """Build currying and meet-uncurrying between colax maps on ``M1 (x) M2`` and ``M2 -> Inner``.

    Currying must land in colax maps (``phi_inner``, ``phi_outer``). The
    uncurried map of ``g`` is the meet of ``g(w)(v)`` over the terms of each
    class; it must be colax (``psi_colax``) and superadditive. Whether the two
    directions are inverse is only reported in the ``inverse`` fact.

    Raises:
      StructureError: If the target family is not closed under intersection
        or the closure is not on ``M1`` and ``M2``.
      UndeterminedError: If the closure is not saturated.
      CapExceededError: If an enumeration exceeds ``cap``.
    """
    if not is_intersection_closed(target):
        logger.error("adjoint_canonical: target family is not closed under intersection")
        raise StructureError("adjoint_canonical: target family is not closed under intersection")
    if isinstance(closure.left, MonoidFactor) or not (
        same_carrier(m1.module, closure.left) and same_carrier(m2.module, closure.right)
    ):
        logger.error("adjoint_canonical: closure is not on the given modules")
        raise StructureError("adjoint_canonical: closure is not on the given modules")
    closure.require_saturated("adjoint_canonical")
    m3 = target.to_pair()
    out = ViolationCollector("adjoint_canonical")
    inner = inner_maps(m1, m3, ("colax",), cap)
    if inner.pair is None:
        out.add("inner_closed", ())
        report = out.build().merged(inner.maps.report)
        return AdjointCorrespondence(0, 0, len(inner.maps.maps), report)
    source = class_pair(closure).with_relation(
        tensor_preorder(closure, m1.relation, m2.relation),
    )
    fs = [
        np.asarray(r.table, dtype=np.int64) for r in classify_all(source, m3, cap)
        if r.has("colax")
    ]
    n1, n2 = m1.module.order, m2.module.order
    curried: list[np.ndarray] = []
    for k, f in enumerate(fs):
        rows = [f[[closure.simple(v, w) for v in range(n1)]] for w in range(n2)]
        found = [inner.index_of(h) for h in rows]
        if any(i is None for i in found):
            out.add("phi_inner", (k,))
            continue
        g = np.array(found, dtype=np.int64)
        curried.append(g)
        if not classify(g, m2, inner.pair).has("colax"):
            out.add("phi_outer", (k,))
    gs = [r.table for r in classify_all(m2, inner.pair, cap) if r.has("colax")]
    reports = []
    uncurried = set()
    for k, g in enumerate(gs):
        table, meet = meet_on_classes(closure, _uncurry(inner, g), target)
        reports.append(meet)
        uncurried.add(table.tobytes())
        if not classify(table, source, m3).has("colax"):
            out.add("psi_colax", (k,))
    out.fact("phi", len(fs))
    out.fact("psi", len(gs))
    inverse = len(curried) == len(fs) == len(gs) and uncurried == {f.tobytes() for f in fs}
    out.fact("inverse", inverse)
    report = out.build().merged(*reports)
    logger.info(f"adjoint_canonical: {len(fs)} tensor maps, {len(gs)} curried maps")
    return AdjointCorrespondence(len(fs), len(gs), len(inner.maps.maps), report)
