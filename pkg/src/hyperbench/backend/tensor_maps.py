"""Maps between tensor products and the canonical isomorphisms.

Every map here is defined on terms and pushed to classes; it is well defined
when all members of a source class land in one target class, which is
checked rather than assumed.
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from hyperbench.backend.errors import CapExceededError, ConsistencyError, StructureError
from hyperbench.backend.hyper import Hypermagma, bits, powerset_add, to_mask
from hyperbench.backend.hyperpair import build_hyperpair, powerset_pair
from hyperbench.backend.module import TModule, direct_sum
from hyperbench.backend.monoid import FiniteMonoid
from hyperbench.backend.morphism import MorphismTable, classify
from hyperbench.backend.pair import Pair
from hyperbench.backend.report import ReportOfViolations, ViolationCollector
from hyperbench.backend.residue import SubgroupSpec, residue
from hyperbench.backend.tensor import (
    DEFAULT_BOUND,
    DEFAULT_MAX_TERMS,
    TENSOR_SIGN,
    CongruenceClosure,
    MonoidFactor,
    build_tensor,
    same_carrier,
    tensor_preorder,
)
from hyperbench.backend.union_find import UnionFind
from hyperbench.utils.logger import get_logger

logger = get_logger()

DEFAULT_TRIPLE_CAP = 1 << 12

TermImage = Callable[[tuple[int, ...]], int]


def induced_table(src: CongruenceClosure, image: TermImage) -> tuple[np.ndarray, list[int]]:
    """Push a term map to classes.

    Returns:
      The class table (least image on ill-defined classes) and the classes
      whose members have more than one image.
    """
    table = np.empty(src.order, dtype=np.int64)
    ill = []
    for c in range(src.order):
        images = {image(t) for t in src.members(c)}
        if len(images) != 1:
            ill.append(c)
        table[c] = min(images)
    return table, ill


@dataclass(frozen=True, eq=False)
class ClassIsomorphism:
    """A map on classes checked to be a well defined additive bijection.

    Attributes:
      name: What the map is, e.g. ``"unit"``.
      table: ``table[c]`` is the image of class ``c``.
      report: ``well_defined``, ``additive``, ``injective`` and ``surjective``.
    """

    name: str
    table: np.ndarray = field(repr=False)
    report: ReportOfViolations = field(repr=False)

    @property
    def ok(self) -> bool:
        """Whether every check passed."""
        return self.report.ok


def _isomorphism(
    name: str, table: np.ndarray, ill: list[int], src_add: np.ndarray, dst_add: np.ndarray,
) -> ClassIsomorphism:
    out = ViolationCollector(name)
    for c in ill:
        out.add("well_defined", (c,))
    out.add_mask("additive", table[src_add] != dst_add[table[:, None], table[None, :]])
    values, counts = np.unique(table, return_counts=True)
    if np.any(counts > 1):
        out.add("injective", (int(values[counts > 1][0]),), int(np.sum(counts > 1)))
    missing = sorted(set(range(dst_add.shape[0])) - set(values.tolist()))
    if missing:
        out.add("surjective", (missing[0],), len(missing))
    out.fact("size", int(table.shape[0]))
    return ClassIsomorphism(name, table, out.build())


def _pairs(closure: CongruenceClosure, t: Sequence[int]) -> list[tuple[int, int]]:
    return [divmod(int(g), closure.n2) for g in t]


def map_classes(
    src: CongruenceClosure, dst: CongruenceClosure, f1: np.ndarray, f2: np.ndarray,
) -> tuple[np.ndarray, list[int]]:
    """Push ``x1 (x) x2 -> f1(x1) (x) f2(x2)`` to classes.

    Raises:
      UndeterminedError: If either closure is not saturated.
    """
    src.require_saturated("map_classes")
    dst.require_saturated("map_classes")

    def image(t: tuple[int, ...]) -> int:
        return dst.class_of_pairs((int(f1[i]), int(f2[j])) for i, j in _pairs(src, t))

    return induced_table(src, image)


def class_pair(closure: CongruenceClosure) -> Pair:
    """The classes as a pair with ``A0 = {zero class}``."""
    return Pair(closure.as_module(), frozenset({closure.zero_class}))


def tensor_of_homs(
    f1: MorphismTable, f2: MorphismTable, src: CongruenceClosure, dst: CongruenceClosure,
) -> MorphismTable:
    """``f1 (x) f2`` on classes, classified.

    Raises:
      StructureError: If a factor is not a homomorphism or the closures are
        not on the factors' modules.
      ConsistencyError: If the induced map is ill defined or not a homomorphism.
      UndeterminedError: If either closure is not saturated.
    """
    if not (f1.has("homomorphism") and f2.has("homomorphism")):
        logger.error("tensor_of_homs: both factors must be homomorphisms")
        raise StructureError("tensor_of_homs: both factors must be homomorphisms")
    if isinstance(src.left, MonoidFactor) or isinstance(dst.left, MonoidFactor):
        logger.error("tensor_of_homs: closures must be module tensors")
        raise StructureError("tensor_of_homs: closures must be module tensors")
    fits = (
        same_carrier(f1.source.module, src.left)
        and same_carrier(f2.source.module, src.right)
        and same_carrier(f1.target.module, dst.left)
        and same_carrier(f2.target.module, dst.right)
    )
    if not fits:
        logger.error("tensor_of_homs: closures are not on the factors' modules")
        raise StructureError("tensor_of_homs: closures are not on the factors' modules")
    table, ill = map_classes(src, dst, f1.table, f2.table)
    if ill:
        logger.error(f"tensor_of_homs: induced map is ill defined on class {ill[0]}")
        raise ConsistencyError(f"tensor_of_homs: induced map is ill defined on class {ill[0]}")
    result = classify(table, class_pair(src), class_pair(dst))
    if not result.has("homomorphism"):
        logger.error("tensor_of_homs: induced map is not a homomorphism")
        raise ConsistencyError("tensor_of_homs: induced map is not a homomorphism")
    return result


def swap(c12: CongruenceClosure, c21: CongruenceClosure) -> ClassIsomorphism:
    """``v1 (x) v2 -> v2 (x) v1`` from ``M1 (x) M2`` to ``M2 (x) M1``.

    Raises:
      StructureError: If ``c21`` is not the tensor of the swapped factors.
    """
    left = c12.left
    if isinstance(left, MonoidFactor) or isinstance(c21.left, MonoidFactor):
        logger.error("swap: closures must be module tensors")
        raise StructureError("swap: closures must be module tensors")
    if not (same_carrier(left, c21.right) and same_carrier(c12.right, c21.left)):
        logger.error("swap: closures are not on swapped factors")
        raise StructureError("swap: closures are not on swapped factors")
    c12.require_saturated("swap")
    c21.require_saturated("swap")

    def image(t: tuple[int, ...]) -> int:
        return c21.class_of_pairs((j, i) for i, j in _pairs(c12, t))

    table, ill = induced_table(c12, image)
    return _isomorphism("swap", table, ill, c12.as_module().add, c21.as_module().add)


def unit_iso(
    regular: TModule, m: TModule, bound: int = DEFAULT_BOUND, max_terms: int = DEFAULT_MAX_TERMS,
) -> ClassIsomorphism:
    """``T (x)_T M -> M``, ``a (x) y -> a y``.

    Raises:
      StructureError: If ``regular`` is not the regular module of ``M``'s monoid.
    """
    if not (regular.is_regular() and regular.same_monoid(m.monoid)):
        logger.error("unit_iso: left factor must be the regular module of M's monoid")
        raise StructureError("unit_iso: left factor must be the regular module of M's monoid")
    closure = build_tensor(regular, m, bound=bound, max_terms=max_terms)
    closure.require_saturated("unit_iso")

    def image(t: tuple[int, ...]) -> int:
        return m.sum(m.act(a, y) for a, y in _pairs(closure, t))

    table, ill = induced_table(closure, image)
    return _isomorphism("unit", table, ill, closure.as_module().add, m.add)


def distributivity_iso(
    m: TModule,
    m_prime: TModule,
    n: TModule,
    bound: int = DEFAULT_BOUND,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> ClassIsomorphism:
    """``(M + M') (x) N -> (M (x) N) + (M' (x) N)`` for direct sums ``+``."""
    total = build_tensor(direct_sum(m, m_prime), n, bound=bound, max_terms=max_terms)
    c1 = build_tensor(m, n, bound=bound, max_terms=max_terms)
    c2 = build_tensor(m_prime, n, bound=bound, max_terms=max_terms)
    for c in (total, c1, c2):
        c.require_saturated("distributivity_iso")
    target = direct_sum(c1.as_module(), c2.as_module())
    width = m_prime.order

    def image(t: tuple[int, ...]) -> int:
        pairs = _pairs(total, t)
        first = c1.class_of_pairs((xy // width, y) for xy, y in pairs)
        second = c2.class_of_pairs((xy % width, y) for xy, y in pairs)
        return first * c2.order + second

    table, ill = induced_table(total, image)
    return _isomorphism("distributivity", table, ill, total.as_module().add, target.add)


def associativity_iso(
    m1: TModule,
    m2: TModule,
    m3: TModule,
    bound: int = DEFAULT_BOUND,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> ClassIsomorphism:
    """``(M1 (x) M2) (x) M3 -> M1 (x) (M2 (x) M3)``, ``(x (x) y) (x) z -> x (x) (y (x) z)``.

    Independence of the chosen representative is checked on every generator.
    """
    c12 = build_tensor(m1, m2, bound=bound, max_terms=max_terms)
    c23 = build_tensor(m2, m3, bound=bound, max_terms=max_terms)
    for c in (c12, c23):
        c.require_saturated("associativity_iso")
    left = build_tensor(c12.as_module(), m3, bound=bound, max_terms=max_terms)
    right = build_tensor(m1, c23.as_module(), bound=bound, max_terms=max_terms)
    for c in (left, right):
        c.require_saturated("associativity_iso")

    def expand(term: Sequence[int], z: int) -> list[tuple[int, int]]:
        return [(x, c23.simple(y, z)) for x, y in _pairs(c12, term)]

    ill_generators = []
    gen_image = np.empty((c12.order, m3.order), dtype=np.int64)
    for c in range(c12.order):
        for z in range(m3.order):
            images = {right.class_of_pairs(expand(t, z)) for t in c12.members(c)}
            if len(images) != 1:
                ill_generators.append((c, z))
            gen_image[c, z] = min(images)

    def image(t: tuple[int, ...]) -> int:
        pairs: list[tuple[int, int]] = []
        for c, z in _pairs(left, t):
            pairs.extend(expand(c12.terms[c12.reps[c]], z))
        return right.class_of_pairs(pairs)

    table, ill = induced_table(left, image)
    iso = _isomorphism("associativity", table, ill, left.as_module().add, right.as_module().add)
    if not ill_generators:
        return iso
    extra = ViolationCollector("associativity")
    extra.add("representative_independent", ill_generators[0], len(ill_generators))
    return ClassIsomorphism(iso.name, iso.table, iso.report.merged(extra.build()))


def check_assoc_comm_dist(
    regular: TModule, bound: int = DEFAULT_BOUND, max_terms: int = DEFAULT_MAX_TERMS,
) -> ReportOfViolations:
    """Unit, swap, distributivity and associativity on a regular module ``R``.

    ``R (x) R = R``, ``R (x) R = R (x) R`` swapped, ``(R + R) (x) R`` splits and
    ``(R (x) R) (x) R = R (x) (R (x) R)``.

    Raises:
      UndeterminedError: If some closure is not saturated at ``bound``.
    """
    c = build_tensor(regular, regular, bound=bound, max_terms=max_terms)
    isos = [
        unit_iso(regular, regular, bound, max_terms),
        swap(c, c),
        distributivity_iso(regular, regular, regular, bound, max_terms),
        associativity_iso(regular, regular, regular, bound, max_terms),
    ]
    out = ViolationCollector("tensor_isomorphisms")
    for iso in isos:
        out.fact(iso.name, iso.ok)
    report = out.build().merged(*(iso.report for iso in isos))
    logger.info(f"tensor isomorphisms: {dict(out.facts)}")
    return report


def check_saturation_stable(
    m1: TModule, m2: TModule, bound: int = DEFAULT_BOUND, max_terms: int = DEFAULT_MAX_TERMS,
) -> ReportOfViolations:
    """Compare the closure at ``bound`` with the one at ``bound + 1`` on terms up to ``bound``.

    A saturated closure must keep its class count and gain no merges among
    the shorter terms.
    """
    low = build_tensor(m1, m2, bound=bound, max_terms=max_terms)
    high = build_tensor(m1, m2, bound=bound + 1, max_terms=max_terms)
    out = ViolationCollector("saturation")
    out.fact("saturated", low.saturated)
    n = len(low.terms)
    a, b = low.term_class, high.term_class[:n]
    pairs = {(int(x), int(y)) for x, y in zip(a.tolist(), b.tolist(), strict=True)}
    split = len({x for x, _ in pairs}) != len(pairs)
    merged = len({y for _, y in pairs}) != len(pairs)
    if low.saturated:
        if merged:
            out.add("new_merges", (bound + 1,))
        if low.order != high.order:
            out.add("class_count", (low.order, high.order))
    if split:
        out.add("split_classes", (bound + 1,))
    return out.build()


@dataclass(frozen=True, eq=False)
class MonoidTensor:
    """``(T1 x T2)`` modulo ``(x1 a, x2) ~ (x1, a x2)``.

    Attributes:
      left: ``T1``.
      right: ``T2``.
      projection: ``projection[x1 * |T2| + x2]`` is the class of ``(x1, x2)``.
      monoid: The classes with the induced product, if it is well defined.
      report: ``product_well_defined`` violations.
    """

    left: FiniteMonoid = field(repr=False)
    right: FiniteMonoid = field(repr=False)
    projection: np.ndarray = field(repr=False)
    monoid: FiniteMonoid | None = field(repr=False)
    report: ReportOfViolations = field(repr=False)

    @property
    def order(self) -> int:
        """Number of classes."""
        return int(self.projection.max()) + 1

    def class_of(self, x1: int, x2: int) -> int:
        """Class of ``(x1, x2)``."""
        return int(self.projection[x1 * self.right.order + x2])


def monoid_tensor(
    t1: FiniteMonoid,
    t2: FiniteMonoid,
    over: FiniteMonoid,
    embed1: Sequence[int] | np.ndarray,
    embed2: Sequence[int] | np.ndarray,
) -> MonoidTensor:
    """``T1 (x)_T T2`` for monoids containing ``T`` through ``embed1`` and ``embed2``.

    The slide relation is closed under componentwise multiplication by every
    pair on both sides.
    """
    e1 = np.asarray(embed1, dtype=np.int64)
    e2 = np.asarray(embed2, dtype=np.int64)
    if e1.shape != (over.order,) or e2.shape != (over.order,):
        logger.error("monoid_tensor: embeddings must be defined on all of T")
        raise StructureError("monoid_tensor: embeddings must be defined on all of T")
    n1, n2 = t1.order, t2.order
    uf = UnionFind(n1 * n2)
    for x1 in range(n1):
        for x2 in range(n2):
            for a in range(over.order):
                lhs = t1.mul(x1, int(e1[a])) * n2 + x2
                uf.union(lhs, x1 * n2 + t2.mul(int(e2[a]), x2), "slide")
    p1 = np.repeat(np.arange(n1), n2)
    p2 = np.tile(np.arange(n2), n1)
    changed = True
    while changed:
        changed = False
        roots = uf.roots()
        order = np.argsort(roots, kind="stable")
        same = np.flatnonzero(roots[order][1:] == roots[order][:-1])
        for y1 in range(n1):
            for y2 in range(n2):
                for prod in (
                    t1.op[p1, y1] * n2 + t2.op[p2, y2],
                    t1.op[y1, p1] * n2 + t2.op[y2, p2],
                ):
                    for k in same:
                        if uf.union(int(prod[order[k]]), int(prod[order[k + 1]]), "context"):
                            changed = True
    roots = uf.roots()
    _, projection = np.unique(roots, return_inverse=True)
    first = [int(np.flatnonzero(projection == c)[0]) for c in range(int(projection.max()) + 1)]
    out = ViolationCollector("monoid_tensor")
    k = len(first)
    op = np.empty((k, k), dtype=np.int64)
    for i, r in enumerate(first):
        for j, s in enumerate(first):
            op[i, j] = projection[t1.mul(r // n2, s // n2) * n2 + t2.mul(r % n2, s % n2)]
    for u in range(n1 * n2):
        for v in range(n1 * n2):
            value = projection[t1.mul(u // n2, v // n2) * n2 + t2.mul(u % n2, v % n2)]
            if value != op[projection[u], projection[v]]:
                out.add("product_well_defined", (u, v))
    out.fact("classes", k)
    monoid = None
    if out.ok:
        labels = tuple(f"{t1.labels[r // n2]}{TENSOR_SIGN}{t2.labels[r % n2]}" for r in first)
        identity = int(projection[t1.identity * n2 + t2.identity])
        monoid = FiniteMonoid(labels, op, identity=identity)
    logger.info(f"monoid tensor: {n1 * n2} pairs in {k} classes")
    return MonoidTensor(t1, t2, projection.astype(np.int64), monoid, out.build())


def monoid_tensor_action(
    mt: MonoidTensor, closure: CongruenceClosure,
) -> tuple[np.ndarray, ReportOfViolations]:
    """Action ``(a1 (x) a2) b = a1 b a2`` of a monoid tensor on tensor classes.

    Returns:
      The ``classes x tensor classes`` action table and ``action_well_defined``
      violations (pairs in one class acting differently).
    """
    module = closure.as_module()
    n2 = mt.right.order
    out = ViolationCollector("monoid_tensor_action")
    table = np.full((mt.order, module.order), -1, dtype=np.int64)
    for u in range(mt.left.order * n2):
        a1, a2 = divmod(u, n2)
        row = module.ract[a2, module.action[a1]]
        c = int(mt.projection[u])
        if table[c, 0] < 0:
            table[c] = row
        elif not np.array_equal(table[c], row):
            out.add("action_well_defined", (a1, a2))
    return table, out.build()


def tensor_extension(
    t_prime: FiniteMonoid,
    embedding: Sequence[int] | np.ndarray,
    m: TModule,
    bound: int = DEFAULT_BOUND,
    admissible: bool = False,
    one: int | None = None,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> CongruenceClosure:
    """``T' (x)_T M`` for ``T`` embedded in ``T'``.

    The plain extension seeds ``(a', v + w) ~ (a', v) + (a', w)`` for every
    ``a'``; the admissible one only for ``a'`` in the image of ``T``. Both
    seed ``(a' a, w) ~ (a', a w)``. The result is a ``T'``-module through
    ``closure.as_module()``.

    Args:
      t_prime: The larger monoid.
      embedding: ``T -> T'``.
      m: A ``T``-module.
      bound: Maximal term length.
      admissible: Use the admissible variant; needs ``one``.
      one: Element whose orbit ``a -> a.one`` must be injective in admissible mode.
      max_terms: Largest number of enumerated terms.

    Raises:
      StructureError: If the embedding is not a monoid embedding, or
        ``M`` is not weakly admissible in admissible mode.
    """
    linear = None
    if admissible:
        if one is None:
            logger.error("tensor_extension: admissible mode needs a unit element")
            raise StructureError("tensor_extension: admissible mode needs a unit element")
        images = [m.act(a, one) for a in m.monoid.non_absorbing()]
        if len(set(images)) != len(images):
            logger.error("tensor_extension: module is not weakly admissible")
            raise StructureError("tensor_extension: module is not weakly admissible")
        linear = tuple(sorted({int(x) for x in np.asarray(embedding)}))
    factor = MonoidFactor(t_prime, m.monoid, np.asarray(embedding), linear)
    closure = build_tensor(factor, m, over=m.monoid, bound=bound, max_terms=max_terms)
    if closure.saturated:
        closure.as_module()
    return closure


def extension_of_homs(
    f1: Sequence[int] | np.ndarray,
    f2: MorphismTable,
    src: CongruenceClosure,
    dst: CongruenceClosure,
) -> tuple[np.ndarray, ReportOfViolations]:
    """``a (x) w -> f1(a) (x) f2(w)`` between tensor extensions.

    Args:
      f1: Monoid homomorphism ``T1 -> T2`` fixing ``T``.
      f2: Module homomorphism.
      src: ``T1 (x)_T M1``.
      dst: ``T2 (x)_T M2``.

    Returns:
      The class table and a report on ``well_defined``, ``additive`` and
      ``fixes_T`` (``f1`` must carry the image of ``T`` in ``T1`` to that in ``T2``).

    Raises:
      StructureError: If the closures are not extensions or ``f2`` is not a homomorphism.
    """
    if not (isinstance(src.left, MonoidFactor) and isinstance(dst.left, MonoidFactor)):
        logger.error("extension_of_homs: closures must be tensor extensions")
        raise StructureError("extension_of_homs: closures must be tensor extensions")
    if not f2.has("homomorphism"):
        logger.error("extension_of_homs: module map is not a homomorphism")
        raise StructureError("extension_of_homs: module map is not a homomorphism")
    g1 = np.asarray(f1, dtype=np.int64)
    out = ViolationCollector("extension_of_homs")
    e_src, e_dst = src.left.embedding, dst.left.embedding
    out.add_mask("fixes_T", g1[e_src] != e_dst)
    t1, t2 = src.left.monoid, dst.left.monoid
    out.add_mask("monoid_hom", g1[t1.op] != t2.op[g1[:, None], g1[None, :]])
    table, ill = map_classes(src, dst, g1, f2.table)
    for c in ill:
        out.add("well_defined", (c,))
    sm, dm = src.as_module(), dst.as_module()
    out.add_mask("additive", table[sm.add] != dm.add[table[:, None], table[None, :]])
    return table, out.build()


def residue_tensor_iso(
    m1: TModule,
    g1: SubgroupSpec,
    m2: TModule,
    g2: SubgroupSpec,
    bound: int = DEFAULT_BOUND,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> ClassIsomorphism:
    """Compare ``(M1/G1) (x) (M2/G2)`` with the residue of ``M1 (x) M2``.

    Both residues are taken as their hyperpair modules. A simple tensor
    ``S1 (x) S2`` of the left side goes to the set of classes of
    ``y1 (x) y2`` with ``y_i`` in ``S_i``; sums go to hypersums. The map must
    be a well defined additive bijection onto the hyperpair of the residue of
    the tensor by ``G1 G2``.

    Raises:
      UndeterminedError: If a closure is not saturated.
    """
    r1, r2 = residue(m1, g1), residue(m2, g2)
    hp1, hp2 = build_hyperpair(r1.hypermagma), build_hyperpair(r2.hypermagma)
    left = build_tensor(hp1.to_module(), hp2.to_module(), bound=bound, max_terms=max_terms)
    whole = build_tensor(m1, m2, bound=bound, max_terms=max_terms)
    for c in (left, whole):
        c.require_saturated("residue_tensor_iso")
    tm = whole.as_module()
    members = sorted({int(m1.monoid.mul(a, b)) for a in g1.members for b in g2.members})
    r = residue(tm, SubgroupSpec(tm.monoid, frozenset(members)))
    hp = build_hyperpair(r.hypermagma)

    def simple_image(s1: int, s2: int) -> int:
        mask = 0
        for x in bits(hp1.family[s1]):
            for y in bits(hp2.family[s2]):
                simple = (whole.simple(v, w) for v in r1.classes[x] for w in r2.classes[y])
                mask |= to_mask(r.class_of(c) for c in simple)
        return mask

    def image(t: tuple[int, ...]) -> int:
        total = None
        for s1, s2 in _pairs(left, t):
            mask = simple_image(s1, s2)
            total = mask if total is None else powerset_add(r.hypermagma, total, mask)
        assert total is not None
        return total

    masks, ill = induced_table(left, image)
    out = ViolationCollector("residue_tensor")
    family = set(hp.family)
    outside = [c for c, s in enumerate(masks.tolist()) if s not in family]
    if outside:
        out.add("image_in_family", (outside[0],), len(outside))
        return ClassIsomorphism("residue_tensor", masks, out.build())
    table = np.array([hp.index_of(s) for s in masks.tolist()], dtype=np.int64)
    iso = _isomorphism("residue_tensor", table, ill, left.as_module().add, hp.add)
    logger.info(f"residue tensor: {left.order} classes against {hp.order} family members")
    return iso


def subset_distributivity(
    h1: Hypermagma,
    h2: Hypermagma,
    bound: int = DEFAULT_BOUND,
    cap: int = DEFAULT_TRIPLE_CAP,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> ReportOfViolations:
    """Check ``S (x) (S1 + S2)`` below ``(S (x) S1) + (S (x) S2)`` on power-set modules.

    ``S (x) X`` is the set of classes of ``{a} (x) {x}`` for ``a`` in ``S``
    and ``x`` in ``X``; the sum of two class sets is the set of pairwise
    class sums. Every left class must lie below some right class in the
    tensor pre-order induced by inclusion.

    Args:
      h1: ``H1``; its power set is the left factor.
      h2: ``H2``; its power set is the right factor.
      bound: Maximal term length.
      cap: Largest number of triples ``(S, S1, S2)``.
      max_terms: Largest number of enumerated terms.

    Raises:
      CapExceededError: If the triple count is above ``cap``.
      UndeterminedError: If the closure is not saturated.
    """
    hp1, hp2 = powerset_pair(h1), powerset_pair(h2)
    p1, p2 = hp1.to_module(), hp2.to_module()
    triples = p1.order * p2.order * p2.order
    if triples > cap:
        logger.error(f"subset_distributivity: {triples} triples, cap is {cap}")
        raise CapExceededError(cap, triples, "subset distributivity triples")
    closure = build_tensor(p1, p2, bound=bound, max_terms=max_terms)
    closure.require_saturated("subset_distributivity")
    rel = tensor_preorder(closure, hp1.subset_relation(), hp2.subset_relation()).rel
    module = closure.as_module()
    # singleton {a} has family index a
    sets1 = [bits(s) for s in hp1.family]
    sets2 = [bits(s) for s in hp2.family]

    def product(s: int, x: int) -> set[int]:
        return {closure.simple(a, b) for a in sets1[s] for b in sets2[x]}

    out = ViolationCollector("subset_distributive")
    strict = []
    for s in range(p1.order):
        for x1 in range(p2.order):
            for x2 in range(p2.order):
                lhs = product(s, p2.plus(x1, x2))
                rhs = {module.plus(c1, c2) for c1 in product(s, x1) for c2 in product(s, x2)}
                if any(not any(rel[c, d] for d in rhs) for c in lhs):
                    out.add("subset_distributive", (s, x1, x2))
                elif lhs != rhs:
                    strict.append((s, x1, x2))
    out.fact("triples", triples)
    out.fact("strict", len(strict))
    if strict:
        out.fact("strict_witness", strict[0])
    return out.build()

