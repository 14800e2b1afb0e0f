"""Tensors of maps that are not homomorphisms.

A homomorphism pair induces a map on classes (see
:func:`hyperbench.backend.tensor_maps.tensor_of_homs`). Weaker maps need one of
these workarounds:

- ``free_mixed``: ``M2`` free, ``f2`` a homomorphism; defined on the normal
  form ``sum v_j (x) b_j``;
- ``nr_partial``: ``M2`` free; defined on single summands, empty otherwise;
- ``meet``: values in an intersection-closed family; the image of a class is
  the intersection of the images of all its terms;
- ``set_valued``: the set of those images;
- ``cosets`` and ``free_base``: extension of a weak map to ``T' (x)_T M``.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from hyperbench.backend.errors import StructureError
from hyperbench.backend.free import FreeCodec
from hyperbench.backend.hyperpair import Hyperpair, is_intersection_closed
from hyperbench.backend.module import coordinates, is_free_base
from hyperbench.backend.monoid import FiniteMonoid
from hyperbench.backend.morphism import MorphismTable, classify
from hyperbench.backend.pair import Pair
from hyperbench.backend.report import ReportOfViolations, ViolationCollector
from hyperbench.backend.tensor import (
    DEFAULT_BOUND,
    DEFAULT_MAX_TERMS,
    CongruenceClosure,
    MonoidFactor,
    same_carrier,
    tensor_pair,
    tensor_preorder,
)
from hyperbench.backend.tensor_maps import class_pair, induced_table, tensor_extension
from hyperbench.utils.logger import get_logger

logger = get_logger()

EMPTY_MARKER = -1
MODES = ("free_mixed", "nr_partial", "meet", "set_valued", "cosets", "free_base")


@dataclass(frozen=True, eq=False)
class TensorMorphism:
    """A map induced on a tensor by one or two factor maps.

    Attributes:
      mode: One of ``MODES``.
      factors: The factor maps.
      table: Image of each source vector or class; ``EMPTY_MARKER`` where the
        map is undefined. For ``set_valued`` this is the meet.
      morphism: The table classified between the tensor pairs, when total.
      report: Violations of the laws the construction is expected to satisfy.
      sets: For ``set_valued``, the image set of each class.
    """

    mode: str
    factors: tuple[MorphismTable, ...] = field(repr=False)
    table: np.ndarray = field(repr=False)
    morphism: MorphismTable | None = field(repr=False)
    report: ReportOfViolations = field(repr=False)
    sets: tuple[frozenset[int], ...] | None = field(default=None, repr=False)

    @property
    def defined(self) -> np.ndarray:
        """Where the map has a value."""
        return np.asarray(self.table != EMPTY_MARKER)

    def to_dict(self) -> dict[str, object]:
        """Return a JSON-ready mapping."""
        out: dict[str, object] = {
            "mode": self.mode,
            "table": [int(x) for x in self.table],
            "report": self.report.to_dict(),
        }
        if self.morphism is not None:
            out["flags"] = sorted(self.morphism.flags)
        if self.sets is not None:
            out["sets"] = [sorted(s) for s in self.sets]
        return out


def _require_flags(f: MorphismTable, flags: Sequence[str], what: str) -> None:
    if not any(f.has(flag) for flag in flags):
        logger.error(f"{what}: map needs one of the flags {list(flags)}")
        raise StructureError(f"{what}: map needs one of the flags {list(flags)}")


def _preserved(out: ViolationCollector, factor: MorphismTable, result: MorphismTable) -> None:
    for flag in ("weak", "colax"):
        if factor.has(flag) and not result.has(flag):
            out.add(f"{flag}_preserved", ())


def _check_codecs(f1: MorphismTable, f2: MorphismTable, src: FreeCodec, dst: FreeCodec) -> None:
    fits = (
        same_carrier(f1.source.module, src.left)
        and same_carrier(f1.target.module, dst.left)
        and same_carrier(f2.source.module, src.right)
        and same_carrier(f2.target.module, dst.right)
    )
    if not fits:
        logger.error("tensor of maps: codecs are not on the factors' modules")
        raise StructureError("tensor of maps: codecs are not on the factors' modules")


def tensor_free_mixed(
    f1: MorphismTable, f2: MorphismTable, src: FreeCodec, dst: FreeCodec,
) -> TensorMorphism:
    """``sum v_j (x) b_j -> sum f1(v_j) (x) f2(b_j)`` on free normal forms.

    Args:
      f1: A weak or colax map ``M1 -> N1``.
      f2: A homomorphism ``M2 -> N2``.
      src: Codec of ``M1 (x) M2``.
      dst: Codec of ``N1 (x) N2``.

    Returns:
      The map on vectors, classified between the coordinatewise pairs. A weak
      (colax) ``f1`` must give a weak (colax) result.

    Raises:
      StructureError: If a factor lacks its flag or the codecs do not fit.
    """
    _require_flags(f1, ("weak", "colax"), "tensor_free_mixed")
    _require_flags(f2, ("homomorphism",), "tensor_free_mixed")
    _check_codecs(f1, f2, src, dst)
    g1, g2 = f1.table, f2.table
    table = np.array(
        [dst.encode((int(g1[v]), int(g2[b])) for v, b in src.decode(x)) for x in range(src.size)],
        dtype=np.int64,
    )
    result = classify(table, src.as_pair(f1.source), dst.as_pair(f1.target))
    out = ViolationCollector("free_mixed")
    _preserved(out, f1, result)
    out.fact("flags", sorted(result.flags))
    return TensorMorphism("free_mixed", (f1, f2), table, result, out.build())


def tensor_partial(
    f1: MorphismTable, f2: MorphismTable, src: FreeCodec, dst: FreeCodec,
) -> TensorMorphism:
    """``f1(v) (x) f2(b)`` on a single summand ``v (x) b``, empty on longer normal forms.

    The zero vector goes to ``f1(0) (x) f2(b_1)``. The only sums that stay
    defined are ``v (x) b + v' (x) b``; for a colax ``f1`` their image must lie
    below the sum of the images (``defined_sum_below``), and for a weak ``f1``
    a sum in the zero set must have images summing into the zero set
    (``defined_sum_zero``).

    Raises:
      StructureError: If a factor is neither weak nor colax, or the codecs do not fit.
    """
    for f in (f1, f2):
        _require_flags(f, ("weak", "colax"), "tensor_partial")
    _check_codecs(f1, f2, src, dst)
    g1, g2 = f1.table, f2.table
    zero = src.left.zero
    table = np.full(src.size, EMPTY_MARKER, dtype=np.int64)
    for x in range(src.size):
        vec = src.vector(x)
        support = [j for j, v in enumerate(vec) if v != zero]
        if len(support) > 1:
            continue
        j = support[0] if support else 0
        table[x] = dst.encode([(int(g1[vec[j]]), int(g2[src.base[j]]))])
    src_pair, dst_pair = src.as_pair(f1.source), dst.as_pair(f1.target)
    add, dadd = src_pair.module.add, dst_pair.module.add
    rel = dst_pair.relation.rel
    inside_src, inside_dst = src_pair.zero_mask(), dst_pair.zero_mask()
    out = ViolationCollector("nr_partial")
    defined = np.flatnonzero(table != EMPTY_MARKER)
    for x in defined:
        for y in defined:
            s = int(add[x, y])
            if table[s] == EMPTY_MARKER:
                continue
            total = int(dadd[table[x], table[y]])
            if f1.has("colax") and not rel[table[s], total]:
                out.add("defined_sum_below", (int(x), int(y)))
            if f1.has("weak") and inside_src[s] and not inside_dst[total]:
                out.add("defined_sum_zero", (int(x), int(y)))
    out.fact("defined", int(len(defined)))
    out.fact("empty", int(src.size - len(defined)))
    return TensorMorphism("nr_partial", (f1, f2), table, None, out.build())


def _term_values(closure: CongruenceClosure, values: np.ndarray, add: np.ndarray) -> np.ndarray:
    flat = values.reshape(-1)
    out = np.empty(len(closure.terms), dtype=np.int64)
    for tid, t in enumerate(closure.terms):
        if len(t) == 1:
            out[tid] = flat[t[0]]
        else:
            out[tid] = add[out[closure.prefix[tid]], flat[t[-1]]]
    return out


def _candidates(
    closure: CongruenceClosure, values: np.ndarray, target: Hyperpair,
) -> list[dict[int, int]]:
    """For each class, the image of each of its terms with the least term length giving it."""
    per_term = _term_values(closure, values, target.add)
    out: list[dict[int, int]] = [{} for _ in range(closure.order)]
    for tid, t in enumerate(closure.terms):
        found = out[int(closure.term_class[tid])]
        y = int(per_term[tid])
        found[y] = min(found.get(y, len(t)), len(t))
    return out


def _meet(target: Hyperpair, members: Sequence[int]) -> int:
    mask = target.base.full
    for y in members:
        mask &= target.family[y]
    return target.index_of(mask)


def _require_semilattice(closure: CongruenceClosure, target: Hyperpair, what: str) -> None:
    if not is_intersection_closed(target):
        logger.error(f"{what}: target family is not closed under intersection")
        raise StructureError(f"{what}: target family is not closed under intersection")
    closure.require_saturated(what)


def meet_on_classes(
    closure: CongruenceClosure, values: np.ndarray, target: Hyperpair,
) -> tuple[np.ndarray, ReportOfViolations]:
    """Intersect, per class, the images of every term under ``v (x) w -> values[v, w]``.

    Args:
      closure: A saturated closure.
      values: ``|M1| x |M2|`` table of family indices of ``target``.
      target: An intersection-closed family.

    Returns:
      The class table and a report: ``superadditive`` fails when
      ``f(x + y)`` is not inside ``f(x) + f(y)``; ``representative_invariant``
      fails when another member order gives another meet.

    Raises:
      StructureError: If the family is not closed under intersection.
      UndeterminedError: If the closure is not saturated.
    """
    _require_semilattice(closure, target, "meet tensor")
    candidates = _candidates(closure, values, target)
    table = np.array([_meet(target, sorted(c)) for c in candidates], dtype=np.int64)
    out = ViolationCollector("meet")
    for c, found in enumerate(candidates):
        if _meet(target, sorted(found, reverse=True)) != table[c]:
            out.add("representative_invariant", (c,))
    module = closure.as_module()
    rel = target.subset_relation().rel
    sums = target.add[table[:, None], table[None, :]]
    out.add_mask("superadditive", ~rel[table[module.add], sums])
    out.fact("classes", closure.order)
    out.fact("ambiguous", sum(len(c) > 1 for c in candidates))
    return table, out.build()


def _factor_values(f1: MorphismTable, f2: MorphismTable, pairing: np.ndarray) -> np.ndarray:
    pairing = np.asarray(pairing, dtype=np.int64)
    expected = (f1.target.module.order, f2.target.module.order)
    if pairing.shape != expected:
        logger.error(f"tensor of maps: pairing has shape {pairing.shape}, expected {expected}")
        raise StructureError("tensor of maps: pairing does not match the targets")
    return pairing[f1.table[:, None], f2.table[None, :]]


def _classify_classes(
    closure: CongruenceClosure, table: np.ndarray, target: Hyperpair,
) -> MorphismTable:
    source = class_pair(closure).with_relation(tensor_preorder(closure))
    return classify(table, source, target.to_pair())


def meet_tensor(
    f1: MorphismTable,
    f2: MorphismTable,
    closure: CongruenceClosure,
    pairing: np.ndarray,
    target: Hyperpair,
) -> TensorMorphism:
    """The meet tensor ``f1 (x)_<= f2`` on the classes of ``M1 (x) M2``.

    Args:
      f1: Map ``M1 -> N1``.
      f2: Map ``M2 -> N2``.
      closure: ``M1 (x) M2``, saturated.
      pairing: ``|N1| x |N2|`` table into the family: the value of ``y1 (x) y2``.
      target: An intersection-closed family, e.g. a power-set pair.

    Raises:
      StructureError: If the family is not closed under intersection.
      UndeterminedError: If the closure is not saturated.
    """
    values = _factor_values(f1, f2, pairing)
    table, report = meet_on_classes(closure, values, target)
    morphism = _classify_classes(closure, table, target)
    logger.info(f"meet tensor: {closure.order} classes, ok={report.ok}")
    return TensorMorphism("meet", (f1, f2), table, morphism, report)


def set_tensor(
    f1: MorphismTable,
    f2: MorphismTable,
    closure: CongruenceClosure,
    pairing: np.ndarray,
    target: Hyperpair,
) -> TensorMorphism:
    """The set of images of every term of each class.

    The meet must be the intersection of the set (``meet_is_intersection``).
    For images ``a`` of ``x`` and ``b`` of ``y`` realized by terms of total
    length at most the bound, ``a + b`` must be an image of ``x + y``
    (``contains_sums``).

    Raises:
      StructureError: If the family is not closed under intersection.
      UndeterminedError: If the closure is not saturated.
    """
    values = _factor_values(f1, f2, pairing)
    meet, report = meet_on_classes(closure, values, target)
    candidates = _candidates(closure, values, target)
    sets = tuple(frozenset(c) for c in candidates)
    out = ViolationCollector("set_valued")
    for c, s in enumerate(sets):
        if _meet(target, sorted(s)) != meet[c]:
            out.add("meet_is_intersection", (c,))
    module = closure.as_module()
    for c1, found1 in enumerate(candidates):
        for c2, found2 in enumerate(candidates):
            whole = sets[int(module.add[c1, c2])]
            for a, la in found1.items():
                for b, lb in found2.items():
                    if la + lb <= closure.bound and int(target.add[a, b]) not in whole:
                        out.add("contains_sums", (c1, c2, a, b))
    out.fact("largest_set", max(len(s) for s in sets))
    merged = out.build().merged(report)
    return TensorMorphism("set_valued", (f1, f2), meet, None, merged, sets)


def extension_pair(closure: CongruenceClosure, pair: Pair) -> Pair:
    """The pair on ``T' (x) A`` induced by a pair on ``A``.

    The zero set is generated by the classes of terms ``sum a'_i (x) y_i``
    with every ``y_i`` in ``A0``.

    The relation is induced from the pair's relation on the module factor.

    Raises:
      StructureError: If the closure is not a tensor extension of the pair's module.
      UndeterminedError: If the closure is not saturated.
    """
    if not isinstance(closure.left, MonoidFactor) or not same_carrier(pair.module, closure.right):
        logger.error("extension_pair: closure is not an extension of the pair's module")
        raise StructureError("extension_pair: closure is not an extension of the pair's module")
    module = closure.as_module()
    inside = pair.zero_mask()
    n2 = closure.n2
    zero = {
        int(closure.term_class[tid])
        for tid, t in enumerate(closure.terms)
        if all(inside[g % n2] for g in t)
    }
    frontier = list(zero)
    while frontier:
        c = frontier.pop()
        for d in list(zero):
            s = module.plus(c, d)
            if s not in zero:
                zero.add(s)
                frontier.append(s)
    rel = tensor_preorder(closure, None, pair.relation)
    return Pair(module, frozenset(zero), surpassing=rel)


def _cosets(factor: MonoidFactor) -> tuple[np.ndarray, np.ndarray]:
    """``(rep, a)`` with ``t' = rep * iota(a)`` for every ``t'``.

    Raises:
      StructureError: If ``T'`` is not a disjoint union of free cosets of ``T``.
    """
    t_prime, emb = factor.monoid, factor.embedding
    n = t_prime.order
    rep = np.full(n, -1, dtype=np.int64)
    coef = np.full(n, -1, dtype=np.int64)
    for c in range(n):
        if rep[c] >= 0:
            continue
        coset = t_prime.op[c, emb]
        if len(set(coset.tolist())) != len(coset) or np.any(rep[coset] >= 0):
            label = t_prime.labels[c]
            logger.error(f"tensor_extend_weak: coset of {label} is not free and disjoint")
            raise StructureError("tensor_extend_weak: T' is not a disjoint union of cosets of T")
        rep[coset] = c
        coef[coset] = np.arange(len(emb))
    return rep, coef


def tensor_extend_weak(
    f: MorphismTable,
    t_prime: FiniteMonoid,
    embedding: Sequence[int] | np.ndarray,
    mode: str = "cosets",
    base: Sequence[int] | None = None,
    bound: int = DEFAULT_BOUND,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> TensorMorphism:
    """Extend a weak or colax map ``f: A1 -> A2`` to ``T' (x)_T A1 -> T' (x)_T A2``.

    In ``cosets`` mode ``T'`` is the disjoint union of cosets ``c_i T`` and
    ``c_i a (x) y -> c_i (x) f(a y)``. In ``free_base`` mode ``A1`` is free
    over ``T`` with ``base`` and ``a' (x) sum a_i b_i -> sum a' a_i (x) f(b_i)``.
    The result must be well defined and keep the flags of ``f``.

    Raises:
      StructureError: If ``f`` is neither weak nor colax, the mode is unknown
        or its hypothesis fails.
      UndeterminedError: If an extension is not saturated.
    """
    _require_flags(f, ("weak", "colax"), "tensor_extend_weak")
    if mode not in ("cosets", "free_base"):
        logger.error(f"tensor_extend_weak: unknown mode {mode!r}")
        raise StructureError(f"tensor_extend_weak: unknown mode {mode!r}")
    a1, a2 = f.source.module, f.target.module
    src = tensor_extension(t_prime, embedding, a1, bound, max_terms=max_terms)
    dst = tensor_extension(t_prime, embedding, a2, bound, max_terms=max_terms)
    for c in (src, dst):
        c.require_saturated("tensor_extend_weak")
    assert isinstance(src.left, MonoidFactor)
    g = f.table
    emb = src.left.embedding
    op = t_prime.op
    if mode == "cosets":
        rep, coef = _cosets(src.left)

        def image(t: tuple[int, ...]) -> int:
            pairs = []
            for gen in t:
                tp, y = divmod(int(gen), src.n2)
                pairs.append((int(rep[tp]), int(g[a1.act(int(coef[tp]), y)])))
            return dst.class_of_pairs(pairs)

    else:
        if base is None or not is_free_base(a1, base):
            logger.error(f"tensor_extend_weak: {base} is not a free base of the source")
            raise StructureError("tensor_extend_weak: source is not free over the given base")
        coords = [coordinates(a1, base, y) for y in range(a1.order)]

        def image(t: tuple[int, ...]) -> int:
            pairs = []
            for gen in t:
                tp, y = divmod(int(gen), src.n2)
                for a, b in zip(coords[y], base, strict=True):
                    pairs.append((int(op[tp, emb[a]]), int(g[b])))
            return dst.class_of_pairs(pairs)

    table, ill = induced_table(src, image)
    out = ViolationCollector(mode)
    for c in ill:
        out.add("well_defined", (c,))
    result = classify(table, extension_pair(src, f.source), extension_pair(dst, f.target))
    _preserved(out, f, result)
    out.fact("flags", sorted(result.flags))
    logger.info(f"tensor_extend_weak ({mode}): {src.order} -> {dst.order} classes")
    return TensorMorphism(mode, (f,), table, result, out.build())


@dataclass(frozen=True, eq=False)
class BalancedProduct:
    """``(b1, b2) -> f1(b1) (x) f2(b2)`` as a table of classes.

    Attributes:
      table: ``|M1| x |M2|`` class indices in ``N1 (x) N2``.
      report: ``one_balanced``, ``bimodule_action`` and ``zero_family`` checks.
    """

    table: np.ndarray = field(repr=False)
    report: ReportOfViolations = field(repr=False)


def one_balanced_product(
    f1: MorphismTable, f2: MorphismTable, closure: CongruenceClosure,
) -> BalancedProduct:
    """The product map of two multiplicative maps into ``N1 (x) N2``.

    It must satisfy ``p(b1 a, b2) = p(b1, a b2)``. On a saturated closure it
    must also carry the outer actions (``a1 p(b1, b2) a2 = p(a1 b1, b2 a2)``)
    and, when both maps are weak, send ``A0 x M2`` and ``M1 x A0`` into the
    zero family of the tensor pair.

    Raises:
      StructureError: If a map is not multiplicative or the closure is not on the targets.
    """
    for f in (f1, f2):
        _require_flags(f, ("multiplicative",), "one_balanced_product")
    m1, m2 = f1.source.module, f2.source.module
    if isinstance(closure.left, MonoidFactor) or not (
        same_carrier(f1.target.module, closure.left)
        and same_carrier(f2.target.module, closure.right)
        and m1.same_monoid(closure.over, right=True)
        and m2.same_monoid(closure.over)
    ):
        logger.error("one_balanced_product: closure is not on the targets of the maps")
        raise StructureError("one_balanced_product: closure is not on the targets of the maps")
    g1, g2 = f1.table, f2.table
    table = np.array(
        [[closure.simple(int(g1[b1]), int(g2[b2])) for b2 in range(m2.order)]
         for b1 in range(m1.order)],
        dtype=np.int64,
    )
    out = ViolationCollector("one_balanced")
    for a in range(closure.over.order):
        out.add_mask("one_balanced", table[m1.ract[a], :] != table[:, m2.action[a]])
    if closure.saturated:
        module = closure.as_module()
        for a in range(m1.monoid.order):
            out.add_mask("bimodule_action", table[m1.action[a], :] != module.action[a, table])
        for a in range(m2.rmonoid.order):
            out.add_mask("bimodule_action", table[:, m2.ract[a]] != module.ract[a, table])
        if f1.has("weak") and f2.has("weak"):
            pair, _ = tensor_pair(f1.target, f2.target, closure)
            inside = pair.zero_mask()
            z1, z2 = f1.source.zero_mask(), f2.source.zero_mask()
            out.add_mask("zero_family", (z1[:, None] | z2[None, :]) & ~inside[table])
    return BalancedProduct(table, out.build())
