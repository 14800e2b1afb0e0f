"""Maps between pairs: classification, enumeration and the structures they form.

A map is a carrier table ``f`` with ``f[b]`` the image of ``b``. Its flags are

- ``multiplicative``: ``f(zero) = zero'``, ``f(a b) = a f(b)`` and ``f(b a) = f(b) a``;
- ``paired``: multiplicative with ``f(A0)`` inside ``A0'``;
- ``monotone``: ``b1 <= b2`` implies ``f(b1) <= f(b2)``;
- ``homomorphism``: paired, monotone and additive;
- ``colax``: paired, monotone and ``f(b1 + b2) <= f(b1) + f(b2)``;
- ``lax``: paired, monotone and ``f(b1 + b2) >= f(b1) + f(b2)``;
- ``weak``: paired, and every finite sum landing in ``A0`` has its image sum in ``A0'``.

The weak condition is decided exactly on the additive graph closure: the set of
pairs ``(sum b_i, sum f(b_i))`` over nonempty families, which has at most
``|A| |A'|`` elements.

Every homomorphism is colax and lax when ``<=`` on the target is reflexive,
and every colax map is weak when ``A0'`` is upward closed under a valid
surpassing relation. ``classify`` raises ``ConsistencyError`` if either fails.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import polars as pl

from hyperbench.backend.errors import CapExceededError, ConsistencyError, StructureError
from hyperbench.backend.module import TModule, check_module
from hyperbench.backend.monoid import FiniteMonoid
from hyperbench.backend.pair import Pair, SurpassingRelation, check_pair, check_surpassing
from hyperbench.backend.report import ReportOfViolations, ViolationCollector
from hyperbench.utils.logger import get_logger

logger = get_logger()

FLAGS = ("multiplicative", "homomorphism", "monotone", "colax", "lax", "paired", "weak")
DEFAULT_MAP_CAP = 1 << 16


def as_map(table: Sequence[int] | np.ndarray, source: TModule, target: TModule) -> np.ndarray:
    """Validate a carrier table as a total map ``source -> target``.

    Raises:
      StructureError: If the table has the wrong length or leaves the target.
    """
    f = np.asarray(table, dtype=np.int64)
    if f.shape != (source.order,) or np.any((f < 0) | (f >= target.order)):
        logger.error(f"map: expected {source.order} images below {target.order}, got {f.tolist()}")
        raise StructureError("map: not a total map between the carriers")
    return f


def additive_graph_closure(f: np.ndarray, source: TModule, target: TModule) -> np.ndarray:
    """Pairs ``(sum b_i, sum f(b_i))`` reachable from nonempty families, as a boolean matrix."""
    reach = np.zeros((source.order, target.order), dtype=bool)
    reach[np.arange(source.order), f] = True
    frontier = [(int(b), int(f[b])) for b in range(source.order)]
    while frontier:
        x, y = frontier.pop()
        nx = source.add[x]
        ny = target.add[y, f]
        fresh = ~reach[nx, ny]
        if not fresh.any():
            continue
        for b in np.flatnonzero(fresh):
            if not reach[nx[b], ny[b]]:
                reach[nx[b], ny[b]] = True
                frontier.append((int(nx[b]), int(ny[b])))
    return reach


@dataclass(frozen=True, eq=False)
class MorphismTable:
    """A classified map between two pairs.

    Attributes:
      source: The domain pair.
      target: The codomain pair.
      table: ``table[b]`` is the image of ``b``.
      flags: The flags the map satisfies, a subset of ``FLAGS``.
      report: Witnesses for every flag that fails.
    """

    source: Pair = field(repr=False)
    target: Pair = field(repr=False)
    table: np.ndarray = field(repr=False)
    flags: frozenset[str]
    report: ReportOfViolations = field(repr=False)

    def has(self, flag: str) -> bool:
        """Whether the map satisfies ``flag``."""
        return flag in self.flags

    @property
    def images(self) -> list[str]:
        """Target labels of the images, in source order."""
        labels = self.target.module.labels
        return [labels[int(y)] for y in self.table]

    def to_dict(self) -> dict[str, object]:
        """Return a JSON-ready mapping."""
        source = self.source.module.labels
        return {
            "map": dict(zip(source, self.images, strict=True)),
            "flags": {flag: flag in self.flags for flag in FLAGS},
            "report": self.report.to_dict(),
        }


def _multiplicative(out: ViolationCollector, f: np.ndarray, m: TModule, m2: TModule) -> None:
    if f[m.zero] != m2.zero:
        out.add("multiplicative", ("zero", m.zero))
    if not (m.same_monoid(m2.monoid) and m.same_monoid(m2.rmonoid, right=True)):
        out.add("multiplicative", ("monoid",))
        return
    out.add_mask("multiplicative", f[m.action] != m2.action[:, f])
    out.add_mask("multiplicative", f[m.ract] != m2.ract[:, f])


def classify(
    table: Sequence[int] | np.ndarray,
    source: Pair,
    target: Pair,
    source_relation: SurpassingRelation | None = None,
    target_relation: SurpassingRelation | None = None,
) -> MorphismTable:
    """Decide every flag of a map between pairs.

    Args:
      table: The map as a carrier table.
      source: Domain pair.
      target: Codomain pair.
      source_relation: Relation on the domain; the pair's own by default.
      target_relation: Relation on the codomain; the pair's own by default.

    Returns:
      The classified map.

    Raises:
      StructureError: If ``table`` is not a total map.
      ConsistencyError: If the flags contradict an implication that always holds.
    """
    m, m2 = source.module, target.module
    f = as_map(table, m, m2)
    r1 = (source_relation or source.relation).rel
    r2 = (target_relation or target.relation).rel
    out = ViolationCollector("morphism")

    _multiplicative(out, f, m, m2)
    image_sum = m2.add[f[:, None], f[None, :]]
    out.add_mask("additive", f[m.add] != image_sum)
    out.add_mask("monotone", r1 & ~r2[f[:, None], f[None, :]])
    out.add_mask("sum_below", ~r2[f[m.add], image_sum])
    out.add_mask("sum_above", ~r2[image_sum, f[m.add]])
    inside = target.zero_mask()
    for c in sorted(source.zero_set):
        if not inside[f[c]]:
            out.add("paired", (c,))
    reach = additive_graph_closure(f, m, m2)
    out.add_mask("zero_sums", reach & source.zero_mask()[:, None] & ~inside[None, :])

    failed = set(out.build().axioms)
    flags = set()
    if "monotone" not in failed:
        flags.add("monotone")
    if "multiplicative" not in failed:
        flags.add("multiplicative")
        if "paired" not in failed:
            flags.add("paired")
            if "zero_sums" not in failed:
                flags.add("weak")
            if "monotone" not in failed:
                if "additive" not in failed:
                    flags.add("homomorphism")
                if "sum_below" not in failed:
                    flags.add("colax")
                if "sum_above" not in failed:
                    flags.add("lax")

    target_check = check_surpassing(target, target_relation)
    upward = target_check.ok and bool(target_check.facts.get("zero_set_upward_closed"))
    reflexive = bool(np.all(np.diagonal(r2)))
    out.fact("target_zero_set_upward_closed", upward)
    broken = None
    if "homomorphism" in flags and "weak" not in flags:
        broken = "homomorphism is not weak"
    elif reflexive and "homomorphism" in flags and not {"colax", "lax"} <= flags:
        broken = "homomorphism is not colax and lax"
    elif upward and "colax" in flags and "weak" not in flags:
        broken = "colax map into an upward closed zero set is not weak"
    if broken:
        logger.error(f"classify: {broken}; map {f.tolist()}")
        raise ConsistencyError(broken)
    return MorphismTable(source, target, f, frozenset(flags), out.build())


def _propagate(
    assign: np.ndarray, b: int, y: int, m: TModule, m2: TModule,
) -> bool:
    """Set ``f(b) = y`` and everything it forces; ``False`` on a conflict."""
    if assign[b] >= 0:
        return bool(assign[b] == y)
    assign[b] = y
    queue = [(b, y)]
    while queue:
        x, v = queue.pop()
        for src, dst in (
            (m.action[:, x], m2.action[:, v]),
            (m.ract[:, x], m2.ract[:, v]),
        ):
            for s, d in zip(src.tolist(), dst.tolist(), strict=True):
                if assign[s] < 0:
                    assign[s] = d
                    queue.append((s, d))
                elif assign[s] != d:
                    return False
    return True


def _orbit_representatives(m: TModule) -> list[int]:
    """Elements a search must choose, after ``zero`` and in carrier order."""
    seen = np.zeros(m.order, dtype=bool)
    reps = []
    for start in [m.zero, *range(m.order)]:
        if seen[start]:
            continue
        if start != m.zero or reps:
            reps.append(start)
        stack = [start]
        seen[start] = True
        while stack:
            x = stack.pop()
            for s in (*m.action[:, x].tolist(), *m.ract[:, x].tolist()):
                if not seen[s]:
                    seen[s] = True
                    stack.append(s)
    return reps


def enumerate_multiplicative(
    source: TModule, target: TModule, cap: int = DEFAULT_MAP_CAP,
) -> list[np.ndarray]:
    """Every multiplicative map ``source -> target``, in lexicographic order.

    Values are chosen on orbit representatives and pushed along both actions.

    Raises:
      StructureError: If the modules are not over the same monoids.
      CapExceededError: If ``|target| ** representatives`` is above ``cap``.
    """
    if not (source.same_monoid(target.monoid) and source.same_monoid(target.rmonoid, right=True)):
        logger.error("enumerate_multiplicative: modules are not over the same monoids")
        raise StructureError("enumerate_multiplicative: modules are not over the same monoids")
    reps = _orbit_representatives(source)
    space = target.order ** len(reps)
    if space > cap:
        logger.error(f"enumerate_multiplicative: {space} candidate maps, cap is {cap}")
        raise CapExceededError(cap, space, "multiplicative maps")
    found: list[np.ndarray] = []
    start = np.full(source.order, -1, dtype=np.int64)
    if not _propagate(start, source.zero, target.zero, source, target):
        return found

    def extend(assign: np.ndarray) -> None:
        free = np.flatnonzero(assign < 0)
        if not len(free):
            found.append(assign.copy())
            return
        b = int(free[0])
        for y in range(target.order):
            trial = assign.copy()
            if _propagate(trial, b, y, source, target):
                extend(trial)

    extend(start)
    logger.debug(f"enumerate_multiplicative: {len(found)} maps from {len(reps)} representatives")
    return found


def classify_all(
    source: Pair, target: Pair, cap: int = DEFAULT_MAP_CAP,
) -> list[MorphismTable]:
    """Classify every multiplicative map between two pairs."""
    maps = enumerate_multiplicative(source.module, target.module, cap)
    return [classify(f, source, target) for f in maps]


def morphism_frame(results: Sequence[MorphismTable]) -> pl.DataFrame:
    """One row per classified map: its images and one boolean column per flag."""
    data: dict[str, list[object]] = {"map": [r.images for r in results]}
    for flag in FLAGS:
        data[flag] = [r.has(flag) for r in results]
    schema = {"map": pl.List(pl.Utf8), **{flag: pl.Boolean for flag in FLAGS}}
    return pl.DataFrame(data, schema=schema)


def flag_counts(results: Sequence[MorphismTable]) -> dict[str, int]:
    """Number of maps carrying each flag."""
    frame = morphism_frame(results)
    if not frame.height:
        return {flag: 0 for flag in FLAGS}
    row = frame.select(pl.col(list(FLAGS)).cast(pl.Int64).sum()).row(0, named=True)
    return {flag: int(row[flag]) for flag in FLAGS}


@dataclass(frozen=True, eq=False)
class MapModule:
    """A set of maps closed under pointwise addition, with both actions.

    Attributes:
      maps: The maps, indexed as in ``module``.
      module: The maps as a module, or ``None`` if a closure check failed.
      report: Closure and module-axiom violations.
    """

    maps: tuple[np.ndarray, ...] = field(repr=False)
    module: TModule | None = field(repr=False)
    report: ReportOfViolations = field(repr=False)

    def index_of(self, table: Sequence[int] | np.ndarray) -> int:
        """Index of a map in ``maps``.

        Raises:
          StructureError: If the map is not in the set.
        """
        key = np.asarray(table, dtype=np.int64).tobytes()
        for i, f in enumerate(self.maps):
            if f.tobytes() == key:
                return i
        logger.error(f"map module: {list(table)} is not a member")
        raise StructureError("map module: map is not a member")


def map_module(
    maps: list[np.ndarray],
    target: TModule,
    left: tuple[FiniteMonoid, np.ndarray] | None,
    subject: str,
) -> MapModule:
    """Close a set of maps under pointwise ``+`` and the actions.

    ``left`` is ``(monoid, table)`` where ``table[a]`` is the self-map of the
    source precomposed for ``a``; ``None`` uses postcomposition by the
    target's left action.
    """
    out = ViolationCollector(subject)
    index = {f.tobytes(): i for i, f in enumerate(maps)}
    k = len(maps)
    zero_map = np.full(len(maps[0]), target.zero, dtype=np.int64) if maps else None
    if zero_map is None or zero_map.tobytes() not in index:
        out.add("zero_map", ())
        return MapModule(tuple(maps), None, out.build())

    def lookup(g: np.ndarray, axiom: str, witness: tuple[int, ...]) -> int:
        i = index.get(g.tobytes())
        if i is None:
            out.add(axiom, witness)
            return 0
        return i

    add = np.zeros((k, k), dtype=np.int64)
    for i, f in enumerate(maps):
        for j, g in enumerate(maps):
            add[i, j] = lookup(target.add[f, g], "sum_closed", (i, j))
    if left is None:
        monoid = target.monoid
        action = np.array(
            [[lookup(target.action[a, f], "action_closed", (a, i)) for i, f in enumerate(maps)]
             for a in range(monoid.order)],
            dtype=np.int64,
        )
    else:
        monoid, pre = left
        action = np.array(
            [[lookup(f[pre[a]], "action_closed", (a, i)) for i, f in enumerate(maps)]
             for a in range(monoid.order)],
            dtype=np.int64,
        )
    right = np.array(
        [[lookup(target.ract[a, f], "right_action_closed", (a, i)) for i, f in enumerate(maps)]
         for a in range(target.rmonoid.order)],
        dtype=np.int64,
    )
    out.fact("size", k)
    if not out.ok:
        return MapModule(tuple(maps), None, out.build())
    labels = tuple(f"f{i}" for i in range(k))
    module = TModule(labels, add, index[zero_map.tobytes()], monoid, action, target.rmonoid, right)
    return MapModule(tuple(maps), module, out.build().merged(check_module(module)))


def hom_bimagma(source: TModule, target: TModule, cap: int = DEFAULT_MAP_CAP) -> MapModule:
    """Homomorphisms ``source -> target`` as a module.

    Addition is pointwise, ``(a f)(b) = a f(b)`` and ``(f a)(b) = f(b) a``.

    When ``source`` is the regular module, evaluation at the identity must be a
    bijection from the multiplicative maps onto ``target``; a failure is
    reported as ``evaluation_bijective``.
    """
    maps = enumerate_multiplicative(source, target, cap)
    homs = [f for f in maps if np.array_equal(f[source.add], target.add[f[:, None], f[None, :]])]
    result = map_module(homs, target, None, "hom")
    if source.is_regular():
        one = source.monoid.identity
        values = sorted(int(f[one]) for f in maps)
        if values != list(range(target.order)):
            extra = ViolationCollector("hom")
            extra.add("evaluation_bijective", (one,))
            report = result.report.merged(extra.build())
            return MapModule(result.maps, result.module, report)
    logger.info(f"hom: {len(homs)} homomorphisms among {len(maps)} multiplicative maps")
    return result


@dataclass(frozen=True, eq=False)
class WeakMorphisms:
    """The weak morphisms between two pairs and the pair they form.

    Attributes:
      maps: The weak morphisms.
      pair: ``(WMor, WMor0)`` with ``WMor0`` the maps into ``A0'``, or ``None``
        if the maps are not closed.
      report: Closure and pair violations.
    """

    maps: tuple[np.ndarray, ...] = field(repr=False)
    pair: Pair | None = field(repr=False)
    report: ReportOfViolations = field(repr=False)


def wmor_pair(source: Pair, target: Pair, cap: int = DEFAULT_MAP_CAP) -> WeakMorphisms:
    """Weak morphisms with ``(a f)(b) = f(a b)`` and ``(f a)(b) = f(b) a``.

    Raises:
      CapExceededError: If the enumeration is above ``cap``.
    """
    weak = [r.table for r in classify_all(source, target, cap) if r.has("weak")]
    m = source.module
    result = map_module(weak, target.module, (m.monoid, m.action), "wmor")
    if result.module is None:
        return WeakMorphisms(result.maps, None, result.report)
    inside = target.zero_mask()
    zero = frozenset(i for i, f in enumerate(weak) if bool(np.all(inside[f])))
    pair = Pair(result.module, zero)
    report = result.report.merged(check_pair(pair))
    logger.info(f"wmor: {len(weak)} weak morphisms, {len(zero)} into the zero set")
    return WeakMorphisms(result.maps, pair, report)


@dataclass(frozen=True, eq=False)
class Pullback:
    """A pair pulled back along a map, and the image pair.

    Attributes:
      pair: ``(source, f^-1(A0'))``, carrying the pulled back relation when
        the map is one-to-one.
      morphism: The map classified from ``pair`` to the target.
      image_pair: ``(target carrier, f(A0))`` for the given source zero set.
      report: Pair and relation checks of both constructions.
    """

    pair: Pair = field(repr=False)
    morphism: MorphismTable = field(repr=False)
    image_pair: Pair = field(repr=False)
    report: ReportOfViolations = field(repr=False)


def paired_pullback(
    table: Sequence[int] | np.ndarray,
    source: TModule,
    target: Pair,
    source_zero_set: frozenset[int] | None = None,
) -> Pullback:
    """Pull ``A0'`` and the relation back along a multiplicative map.

    Args:
      table: The map.
      source: Domain module.
      target: Codomain pair.
      source_zero_set: Zero set whose image forms ``image_pair``; the pulled
        back zero set by default.

    Raises:
      StructureError: If the map is not multiplicative.
    """
    f = as_map(table, source, target.module)
    bare = ViolationCollector("pullback")
    _multiplicative(bare, f, source, target.module)
    if not bare.ok:
        logger.error("paired_pullback: map is not multiplicative")
        raise StructureError("paired_pullback: map is not multiplicative")
    inside = target.zero_mask()
    zero = frozenset(int(b) for b in np.flatnonzero(inside[f]))
    relation = None
    injective = len(np.unique(f)) == len(f)
    if injective:
        r2 = target.relation.rel
        relation = SurpassingRelation(r2[f[:, None], f[None, :]], "pullback")
    pulled = Pair(source, zero, surpassing=relation)
    report = check_pair(pulled)
    if relation is not None:
        report = report.merged(check_surpassing(pulled))
    report = ReportOfViolations(
        "pullback", report.violations, {**report.facts, "injective": injective},
    )
    morphism = classify(f, pulled, target)
    base = zero if source_zero_set is None else source_zero_set
    image = Pair(target.module, frozenset(int(f[c]) for c in base))
    image_check = check_pair(image)
    report = report.merged(
        ReportOfViolations("image", image_check.violations, image_check.facts),
    )
    return Pullback(pulled, morphism, image, report)
