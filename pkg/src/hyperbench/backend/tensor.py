"""Tensor products of finite modules over a monoid, by bounded congruence closure.

A term is a nonempty multiset of generators ``(i, j)`` in ``M1 x M2``, stored
as a sorted tuple of generator ids ``g = i * |M2| + j``. All terms up to the
bound ``L`` are enumerated; the generating relations

* ``(v1 + w1, x2) ~ (v1, x2) + (w1, x2)`` and its mirror,
* ``(x1 a, x2) ~ (x1, a x2)``,
* optionally ``((-)v1, v2) ~ (v1, (-)v2)``,

are merged in a union-find and closed under adding generators while the length
stays within ``L``. The closure is *saturated* when every class has a
representative shorter than ``L``; only then is the class addition total.
"""

import itertools
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from hyperbench.backend.errors import (
    CapExceededError,
    ConsistencyError,
    StructureError,
    UndeterminedError,
)
from hyperbench.backend.module import TModule
from hyperbench.backend.monoid import FiniteMonoid
from hyperbench.backend.pair import Pair, SurpassingRelation, equality
from hyperbench.backend.report import ReportOfViolations, ViolationCollector
from hyperbench.backend.union_find import UnionFind
from hyperbench.utils.logger import get_logger

logger = get_logger()

DEFAULT_BOUND = 4
DEFAULT_MAX_TERMS = 1 << 16
TENSOR_SIGN = "⊗"


@dataclass(frozen=True)
class TensorTerm:
    """A formal sum of simple tensors, kept as a sorted tuple of pairs."""

    summands: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        """Sort the summands and reject the empty sum."""
        if not self.summands:
            logger.error("tensor term: the empty sum is not a term")
            raise StructureError("tensor term: the empty sum is not a term")
        ordered = tuple(sorted((int(i), int(j)) for i, j in self.summands))
        object.__setattr__(self, "summands", ordered)

    @property
    def length(self) -> int:
        """Number of summands."""
        return len(self.summands)

    def generators(self, n2: int) -> tuple[int, ...]:
        """Generator ids, sorted."""
        return tuple(sorted(i * n2 + j for i, j in self.summands))


def term_count(generators: int, bound: int) -> int:
    """Number of multisets of size ``1..bound`` over ``generators`` symbols."""
    return sum(math.comb(generators + k - 1, k) for k in range(1, bound + 1))


def _feasible_bound(generators: int, max_terms: int) -> int:
    best = 0
    while term_count(generators, best + 1) <= max_terms:
        best += 1
    return best


@dataclass(frozen=True, eq=False)
class MonoidFactor:
    """A monoid ``T'`` containing ``T``, used as a left factor without addition.

    Only the slide rule and right linearity apply to it; right linearity is
    seeded for the rows in ``linear`` (every row by default).

    Attributes:
      monoid: ``T'``, acting on the left by multiplication.
      over: ``T``.
      embedding: ``embedding[a]`` is the image of ``a`` in ``T'``.
      linear: Rows ``a'`` for which ``(a', v + w) ~ (a', v) + (a', w)`` is seeded.
    """

    monoid: FiniteMonoid = field(repr=False)
    over: FiniteMonoid = field(repr=False)
    embedding: np.ndarray = field(repr=False)
    linear: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        """Validate the embedding as an injective monoid map."""
        emb = np.asarray(self.embedding, dtype=np.int64)
        t, big = self.over, self.monoid
        ok = (
            emb.shape == (t.order,)
            and bool(np.all((emb >= 0) & (emb < big.order)))
            and len(set(emb.tolist())) == t.order
            and int(emb[t.identity]) == big.identity
            and bool(np.array_equal(emb[t.op], big.op[emb[:, None], emb[None, :]]))
        )
        if not ok:
            logger.error("monoid factor: embedding is not an injective monoid map")
            raise StructureError("monoid factor: embedding is not an injective monoid map")
        object.__setattr__(self, "embedding", emb)

    @property
    def labels(self) -> tuple[str, ...]:
        """Labels of ``T'``."""
        return self.monoid.labels

    @property
    def order(self) -> int:
        """Size of ``T'``."""
        return self.monoid.order

    @property
    def zero(self) -> int:
        """The identity of ``T'``; ``(1, zero)`` names the zero class."""
        return self.monoid.identity

    @property
    def action(self) -> np.ndarray:
        """Left multiplication by ``T'``."""
        return self.monoid.op

    @property
    def ract(self) -> np.ndarray:
        """``ract[a, x] = x a`` for ``a`` in ``T``."""
        return self.monoid.op[:, self.embedding].T

    @property
    def rmonoid(self) -> FiniteMonoid:
        """``T``."""
        return self.over

    def same_monoid(self, other: FiniteMonoid, right: bool = False) -> bool:
        """Whether ``other`` has the table of ``T`` (right) or ``T'`` (left)."""
        mine = self.over if right else self.monoid
        return mine is other or (
            mine.order == other.order and bool(np.array_equal(mine.op, other.op))
        )

    def negation(self) -> None:
        """A monoid factor has no negation."""
        return None


Factor = TModule | MonoidFactor


@dataclass(frozen=True, eq=False)
class CongruenceClosure:
    """Classes of terms up to the bound.

    Attributes:
      left: ``M1``, read through its right action.
      right: ``M2``, read through its left action.
      over: The monoid the tensor is taken over.
      bound: Maximal term length ``L``.
      with_negation: Whether the negation rule was added.
      terms: Every term as a tuple of generator ids.
      term_class: Class index of each term.
      reps: Representative term id of each class, the least by ``(length, ids)``.
      trans: ``trans[c, g]`` is the class of ``rep(c) + g``, ``-1`` past the bound.
      class_add: Class addition table when saturated.
      zero_class: Class of ``(0, 0)``.
      saturated: Whether every representative is shorter than ``L``.
      rules: Number of seeded merges per rule.
      prefix: Id of each term without its last generator, ``-1`` for length 1.
      negations: Negation tables of both factors when the negation rule is on.
    """

    left: Factor = field(repr=False)
    right: TModule = field(repr=False)
    over: FiniteMonoid = field(repr=False)
    bound: int
    with_negation: bool
    terms: tuple[tuple[int, ...], ...] = field(repr=False)
    term_class: np.ndarray = field(repr=False)
    reps: tuple[int, ...] = field(repr=False)
    trans: np.ndarray = field(repr=False)
    class_add: np.ndarray | None = field(repr=False)
    zero_class: int
    saturated: bool
    rules: dict[str, int] = field(repr=False)
    prefix: np.ndarray = field(repr=False)
    negations: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        """Number of classes."""
        return len(self.reps)

    @property
    def n2(self) -> int:
        """Size of the right factor."""
        return self.right.order

    @property
    def generator_count(self) -> int:
        """Size of ``M1 x M2``."""
        return self.left.order * self.right.order

    def generator(self, i: int, j: int) -> int:
        """Id of the simple tensor ``i (x) j``."""
        return i * self.n2 + j

    def term_id(self, gens: Iterable[int]) -> int:
        """Id of an enumerated term.

        Raises:
          StructureError: If the term is longer than the bound.
        """
        key = tuple(sorted(int(g) for g in gens))
        try:
            return self._index[key]
        except KeyError:
            logger.error(f"tensor: term of length {len(key)} is beyond the bound {self.bound}")
            raise StructureError(f"tensor: term of length {len(key)} is beyond the bound")

    @property
    def _index(self) -> dict[tuple[int, ...], int]:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {t: i for i, t in enumerate(self.terms)}
            object.__setattr__(self, "_index_cache", cached)
        return cached

    def simple(self, i: int, j: int) -> int:
        """Class of ``i (x) j``."""
        return int(self.term_class[self.generator(i, j)])

    def class_of(self, gens: Sequence[int]) -> int:
        """Class of an arbitrary nonempty term.

        Terms within the bound are looked up; longer ones are folded with
        ``trans``, which needs saturation.

        Raises:
          UndeterminedError: For a long term on an unsaturated closure.
        """
        if len(gens) <= self.bound:
            return int(self.term_class[self.term_id(gens)])
        if not self.saturated:
            raise UndeterminedError(self.bound, "tensor term class")
        c = int(self.term_class[gens[0]])
        for g in gens[1:]:
            c = int(self.trans[c, g])
        return c

    def class_of_pairs(self, pairs: Iterable[tuple[int, int]]) -> int:
        """Class of a sum of simple tensors given as ``(i, j)`` pairs."""
        return self.class_of([self.generator(i, j) for i, j in pairs])

    def add(self, c1: int, c2: int) -> int:
        """Class sum.

        Raises:
          UndeterminedError: If the closure is not saturated.
        """
        if self.class_add is None:
            raise UndeterminedError(self.bound, "tensor class addition")
        return int(self.class_add[c1, c2])

    def members(self, c: int) -> list[tuple[int, ...]]:
        """Every enumerated term in class ``c``."""
        return [self.terms[t] for t in np.flatnonzero(self.term_class == c)]

    def rep_pairs(self, c: int) -> list[tuple[int, int]]:
        """Representative of class ``c`` as ``(i, j)`` pairs."""
        return [divmod(g, self.n2) for g in self.terms[self.reps[c]]]

    def label(self, c: int) -> str:
        """Representative rendered as ``a⊗b + ...``."""
        l1, l2 = self.left.labels, self.right.labels
        return " + ".join(f"{l1[i]}{TENSOR_SIGN}{l2[j]}" for i, j in self.rep_pairs(c))

    @property
    def labels(self) -> tuple[str, ...]:
        """Labels of every class."""
        return tuple(self.label(c) for c in range(self.order))

    def require_saturated(self, what: str) -> None:
        """Raise ``UndeterminedError`` unless saturated."""
        if not self.saturated:
            logger.warning(f"{what}: closure is not saturated at L={self.bound}")
            raise UndeterminedError(self.bound, what)

    def map_term(self, gens: Sequence[int], f1: np.ndarray, f2: np.ndarray) -> list[int]:
        """Image of a term under ``(i, j) -> (f1[i], f2[j])`` as generator ids."""
        out = []
        for g in gens:
            i, j = divmod(int(g), self.n2)
            out.append(self.generator(int(f1[i]), int(f2[j])))
        return out

    def as_module(self) -> TModule:
        """Classes as a ``(T1, T2)``-bimodule.

        ``T1`` acts on the left factor and ``T2`` on the right factor.

        Raises:
          UndeterminedError: If the closure is not saturated.
          ConsistencyError: If an induced action is not well defined.
        """
        cached = self.__dict__.get("_module_cache")
        if cached is not None:
            return cached
        self.require_saturated("tensor module")
        assert self.class_add is not None
        m1, m2 = self.left, self.right
        ident1 = np.arange(m1.order)
        ident2 = np.arange(m2.order)
        left = self._induced(lambda a: (m1.action[a], ident2), m1.monoid.order)
        right = self._induced(lambda a: (ident1, m2.ract[a]), m2.rmonoid.order)
        module = TModule(
            self.labels, self.class_add, self.zero_class, m1.monoid, left, m2.rmonoid, right,
        )
        object.__setattr__(self, "_module_cache", module)
        return module

    def _induced(
        self, maps: Callable[[int], tuple[np.ndarray, np.ndarray]], count: int,
    ) -> np.ndarray:
        table = np.empty((count, self.order), dtype=np.int64)
        for a in range(count):
            f1, f2 = maps(a)
            for c in range(self.order):
                images = {self.class_of(self.map_term(t, f1, f2)) for t in self.members(c)}
                if len(images) != 1:
                    logger.error(f"tensor: induced action of {a} is not well defined on class {c}")
                    raise ConsistencyError(f"tensor: action of {a} is ill defined on class {c}")
                table[a, c] = images.pop()
        return table

    def to_dict(self) -> dict[str, object]:
        """JSON-ready class table."""
        sizes = np.bincount(self.term_class, minlength=self.order)
        return {
            "bound": self.bound,
            "saturated": self.saturated,
            "negation": self.with_negation,
            "classes": [
                {"rep": self.label(c), "size": int(sizes[c])} for c in range(self.order)
            ],
            "zero": self.zero_class,
            "add": self.class_add.tolist() if self.class_add is not None else None,
            "rules": dict(self.rules),
        }


def same_carrier(a: TModule, b: TModule) -> bool:
    """Whether two modules have the same labels and addition."""
    return a is b or (a.labels == b.labels and bool(np.array_equal(a.add, b.add)))


def _negation_of(m: Factor, given: np.ndarray | None, side: str) -> np.ndarray:
    if given is not None:
        return np.asarray(given, dtype=np.int64)
    neg = m.negation()
    if neg is None:
        logger.error(f"build_tensor: {side} factor has no negation")
        raise StructureError(f"build_tensor: {side} factor has no negation")
    return neg


def _seeds(
    m1: Factor,
    m2: TModule,
    over: FiniteMonoid,
    negations: tuple[np.ndarray, np.ndarray] | None,
) -> Iterable[tuple[tuple[int, ...], tuple[int, ...], str]]:
    n1, n2 = m1.order, m2.order

    def g(i: int, j: int) -> int:
        return int(i) * n2 + int(j)

    rows: Iterable[int] = range(n1)
    if isinstance(m1, MonoidFactor):
        rows = m1.linear if m1.linear is not None else range(n1)
    else:
        for v, w, x in itertools.product(range(n1), range(n1), range(n2)):
            yield (g(m1.add[v, w], x),), tuple(sorted((g(v, x), g(w, x)))), "left_linear"
    for x, v, w in itertools.product(rows, range(n2), range(n2)):
        yield (g(x, m2.add[v, w]),), tuple(sorted((g(x, v), g(x, w)))), "right_linear"
    for a, x1, x2 in itertools.product(range(over.order), range(n1), range(n2)):
        yield (g(m1.ract[a, x1], x2),), (g(x1, m2.action[a, x2]),), "slide"
    if negations is not None:
        neg1, neg2 = negations
        for v1, v2 in itertools.product(range(n1), range(n2)):
            yield (g(neg1[v1], v2),), (g(v1, neg2[v2]),), "negation"


def build_tensor(
    m1: Factor,
    m2: TModule,
    over: FiniteMonoid | None = None,
    bound: int = DEFAULT_BOUND,
    with_negation: bool = False,
    negations: tuple[np.ndarray, np.ndarray] | None = None,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> CongruenceClosure:
    """Compute ``M1 (x)_T M2`` up to terms of length ``bound``.

    Args:
      m1: Left factor; ``T`` acts on it from the right. A :class:`MonoidFactor`
        gives a tensor extension.
      m2: Right factor; ``T`` acts on it from the left.
      over: The monoid ``T``; defaults to the acting monoid of ``m2``.
      bound: Maximal term length, at least 2.
      with_negation: Add the rule ``((-)v1, v2) ~ (v1, (-)v2)``.
      negations: Negation tables of both factors; additive inverses are used
        when omitted.
      max_terms: Largest number of enumerated terms.

    Returns:
      The closure with its saturation status.

    Raises:
      StructureError: If the actions do not match ``over``, the bound is
        below 2 or a negation is missing.
      CapExceededError: If the term count exceeds ``max_terms``; the message
        names the largest feasible bound.
    """
    over = over or m2.monoid
    if not (m1.same_monoid(over, right=True) and m2.same_monoid(over)):
        logger.error("build_tensor: factors are not modules over the same monoid")
        raise StructureError("build_tensor: factors are not modules over the same monoid")
    if bound < 2:
        logger.error(f"build_tensor: bound must be at least 2, got {bound}")
        raise StructureError(f"build_tensor: bound must be at least 2, got {bound}")
    n_gen = m1.order * m2.order
    required = term_count(n_gen, bound)
    if required > max_terms:
        best = _feasible_bound(n_gen, max_terms)
        logger.error(f"build_tensor: {required} terms at L={bound}; largest feasible L={best}")
        what = f"tensor closure (largest feasible bound {best})"
        raise CapExceededError(max_terms, required, what)
    negs = None
    if with_negation:
        given = negations or (None, None)
        negs = (_negation_of(m1, given[0], "left"), _negation_of(m2, given[1], "right"))

    terms: list[tuple[int, ...]] = []
    for k in range(1, bound + 1):
        terms.extend(itertools.combinations_with_replacement(range(n_gen), k))
    index = {t: i for i, t in enumerate(terms)}
    prefix = np.array([index[t[:-1]] if len(t) > 1 else -1 for t in terms], dtype=np.int64)
    plus = np.full((len(terms), n_gen), -1, dtype=np.int64)
    for tid, t in enumerate(terms):
        if len(t) < bound:
            for p in range(n_gen):
                plus[tid, p] = index[tuple(sorted((*t, p)))]

    uf = UnionFind(len(terms))
    rules: dict[str, int] = {}
    for lhs, rhs, reason in _seeds(m1, m2, over, negs):
        if uf.union(index[lhs], index[rhs], reason):
            rules[reason] = rules.get(reason, 0) + 1
    passes = 0
    changed = True
    while changed:
        changed = False
        passes += 1
        roots = uf.roots()
        for p in range(n_gen):
            col = plus[:, p]
            xs = np.flatnonzero(col >= 0)
            order = xs[np.argsort(roots[xs], kind="stable")]
            r = roots[order]
            for k in np.flatnonzero(r[1:] == r[:-1]):
                if uf.union(int(col[order[k]]), int(col[order[k + 1]]), "context"):
                    changed = True

    roots = uf.roots()
    # terms are enumerated by (length, ids), so the first member seen is the least
    first: dict[int, int] = {}
    for tid, root in enumerate(roots.tolist()):
        first.setdefault(root, tid)
    reps = tuple(sorted(first.values()))
    class_by_root = {int(roots[t]): c for c, t in enumerate(reps)}
    term_class = np.array([class_by_root[r] for r in roots.tolist()], dtype=np.int64)
    trans = np.full((len(reps), n_gen), -1, dtype=np.int64)
    for c, t in enumerate(reps):
        defined = plus[t] >= 0
        trans[c, defined] = term_class[plus[t, defined]]
    saturated = all(len(terms[t]) < bound for t in reps)
    class_add = None
    if saturated:
        k = len(reps)
        class_add = np.empty((k, k), dtype=np.int64)
        for c1 in range(k):
            for c2, t in enumerate(reps):
                c = c1
                for g in terms[t]:
                    c = int(trans[c, g])
                class_add[c1, c2] = c
    zero_class = int(term_class[m1.zero * m2.order + m2.zero])
    term_class.setflags(write=False)
    logger.info(
        f"tensor: {len(terms)} terms, {len(reps)} classes at L={bound} "
        f"after {passes} passes, saturated={saturated}",
    )
    return CongruenceClosure(
        m1, m2, over, bound, with_negation, tuple(terms), term_class, reps, trans,
        class_add, zero_class, saturated, rules, prefix, negs,
    )


def _balanced_rules(closure: CongruenceClosure) -> list[tuple[str, np.ndarray, np.ndarray]]:
    """Rules as ``(name, lhs, rhs)`` index arrays; two-summand sides have two columns."""
    out: dict[str, tuple[list[tuple[int, ...]], list[tuple[int, ...]]]] = {}
    seeds = _seeds(closure.left, closure.right, closure.over, closure.negations)
    for lhs, rhs, reason in seeds:
        ls, rs = out.setdefault(reason, ([], []))
        ls.append(lhs)
        rs.append(rhs)
    return [(name, np.array(ls), np.array(rs)) for name, (ls, rs) in out.items()]


def _term_values(closure: CongruenceClosure, psi: np.ndarray, add: np.ndarray) -> np.ndarray:
    """Values of every term under a batch of maps ``psi`` (K x generators)."""
    values = np.empty((psi.shape[0], len(closure.terms)), dtype=np.int64)
    for tid, t in enumerate(closure.terms):
        if len(t) == 1:
            values[:, tid] = psi[:, t[0]]
        else:
            values[:, tid] = add[values[:, closure.prefix[tid]], psi[:, t[-1]]]
    return values


def all_maps(domain: int, codomain: int, cap: int, what: str) -> np.ndarray:
    """Every map between carriers of the given sizes, one per row.

    Raises:
      CapExceededError: If there are more than ``cap`` maps.
    """
    total = codomain**domain
    if total > cap:
        logger.error(f"{what}: {total} candidate maps, cap is {cap}")
        raise CapExceededError(cap, total, what)
    codes = np.arange(total, dtype=np.int64)
    return (codes[:, None] // codomain ** np.arange(domain, dtype=np.int64)[None, :]) % codomain


def balanced_maps(
    closure: CongruenceClosure, target: TModule, cap: int = DEFAULT_MAX_TERMS,
) -> np.ndarray:
    """Every balanced map ``M1 x M2 -> N`` as rows of generator images."""
    add = target.add
    psi = all_maps(closure.generator_count, target.order, cap, "balanced maps")
    keep = np.ones(len(psi), dtype=bool)
    for _, lhs, rhs in _balanced_rules(closure):
        left = psi[:, lhs[:, 0]]
        if rhs.shape[1] == 2:
            right = add[psi[:, rhs[:, 0]], psi[:, rhs[:, 1]]]
        else:
            right = psi[:, rhs[:, 0]]
        keep &= np.all(left == right, axis=1)
    return psi[keep]


def universal_property_oracle(
    closure: CongruenceClosure,
    targets: Sequence[TModule],
    cap: int = DEFAULT_MAX_TERMS,
) -> ReportOfViolations:
    """Check the closure against every balanced map into each target.

    Every balanced map must be constant on every class (so it factors, and
    uniquely since the simple tensors generate). Conversely every additive map
    on classes must pull back to a balanced map, and the two counts must agree.
    Every pair of distinct classes must be told apart by some balanced map
    (``separated``).

    Args:
      closure: A saturated closure.
      targets: Modules ``N``; only their addition is used.
      cap: Largest number of candidate maps per enumeration.

    Returns:
      The report; facts give per-target counts and whether all classes are separated.

    Raises:
      UndeterminedError: If the closure is not saturated.
      CapExceededError: If an enumeration exceeds ``cap``.
    """
    closure.require_saturated("universal property")
    assert closure.class_add is not None
    out = ViolationCollector("universal_property")
    k = closure.order
    separated = np.zeros((k, k), dtype=bool)
    counts = []
    gens = np.array([closure.term_class[g] for g in range(closure.generator_count)])
    for ti, target in enumerate(targets):
        psi = balanced_maps(closure, target, cap)
        values = _term_values(closure, psi, target.add)
        factored = np.empty((len(psi), k), dtype=np.int64)
        for c in range(k):
            vals = values[:, closure.term_class == c]
            bad = np.flatnonzero(np.any(vals != vals[:, :1], axis=1))
            if len(bad):
                out.add("balanced_factors", (ti, int(bad[0]), c), len(bad))
            factored[:, c] = vals[:, 0]
        separated |= np.any(factored[:, :, None] != factored[:, None, :], axis=0)
        phis = all_maps(k, target.order, cap, "class maps")
        add = closure.class_add
        additive = np.all(
            (phis[:, add] == target.add[phis[:, :, None], phis[:, None, :]]).reshape(len(phis), -1),
            axis=1,
        )
        phis = phis[additive]
        pulled = phis[:, gens]
        for _, lhs, rhs in _balanced_rules(closure):
            left = pulled[:, lhs[:, 0]]
            if rhs.shape[1] == 2:
                right = target.add[pulled[:, rhs[:, 0]], pulled[:, rhs[:, 1]]]
            else:
                right = pulled[:, rhs[:, 0]]
            bad = np.flatnonzero(~np.all(left == right, axis=1))
            if len(bad):
                out.add("class_map_balanced", (ti, int(bad[0])), len(bad))
        if len(phis) != len(psi):
            out.add("count", (ti, len(psi), len(phis)))
        counts.append({"target": ti, "balanced": len(psi), "class_maps": len(phis)})
    np.fill_diagonal(separated, True)
    apart = np.argwhere(~separated)
    out.fact("counts", counts)
    out.fact("separated", not len(apart))
    if len(apart):
        out.add("separated", tuple(int(x) for x in apart[0]), len(apart))
    return out.build()


def tensor_pair(p1: Pair, p2: Pair, closure: CongruenceClosure) -> tuple[Pair, ReportOfViolations]:
    """The prepair ``(M1 (x) M2, (M1_0 (x) M2) + (M1 (x) M2_0))``.

    A class is in the zero family when one of its terms has every summand in
    ``A0_1 x M2`` or ``M1 x A0_2``; the family is then closed under class sums.

    Returns:
      The pair on the class module and a report asserting that the zero
      family is closed under addition and both actions. Properness is a fact.

    Raises:
      StructureError: If the pairs are not on the closure's factors.
      UndeterminedError: If the closure is not saturated.
    """
    left = closure.left
    if isinstance(left, MonoidFactor) or not (
        same_carrier(p1.module, left) and same_carrier(p2.module, closure.right)
    ):
        logger.error("tensor_pair: pairs are not on the factors of the closure")
        raise StructureError("tensor_pair: pairs are not on the factors of the closure")
    module = closure.as_module()
    z1, z2 = p1.zero_mask(), p2.zero_mask()
    n2 = closure.n2
    zero_gen = np.array([z1[g // n2] or z2[g % n2] for g in range(closure.generator_count)])
    zero_terms = np.array([all(zero_gen[g] for g in t) for t in closure.terms])
    zero = set(np.unique(closure.term_class[zero_terms]).tolist())
    frontier = list(zero)
    while frontier:
        c = frontier.pop()
        for d in list(zero):
            for s in (module.plus(c, d), module.plus(d, c)):
                if s not in zero:
                    zero.add(s)
                    frontier.append(s)
    one = None
    if p1.one is not None and p2.one is not None:
        one = closure.simple(p1.one, p2.one)
    pair = Pair(module, frozenset(zero), one=one)
    out = ViolationCollector("tensor_pair")
    inside = pair.zero_mask()
    zs = sorted(zero)
    sides = (("left_action_closed", module.action), ("right_action_closed", module.ract))
    for axiom, table in sides:
        bad = np.argwhere(~inside[table[:, zs]])
        if len(bad):
            out.add(axiom, (int(bad[0][0]), zs[bad[0][1]]), len(bad))
    bad = np.argwhere(~inside[module.add[np.ix_(zs, zs)]])
    if len(bad):
        out.add("additive_closed", (zs[bad[0][0]], zs[bad[0][1]]), len(bad))
    if pair.tangibles is not None:
        out.fact("proper", not (pair.tangibles & pair.zero_set))
    out.fact("zero_family_size", len(zero))
    return pair, out.build()


def tensor_preorder(
    closure: CongruenceClosure,
    rel1: SurpassingRelation | None = None,
    rel2: SurpassingRelation | None = None,
) -> SurpassingRelation:
    """Pre-order on classes induced by pre-orders on the factors.

    ``x <= y`` when every term of ``x`` is dominated, summand by summand under
    some matching, by a term of ``y`` of the same length.
    """
    if (rel1 is None or rel1.is_equality()) and (rel2 is None or rel2.is_equality()):
        return equality(closure.order)
    r1 = (rel1 or equality(closure.left.order)).rel
    r2 = (rel2 or equality(closure.right.order)).rel
    n2 = closure.n2
    g = np.arange(closure.generator_count)
    dom = r1[(g // n2)[:, None], (g // n2)[None, :]] & r2[(g % n2)[:, None], (g % n2)[None, :]]

    def dominated(x: tuple[int, ...], y: tuple[int, ...]) -> bool:
        for perm in set(itertools.permutations(y)):
            if all(dom[a, b] for a, b in zip(x, perm, strict=True)):
                return True
        return False

    k = closure.order
    members = [closure.members(c) for c in range(k)]
    rel = np.zeros((k, k), dtype=bool)
    for c1 in range(k):
        for c2 in range(k):
            rel[c1, c2] = c1 == c2 or all(
                any(len(y) == len(x) and dominated(x, y) for y in members[c2]) for x in members[c1]
            )
    return SurpassingRelation(rel, "tensor")
