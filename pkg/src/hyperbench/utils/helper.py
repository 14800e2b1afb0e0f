"""Structure files: loading, ``builtin:`` URIs and canonical emission.

A structure file is a TOML or JSON document with the sections ``version``,
``monoid``, ``module``, ``pair``, ``surpassing`` and ``hypermagma``. Tables are
written as rows of element indices under ``carrier`` labels; single elements
are written by label.
Hypermagma sums are rules ``a+b = {x,y}``; a rule for ``a+b`` also defines
``b+a`` unless that sum has its own rule.

Canonical emission keeps the section order above and sorts the keys inside a
section, so loading and re-emitting a file is byte-stable.
"""

import hashlib
import json
import re
import tomllib
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import tomli_w

from hyperbench.backend.builtins import HYPERMAGMA_BUILTINS, builtin
from hyperbench.backend.census import rule_strings
from hyperbench.backend.errors import StructureError
from hyperbench.backend.fields import FIELD_ORDERS, galois_field
from hyperbench.backend.hyper import Hypermagma, mask_label, to_mask
from hyperbench.backend.hyperpair import build_hyperpair
from hyperbench.backend.module import (
    TModule,
    boolean_module,
    boolean_semiring_module,
    cyclic_module,
    free_module,
)
from hyperbench.backend.monoid import FiniteMonoid, trivial_monoid
from hyperbench.backend.pair import Pair, SurpassingRelation
from hyperbench.utils.logger import get_logger

logger = get_logger()

FORMAT_VERSION = 1
SECTION_ORDER = ("version", "monoid", "module", "pair", "surpassing", "hypermagma")
BUILTIN_SCHEME = "builtin:"
SUFFIXES = {".toml": "toml", ".json": "json"}

RULE = re.compile(r"^\s*(.+?)\s*=\s*\{(.*)\}\s*$")
MAP_LINE = re.compile(r"^\s*f\((.*)\)\s*=\s*(.+?)\s*$")
BUILTIN_NAME = re.compile(r"^(\w+)(?:\((.*)\))?$")

Document = dict[str, Any]


@dataclass(frozen=True, eq=False)
class Structure:
    """The sections of one structure file, built into algebra objects.

    Attributes:
      source: The URI or path the structure came from.
      monoid: The acting monoid, if a module or monoid section was given.
      module: The module, if any.
      pair: The pair, if a pair or surpassing section was given.
      hypermagma: The hypermagma, if any.
    """

    source: str
    monoid: FiniteMonoid | None = None
    module: TModule | None = None
    pair: Pair | None = None
    hypermagma: Hypermagma | None = None

    def require_monoid(self) -> FiniteMonoid:
        """The monoid section, or the monoid of the module.

        Raises:
          StructureError: If neither is present.
        """
        if self.monoid is not None:
            return self.monoid
        if self.module is not None:
            return self.module.monoid
        return self._missing("monoid")

    def require_module(self) -> TModule:
        """The module, or the module of the pair.

        Raises:
          StructureError: If neither is present.
        """
        if self.module is not None:
            return self.module
        if self.pair is not None:
            return self.pair.module
        return self._missing("module")

    def require_pair(self) -> Pair:
        """The pair; otherwise the module with ``A0 = {0}``, or the hyperpair of the hypermagma.

        Raises:
          StructureError: If none of these is present.
        """
        if self.pair is not None:
            return self.pair
        if self.module is not None:
            return Pair(self.module, frozenset({self.module.zero}))
        if self.hypermagma is not None:
            return build_hyperpair(self.hypermagma).to_pair()
        return self._missing("pair")

    def require_hypermagma(self) -> Hypermagma:
        """The hypermagma, or the module's addition with singleton sums.

        Raises:
          StructureError: If neither is present.
        """
        if self.hypermagma is not None:
            return self.hypermagma
        if self.module is not None:
            m = self.module
            return Hypermagma(m.labels, np.left_shift(1, m.add), m.zero)
        return self._missing("hypermagma")

    def _missing(self, section: str) -> Any:  # noqa: ANN401
        logger.error(f"{self.source}: no {section} section")
        raise StructureError(f"{self.source}: no {section} section")


# --- builtins ---


def _module_pair(m: TModule, one: int | None) -> Pair:
    return Pair(m, frozenset({m.zero}), one=one)


def _field_structure(uri: str, q: int) -> Structure:
    f = galois_field(q)
    m = f.to_module()
    h = Hypermagma(f.labels, np.left_shift(1, f.add), 0, f.mul, 1)
    return Structure(uri, m.monoid, m, _module_pair(m, 1), h)


def _int_params(uri: str, raw: str | None) -> list[int]:
    if not raw:
        return []
    try:
        return [int(p) for p in raw.split(",")]
    except ValueError as e:
        logger.error(f"{uri}: parameters must be integers")
        raise StructureError(f"{uri}: parameters must be integers") from e


def resolve_builtin(uri: str) -> Structure:
    """Build the structure named by a ``builtin:`` URI.

    Supported names: the hypermagma families (``sign``, ``krasner``,
    ``tropical_chain(k)``, ``all_sum(n)``, ...), the fields ``F2`` to ``F9``,
    ``B``, ``Bsr``, ``Z2``, ``Z3`` and ``free(<regular>,<rank>)``.

    Raises:
      StructureError: For an unknown name or bad parameters.
    """
    name = uri.removeprefix(BUILTIN_SCHEME).strip()
    match = BUILTIN_NAME.match(name)
    if match is None:
        logger.error(f"unknown builtin {uri!r}")
        raise StructureError(f"unknown builtin {uri!r}")
    head, raw = match.group(1), match.group(2)
    if head in HYPERMAGMA_BUILTINS:
        return Structure(uri, hypermagma=builtin(head, *_int_params(uri, raw)))
    if head == "free":
        parts = [p.strip() for p in (raw or "").split(",")]
        if len(parts) != 2:
            logger.error(f"{uri}: expected free(<regular>,<rank>)")
            raise StructureError(f"{uri}: expected free(<regular>,<rank>)")
        regular = resolve_builtin(BUILTIN_SCHEME + parts[0]).require_module()
        m, base = free_module(regular, _int_params(uri, parts[1])[0])
        return Structure(uri, m.monoid, m, _module_pair(m, base[0]))
    if raw is None:
        field_match = re.fullmatch(r"F(\d+)", head)
        if field_match and int(field_match.group(1)) in FIELD_ORDERS:
            return _field_structure(uri, int(field_match.group(1)))
        cyclic = re.fullmatch(r"Z(\d+)", head)
        if cyclic and int(cyclic.group(1)) >= 1:
            m = cyclic_module(int(cyclic.group(1)))
            return Structure(uri, m.monoid, m, _module_pair(m, None))
        if head in ("B", "Bsr"):
            m = boolean_module() if head == "B" else boolean_semiring_module()
            return Structure(uri, m.monoid, m, _module_pair(m, 1))
    logger.error(f"unknown builtin {uri!r}")
    raise StructureError(f"unknown builtin {uri!r}")


# --- reading ---


def read_document(path: Path) -> Document:
    """Parse a TOML or JSON structure file.

    Raises:
      StructureError: If the file is unreadable, has an unknown suffix or does not parse.
    """
    kind = SUFFIXES.get(path.suffix.lower())
    if kind is None:
        logger.error(f"{path}: unknown structure file suffix {path.suffix!r}")
        raise StructureError(f"{path}: expected a .toml or .json file")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"{path}: cannot read ({e})")
        raise StructureError(f"{path}: cannot read") from e
    try:
        doc = tomllib.loads(text) if kind == "toml" else json.loads(text)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as e:
        logger.error(f"{path}: malformed {kind} ({e})")
        raise StructureError(f"{path}: malformed {kind}") from e
    if not isinstance(doc, dict):
        logger.error(f"{path}: top level is not a table")
        raise StructureError(f"{path}: top level is not a table")
    return doc


def _section(doc: Mapping[str, Any], name: str, source: str) -> dict[str, Any] | None:
    value = doc.get(name)
    if value is None:
        return None
    if not isinstance(value, dict):
        logger.error(f"{source}: section {name!r} is not a table")
        raise StructureError(f"{source}: section {name!r} is not a table")
    return value


def _get(section: Mapping[str, Any], key: str, source: str) -> Any:  # noqa: ANN401
    if key not in section:
        logger.error(f"{source}: missing key {key!r}")
        raise StructureError(f"{source}: missing key {key!r}")
    return section[key]


def _label_index(labels: Sequence[str], label: object, source: str) -> int:
    try:
        return list(labels).index(str(label))
    except ValueError:
        logger.error(f"{source}: unknown element {label!r}")
        raise StructureError(f"{source}: unknown element {label!r}")


def _monoid(sec: Mapping[str, Any], source: str) -> FiniteMonoid:
    labels = [str(x) for x in _get(sec, "carrier", source)]
    absorbing = sec.get("absorbing")
    return FiniteMonoid(
        tuple(labels),
        np.array(_get(sec, "op", source)),
        _label_index(labels, sec.get("identity", labels[0]), source),
        None if absorbing is None else _label_index(labels, absorbing, source),
    )


def _module(sec: Mapping[str, Any], monoid: FiniteMonoid | None, source: str) -> TModule:
    labels = [str(x) for x in _get(sec, "carrier", source)]
    zero = _label_index(labels, _get(sec, "zero", source), source)
    if "action" in sec:
        if monoid is None:
            logger.error(f"{source}: the module's action refers to a missing monoid")
            raise StructureError(f"{source}: the module's action refers to a missing monoid")
        action = np.array(sec["action"])
    else:
        monoid = monoid or trivial_monoid()
        if monoid.order != 1:
            logger.error(f"{source}: a module over a nontrivial monoid needs an action")
            raise StructureError(f"{source}: module action is missing")
        action = np.arange(len(labels))[None, :]
    right = sec.get("right_action")
    return TModule(
        tuple(labels),
        np.array(_get(sec, "add", source)),
        zero,
        monoid,
        action,
        None,
        None if right is None else np.array(right),
    )


def _relation(sec: Mapping[str, Any], m: TModule, source: str) -> SurpassingRelation:
    rel = np.eye(m.order, dtype=bool)
    for entry in _get(sec, "leq", source):
        if len(entry) != 2:
            logger.error(f"{source}: surpassing entries are [smaller, larger] pairs")
            raise StructureError(f"{source}: surpassing entries are [smaller, larger] pairs")
        lo, hi = (_label_index(m.labels, x, source) for x in entry)
        rel[lo, hi] = True
    return SurpassingRelation(rel, str(sec.get("name", "custom")))


def _pair(
    sec: Mapping[str, Any] | None,
    surpassing: Mapping[str, Any] | None,
    m: TModule | None,
    source: str,
) -> Pair | None:
    if sec is None and surpassing is None:
        return None
    if m is None:
        logger.error(f"{source}: the pair refers to a missing module")
        raise StructureError(f"{source}: the pair refers to a missing module")
    sec = sec or {"zero_set": [m.labels[m.zero]]}
    zero = frozenset(_label_index(m.labels, x, source) for x in _get(sec, "zero_set", source))
    one = sec.get("one")
    tangibles = sec.get("tangibles")
    if tangibles is not None:
        tangibles = frozenset(_label_index(m.labels, x, source) for x in tangibles)
    return Pair(
        m,
        zero,
        None if one is None else _label_index(m.labels, one, source),
        tangibles,
        None if surpassing is None else _relation(surpassing, m, source),
    )


def split_labels(text: str, labels: Sequence[str], sep: str) -> list[list[int]]:
    """Every way of reading ``text`` as labels joined by ``sep``, as index lists.

    Labels may themselves contain ``sep`` (``x+1``, ``(0,1)``), so all
    readings are returned and the caller decides which one it needs.
    """
    text = text.strip()
    if not text:
        return [[]]
    readings: list[list[int]] = []
    for i, label in enumerate(labels):
        if not text.startswith(label):
            continue
        rest = text[len(label):].lstrip()
        if not rest:
            readings.append([i])
        elif rest.startswith(sep):
            tail = rest[len(sep):]
            if tail.strip():
                readings.extend([i, *more] for more in split_labels(tail, labels, sep))
    return readings


def _one_reading(
    text: str, labels: Sequence[str], sep: str, size: int | None, source: str,
) -> list[int]:
    readings = {
        tuple(r) for r in split_labels(text, labels, sep) if size is None or len(r) == size
    }
    if len(readings) != 1:
        why = "unknown elements in" if not readings else "ambiguous"
        logger.error(f"{source}: {why} {text!r}")
        raise StructureError(f"{source}: {why} {text!r}")
    return list(readings.pop())


def parse_rules(labels: Sequence[str], rules: Sequence[str], source: str) -> np.ndarray:
    """Addition masks from ``a+b = {x,y}`` rules.

    Raises:
      StructureError: For a malformed, conflicting or missing rule.
    """
    n = len(labels)
    given: dict[tuple[int, int], int] = {}
    for rule in rules:
        match = RULE.match(rule)
        if match is None:
            logger.error(f"{source}: malformed rule {rule!r}")
            raise StructureError(f"{source}: malformed rule {rule!r}")
        a, b = _one_reading(match.group(1), labels, "+", 2, source)
        mask = to_mask(_one_reading(match.group(2), labels, ",", None, source))
        if given.setdefault((a, b), mask) != mask:
            logger.error(f"{source}: conflicting rules for {labels[a]}+{labels[b]}")
            raise StructureError(f"{source}: conflicting rules for {labels[a]}+{labels[b]}")
    add = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            mask = given.get((a, b), given.get((b, a)))
            if mask is None:
                logger.error(f"{source}: no rule for {labels[a]}+{labels[b]}")
                raise StructureError(f"{source}: no rule for {labels[a]}+{labels[b]}")
            add[a, b] = mask
    return add


def _hypermagma(sec: Mapping[str, Any], source: str) -> Hypermagma:
    labels = [str(x) for x in _get(sec, "carrier", source)]
    zero, one, mul = sec.get("zero"), sec.get("one"), sec.get("mul")
    return Hypermagma(
        tuple(labels),
        parse_rules(labels, _get(sec, "add", source), source),
        None if zero is None else _label_index(labels, zero, source),
        None if mul is None else np.array(mul),
        None if one is None else _label_index(labels, one, source),
    )


def build_structure(doc: Mapping[str, Any], source: str) -> Structure:
    """Turn a parsed document into algebra objects.

    Raises:
      StructureError: For an unsupported version, a malformed section or an
        unresolved reference.
    """
    version = doc.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        logger.error(f"{source}: unsupported version {version!r}")
        raise StructureError(f"{source}: unsupported version {version!r}")
    unknown = sorted(set(doc) - set(SECTION_ORDER))
    if unknown:
        logger.error(f"{source}: unknown sections {unknown}")
        raise StructureError(f"{source}: unknown sections {unknown}")
    sec = _section(doc, "monoid", source)
    monoid = None if sec is None else _monoid(sec, source)
    sec = _section(doc, "module", source)
    module = None if sec is None else _module(sec, monoid, source)
    pair = _pair(
        _section(doc, "pair", source), _section(doc, "surpassing", source), module, source,
    )
    sec = _section(doc, "hypermagma", source)
    hypermagma = None if sec is None else _hypermagma(sec, source)
    if module is not None:
        monoid = module.monoid
    logger.debug(f"{source}: loaded sections {[k for k in SECTION_ORDER if k in doc]}")
    return Structure(source, monoid, module, pair, hypermagma)


def load_structure(uri: str, includes: Sequence[Path] = ()) -> Structure:
    """Load a ``builtin:`` URI or a structure file.

    Sections missing from the file are taken from the first include that has
    them, so a pair file can refer to a module defined elsewhere.

    Raises:
      StructureError: If the file or an include cannot be loaded.
    """
    if uri.startswith(BUILTIN_SCHEME):
        return resolve_builtin(uri)
    doc = read_document(Path(uri))
    for path in includes:
        for key, value in read_document(Path(path)).items():
            doc.setdefault(key, value)
    structure = build_structure(doc, uri)
    logger.info(f"loaded {uri}")
    return structure


def parse_map(text: str, source: TModule, target: TModule, where: str = "map") -> np.ndarray:
    """A map table from lines ``f(a) = b``; blank lines and ``#`` comments are skipped.

    Raises:
      StructureError: For a malformed line, an unknown label, or an element
        assigned twice or not at all.
    """
    table = np.full(source.order, -1, dtype=np.int64)
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = MAP_LINE.match(line)
        if match is None:
            logger.error(f"{where}:{number}: expected 'f(a) = b', got {raw!r}")
            raise StructureError(f"{where}:{number}: expected 'f(a) = b'")
        a = _label_index(source.labels, match.group(1).strip(), where)
        if table[a] >= 0:
            logger.error(f"{where}:{number}: f({source.labels[a]}) is assigned twice")
            raise StructureError(f"{where}:{number}: f({source.labels[a]}) is assigned twice")
        table[a] = _label_index(target.labels, match.group(2), where)
    missing = [source.labels[a] for a in np.flatnonzero(table < 0)]
    if missing:
        logger.error(f"{where}: no image for {missing}")
        raise StructureError(f"{where}: no image for {missing}")
    return table


# --- emission ---


def _rows(table: np.ndarray) -> list[list[int]]:
    return [[int(x) for x in row] for row in np.asarray(table)]


def _monoid_doc(t: FiniteMonoid) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "identity": t.labels[t.identity],
        "carrier": list(t.labels),
        "op": _rows(t.op),
    }
    if t.absorbing is not None:
        doc["absorbing"] = t.labels[t.absorbing]
    return doc


def _module_doc(m: TModule) -> dict[str, Any]:
    if not m.same_monoid(m.monoid, right=True):
        logger.error("emit: modules with a distinct right monoid have no file form")
        raise StructureError("emit: modules with a distinct right monoid have no file form")
    doc: dict[str, Any] = {
        "action": _rows(m.action),
        "add": _rows(m.add),
        "carrier": list(m.labels),
        "zero": m.labels[m.zero],
    }
    if not np.array_equal(m.ract, m.action):
        doc["right_action"] = _rows(m.ract)
    return doc


def _pair_doc(p: Pair) -> dict[str, Any]:
    labels = p.module.labels
    doc: dict[str, Any] = {"zero_set": [labels[x] for x in sorted(p.zero_set)]}
    if p.one is not None:
        doc["one"] = labels[p.one]
    elif p.tangibles is not None:
        doc["tangibles"] = [labels[x] for x in sorted(p.tangibles)]
    return doc


def _surpassing_doc(p: Pair) -> dict[str, Any]:
    labels = p.module.labels
    rel = p.relation
    leq = [
        [labels[int(i)], labels[int(j)]] for i, j in np.argwhere(rel.rel) if i != j
    ]
    return {"leq": leq, "name": rel.name}


def _hypermagma_doc(h: Hypermagma) -> dict[str, Any]:
    if np.array_equal(h.add, h.add.T):
        rules = rule_strings(h)
    else:
        rules = [
            f"{h.labels[a]}+{h.labels[b]} = {mask_label(h.labels, int(h.add[a, b]))}"
            for a in range(h.order)
            for b in range(h.order)
        ]
    doc: dict[str, Any] = {"add": rules, "carrier": list(h.labels)}
    if h.mul is not None:
        doc["mul"] = _rows(h.mul)
    if h.one is not None:
        doc["one"] = h.labels[h.one]
    if h.zero is not None:
        doc["zero"] = h.labels[h.zero]
    return doc


def to_document(s: Structure) -> Document:
    """The canonical document of a structure."""
    doc: Document = {"version": FORMAT_VERSION}
    monoid = s.module.monoid if s.module is not None else s.monoid
    module = s.module if s.module is not None else (s.pair.module if s.pair else None)
    if monoid is not None:
        doc["monoid"] = _monoid_doc(monoid)
    if module is not None:
        doc["module"] = _module_doc(module)
    if s.pair is not None:
        doc["pair"] = _pair_doc(s.pair)
        if not s.pair.relation.is_equality():
            doc["surpassing"] = _surpassing_doc(s.pair)
    if s.hypermagma is not None:
        doc["hypermagma"] = _hypermagma_doc(s.hypermagma)
    for key, value in doc.items():
        if isinstance(value, dict):
            doc[key] = dict(sorted(value.items()))
    return doc


def dump_document(doc: Document, fmt: str = "json") -> str:
    """Serialize a document as canonical JSON or TOML.

    Raises:
      StructureError: For an unknown format.
    """
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if fmt == "toml":
        return tomli_w.dumps(doc)
    logger.error(f"emit: unknown format {fmt!r}")
    raise StructureError(f"emit: unknown format {fmt!r}")


def emit(s: Structure, fmt: str = "json") -> str:
    """Canonical text of a structure."""
    return dump_document(to_document(s), fmt)


def content_hash(s: Structure) -> str:
    """SHA-256 of the canonical JSON emission."""
    return hashlib.sha256(emit(s, "json").encode("utf-8")).hexdigest()
