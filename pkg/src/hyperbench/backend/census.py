"""Census of small commutative hypermagmas with hyperzero 0.

Tables are enumerated in numpy batches. The free entries are the sums
``i + j`` with ``1 <= i <= j < n``; every other entry is forced by the
hyperzero. Duplicates up to relabellings that fix 0 are removed by keeping the
lexicographically least table, read entry by entry in that order.
"""

import itertools
from collections.abc import Iterator
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import polars as pl

from hyperbench.backend.errors import CapExceededError, StructureError
from hyperbench.backend.hyper import Hypermagma, bits, check_hypergroup
from hyperbench.utils.logger import get_logger

logger = get_logger()

SUITES = ("hypermagma", "hypersemigroup", "hypergroup")
MAX_CENSUS_ORDER = 4
BATCH = 1 << 13

CENSUS_SCHEMA = {
    "order": pl.Int64,
    "suite": pl.Utf8,
    "carrier": pl.List(pl.Utf8),
    "zero": pl.Int64,
    "add": pl.List(pl.Utf8),
}


def _free_entries(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n) for j in range(i, n)]


def _decode(codes: np.ndarray, n: int) -> np.ndarray:
    """Turn entry codes into a batch of full ``(K, n, n)`` tables."""
    entries = _free_entries(n)
    m = len(entries)
    width = (1 << n) - 1
    add = np.zeros((len(codes), n, n), dtype=np.int64)
    singles = np.int64(1) << np.arange(n, dtype=np.int64)
    add[:, 0, :] = singles
    add[:, :, 0] = singles
    for e, (i, j) in enumerate(entries):
        mask = (codes >> (n * (m - 1 - e))) & width
        add[:, i, j] = mask
        add[:, j, i] = mask
    return add


def _associative(add: np.ndarray) -> np.ndarray:
    """Boolean vector: which tables in the batch are associative."""
    k, n, _ = add.shape
    left = np.zeros((k, n, n, n), dtype=np.int64)
    right = np.zeros((k, n, n, n), dtype=np.int64)
    for x in range(n):
        has = ((add >> x) & 1).astype(bool)
        # (a + b) + c collects x + c for x in a + b
        left |= np.where(has[..., None], add[:, x, :][:, None, None, :], 0)
        # a + (b + c) collects a + x for x in b + c
        right |= np.where(has[:, None, :, :], add[:, :, x][:, :, None, None], 0)
    return np.all((left == right).reshape(k, -1), axis=1)


def _relabellings(n: int) -> list[np.ndarray]:
    return [np.array((0, *p), dtype=np.int64) for p in itertools.permutations(range(1, n))]


def _canonical_codes(add: np.ndarray) -> np.ndarray:
    """Least entry code over all relabellings fixing 0."""
    k, n, _ = add.shape
    entries = _free_entries(n)
    m = len(entries)
    masks = np.arange(1 << n, dtype=np.int64)
    best = np.full(k, np.iinfo(np.int64).max, dtype=np.int64)
    for perm in _relabellings(n):
        inverse = np.argsort(perm)
        # image of every mask under the relabelling
        image = np.zeros(1 << n, dtype=np.int64)
        for x in range(n):
            image |= ((masks >> x) & 1) << perm[x]
        code = np.zeros(k, dtype=np.int64)
        for e, (i, j) in enumerate(entries):
            entry = image[add[:, inverse[i], inverse[j]]]
            code |= entry << (n * (m - 1 - e))
        best = np.minimum(best, code)
    return best


def rule_strings(h: Hypermagma) -> list[str]:
    """Rules ``a+b = {x,y}`` for every ``a <= b`` in carrier order."""
    rules = []
    for a in range(h.order):
        for b in range(a, h.order):
            members = ",".join(h.labels[x] for x in bits(int(h.add[a, b])))
            rules.append(f"{h.labels[a]}+{h.labels[b]} = {{{members}}}")
    return rules


@dataclass(frozen=True)
class CensusResult:
    """Deduplicated tables passing a suite.

    Attributes:
      order: Carrier size.
      suite: Suite the tables pass.
      candidates: Number of tables enumerated.
      tables: The canonical representatives, in increasing code order.
      frame: One row per table, ready for ``write_ndjson``.
    """

    order: int
    suite: str
    candidates: int
    tables: tuple[Hypermagma, ...]
    frame: pl.DataFrame = field(repr=False)


def _batches(total: int) -> Iterator[np.ndarray]:
    for start in range(0, total, BATCH):
        yield np.arange(start, min(total, start + BATCH), dtype=np.int64)


def census(
    order: int,
    suite: str = "hypergroup",
    cap: int = 1 << 16,
    max_order: int = MAX_CENSUS_ORDER,
) -> CensusResult:
    """Enumerate commutative hyperoperations with hyperzero 0 passing ``suite``.

    Args:
      order: Carrier size, between 1 and ``max_order``.
      suite: One of ``SUITES``.
      cap: Largest number of candidate tables to enumerate.
      max_order: Hard limit on ``order``.

    Returns:
      The deduplicated census.

    Raises:
      StructureError: For an unknown suite or a non-positive order.
      CapExceededError: If the order or the candidate count is above its limit.
    """
    if suite not in SUITES:
        logger.error(f"census: unknown suite {suite!r}; expected one of {SUITES}")
        raise StructureError(f"census: unknown suite {suite!r}")
    if order < 1:
        logger.error(f"census: order must be positive, got {order}")
        raise StructureError(f"census: order must be positive, got {order}")
    if order > max_order:
        logger.error(f"census: order {order} above the limit {max_order}")
        raise CapExceededError(max_order, order, "census order")
    n = order
    m = len(_free_entries(n))
    total = 1 << (n * m)
    if total > cap:
        logger.error(f"census: {total} candidate tables, cap is {cap}")
        raise CapExceededError(cap, total, "census")
    labels = tuple(str(i) for i in range(n))
    codes: set[int] = set()
    for chunk in _batches(total):
        add = _decode(chunk, n)
        if suite != "hypermagma":
            add = add[_associative(add)]
        if not len(add):
            continue
        canon = _canonical_codes(add)
        if suite == "hypergroup":
            keep = [
                int(c)
                for c, table in zip(canon, add, strict=True)
                if check_hypergroup(Hypermagma(labels, table, 0)).ok
            ]
            codes.update(keep)
        else:
            codes.update(int(c) for c in np.unique(canon))
        logger.debug(f"census: {chunk[-1] + 1}/{total} candidates, {len(codes)} classes")
    ordered = np.array(sorted(codes), dtype=np.int64)
    tables = tuple(Hypermagma(labels, t, 0) for t in _decode(ordered, n)) if len(ordered) else ()
    frame = pl.DataFrame(
        {
            "order": [n] * len(tables),
            "suite": [suite] * len(tables),
            "carrier": [list(labels)] * len(tables),
            "zero": [0] * len(tables),
            "add": [rule_strings(h) for h in tables],
        },
        schema=CENSUS_SCHEMA,
    )
    logger.info(f"census: order {n}, suite {suite}: {len(tables)} classes from {total} candidates")
    return CensusResult(n, suite, total, tables, frame)


def write_census(result: CensusResult, path: Path) -> None:
    """Stream the census as line-delimited JSON."""
    path.parent.mkdir(parents=True, exist_ok=True)
    result.frame.write_ndjson(path)
    logger.info(f"census: wrote {result.frame.height} tables to {path}")


def summarize(results: list[CensusResult]) -> pl.DataFrame:
    """Class counts per order and suite."""
    frames = [r.frame for r in results if r.frame.height]
    if not frames:
        return pl.DataFrame(schema={"order": pl.Int64, "suite": pl.Utf8, "count": pl.UInt32})
    return (
        pl.concat(frames)
        .group_by(["order", "suite"])
        .agg(pl.len().alias("count"))
        .sort(["order", "suite"])
    )
