"""Builtin hypermagma fixtures.

Every family stipulates a hyperzero at index 0 (``0 + s = s + 0 = {s}``) and
is defined by its sums of nonzero elements. Sizes ``n`` count the hyperzero.
Fixtures without a multiplication use index 1 as the unit of their hyperpair.
"""

from collections.abc import Callable

import numpy as np

from hyperbench.backend.errors import StructureError
from hyperbench.backend.hyper import Hypermagma
from hyperbench.utils.logger import get_logger

logger = get_logger()

NonzeroRule = Callable[[int, int, int], int]


def _family(labels: tuple[str, ...], rule: NonzeroRule, one: int | None = 1) -> Hypermagma:
    n = len(labels)
    full = (1 << n) - 1
    add = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            if a == 0:
                add[a, b] = 1 << b
            elif b == 0:
                add[a, b] = 1 << a
            else:
                add[a, b] = rule(a, b, full)
    return Hypermagma(labels, add, 0, None, one)


def _numbered(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def _require(name: str, n: int, least: int) -> None:
    if n < least:
        logger.error(f"builtin {name}: needs n >= {least}, got {n}")
        raise StructureError(f"builtin {name}: needs n >= {least}, got {n}")


def sign() -> Hypermagma:
    """The hyperfield of signs ``{0, 1, -1}``."""
    labels = ("0", "1", "-1")
    add = np.array([[0b001, 0b010, 0b100], [0b010, 0b010, 0b111], [0b100, 0b111, 0b100]])
    mul = np.array([[0, 0, 0], [0, 1, 2], [0, 2, 1]])
    return Hypermagma(labels, add, 0, mul, 1)


def krasner() -> Hypermagma:
    """The Krasner hyperfield ``{0, 1}`` with ``1 + 1 = {0, 1}``."""
    add = np.array([[0b01, 0b10], [0b10, 0b11]])
    mul = np.array([[0, 0], [0, 1]])
    return Hypermagma(("0", "1"), add, 0, mul, 1)


def tropical_chain(k: int) -> Hypermagma:
    """``-inf < 1 < ... < k`` with ``a + b = {max}`` and ``a + a = [-inf, a]``."""
    _require("tropical_chain", k, 1)
    labels = ("-inf", *(str(i) for i in range(1, k + 1)))
    return _family(labels, lambda a, b, _: (1 << max(a, b)) if a != b else (1 << (a + 1)) - 1)


def tropical_void(k: int) -> Hypermagma:
    """The tropical chain with ``a + a`` empty for nonzero ``a``."""
    _require("tropical_void", k, 1)
    labels = ("-inf", *(str(i) for i in range(1, k + 1)))
    return _family(labels, lambda a, b, _: (1 << max(a, b)) if a != b else 0)


def all_sum(n: int) -> Hypermagma:
    """Every nonzero sum is the whole carrier."""
    _require("all_sum", n, 2)
    return _family(_numbered(n), lambda a, b, full: full)


def empty_sum(n: int) -> Hypermagma:
    """Every nonzero sum is empty."""
    _require("empty_sum", n, 2)
    return _family(_numbered(n), lambda a, b, full: 0)


def pair_sum(n: int) -> Hypermagma:
    """``a + b = {a, b}``, so sums of subsets are unions."""
    _require("pair_sum", n, 2)
    return _family(_numbered(n), lambda a, b, full: (1 << a) | (1 << b))


def mass_a(n: int) -> Hypermagma:
    """``s + s = {0, s}`` and ``s + s' = H`` for distinct nonzero ``s, s'``."""
    _require("mass_a", n, 2)
    return _family(_numbered(n), lambda a, b, full: (1 | (1 << a)) if a == b else full)


def mass_b(n: int) -> Hypermagma:
    """``s + s = H minus {s}`` and ``s + s' = {s, s'}``."""
    _require("mass_b", n, 3)
    return _family(
        _numbered(n), lambda a, b, full: full & ~(1 << a) if a == b else (1 << a) | (1 << b),
    )


def mass_c(n: int) -> Hypermagma:
    """``s + s' = H minus {s, s'}`` for all nonzero ``s, s'``."""
    _require("mass_c", n, 4)
    return _family(_numbered(n), lambda a, b, full: full & ~((1 << a) | (1 << b)))


def idem(n: int) -> Hypermagma:
    """``s + s = {s}`` and ``s + s' = H`` for distinct nonzero ``s, s'``."""
    _require("idem", n, 2)
    return _family(_numbered(n), lambda a, b, full: (1 << a) if a == b else full)


def ordered_bipotent(n: int) -> Hypermagma:
    """Chain ``0 < 1 < ... < n-1`` with ``s + s = H`` and ``s + s' = {max}``."""
    _require("ordered_bipotent", n, 2)
    return _family(_numbered(n), lambda a, b, full: full if a == b else 1 << max(a, b))


HYPERMAGMA_BUILTINS: dict[str, Callable[..., Hypermagma]] = {
    "sign": sign,
    "krasner": krasner,
    "tropical_chain": tropical_chain,
    "tropical_void": tropical_void,
    "all_sum": all_sum,
    "empty_sum": empty_sum,
    "pair_sum": pair_sum,
    "mass_a": mass_a,
    "mass_b": mass_b,
    "mass_c": mass_c,
    "idem": idem,
    "ordered_bipotent": ordered_bipotent,
}


def builtin(name: str, *params: int) -> Hypermagma:
    """Return the named fixture.

    Args:
      name: A key of ``HYPERMAGMA_BUILTINS``.
      *params: Size parameters, if the family takes one.

    Returns:
      The hypermagma.

    Raises:
      StructureError: For an unknown name or a bad parameter list.
    """
    if name not in HYPERMAGMA_BUILTINS:
        logger.error(f"unknown builtin hypermagma {name!r}")
        raise StructureError(f"unknown builtin hypermagma {name!r}")
    try:
        return HYPERMAGMA_BUILTINS[name](*params)
    except TypeError as e:
        logger.error(f"builtin {name}: bad parameters {params} ({e})")
        raise StructureError(f"builtin {name}: bad parameters {params}") from e
