"""Builtin finite fields of order 2, 3, 4, 5, 7, 8 and 9.

Elements of ``GF(p^k)`` are indexed by their coefficient digits in base ``p``
(lowest degree first), so index ``i`` is the polynomial
``sum(((i // p**j) % p) * x**j)``. Extension fields are built modulo a fixed
irreducible polynomial:

* ``GF(4)``: ``x^2 + x + 1``
* ``GF(8)``: ``x^3 + x + 1``
* ``GF(9)``: ``x^2 + 1``
"""

from dataclasses import dataclass, field

import numpy as np

from hyperbench.backend.errors import StructureError
from hyperbench.backend.module import TModule
from hyperbench.backend.monoid import FiniteMonoid
from hyperbench.utils.logger import get_logger

logger = get_logger()

# order -> (characteristic, monic modulus coefficients low to high)
FIELD_ORDERS: dict[int, tuple[int, tuple[int, ...]]] = {
    2: (2, (0, 1)),
    3: (3, (0, 1)),
    4: (2, (1, 1, 1)),
    5: (5, (0, 1)),
    7: (7, (0, 1)),
    8: (2, (1, 1, 0, 1)),
    9: (3, (1, 0, 1)),
}


def _digits(i: int, p: int, k: int) -> list[int]:
    return [(i // p**j) % p for j in range(k)]


def _index(coeffs: list[int], p: int) -> int:
    return sum(c * p**j for j, c in enumerate(coeffs))


def _poly_mul(a: list[int], b: list[int], p: int, modulus: tuple[int, ...]) -> list[int]:
    """Multiply two coefficient lists modulo ``p`` and the monic ``modulus``."""
    k = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for deg in range(len(prod) - 1, k - 1, -1):
        c = prod[deg]
        if c:
            for j, m in enumerate(modulus):
                prod[deg - k + j] = (prod[deg - k + j] - c * m) % p
    return (prod + [0] * k)[:k]


def _label(coeffs: list[int], degree: int) -> str:
    if degree == 1:
        return str(coeffs[0])
    terms = []
    for j in range(len(coeffs) - 1, -1, -1):
        c = coeffs[j]
        if not c:
            continue
        mono = "" if j == 0 else ("x" if j == 1 else f"x^{j}")
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) or "0"


@dataclass(frozen=True, eq=False)
class FiniteField:
    """Addition and multiplication tables of ``GF(q)``.

    Index 0 is zero and index 1 is one for every supported order.
    """

    order: int
    char: int
    degree: int
    labels: tuple[str, ...]
    add: np.ndarray = field(repr=False)
    mul: np.ndarray = field(repr=False)

    def neg(self, a: int) -> int:
        """Additive inverse of ``a``."""
        return int(np.flatnonzero(self.add[a] == 0)[0])

    def inverse(self, a: int) -> int:
        """Multiplicative inverse of a nonzero ``a``.

        Raises:
          StructureError: If ``a`` is zero.
        """
        if a == 0:
            logger.error(f"GF({self.order}): zero has no inverse")
            raise StructureError(f"GF({self.order}): zero has no inverse")
        return int(np.flatnonzero(self.mul[a] == 1)[0])

    def multiplicative_monoid(self) -> FiniteMonoid:
        """``(F, *)`` with unit 1 and absorbing 0."""
        return FiniteMonoid(self.labels, self.mul, identity=1, absorbing=0)

    def to_module(self) -> TModule:
        """``F`` as a module over its own multiplicative monoid."""
        t = self.multiplicative_monoid()
        return TModule(self.labels, self.add, 0, t, self.mul)


def galois_field(q: int) -> FiniteField:
    """Build the field of order ``q``.

    Args:
      q: One of the supported orders.

    Returns:
      The field tables.

    Raises:
      StructureError: If ``q`` is not supported.
    """
    if q not in FIELD_ORDERS:
        logger.error(f"GF({q}) is not a builtin field; orders: {sorted(FIELD_ORDERS)}")
        raise StructureError(f"GF({q}) is not a builtin field")
    p, modulus = FIELD_ORDERS[q]
    k = len(modulus) - 1
    polys = [_digits(i, p, k) for i in range(q)]
    digits = np.array(polys, dtype=np.int64)
    weights = p ** np.arange(k)
    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    mul = np.array(
        [[_index(_poly_mul(a, b, p, modulus), p) for b in polys] for a in polys],
        dtype=np.int64,
    )
    labels = tuple(_label(c, k) for c in polys)
    logger.debug(f"built GF({q}) = GF({p}^{k})")
    return FiniteField(q, p, k, labels, add, mul)
