"""Weight algebras.

Weights are stored as plain floats; a :class:`Semiring` instance supplies the
operations. Algorithms carry the semiring alongside the raw values, which
keeps inner loops free of wrapper objects. :class:`Weight` pairs a value with
its ring for callers that want the checked, ring-tagged interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable

from .errors import DomainError, RingMismatchError

INF = math.inf
DEFAULT_DELTA = 1e-9


class Semiring:
    name: str
    zero: float
    one: float
    idempotent: bool = False

    def plus(self, a: float, b: float) -> float:
        raise NotImplementedError

    def times(self, a: float, b: float) -> float:
        raise NotImplementedError

    def divide(self, a: float, b: float) -> float:
        """Left division: the x with ``times(a, x) == b``."""
        raise NotImplementedError

    def sum(self, values: Iterable[float]) -> float:
        return reduce(self.plus, values, self.zero)

    def product(self, values: Iterable[float]) -> float:
        return reduce(self.times, values, self.one)

    def is_zero(self, a: float) -> bool:
        return a == self.zero

    def approx_eq(self, a: float, b: float, delta: float = DEFAULT_DELTA) -> bool:
        if a == b:
            return True
        return abs(a - b) <= delta

    def check(self, a: float) -> float:
        """Validate a raw value against the carrier set."""
        a = float(a)
        if math.isnan(a):
            raise ValueError(f"{self.name}: NaN is not a weight")
        return a

    def __repr__(self):
        return f"<Semiring {self.name}>"


class _TropicalLike(Semiring):
    zero = INF
    one = 0.0

    def times(self, a, b):
        if a == INF or b == INF:
            return INF
        return a + b

    def divide(self, a, b):
        if a == INF:
            raise DomainError(f"{self.name}: division by zero weight")
        if b == INF:
            return INF
        return b - a

    def check(self, a):
        a = super().check(a)
        if a == -INF:
            raise ValueError(f"{self.name}: -inf is not a weight")
        return a


class TropicalSemiring(_TropicalLike):
    name = "tropical"
    idempotent = True

    def plus(self, a, b):
        return a if a <= b else b


class LogSemiring(_TropicalLike):
    name = "log"

    def plus(self, a, b):
        if a == INF:
            return b
        if b == INF:
            return a
        lo, hi = (a, b) if a <= b else (b, a)
        return lo - math.log1p(math.exp(lo - hi))


class ProbabilitySemiring(Semiring):
    name = "prob"
    zero = 0.0
    one = 1.0

    def plus(self, a, b):
        return a + b

    def times(self, a, b):
        return a * b

    def divide(self, a, b):
        if a == 0.0:
            raise DomainError("prob: division by zero weight")
        return b / a

    def check(self, a):
        a = super().check(a)
        if a < 0 or a == INF:
            raise ValueError(f"prob: weight must be finite and non-negative, got {a}")
        return a


TROPICAL = TropicalSemiring()
LOG = LogSemiring()
PROBABILITY = ProbabilitySemiring()

RINGS = {r.name: r for r in (TROPICAL, LOG, PROBABILITY)}


def get_ring(name: str | Semiring) -> Semiring:
    if isinstance(name, Semiring):
        return name
    try:
        return RINGS[name]
    except KeyError:
        raise ValueError(
            f"unknown semiring {name!r}; expected one of {', '.join(RINGS)}"
        ) from None


@dataclass(frozen=True)
class Weight:
    value: float
    ring: Semiring = TROPICAL

    def __post_init__(self):
        object.__setattr__(self, "value", self.ring.check(self.value))

    @classmethod
    def zero(cls, ring: Semiring = TROPICAL) -> "Weight":
        return cls(ring.zero, ring)

    @classmethod
    def one(cls, ring: Semiring = TROPICAL) -> "Weight":
        return cls(ring.one, ring)

    def __add__(self, other):
        return oplus(self, other)

    def __mul__(self, other):
        return otimes(self, other)

    def __float__(self):
        return self.value


def _same_ring(a: Weight, b: Weight) -> Semiring:
    if a.ring is not b.ring:
        raise RingMismatchError(f"{a.ring.name} weight combined with {b.ring.name} weight")
    return a.ring


def oplus(a: Weight, b: Weight) -> Weight:
    ring = _same_ring(a, b)
    return Weight(ring.plus(a.value, b.value), ring)


def otimes(a: Weight, b: Weight) -> Weight:
    ring = _same_ring(a, b)
    return Weight(ring.times(a.value, b.value), ring)


def left_divide(a: Weight, b: Weight) -> Weight:
    ring = _same_ring(a, b)
    return Weight(ring.divide(a.value, b.value), ring)


def approx_eq(a: Weight, b: Weight, delta: float = DEFAULT_DELTA) -> bool:
    ring = _same_ring(a, b)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    return ring.approx_eq(a.value, b.value, delta)
