"""Exact arithmetic in prime fields F_q and univariate polynomials over them.

Everything downstream (share generation, response codes, authentication
tags) is built on these types.  Moduli are capped below 2**61 so products
fit comfortably in Python ints; values are always kept in canonical form
0 <= value < q.  All randomness flows through an explicitly seeded
``random.Random`` passed as a parameter, which keeps simulations
reproducible and lets tests enumerate the whole coin space.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

MAX_MODULUS = 1 << 61

# Witness set proving Miller-Rabin deterministic for all n < 3.3 * 10**24,
# which covers every modulus this library accepts.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality check for n < 2**61."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldModulus:
    """A prime q defining the field F_q, with 2 <= q < 2**61."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, int):
            raise ValueError("modulus must be an int")
        if not 2 <= self.q < MAX_MODULUS:
            raise ValueError(f"modulus must satisfy 2 <= q < 2**61, got {self.q}")
        if not is_prime(self.q):
            raise ValueError(f"modulus {self.q} is not prime")

    def element(self, value: int) -> FieldElement:
        """Canonical field element for any integer value."""
        return FieldElement(value % self.q, self)

    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    def one(self) -> FieldElement:
        return FieldElement(1 % self.q, self)

    def elements(self) -> list[FieldElement]:
        """All field elements in order 0..q-1 (desk-scale moduli only)."""
        if self.q > 10**6:
            raise ValueError("field enumeration is limited to q <= 10**6")
        return [FieldElement(v, self) for v in range(self.q)]

    def random_element(self, rng: random.Random) -> FieldElement:
        return FieldElement(rng.randrange(self.q), self)


@dataclass(frozen=True)
class FieldElement:
    """An element of F_q in canonical form 0 <= value < q."""

    value: int
    modulus: FieldModulus

    def __post_init__(self):
        if not 0 <= self.value < self.modulus.q:
            raise ValueError(
                f"value {self.value} is not canonical for modulus {self.modulus.q}"
            )

    def _check(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.modulus != self.modulus:
            raise ValueError(
                f"mismatched moduli: {self.modulus.q} vs {other.modulus.q}"
            )

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement((self.value + other.value) % self.modulus.q, self.modulus)

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement((self.value - other.value) % self.modulus.q, self.modulus)

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement((self.value * other.value) % self.modulus.q, self.modulus)

    def __neg__(self) -> FieldElement:
        return FieldElement((-self.value) % self.modulus.q, self.modulus)

    def inverse(self) -> FieldElement:
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if self.value == 0:
            raise ZeroDivisionError("cannot invert zero")
        q = self.modulus.q
        r0, r1 = q, self.value
        t0, t1 = 0, 1
        while r1:
            k = r0 // r1
            r0, r1 = r1, r0 - k * r1
            t0, t1 = t1, t0 - k * t1
        return FieldElement(t0 % q, self.modulus)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return self * other.inverse()

    def __str__(self) -> str:
        return str(self.value)

    def to_json(self) -> str:
        """Decimal-string form used in all JSON artifacts."""
        return str(self.value)

    @staticmethod
    def from_json(text: str, modulus: FieldModulus) -> FieldElement:
        return modulus.element(int(text))


def _trim(coefficients: tuple[FieldElement, ...]) -> tuple[FieldElement, ...]:
    n = len(coefficients)
    while n and coefficients[n - 1].value == 0:
        n -= 1
    return coefficients[:n]


@dataclass(frozen=True)
class Polynomial:
    """Polynomial over F_q, coefficients lowest degree first.

    The zero polynomial is the empty coefficient tuple and has degree -1.
    Trailing zero coefficients are always trimmed, so equal polynomials
    compare equal structurally.
    """

    coefficients: tuple[FieldElement, ...]

    def __post_init__(self):
        if self.coefficients and self.coefficients[-1].value == 0:
            raise ValueError("trailing zero coefficients must be trimmed")
        moduli = {c.modulus for c in self.coefficients}
        if len(moduli) > 1:
            raise ValueError("mismatched moduli among coefficients")

    @classmethod
    def from_elements(cls, coefficients) -> Polynomial:
        return cls(_trim(tuple(coefficients)))

    @classmethod
    def from_ints(cls, values, modulus: FieldModulus) -> Polynomial:
        return cls.from_elements(modulus.element(v) for v in values)

    @classmethod
    def zero(cls) -> Polynomial:
        return cls(())

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, i: int, modulus: FieldModulus) -> FieldElement:
        """i-th coefficient, zero beyond the stored length."""
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return modulus.zero()

    def __call__(self, x: FieldElement) -> FieldElement:
        """Horner evaluation at x."""
        if self.coefficients and x.modulus != self.coefficients[0].modulus:
            raise ValueError("mismatched moduli between polynomial and point")
        acc = x.modulus.zero()
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __add__(self, other: Polynomial) -> Polynomial:
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial.from_elements(out)

    def __mul__(self, other: Polynomial) -> Polynomial:
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return Polynomial.zero()
        zero = a[0].modulus.zero()
        out = [zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return Polynomial.from_elements(out)

    def scale(self, factor: FieldElement) -> Polynomial:
        return Polynomial.from_elements(c * factor for c in self.coefficients)

    def to_json(self) -> list[str]:
        return [c.to_json() for c in self.coefficients]

    @staticmethod
    def from_json(items: list[str], modulus: FieldModulus) -> Polynomial:
        return Polynomial.from_ints((int(s) for s in items), modulus)


def poly_interpolate(points) -> Polynomial:
    """Unique polynomial of degree < len(points) through the given (x, y) pairs.

    Classic O(n^2) Lagrange construction; duplicate abscissae are rejected.
    """
    points = list(points)
    if not points:
        raise ValueError("interpolation needs at least one point")
    xs = [x for x, _ in points]
    if len({x.value for x in xs}) != len(xs):
        raise ValueError("duplicate abscissae in interpolation points")
    modulus = xs[0].modulus
    for x, y in points:
        if x.modulus != modulus or y.modulus != modulus:
            raise ValueError("mismatched moduli among interpolation points")
    result = Polynomial.zero()
    one = modulus.one()
    for i, (xi, yi) in enumerate(points):
        basis = Polynomial((one,))
        denom = one
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = basis * Polynomial.from_elements((-xj, one))
            denom = denom * (xi - xj)
        result = result + basis.scale(yi / denom)
    return result


def poly_random(degree_bound: int, modulus: FieldModulus, rng: random.Random) -> Polynomial:
    """Polynomial with degree_bound independent uniform coefficients.

    Exactly degree_bound coins are consumed from rng regardless of trailing
    zeros, so coin-space enumeration stays aligned with the draw count.
    """
    if degree_bound < 0:
        raise ValueError("degree_bound must be >= 0")
    return Polynomial.from_elements(
        modulus.random_element(rng) for _ in range(degree_bound)
    )


def derived_rng(seed, *labels) -> random.Random:
    """Independent deterministic stream for (seed, labels).

    String seeding in random.Random hashes the text with a stable algorithm,
    so streams are reproducible across runs and processes.
    """
    return random.Random(":".join([str(seed), *map(str, labels)]))


class SequenceRng:
    """Replays a fixed coin sequence through the randrange interface.

    Stands in for random.Random when tests or probes enumerate the whole
    coin space of an operation.  Every draw must stay within the scripted
    bound and the sequence must be fully consumed by the caller's draws.
    """

    def __init__(self, values):
        self._values = list(values)
        self._pos = 0

    def randrange(self, bound: int) -> int:
        if self._pos >= len(self._values):
            raise ValueError("scripted coin sequence exhausted")
        v = self._values[self._pos]
        self._pos += 1
        if not 0 <= v < bound:
            raise ValueError(f"scripted coin {v} out of range for bound {bound}")
        return v

    @property
    def exhausted(self) -> bool:
        return self._pos == len(self._values)


class CountingRng:
    """Counts randrange draws; used to size a coin space before enumerating it."""

    def __init__(self):
        self.draws = 0

    def randrange(self, bound: int) -> int:
        self.draws += 1
        return 0
