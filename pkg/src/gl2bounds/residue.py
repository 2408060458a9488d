"""Exact arithmetic in Z/N and truncated l-adic rings.

Canonical representatives live in [0, N); there is no floating point
anywhere in this package.  A ring whose modulus is a prime power l^k is
tagged l-adic and supports valuations, Teichmuller lifts and the matrix
valuation v(A) = min of the entry valuations.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._chainring import factor_int, inv_mod, residue_valuation


class ResidueRing:
    """Z/N with optional l-adic tagging when N = l^k for a prime l."""

    def __init__(self, modulus: int):
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        self.modulus = modulus
        fac = factor_int(modulus)
        if len(fac) == 1:
            ((p, k),) = fac.items()
            self.prime = p
            self.level = k
        else:
            self.prime = None
            self.level = None

    @classmethod
    def prime_power(cls, ell: int, k: int) -> "ResidueRing":
        ring = cls(ell**k)
        if ring.prime != ell:
            raise ValueError("%d is not prime" % ell)
        return ring

    @property
    def is_padic(self) -> bool:
        return self.prime is not None

    def element(self, value: int) -> "ResidueInt":
        return ResidueInt(value % self.modulus, self)

    def units(self):
        from math import gcd

        return [x for x in range(1, self.modulus) if gcd(x, self.modulus) == 1]

    def __eq__(self, other):
        return isinstance(other, ResidueRing) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("ResidueRing", self.modulus))

    def __repr__(self):
        return "ResidueRing(%d)" % self.modulus


@dataclass(frozen=True)
class ResidueInt:
    value: int
    ring: ResidueRing

    def __post_init__(self):
        if not 0 <= self.value < self.ring.modulus:
            object.__setattr__(self, "value", self.value % self.ring.modulus)

    def _coerce(self, other):
        if isinstance(other, ResidueInt):
            if other.ring != self.ring:
                raise ValueError("mixed residue rings")
            return other.value
        return other % self.ring.modulus

    def __add__(self, other):
        return ResidueInt((self.value + self._coerce(other)) % self.ring.modulus, self.ring)

    def __sub__(self, other):
        return ResidueInt((self.value - self._coerce(other)) % self.ring.modulus, self.ring)

    def __mul__(self, other):
        return ResidueInt((self.value * self._coerce(other)) % self.ring.modulus, self.ring)

    def __pow__(self, n: int):
        return ResidueInt(pow(self.value, n, self.ring.modulus), self.ring)

    def inverse(self) -> "ResidueInt":
        return ResidueInt(inv_mod(self.value, self.ring.modulus), self.ring)

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    @property
    def is_unit(self) -> bool:
        from math import gcd

        return gcd(self.value, self.ring.modulus) == 1

    def __repr__(self):
        return "%d (mod %d)" % (self.value, self.ring.modulus)


def valuation(x: ResidueInt) -> int:
    """l-adic valuation of a residue; v(0) is reported as the level k."""
    ring = x.ring
    if not ring.is_padic:
        raise ValueError("valuation undefined: modulus %d is not a prime power" % ring.modulus)
    return residue_valuation(x.value, ring.prime, ring.level)


def teichmuller_lift(lam: ResidueInt) -> ResidueInt:
    """The unique unit w in Z/l^k with w^l = w and w = lam mod l.

    Computed by iterating x -> x^l; k iterations always reach the fixed
    point.
    """
    ring = lam.ring
    if not ring.is_padic:
        raise ValueError("Teichmuller lift requires a prime-power modulus")
    if not lam.is_unit:
        raise ValueError("no Teichmuller lift: %r is not a unit" % (lam,))
    x = lam.value
    for _ in range(ring.level):
        x = pow(x, ring.prime, ring.modulus)
    return ResidueInt(x, ring)


@dataclass(frozen=True)
class Mat2:
    """A 2x2 matrix over a residue ring, stored row-major."""

    a: int
    b: int
    c: int
    d: int
    ring: ResidueRing

    def __post_init__(self):
        m = self.ring.modulus
        for name in "abcd":
            v = getattr(self, name)
            if not 0 <= v < m:
                object.__setattr__(self, name, v % m)

    @classmethod
    def from_entries(cls, entries, ring: ResidueRing) -> "Mat2":
        a, b, c, d = entries
        return cls(a, b, c, d, ring)

    @classmethod
    def identity(cls, ring: ResidueRing) -> "Mat2":
        return cls(1, 0, 0, 1, ring)

    @classmethod
    def scalar(cls, lam: int, ring: ResidueRing) -> "Mat2":
        return cls(lam, 0, 0, lam, ring)

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "Mat2") -> "Mat2":
        if other.ring != self.ring:
            raise ValueError("mixed residue rings")
        m = self.ring.modulus
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return Mat2((a * e + b * g) % m, (a * f + b * h) % m,
                    (c * e + d * g) % m, (c * f + d * h) % m, self.ring)

    def __pow__(self, n: int) -> "Mat2":
        if n < 0:
            return self.inverse() ** (-n)
        result = Mat2.identity(self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def det(self) -> ResidueInt:
        m = self.ring.modulus
        return ResidueInt((self.a * self.d - self.b * self.c) % m, self.ring)

    def trace(self) -> ResidueInt:
        return ResidueInt((self.a + self.d) % self.ring.modulus, self.ring)

    def inverse(self) -> "Mat2":
        m = self.ring.modulus
        di = inv_mod(self.det().value, m)
        return Mat2((self.d * di) % m, (-self.b * di) % m,
                    (-self.c * di) % m, (self.a * di) % m, self.ring)

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def __repr__(self):
        return "[[%d,%d],[%d,%d]] (mod %d)" % (self.a, self.b, self.c, self.d, self.ring.modulus)


def mat_valuation(m: Mat2) -> int:
    """min of the entry valuations; requires an l-adic ring."""
    ring = m.ring
    if not ring.is_padic:
        raise ValueError("valuation undefined: modulus %d is not a prime power" % ring.modulus)
    return min(residue_valuation(x, ring.prime, ring.level) for x in m.entries)


def scalar_power_stabilize(g: Mat2) -> Mat2:
    """Stable value of g^(l^n) for g scalar mod l; equals teich(lam)*Id.

    The sequence g, g^l, g^(l^2), ... becomes constant at the working level
    after at most k steps because v(h^(l^n) - Id) grows past the level for
    the unit-part h of g.
    """
    ring = g.ring
    if not ring.is_padic:
        raise ValueError("stabilisation requires a prime-power modulus")
    ell = ring.prime
    red = [x % ell for x in g.entries]
    if red[1] or red[2] or red[0] != red[3] or red[0] == 0:
        raise ValueError("not scalar modulo %d" % ell)
    x = g
    for _ in range(ring.level):
        x = x**ell
    return x
