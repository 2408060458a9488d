"""Bundled data: curve/point rows for the Kummer-divisibility experiments
and group fixtures exhibiting torsion floors for the cohomology exponent.

The curve table uses LMFDB labels; `optin` rows exceed the default
factorization degree cap and are excluded from the standard checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ellkummer import EllipticCurve, RationalPoint
from .matgrp import FiniteMatrixGroup

CURVE_TABLE = """
# label   | ell | a1,a2,a3,a4,a6      | point x,y | flags
91.b2     | 3   | 0,1,1,-7,5          | -1,3      |
704.c3    | 5   | 0,-1,0,-1,-1        | 2,1       |
225.c1    | 3   | 0,0,1,0,-34         | 6,13      | cm
338.c1    | 7   | 1,-1,0,-389,-2859   | 26,51     | optin
"""


@dataclass(frozen=True)
class CurveFixture:
    label: str
    ell: int
    ainvs: tuple
    point: tuple
    flags: tuple

    def curve(self) -> EllipticCurve:
        return EllipticCurve(*self.ainvs)

    def rational_point(self) -> RationalPoint:
        E = self.curve()
        return E.point(*self.point)

    @property
    def is_cm(self) -> bool:
        return "cm" in self.flags

    @property
    def default(self) -> bool:
        return "optin" not in self.flags


def parse_curve_table(text: str = CURVE_TABLE):
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("|")]
        label, ell, ainvs, point = parts[0], int(parts[1]), parts[2], parts[3]
        flags = tuple(f for f in parts[4].split() if f) if len(parts) > 4 else ()
        rows.append(CurveFixture(
            label, ell,
            tuple(Fraction(a) for a in ainvs.split(",")),
            tuple(Fraction(c) for c in point.split(",")),
            flags))
    return rows


def curve_fixtures(include_optin: bool = False):
    rows = parse_curve_table()
    return [r for r in rows if include_optin or r.default]


def torsion_image_fixture(N: int) -> FiniteMatrixGroup:
    """The largest subgroup of GL2(Z/N^2) reducing mod N into the stabiliser
    of the vector (1, 0): the generic image shape for a curve with a
    rational point of order N.  N must be a prime power."""
    from math import gcd

    mod = N
    elems = [(1, b, 0, d) for b in range(N) for d in range(N)
             if gcd(d, N) == 1]
    base = FiniteMatrixGroup.from_elements(mod, elems)
    return base.preimage(N * N)


TORSION_FLOOR_ORDERS = (5, 7, 8, 9)
