"""Elliptic curves in long Weierstrass form: exact rational and mod-p group
law, division polynomials with y eliminated, and the reducibility test that
certifies a prime l divides the Kummer-degree defect of a rational point.

For an odd prime l and a non-torsion point P, the polynomial
g(x) = phi_l(x) - x(P) * psi_l(x)^2 vanishes on the x-coordinates of the
l-division points of P; an irreducible factor of degree below l^2/2
(equivalently, reducibility of g) certifies the divisibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from . import intpoly
from ._chainring import is_prime
from .intpoly import DEFAULT_DEGREE_CAP, DEFAULT_SEED

MAX_TORSION_ORDER = 12  # rational torsion orders never exceed this


class EllipticCurve:
    """y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6 over Q."""

    def __init__(self, a1, a2, a3, a4, a6):
        self.a1 = Fraction(a1)
        self.a2 = Fraction(a2)
        self.a3 = Fraction(a3)
        self.a4 = Fraction(a4)
        self.a6 = Fraction(a6)
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        self.b2 = a1 * a1 + 4 * a2
        self.b4 = 2 * a4 + a1 * a3
        self.b6 = a3 * a3 + 4 * a6
        self.b8 = (a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4
                   + a2 * a3 * a3 - a4 * a4)
        assert 4 * self.b8 == self.b2 * self.b6 - self.b4 * self.b4
        self.discriminant = (-self.b2 * self.b2 * self.b8
                             - 8 * self.b4**3 - 27 * self.b6 * self.b6
                             + 9 * self.b2 * self.b4 * self.b6)
        if self.discriminant == 0:
            raise ValueError("singular curve")

    @classmethod
    def from_a_invariants(cls, ainvs) -> "EllipticCurve":
        return cls(*ainvs)

    def a_invariants(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def __repr__(self):
        return "EllipticCurve(%s, %s, %s, %s, %s)" % self.a_invariants()

    def contains(self, x, y) -> bool:
        x, y = Fraction(x), Fraction(y)
        return (y * y + self.a1 * x * y + self.a3 * y
                == x**3 + self.a2 * x * x + self.a4 * x + self.a6)

    def point(self, x, y) -> "RationalPoint":
        return RationalPoint(self, Fraction(x), Fraction(y))


@dataclass(frozen=True)
class RationalPoint:
    curve: EllipticCurve
    x: Fraction = None
    y: Fraction = None
    infinity: bool = False

    def __post_init__(self):
        if not self.infinity and not self.curve.contains(self.x, self.y):
            raise ValueError("point (%s, %s) is not on the curve" % (self.x, self.y))

    @classmethod
    def zero(cls, curve) -> "RationalPoint":
        return cls(curve, infinity=True)

    def __repr__(self):
        return "O" if self.infinity else "(%s, %s)" % (self.x, self.y)


def point_neg(P: RationalPoint) -> RationalPoint:
    if P.infinity:
        return P
    E = P.curve
    return RationalPoint(E, P.x, -P.y - E.a1 * P.x - E.a3)


def point_add(P: RationalPoint, Q: RationalPoint) -> RationalPoint:
    """Exact chord-tangent addition in long Weierstrass form."""
    if P.infinity:
        return Q
    if Q.infinity:
        return P
    E = P.curve
    a1, a2, a3, a4, a6 = E.a_invariants()
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2 and y2 == -y1 - a1 * x1 - a3:
        return RationalPoint.zero(E)
    if x1 == x2:
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
        nu = (-x1**3 + a4 * x1 + 2 * a6 - a3 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
        nu = (y1 * x2 - y2 * x1) / (x2 - x1)
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return RationalPoint(E, x3, y3)


def point_mul(n: int, P: RationalPoint) -> RationalPoint:
    if n < 0:
        return point_mul(-n, point_neg(P))
    R = RationalPoint.zero(P.curve)
    Q = P
    while n:
        if n & 1:
            R = point_add(R, Q)
        Q = point_add(Q, Q)
        n >>= 1
    return R


def torsion_order(P: RationalPoint, bound: int = MAX_TORSION_ORDER):
    """The order of P if it is at most `bound`, else None (infinite order
    for rational points, since rational torsion orders are at most 12)."""
    R = P
    for n in range(1, bound + 1):
        if R.infinity:
            return n
        R = point_add(R, P)
    return None


# ---------------------------------------------------------------------------
# the curve over F_p

class CurveModP:
    """Reduction of an integral model at a prime of good reduction."""

    def __init__(self, E: EllipticCurve, p: int):
        for a in E.a_invariants():
            if a.denominator % p == 0:
                raise ValueError("p divides a denominator of the model")
        if p == 2 or E.discriminant.numerator % p == 0:
            raise ValueError("bad reduction at %d" % p)
        self.p = p
        self.a = tuple(int(a.numerator * pow(a.denominator, -1, p)) % p
                       for a in E.a_invariants())

    def points(self):
        """All affine points, by solving the y-quadratic per x."""
        p = self.p
        a1, a2, a3, a4, a6 = self.a
        inv2 = pow(2, -1, p)
        sqrt = {}
        for y in range(p):
            sqrt.setdefault(y * y % p, []).append(y)
        out = []
        for x in range(p):
            rhs = (x**3 + a2 * x * x + a4 * x + a6) % p
            b = (a1 * x + a3) % p
            disc = (b * b + 4 * rhs) % p
            for r in sqrt.get(disc, []):
                y = (r - b) * inv2 % p
                out.append((x, y))
        return sorted(set(out))

    def neg(self, P):
        if P is None:
            return None
        x, y = P
        a1, _, a3, _, _ = self.a
        return (x, (-y - a1 * x - a3) % self.p)

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        p = self.p
        a1, a2, a3, a4, a6 = self.a
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2 and y2 == (-y1 - a1 * x1 - a3) % p:
            return None
        if x1 == x2:
            den = (2 * y1 + a1 * x1 + a3) % p
            di = pow(den, -1, p)
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) * di % p
            nu = (-x1**3 + a4 * x1 + 2 * a6 - a3 * y1) * di % p
        else:
            di = pow((x2 - x1) % p, -1, p)
            lam = (y2 - y1) * di % p
            nu = (y1 * x2 - y2 * x1) * di % p
        x3 = (lam * lam + a1 * lam - a2 - x1 - x2) % p
        y3 = (-(lam + a1) * x3 - nu - a3) % p
        return (x3, y3)

    def mul(self, n, P):
        R = None
        Q = P
        if n < 0:
            n, Q = -n, self.neg(P)
        while n:
            if n & 1:
                R = self.add(R, Q)
            Q = self.add(Q, Q)
            n >>= 1
        return R


# ---------------------------------------------------------------------------
# division polynomials

class DivisionPolynomialSet:
    """psi_n (odd n), psi_n^2 and phi_n as univariate integer polynomials.

    Internally keeps the y-eliminated table P_n with psi_n = P_n for odd n
    and psi_n = psi_2 * P_n for even n, where psi_2^2 = S(x) is the quartic
    2-division polynomial.  Denominators of non-integral models are cleared
    per polynomial with the multiplier recorded in `contents`.
    """

    def __init__(self, E: EllipticCurve, n_max: int = 9):
        if n_max < 2:
            raise ValueError("n_max must be at least 2")
        self.curve = E
        self.n_max = n_max
        b2, b4, b6, b8 = E.b2, E.b4, E.b6, E.b8
        S = [b6, 2 * b4, b2, 4]
        P = {0: [], 1: [Fraction(1)], 2: [Fraction(1)]}
        P[3] = [b8, 3 * b6, 3 * b4, b2, 3]
        P[4] = [b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6,
                5 * b4, b2, 2]
        self._S = [Fraction(c) for c in S]
        for n in range(5, n_max + 1):
            m = n // 2
            if n % 2:
                t1 = intpoly.mul(P[m + 2], intpoly.mul(P[m], intpoly.mul(P[m], P[m])))
                t2 = intpoly.mul(P[m - 1], intpoly.mul(P[m + 1], intpoly.mul(P[m + 1], P[m + 1])))
                S2 = intpoly.mul(self._S, self._S)
                if m % 2 == 0:
                    P[n] = intpoly.sub(intpoly.mul(S2, t1), t2)
                else:
                    P[n] = intpoly.sub(t1, intpoly.mul(S2, t2))
            else:
                inner = intpoly.sub(intpoly.mul(P[m + 2], intpoly.mul(P[m - 1], P[m - 1])),
                                    intpoly.mul(P[m - 2], intpoly.mul(P[m + 1], P[m + 1])))
                P[n] = intpoly.mul(P[m], inner)
        self._P = {n: [Fraction(c) for c in P[n]] for n in P}
        self.contents = {}
        self._check_degrees()

    def _check_degrees(self):
        for n in range(1, self.n_max + 1):
            want = (n * n - 1) // 2 if n % 2 else (n * n - 4) // 2
            got = intpoly.deg(self._P[n])
            assert got == want, "deg P_%d = %d, expected %d" % (n, got, want)

    def _to_int(self, coeffs, key):
        den = 1
        for c in coeffs:
            den = lcm(den, Fraction(c).denominator)
        out = [int(Fraction(c) * den) for c in coeffs]
        self.contents[key] = den
        return out

    def two_division_polynomial(self):
        """S(x) = psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6."""
        return self._to_int(self._S, "S")

    def psi(self, n: int):
        """psi_n as a polynomial in x alone; defined for odd n."""
        if n % 2 == 0:
            raise ValueError("psi_n is a pure x-polynomial only for odd n")
        self._need(n)
        return self._to_int(self._P[n], ("psi", n))

    def psi_squared(self, n: int):
        self._need(n)
        sq = intpoly.mul(self._P[n], self._P[n])
        if n % 2 == 0:
            sq = intpoly.mul(sq, self._S)
        return self._to_int(sq, ("psi2", n))

    def phi(self, n: int):
        """phi_n = x * psi_n^2 - psi_(n+1) * psi_(n-1); degree n^2."""
        self._need(n + 1)
        sq = intpoly.mul(self._P[n], self._P[n])
        if n % 2 == 0:
            sq = intpoly.mul(sq, self._S)
        x_sq = [Fraction(0)] + sq
        cross = intpoly.mul(self._P[n + 1], self._P[n - 1])
        if n % 2:
            cross = intpoly.mul(cross, self._S)
        out = intpoly.sub(x_sq, cross)
        assert intpoly.deg(out) == n * n
        return self._to_int(out, ("phi", n))

    def _need(self, n):
        if n > self.n_max:
            raise ValueError("division polynomials computed only up to %d"
                             % self.n_max)


# ---------------------------------------------------------------------------
# Kummer divisibility

@dataclass
class KummerReport:
    ell: int
    polynomial: list           # g(x), primitive integer coefficients
    factor_degrees: list
    verdict: bool              # ell divides the Kummer-degree defect
    witness_factor: list | None

    def as_dict(self):
        return {"ell": self.ell,
                "degree": intpoly.deg(self.polynomial),
                "factor_degrees": list(self.factor_degrees),
                "verdict": self.verdict,
                "witness_factor": (list(self.witness_factor)
                                   if self.witness_factor else None)}


def division_point_polynomial(E: EllipticCurve, P: RationalPoint, ell: int):
    """g(x) = phi_ell(x) - x(P) * psi_ell(x)^2, primitive over Z."""
    dp = DivisionPolynomialSet(E, ell + 1)
    phi = [Fraction(c) for c in dp.phi(ell)]
    psi2 = [Fraction(c) for c in dp.psi_squared(ell)]
    xp = Fraction(P.x)
    g = intpoly.sub(phi, [xp * c for c in psi2])
    den = 1
    for c in g:
        den = lcm(den, Fraction(c).denominator)
    gi = [int(Fraction(c) * den) for c in g]
    gi = intpoly.primitive_part(gi)
    if gi[-1] < 0:
        gi = [-c for c in gi]
    return gi


def kummer_divisibility(E: EllipticCurve, P: RationalPoint, ell: int,
                        degree_cap: int = DEFAULT_DEGREE_CAP,
                        seed: int = DEFAULT_SEED) -> KummerReport:
    """Does ell divide the degree defect of the ell-division field of P?

    True iff g(x) has an irreducible factor of degree below ell^2 / 2,
    which for odd ell is the same as g being reducible.
    """
    if ell == 2:
        raise ValueError("ell=2 unsupported: the reducibility criterion "
                         "applies to odd ell only")
    if not is_prime(ell) or ell < 3:
        raise ValueError("ell must be an odd prime")
    if ell * ell > degree_cap:
        raise intpoly.FactorCapExceeded(
            "degree %d beyond configured factorization range %d; raise "
            "degree_cap explicitly" % (ell * ell, degree_cap))
    if P.infinity:
        raise ValueError("P must be an affine point")
    n = torsion_order(P)
    if n is not None:
        raise ValueError("P is torsion (order %d)" % n)
    g = division_point_polynomial(E, P, ell)
    assert intpoly.deg(g) == ell * ell
    factors = intpoly.factor_over_z(g, degree_cap=degree_cap, seed=seed)
    degrees = sorted(intpoly.deg(f) for f in factors)
    assert sum(degrees) == intpoly.deg(g)
    verdict = 2 * degrees[0] < ell * ell
    assert verdict == (len(factors) > 1)
    witness = None
    if verdict:
        witness = min(factors, key=intpoly.deg)
    return KummerReport(ell, g, degrees, verdict, witness)
