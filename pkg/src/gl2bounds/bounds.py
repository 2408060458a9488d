"""Calculators for the named uniform-bound constants.

Two kinds of quantities live here.  Imported tables (scalar-index exponents,
cohomology exponents per prime, algebra exponents, the isogeny prime list)
rest on the classification of rational isogenies and mod-l images; they are
versioned constants.  Computed constants (the PGL2 exponents, their lcm
valuations, the cohomology constant, the CM exponents, the Kummer bounds)
are rebuilt from scratch and cross-checked against their expected values.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from ._chainring import factor_int, is_prime, vp
from .cohom import combined_exponent_bound
from .matgrp import FiniteMatrixGroup, is_scalar_mat, mat_mul

# primes p for which a rational point of order p (equivalently a rational
# p-isogeny kernel) can exist for a non-CM curve
ISOGENY_PRIMES = (2, 3, 5, 7, 11, 13, 17, 37)

# index bound for scalars: the l-adic image contains 1 + l^s_l Z_l
SCALAR_EXPONENTS = {2: 4, 3: 3, 5: 1, 7: 1, 11: 1, 13: 1, 17: 1, 37: 1}

# CM variant of the scalar table
SCALAR_EXPONENTS_CM = {2: 3, 3: 1, 7: 1, 11: 1, 19: 1, 43: 1, 67: 1, 163: 1}

# per-prime exponent of H1 of the l-adic image on l-power torsion
H1_PRIME_EXPONENTS = {2: 3, 3: 3, 5: 1, 7: 1, 11: 1}

# algebra exponents: l^m * Mat2 sits inside the group algebra
ALGEBRA_EXPONENTS_NONCM = {2: 4, 3: 2, 5: 2, 7: 1, 11: 1, 13: 1, 17: 1, 37: 1}
ALGEBRA_EXPONENTS_CM = {2: 3, 3: 3, 7: 1, 11: 1, 19: 1, 43: 1, 67: 1, 163: 1}

# reference values of v_l(lcm of exp PGL2(F_p), p in ISOGENY_PRIMES, p != l)
# at the primes used in the cohomology constant.  The recomputation below
# also yields v_19 = 1 (19 divides exp PGL2(F_37) = lcm(37, 36, 38)), but
# only primes with a nonzero entry in H1_PRIME_EXPONENTS enter the constant.
A_VALUATION_REFERENCE = {2: 4, 3: 2, 5: 1, 7: 1, 11: 0, 13: 0, 17: 0, 37: 0}

E_NONCM = 2**12 * 3**8 * 5**3 * 7**3 * 11**2
E_CM = 2**2 * 3
B_NONCM = ((2**24 * 3**16 * 5**6 * 7**6 * 11**4)
           * (2**4 * 3**2 * 5**2 * 7 * 11 * 13 * 17 * 37))
B_CM = (2**4 * 3**2) * (2**3 * 3**3 * 7 * 11 * 19 * 43 * 67 * 163)


def exp_pgl2(p: int) -> int:
    """Exponent of PGL2(F_p), by brute force over the projective elements.

    The closed form lcm(p, p-1, p+1) is asserted as a cross-check rather
    than assumed.
    """
    if not is_prime(p):
        raise ValueError("%d is not prime" % p)
    if p <= 3:
        result = _exp_pgl2_naive(p)
    else:
        squares = {x * x % p for x in range(p)}
        divisors_split = _divisors(p - 1)
        divisors_nonsplit = _divisors(p + 1)
        result = 1
        for m in _projective_reps(p):
            t = (m[0] + m[3]) % p
            d = (m[0] * m[3] - m[1] * m[2]) % p
            disc = (t * t - 4 * d) % p
            if disc == 0:
                o = 1 if is_scalar_mat(m) else p
            else:
                cands = divisors_split if disc in squares else divisors_nonsplit
                o = _projective_order_from(m, p, cands[-1])
            result = lcm(result, o)
    assert result == lcm(p, p - 1, p + 1)
    return result


def _exp_pgl2_naive(p):
    result = 1
    for m in _projective_reps(p):
        x = m
        o = 1
        while not is_scalar_mat(x):
            x = mat_mul(x, m, p)
            o += 1
        result = lcm(result, o)
    return result


def _projective_reps(p):
    reps = []
    for b in range(p):
        for c in range(p):
            for d in range(p):
                if (d - b * c) % p:
                    reps.append((1, b, c, d))
    for c in range(1, p):
        for d in range(p):
            reps.append((0, 1, c, d))
    return reps


def _divisors(n):
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def _projective_order_from(m, p, multiple):
    """Exact projective order given a known multiple of it."""
    o = multiple
    for q in factor_int(multiple):
        while o % q == 0:
            x = _proj_pow(m, o // q, p)
            if is_scalar_mat(x):
                o //= q
            else:
                break
    return o


def _proj_pow(m, e, p):
    r = (1, 0, 0, 1)
    while e:
        if e & 1:
            r = mat_mul(r, m, p)
        m = mat_mul(m, m, p)
        e >>= 1
    return r


def a_valuations(primes=None) -> dict:
    """v_l of a_l = lcm of exp PGL2(F_p) over the isogeny primes p != l."""
    if primes is None:
        primes = sorted(set(ISOGENY_PRIMES) | {19, 23, 29, 31})
    exps = {p: exp_pgl2(p) for p in ISOGENY_PRIMES}
    out = {}
    for ell in primes:
        a = 1
        for p in ISOGENY_PRIMES:
            if p != ell:
                a = lcm(a, exps[p])
        out[ell] = vp(a, ell)
    return out


def exponent_constant(n_table=None, check: bool = True) -> int:
    """The cohomology exponent constant, rebuilt from its three inputs:
    the per-prime H1 exponents n_l, the scalar valuations m_l = n_l + v_l(4)
    and the recomputed v_l(a_l).  With the default table the result must be
    2^12 * 3^8 * 5^3 * 7^3 * 11^2."""
    if n_table is None:
        n_table = H1_PRIME_EXPONENTS
    support = sorted(n_table)
    avals = a_valuations(support)
    m_table = {ell: n_table[ell] + vp(4, ell) for ell in support}
    e = combined_exponent_bound(n_table, m_table, {l: avals[l] for l in support})
    if check and n_table == H1_PRIME_EXPONENTS:
        assert e == E_NONCM, "exponent constant mismatch: %d" % e
    return e


def exponent_constant_improved_3() -> int:
    """Variant with the sharper 3-adic scalar input (1 mod 9 instead of
    1 mod 27), lowering v_3 of the constant from 8 to 6."""
    table = dict(H1_PRIME_EXPONENTS)
    table[3] = 2
    return exponent_constant(table, check=False)


def cm_exponent(h: int, d: int, ell: int, probe_level: int | None = None) -> int:
    """min over units a of v_l(a^(h*d) - 1), for CM unit-group order h and
    base-field degree d.

    The level is raised until two consecutive levels agree; a value below
    the level is exact.  For l - 1 > h*d a primitive root gives 0.
    """
    if h not in (2, 4, 6):
        raise ValueError("h must be one of 2, 4, 6")
    if not is_prime(ell):
        raise ValueError("%d is not prime" % ell)
    e = h * d
    prev = None
    level = probe_level or 1
    while True:
        mod = ell**level
        best = level
        for a in range(1, mod):
            if a % ell == 0:
                continue
            y = (pow(a, e, mod) - 1) % mod
            v = level if y == 0 else vp(y, ell)
            best = min(best, v)
            if best == 0:
                return 0
        if prev is not None and best == prev and best < level:
            return best
        prev = best
        level += 1


def kummer_bound(e: int, m_table: dict) -> int:
    """prod over l of l^(m_l + 2 v_l(e))."""
    primes = set(m_table) | set(factor_int(e))
    total = 1
    for ell in sorted(primes):
        total *= ell ** (m_table.get(ell, 0) + 2 * vp(e, ell))
    return total


def kummer_bound_noncm() -> int:
    b = kummer_bound(exponent_constant(), ALGEBRA_EXPONENTS_NONCM)
    assert b == B_NONCM
    return b


def kummer_bound_cm() -> int:
    b = kummer_bound(E_CM, ALGEBRA_EXPONENTS_CM)
    assert b == B_CM
    return b


def submodule_index_bound(d: int, n: int, ell: int) -> int:
    """l^(n + 2d): bound for the index of a stable submodule containing a
    vector of valuation d when the algebra reaches l^n * Mat2."""
    if d < 0 or n < 0:
        raise ValueError("exponents must be non-negative")
    return ell ** (n + 2 * d)


def generated_submodule_index(G: FiniteMatrixGroup, v) -> int:
    """Index in (Z/l^k)^2 of the smallest G-stable submodule containing v."""
    from ._chainring import SpanBasis

    fac = factor_int(G.modulus)
    if len(fac) != 1:
        raise ValueError("requires a prime-power modulus")
    ((ell, k),) = fac.items()
    span = SpanBasis(2, ell, k)
    span.insert(tuple(x % G.modulus for x in v))
    gens = list(dict.fromkeys(G.gens))
    changed = True
    while changed:
        changed = False
        for row in list(span.rows()):
            for g in gens:
                a, b, c, d = g
                w = ((a * row[0] + b * row[1]) % G.modulus,
                     (c * row[0] + d * row[1]) % G.modulus)
                if span.insert(w):
                    changed = True
    return G.modulus**2 // span.size()


@dataclass
class BoundProfile:
    isogeny_primes: tuple
    scalar_exponents: dict
    scalar_exponents_cm: dict
    h1_prime_exponents: dict
    algebra_exponents_noncm: dict
    algebra_exponents_cm: dict
    a_valuations: dict
    cohomology_constant: int
    cohomology_constant_cm: int
    kummer_bound_noncm: int
    kummer_bound_cm: int

    def as_dict(self):
        def fmt(n):
            return {str(p): e for p, e in sorted(factor_int(n).items())}

        return {
            "isogeny_primes": list(self.isogeny_primes),
            "s": {str(k): v for k, v in sorted(self.scalar_exponents.items())},
            "s_cm": {str(k): v for k, v in sorted(self.scalar_exponents_cm.items())},
            "n": {str(k): v for k, v in sorted(self.h1_prime_exponents.items())},
            "m_noncm": {str(k): v for k, v in sorted(self.algebra_exponents_noncm.items())},
            "m_cm": {str(k): v for k, v in sorted(self.algebra_exponents_cm.items())},
            "v_a": {str(k): v for k, v in sorted(self.a_valuations.items())},
            "e": fmt(self.cohomology_constant),
            "e_cm": fmt(self.cohomology_constant_cm),
            "B_noncm": fmt(self.kummer_bound_noncm),
            "B_cm": fmt(self.kummer_bound_cm),
        }


def bound_profile() -> BoundProfile:
    """All named constants, with the computed ones rebuilt on the spot."""
    return BoundProfile(
        isogeny_primes=ISOGENY_PRIMES,
        scalar_exponents=dict(SCALAR_EXPONENTS),
        scalar_exponents_cm=dict(SCALAR_EXPONENTS_CM),
        h1_prime_exponents=dict(H1_PRIME_EXPONENTS),
        algebra_exponents_noncm=dict(ALGEBRA_EXPONENTS_NONCM),
        algebra_exponents_cm=dict(ALGEBRA_EXPONENTS_CM),
        a_valuations=a_valuations(sorted(ISOGENY_PRIMES)),
        cohomology_constant=exponent_constant(),
        cohomology_constant_cm=E_CM,
        kummer_bound_noncm=kummer_bound_noncm(),
        kummer_bound_cm=kummer_bound_cm(),
    )
