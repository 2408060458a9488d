"""Dense univariate polynomial arithmetic and factorization.

Polynomials are coefficient lists, index = degree, trimmed of trailing
zeros.  Factorization over F_p uses squarefree + distinct-degree + seeded
equal-degree splitting; factorization over Z lifts a good modular
factorization past the coefficient bound and recombines subsets, pruned by
degree sets from auxiliary primes.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import gcd, isqrt

from ._chainring import is_prime

DEFAULT_SEED = 0x5EED
DEFAULT_DEGREE_CAP = 30


class FactorCapExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# generic dense arithmetic

def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def deg(f) -> int:
    return len(f) - 1


def add(f, g):
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)
                 for i in range(n)])


def sub(f, g):
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)
                 for i in range(n)])


def mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out)


def scale(f, c):
    if c == 0:
        return []
    return [a * c for a in f]


def evaluate(f, x):
    r = 0
    for a in reversed(f):
        r = r * x + a
    return r


def derivative(f):
    return trim([i * a for i, a in enumerate(f)][1:])


def content(f) -> int:
    c = 0
    for a in f:
        c = gcd(c, a)
    return c or 1


def primitive_part(f):
    c = content(f)
    return [a // c for a in f]


def divides_exactly(g, f):
    """Quotient f/g in Z[x] if it exists, else None."""
    if not g:
        return None
    fq = [Fraction(a) for a in f]
    q = [Fraction(0)] * (len(f) - len(g) + 1) if len(f) >= len(g) else []
    lc = Fraction(g[-1])
    while len(fq) >= len(g) and trim(fq):
        fq = trim(fq)
        if len(fq) < len(g):
            break
        c = fq[-1] / lc
        d = len(fq) - len(g)
        q[d] = c
        for i, a in enumerate(g):
            fq[d + i] -= c * a
        fq = fq[:-1]
    if trim(fq):
        return None
    out = []
    for c in q:
        if c.denominator != 1:
            return None
        out.append(int(c))
    return trim(out)


def gcd_z(f, g):
    """Primitive gcd in Z[x], via the monic Euclid algorithm over Q."""
    a = [Fraction(x) for x in trim(f)]
    b = [Fraction(x) for x in trim(g)]
    while b:
        r = list(a)
        while len(r) >= len(b) and trim(r):
            r = trim(r)
            if len(r) < len(b):
                break
            c = r[-1] / b[-1]
            d = len(r) - len(b)
            for i, x in enumerate(b):
                r[d + i] -= c * x
            r = r[:-1]
        a, b = b, trim(r)
    if not a:
        return []
    from math import lcm

    den = 1
    for c in a:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in a]
    p = primitive_part(ints)
    if p[-1] < 0:
        p = [-x for x in p]
    return p


# ---------------------------------------------------------------------------
# arithmetic mod p

def pm(f, p):
    return trim([a % p for a in f])


def pm_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return trim(out)


def pm_divmod(f, g, p):
    f = pm(f, p)
    g = pm(g, p)
    if not g:
        raise ZeroDivisionError
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    r = list(f)
    while len(r) >= len(g) and trim(r):
        r = trim(r)
        if len(r) < len(g):
            break
        c = r[-1] * inv % p
        d = len(r) - len(g)
        q[d] = c
        for i, a in enumerate(g):
            r[d + i] = (r[d + i] - c * a) % p
        r = r[:-1]
    return trim(q), trim(r)


def pm_gcd(f, g, p):
    a, b = pm(f, p), pm(g, p)
    while b:
        a, b = b, pm_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def pm_gcdex(f, g, p):
    """(d, s, t) with s*f + t*g = d (monic gcd) over F_p."""
    r0, r1 = pm(f, p), pm(g, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = pm_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, pm(sub(s0, mul(q, s1)), p)
        t0, t1 = t1, pm(sub(t0, mul(q, t1)), p)
    if r0:
        inv = pow(r0[-1], -1, p)
        r0 = [c * inv % p for c in r0]
        s0 = [c * inv % p for c in s0]
        t0 = [c * inv % p for c in t0]
    return r0, s0, t0


def pm_pow_mod(base, e, modpoly, p):
    result = [1]
    base = pm_divmod(base, modpoly, p)[1]
    while e:
        if e & 1:
            result = pm_divmod(pm_mul(result, base, p), modpoly, p)[1]
        base = pm_divmod(pm_mul(base, base, p), modpoly, p)[1]
        e >>= 1
    return result


def pm_monic(f, p):
    f = pm(f, p)
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


# ---------------------------------------------------------------------------
# factorization over F_p

def _squarefree_parts(f, p):
    """[(monic squarefree factor, multiplicity)] with the factors pairwise
    coprime and prod factor^mult = f/lc."""
    f = pm_monic(f, p)
    out = {}

    def record(poly, m):
        if deg(poly) > 0:
            key = tuple(poly)
            out[key] = out.get(key, 0) + m

    def decompose(f, e):
        while deg(f) > 0:
            df = pm(derivative(f), p)
            if not df:
                # f = h(x^p); p-th roots of coefficients are themselves
                h = [f[i] for i in range(0, len(f), p)]
                f = trim(h)
                e *= p
                continue
            g = pm_gcd(f, df, p)
            w = pm_divmod(f, g, p)[0]  # distinct factors of multiplicity
            i = 1                      # prime to p, each once
            while deg(w) > 0:
                y = pm_gcd(w, g, p)
                z = pm_divmod(w, y, p)[0]
                record(pm_monic(z, p), e * i)
                w = y
                if deg(y) > 0:
                    g = pm_divmod(g, y, p)[0]
                i += 1
            # g is now a p-th power
            f = g
            if deg(f) > 0:
                h = [f[i] for i in range(0, len(f), p)]
                f = trim(h)
                e *= p
        return

    decompose(f, 1)
    return [(list(k), m) for k, m in sorted(out.items())]


def _distinct_degree(f, p):
    """[(product of the irreducible factors of degree d, d)] for monic
    squarefree f."""
    out = []
    h = [0, 1]  # x
    g = list(f)
    d = 0
    while deg(g) >= 1:
        d += 1
        if 2 * d > deg(g):
            out.append((g, deg(g)))
            break
        h = pm_pow_mod(h, p, g, p)
        gd = pm_gcd(sub(h, [0, 1]), g, p)
        if deg(gd) > 0:
            out.append((gd, d))
            g = pm_divmod(g, gd, p)[0]
            h = pm_divmod(h, g, p)[1]
    return out


def _equal_degree(f, d, p, rng):
    """Split a monic squarefree product of degree-d irreducibles (odd p)."""
    n = deg(f)
    if n == d:
        return [f]
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        a = trim(a)
        if deg(a) < 1:
            continue
        g = pm_gcd(a, f, p)
        if 0 < deg(g) < n:
            pass
        else:
            b = pm_pow_mod(a, (p**d - 1) // 2, f, p)
            g = pm_gcd(sub(b, [1]), f, p)
        if 0 < deg(g) < n:
            h = pm_divmod(f, g, p)[0]
            return _equal_degree(g, d, p, rng) + _equal_degree(h, d, p, rng)


def factor_mod_p(f, p, seed: int = DEFAULT_SEED):
    """Complete factorization over F_p: [(monic factor, multiplicity)],
    sorted.  The leading coefficient is dropped (factors are monic)."""
    if p == 2 or not is_prime(p):
        raise ValueError("factor_mod_p requires an odd prime")
    f = pm(f, p)
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    if f[-1] % p == 0:
        raise ValueError("p divides the leading coefficient")
    rng = random.Random(seed)
    factors = []
    for sqfree, mult in _squarefree_parts(f, p):
        for block, d in _distinct_degree(sqfree, p):
            for irr in _equal_degree(block, d, p, rng):
                factors.append((tuple(irr), mult))
    factors.sort(key=lambda fm: (deg(list(fm[0])), fm[0], fm[1]))
    return factors


# ---------------------------------------------------------------------------
# Hensel lifting

def _hensel_step(f, g, h, s, t, m):
    """One quadratic step: from f = g*h and s*g + t*h = 1 (mod m) to the
    same relations mod m^2, with h monic."""
    m2 = m * m

    def red(x):
        return trim([c % m2 for c in x])

    def bal_mul(a, b):
        return red(mul(a, b))

    e = red(sub(f, mul(g, h)))
    q, r = _divmod_mod(bal_mul(s, e), h, m2)
    g1 = red(add(add(g, bal_mul(t, e)), mul(q, g)))
    h1 = red(add(h, r))
    b = red(sub(add(bal_mul(s, g1), bal_mul(t, h1)), [1]))
    c, d = _divmod_mod(bal_mul(s, b), h1, m2)
    s1 = red(sub(s, d))
    t1 = red(sub(sub(t, bal_mul(t, b)), mul(c, g1)))
    assert not red(sub(f, mul(g1, h1))), "Hensel step lost the factorization"
    return g1, h1, s1, t1


def _divmod_mod(f, g, m):
    """Division mod m by a polynomial with unit leading coefficient."""
    f = trim([c % m for c in f])
    g = trim([c % m for c in g])
    inv = pow(g[-1], -1, m)
    q = [0] * max(len(f) - len(g) + 1, 0)
    r = list(f)
    while len(r) >= len(g) and trim(r):
        r = trim(r)
        if len(r) < len(g):
            break
        c = r[-1] * inv % m
        d = len(r) - len(g)
        q[d] = c
        for i, a in enumerate(g):
            r[d + i] = (r[d + i] - c * a) % m
        r = r[:-1]
    return trim(q), trim(r)


def hensel_lift(f, factors, p, target):
    """Lift the monic factorization f = prod(factors) mod p (f monic over Z,
    factors monic and pairwise coprime mod p) to a modulus >= target.

    Returns (modulus, lifted monic factors).
    """
    m = p
    while m < target:
        m = m * m
    return m, _lift_list(f, [pm(fac, p) for fac in factors], p, m)


def _lift_list(f, factors, p, target):
    if len(factors) == 1:
        return [[c % target for c in trim(f)]]
    half = len(factors) // 2
    left, right = factors[:half], factors[half:]
    G = [1]
    for fac in left:
        G = pm_mul(G, fac, p)
    H = [1]
    for fac in right:
        H = pm_mul(H, fac, p)
    d, s, t = pm_gcdex(G, H, p)
    if deg(d) != 0:
        raise ValueError("modular factors are not coprime")
    m = p
    g, h = G, H
    while m < target:
        g, h, s, t = _hensel_step([c % (m * m) for c in f], g, h, s, t, m)
        m = m * m
    return _lift_list(g, left, p, m) + _lift_list(h, right, p, m)


# ---------------------------------------------------------------------------
# factorization over Z

def _balanced(c, m):
    c %= m
    return c - m if c > m // 2 else c


def _mignotte_target(f):
    n = deg(f)
    norm2 = isqrt(sum(c * c for c in f)) + 1
    bound = (2**n) * norm2 * max(abs(f[-1]), 1)
    return 2 * bound + 1


def _good_primes(f, want: int):
    out = []
    p = 3
    while len(out) < want:
        if is_prime(p) and f[-1] % p:
            fp = pm(f, p)
            dfp = pm(derivative(f), p)
            if deg(pm_gcd(fp, dfp, p)) == 0:
                out.append(p)
        p += 2
        if p > 10000:
            raise FactorCapExceeded("no good prime found below 10000")
    return out


def _degree_set(degrees):
    """All subset sums of the modular factor degrees."""
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


def _zassenhaus_monic(f, seed):
    """Irreducible monic factors of a monic squarefree integer polynomial."""
    n = deg(f)
    if n <= 1:
        return [list(f)]
    primes = _good_primes(f, 3)
    fact_by_p = {p: [list(fac) for fac, _ in factor_mod_p(f, p, seed)] for p in primes}
    allowed = None
    for p, facs in fact_by_p.items():
        s = _degree_set([deg(fac) for fac in facs])
        allowed = s if allowed is None else (allowed & s)
    best_p = min(primes, key=lambda p: len(fact_by_p[p]))
    modular = fact_by_p[best_p]
    if len(modular) == 1:
        return [list(f)]
    if len(modular) > 18:
        raise FactorCapExceeded("recombination too large: %d modular factors"
                                % len(modular))
    m, lifted = hensel_lift(f, modular, best_p, _mignotte_target(f))
    result = []
    remaining = list(range(len(lifted)))
    f_cur = list(f)
    size = 1
    while 2 * size <= len(remaining):
        found = False
        for combo in itertools.combinations(remaining, size):
            dsum = sum(deg(lifted[i]) for i in combo)
            if dsum not in allowed:
                continue
            g = [1]
            for i in combo:
                g = [c % m for c in mul(g, lifted[i])]
            g = trim([_balanced(c, m) for c in g])
            if abs(g[0]) > 0 and f_cur[0] % g[0] != 0:
                continue
            q = divides_exactly(g, f_cur)
            if q is not None:
                result.append(g)
                f_cur = q
                remaining = [i for i in remaining if i not in combo]
                found = True
                break
        if not found:
            size += 1
    if deg(f_cur) > 0:
        result.append(f_cur)
    result.sort(key=lambda g: (deg(g), g))
    return result


def factor_over_z(f, degree_cap: int = DEFAULT_DEGREE_CAP, seed: int = DEFAULT_SEED):
    """Irreducible factorization of a primitive integer polynomial.

    Returns a list of primitive irreducible factors with positive leading
    coefficients, repeated with multiplicity; their product is f up to the
    sign of the leading coefficient (folded into the first factor).
    """
    f = trim(f)
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    if content(f) != 1:
        raise ValueError("input must be primitive")
    if deg(f) > degree_cap:
        raise FactorCapExceeded(
            "degree %d beyond configured factorization range %d"
            % (deg(f), degree_cap))
    if deg(f) < 1:
        return []
    sign = 1 if f[-1] > 0 else -1
    work = [sign * c for c in f]
    # squarefree part
    g = gcd_z(work, derivative(work))
    sqfree = divides_exactly(g, work) if deg(g) > 0 else list(work)
    sqfree = primitive_part(sqfree)
    lc = sqfree[-1]
    if lc == 1:
        monic_factors = _zassenhaus_monic(sqfree, seed)
        irreducibles = [primitive_part(fac) for fac in monic_factors]
    else:
        # substitute to a monic model: F(x) = lc^(n-1) * f(x/lc)
        n = deg(sqfree)
        F = [sqfree[i] * lc ** (n - 1 - i) for i in range(n)] + [1]
        assert F[-1] == 1
        monic_factors = _zassenhaus_monic(F, seed)
        irreducibles = []
        for fac in monic_factors:
            d = deg(fac)
            back = [fac[i] * lc**i for i in range(d + 1)]
            back = primitive_part(back)
            if back[-1] < 0:
                back = [-c for c in back]
            irreducibles.append(back)
    # multiplicities against the original polynomial
    out = []
    rest = list(work)
    for fac in sorted(irreducibles, key=lambda g: (deg(g), g)):
        while True:
            q = divides_exactly(fac, rest)
            if q is None:
                break
            out.append(list(fac))
            rest = q
    if deg(rest) > 0:
        raise RuntimeError("factorization incomplete")
    if sign < 0 and out:
        out[0] = [-c for c in out[0]]
    return out
