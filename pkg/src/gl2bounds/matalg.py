"""The subalgebra of Mat2(Z/l^k) spanned by a matrix group, and the least
m with l^m * Mat2 inside it.

The span is saturated from {Id} and the generators by repeated left and
right generator multiplication of a Howell basis; products of generators
generate the same algebra as the whole group, so no element closure is
needed.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._chainring import SpanBasis, factor_int
from .matgrp import FiniteMatrixGroup, IDENTITY, mat_mul

_ELEMENTARY = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))


@dataclass
class AlgebraSpan:
    modulus: int
    prime: int
    level: int
    basis: tuple
    min_exponent: int  # least m <= level with l^m*Mat2 inside; level = only 0

    @property
    def min_m(self):
        """None when only the zero multiple of Mat2 is contained."""
        return self.min_exponent if self.min_exponent < self.level else None

    def contains(self, mat) -> bool:
        span = SpanBasis(4, self.prime, self.level)
        for row in self.basis:
            span.insert(row)
        return span.contains(mat)

    def as_dict(self):
        return {"basis": [list(r) for r in self.basis],
                "min_m": self.min_m,
                "min_exponent": self.min_exponent}


def algebra_span(G: FiniteMatrixGroup) -> AlgebraSpan:
    """Additive span of the multiplicative closure of the generators."""
    fac = factor_int(G.modulus)
    if len(fac) != 1:
        raise ValueError("algebra span requires a prime-power modulus")
    ((ell, k),) = fac.items()
    span = SpanBasis(4, ell, k)
    span.insert(IDENTITY)
    for g in G.gens:
        span.insert(g)
    gens = list(dict.fromkeys(G.gens))
    changed = True
    while changed:
        changed = False
        for row in list(span.rows()):
            for g in gens:
                if span.insert(mat_mul(g, row, G.modulus)):
                    changed = True
                if span.insert(mat_mul(row, g, G.modulus)):
                    changed = True
    m = 0
    for E in _ELEMENTARY:
        e = 0
        while e < k and not span.contains(tuple(ell**e * x for x in E)):
            e += 1
        m = max(m, e)
    return AlgebraSpan(G.modulus, ell, k, tuple(span.rows()), m)


def verify_reducible_bound(G: FiniteMatrixGroup, m_isogeny: int) -> bool:
    """For odd l and diag(1,-1) in G with off-diagonal witnesses of
    valuation <= m_isogeny, the span must reach l^m_isogeny * Mat2."""
    fac = factor_int(G.modulus)
    if len(fac) != 1 or 2 in fac:
        raise ValueError("requires an odd prime-power modulus")
    ((ell, k),) = fac.items()
    if (1, 0, 0, G.modulus - 1) not in G.element_set:
        raise ValueError("hypotheses not satisfied: diag(1,-1) missing")
    if m_isogeny + 1 <= k:
        # valuation <= m_isogeny means nonzero modulo l^(m_isogeny+1);
        # for m_isogeny >= k every entry qualifies (v(0) is reported as k)
        bound = ell ** (m_isogeny + 1)
        has_lower = any(m[2] % bound for m in G.elements)
        has_upper = any(m[1] % bound for m in G.elements)
        if not (has_lower and has_upper):
            raise ValueError("hypotheses not satisfied: off-diagonal witnesses missing")
    return algebra_span(G).min_exponent <= m_isogeny


def _conjugacy_witness(G: FiniteMatrixGroup, target) -> bool:
    """Is some element of G conjugate to the target over Z/2^k?  Solved by
    the linear equations M P = P T with det(P) a unit."""
    mod = G.modulus
    T = tuple(x % mod for x in target)
    from ._chainring import kernel

    for M in G.elements:
        if (M[0] + M[3]) % mod != (T[0] + T[3]) % mod:
            continue
        if (M[0] * M[3] - M[1] * M[2]) % mod != (T[0] * T[3] - T[1] * T[2]) % mod:
            continue
        # rows of M*P - P*T = 0 in the unknowns p = (p0, p1, p2, p3)
        a, b, c, d = M
        e, f, g, h = T
        rows = [
            ((a - e) % mod, (-g) % mod, b % mod, 0),
            ((-f) % mod, (a - h) % mod, 0, b % mod),
            (c % mod, 0, (d - e) % mod, (-g) % mod),
            (0, c % mod, (-f) % mod, (d - h) % mod),
        ]
        fac = factor_int(mod)
        ((ell, k),) = fac.items()
        gens = kernel(rows, 4, ell, k)
        if not gens:
            continue
        # search the solution module for a unit determinant
        import itertools

        ranges = [range(ell**e_) for (_, e_) in gens]
        for coeffs in itertools.product(*ranges):
            p = [0, 0, 0, 0]
            for cfe, (vec, _) in zip(coeffs, gens):
                for i in range(4):
                    p[i] = (p[i] + cfe * vec[i]) % mod
            if (p[0] * p[3] - p[1] * p[2]) % 2 == 1:
                return True
    return False


def verify_two_adic_bound(G: FiniteMatrixGroup, m: int) -> bool:
    """2-adic variant: an element conjugate to diag(1,-1) or [[1,1],[0,-1]]
    must force the span to reach 2^(m+1) * Mat2."""
    fac = factor_int(G.modulus)
    if fac.keys() != {2}:
        raise ValueError("requires a power-of-two modulus")
    mod = G.modulus
    if not (_conjugacy_witness(G, (1, 0, 0, mod - 1))
            or _conjugacy_witness(G, (1, 1, 0, mod - 1))):
        raise ValueError("hypothesis shape not found: no reflection-type element")
    return algebra_span(G).min_exponent <= m + 1
