"""H^1(G, M) for finite matrix groups acting on M = (Z/q)^2.

Cocycles are parameterised by their values on a generating set: the value on
any element follows by expanding xi(g*h) = xi(g) + g.xi(h) along a breadth
first search, and every product relation that closes a loop contributes
linear constraints.  This keeps the linear algebra at 2*#gens unknowns over
the chain ring Z/l^k regardless of the group order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd, lcm

from ._chainring import (SpanBasis, factor_int, kernel, merge_invariant_factors,
                         quotient_invariants, residue_valuation, solve, vp)
from .matgrp import (CapExceeded, FiniteMatrixGroup, IDENTITY, mat_mul, mat_pow)

DEFAULT_H1_CAP = 5000


class GModule:
    """(Z/q)^2 with the natural GL2 action through reduction mod q."""

    def __init__(self, modulus: int):
        if modulus < 1:
            raise ValueError("module modulus must be positive")
        self.modulus = modulus

    @classmethod
    def ell_part(cls, N: int, ell: int) -> "GModule":
        return cls(ell ** vp(N, ell))

    @classmethod
    def torsion(cls, ell: int, m: int, ambient: int) -> "GModule":
        """The l^m-torsion submodule M[l^m] inside (Z/ambient)^2; it is the
        same G-module as (Z/l^m)^2 via division by ambient/l^m."""
        if ambient % ell**m:
            raise ValueError("l^m must divide the ambient modulus")
        return cls(ell**m)

    def __repr__(self):
        return "GModule((Z/%d)^2)" % self.modulus


@dataclass
class CohomologyResult:
    invariant_factors: tuple
    exponent: int
    num_cocycles: int
    num_coboundaries: int

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def as_dict(self):
        return {"invariant_factors": list(self.invariant_factors),
                "exponent": self.exponent}


class _MatrixGroupView:
    """Adapter presenting a FiniteMatrixGroup to the cocycle solver."""

    def __init__(self, G: FiniteMatrixGroup):
        self.G = G
        self.identity = IDENTITY
        self.generators = list(dict.fromkeys(G.gens))
        self.size = G.order

    def mult(self, a, b):
        return mat_mul(a, b, self.G.modulus)

    def action(self, g, q):
        return tuple(x % q for x in g)


class _QuotientView:
    """G/K for a normal subgroup K acting trivially on the module."""

    def __init__(self, G: FiniteMatrixGroup, kernel_elements):
        mod = G.modulus
        kset = set(kernel_elements)
        elems = G.elements
        coset_of = {}
        reps = []
        for m in elems:
            if m in coset_of:
                continue
            rep_id = len(reps)
            reps.append(m)
            for x in kset:
                coset_of[mat_mul(m, x, mod)] = rep_id
        self.mod = mod
        self.reps = reps
        self.coset_of = coset_of
        self.identity = coset_of[IDENTITY]
        self.generators = list(dict.fromkeys(coset_of[g] for g in G.gens))
        self.size = len(reps)

    def mult(self, a, b):
        return self.coset_of[mat_mul(self.reps[a], self.reps[b], self.mod)]

    def action(self, g, q):
        return tuple(x % q for x in self.reps[g])


def _h1_prime_power(view, ell: int, k: int) -> CohomologyResult:
    """H^1 of the viewed group on (Z/l^k)^2."""
    q = ell**k
    gens = view.generators
    ngen = len(gens)
    m = 2 * ngen
    acts = [view.action(g, q) for g in gens]

    # generator value blocks: xi(h_j) = (u_{2j}, u_{2j+1})
    blocks = []
    for j in range(ngen):
        row0 = [0] * m
        row1 = [0] * m
        row0[2 * j] = 1
        row1[2 * j + 1] = 1
        blocks.append((tuple(row0), tuple(row1)))

    L = {view.identity: (tuple([0] * m), tuple([0] * m))}
    relations = SpanBasis(m, ell, k)
    seen_rows = set()
    queue = deque([view.identity])
    while queue:
        g = queue.popleft()
        Lg = L[g]
        ag = view.action(g, q)
        a, b, c, d = ag
        for j, h in enumerate(gens):
            Bh = blocks[j]
            r0 = tuple((x + a * y0 + b * y1) % q
                       for x, y0, y1 in zip(Lg[0], Bh[0], Bh[1]))
            r1 = tuple((x + c * y0 + d * y1) % q
                       for x, y0, y1 in zip(Lg[1], Bh[0], Bh[1]))
            f = view.mult(g, h)
            if f not in L:
                L[f] = (r0, r1)
                queue.append(f)
            else:
                Lf = L[f]
                for rnew, rold in ((r0, Lf[0]), (r1, Lf[1])):
                    row = tuple((x - y) % q for x, y in zip(rnew, rold))
                    if any(row) and row not in seen_rows:
                        seen_rows.add(row)
                        relations.insert(row)
    if len(L) != view.size:
        raise RuntimeError("generators do not generate the declared group")

    cocycle_gens = kernel(relations.rows(), m, ell, k)
    orders = [ell**e for (_, e) in cocycle_gens]
    num_cocycles = 1
    for o in orders:
        num_cocycles *= o

    # coboundaries xi_a(h) = h.a - a for a = e1, e2
    cob = []
    for a_vec in ((1, 0), (0, 1)):
        u = []
        for ag in acts:
            a, b, c, d = ag
            u.append((a * a_vec[0] + b * a_vec[1] - a_vec[0]) % q)
            u.append((c * a_vec[0] + d * a_vec[1] - a_vec[1]) % q)
        cob.append(tuple(u))

    # fixed submodule size gives the coboundary count |M| / |M^G|
    fix_rows = []
    for ag in acts:
        a, b, c, d = ag
        fix_rows.append(((a - 1) % q, b % q))
        fix_rows.append((c % q, (d - 1) % q))
    fixed = kernel(fix_rows, 2, ell, k)
    num_fixed = 1
    for (_, e) in fixed:
        num_fixed *= ell**e
    num_coboundaries = q * q // num_fixed

    # express each coboundary in cocycle-generator coordinates
    if cocycle_gens:
        zmat = [[g[i] for (g, _) in cocycle_gens] for i in range(m)]
        rels = []
        for b_vec in cob:
            t = solve(zmat, list(b_vec), len(cocycle_gens), ell, k)
            if t is None:
                raise RuntimeError("coboundary outside the cocycle module")
            rels.append(t)
        factors = quotient_invariants(orders, rels)
    else:
        factors = []

    h1_order = 1
    for d in factors:
        h1_order *= d
    assert h1_order * num_coboundaries == num_cocycles
    exponent = max(factors) if factors else 1
    return CohomologyResult(tuple(factors), exponent, num_cocycles, num_coboundaries)


def h1(G: FiniteMatrixGroup, M: GModule, cap: int = DEFAULT_H1_CAP) -> CohomologyResult:
    """Structure of Z^1(G, M)/B^1(G, M), one prime of M at a time."""
    if M.modulus == 1:
        return CohomologyResult((), 1, 1, 1)
    if G.modulus % M.modulus:
        raise ValueError("module modulus must divide the group modulus")
    if G.order > cap:
        raise CapExceeded("group too large for direct H1: %d > cap %d"
                          % (G.order, cap))
    view = _MatrixGroupView(G)
    return _h1_view(view, M.modulus)


def _h1_view(view, module_modulus: int) -> CohomologyResult:
    per_prime = []
    for ell, k in sorted(factor_int(module_modulus).items()):
        per_prime.append(_h1_prime_power(view, ell, k))
    factors = merge_invariant_factors([list(r.invariant_factors) for r in per_prime])
    exponent = 1
    zc = 1
    bc = 1
    for r in per_prime:
        exponent = lcm(exponent, r.exponent)
        zc *= r.num_cocycles
        bc *= r.num_coboundaries
    return CohomologyResult(tuple(factors), exponent, zc, bc)


def h1_brute_force(G: FiniteMatrixGroup, M: GModule) -> CohomologyResult:
    """Independent oracle: enumerate all maps G -> M (tiny groups only)."""
    q = M.modulus
    elems = [m for m in G.elements if m != IDENTITY]
    n = len(elems)
    if (q * q) ** n > 4_000_000:
        raise CapExceeded("brute force infeasible")
    vecs = [(x, y) for x in range(q) for y in range(q)]
    index = {m: i for i, m in enumerate(elems)}

    def act(g, v):
        a, b, c, d = (x % q for x in g)
        return ((a * v[0] + b * v[1]) % q, (c * v[0] + d * v[1]) % q)

    import itertools

    cocycles = []
    for assignment in itertools.product(vecs, repeat=n):
        def xi(m, assignment=assignment):
            if m == IDENTITY:
                return (0, 0)
            return assignment[index[m]]

        ok = True
        for g in G.elements:
            for h in G.elements:
                gh = mat_mul(g, h, G.modulus)
                want = xi(gh)
                got = act(g, xi(h))
                got = ((got[0] + xi(g)[0]) % q, (got[1] + xi(g)[1]) % q)
                if want != got:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            cocycles.append(assignment)
    cobs = set()
    for a_vec in vecs:
        cobs.add(tuple(tuple((x - y) % q for x, y in zip(act(m, a_vec), a_vec))
                       for m in elems))
    num_z, num_b = len(cocycles), len(cobs)
    # exponent: largest order of a class in Z1/B1
    cset = set(cocycles)
    exponent = 1
    for z in cocycles:
        e = 1
        cur = z
        while cur not in cobs:
            cur = tuple(tuple((x + y) % q for x, y in zip(u, v))
                        for u, v in zip(cur, z))
            e += 1
        exponent = lcm(exponent, e)
    del cset
    order = num_z // num_b
    return CohomologyResult((), exponent if order > 1 else 1, num_z, num_b)


def sah_multiplier(G: FiniteMatrixGroup, M: GModule) -> dict:
    """Per prime l | q: min of v_l(lambda - 1) over scalars lambda*Id in G.

    The l-part of the H^1 exponent divides l to this value because central
    scalars act as multiplication by lambda - 1 on cohomology.
    """
    scalars = G.scalar_subgroup()
    out = {}
    for ell, k in sorted(factor_int(M.modulus).items()):
        best = k
        for lam in scalars:
            best = min(best, residue_valuation((lam - 1) % ell**k, ell, k))
        out[ell] = best
    return out


def combined_exponent_bound(n_map: dict, m_map: dict, a_map: dict) -> int:
    """prod over primes of l^(n_l + m_l + v_l(a_l)); maps finitely supported."""
    primes = set(n_map) | set(m_map) | set(a_map)
    total = 1
    for ell in primes:
        e = n_map.get(ell, 0) + m_map.get(ell, 0) + a_map.get(ell, 0)
        if e < 0:
            raise ValueError("negative exponent for prime %d" % ell)
        total *= ell**e
    return total


def torsion_injection_order(G: FiniteMatrixGroup, N: int) -> int:
    """|F / N*F| for the fixed submodule F of G acting on (Z/N^2)^2.

    Reported for comparison with torsion floors; not asserted against any
    statement about infinite-level images.
    """
    if G.modulus != N * N:
        raise ValueError("group must be given modulo N^2")
    total = 1
    for ell, k2 in sorted(factor_int(N * N).items()):
        q = ell**k2
        a = k2 // 2  # v_ell(N)
        rows = []
        for g in G.gens:
            ag = tuple(x % q for x in g)
            rows.append(((ag[0] - 1) % q, ag[1]))
            rows.append((ag[2], (ag[3] - 1) % q))
        gens_f = kernel(rows, 2, ell, k2)
        for (_, e) in gens_f:
            total *= ell ** min(e, a)
    return total


def congruence_power_kernel(G: FiniteMatrixGroup, ell: int, m: int):
    """The normal subgroup generated by {g^(l^m) : g = Id mod l^m}."""
    q = ell**m
    mod = G.modulus
    power_set = set()
    for g in G.elements:
        if g[1] % q == 0 and g[2] % q == 0 and (g[0] - 1) % q == 0 and (g[3] - 1) % q == 0:
            power_set.add(mat_pow(g, q, mod))
    from .matgrp import close_generators

    return close_generators(sorted(power_set), mod)


def h1_via_congruence_quotient(G: FiniteMatrixGroup, M: GModule) -> CohomologyResult:
    """H^1 computed through the quotient by <g^(l^m) : g = Id mod l^m>,
    for M killed by l^m; the kernel acts trivially so the answer agrees
    with the direct computation."""
    fac = factor_int(M.modulus)
    if len(fac) != 1:
        raise ValueError("quotient route expects a prime-power module")
    ((ell, m),) = fac.items()
    K = congruence_power_kernel(G, ell, m)
    view = _QuotientView(G, K)
    return _h1_view(view, M.modulus)
