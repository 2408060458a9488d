"""Finite subgroups of GL2(Z/N): closure, reduction, Cartan subgroups and
normalizers, the Dickson trichotomy, and small-order subgroup enumeration.

Matrices are packed row-major 4-tuples (a, b, c, d) of canonical residues;
groups keep their full element list in lexicographic order, so every
operation is deterministic.
"""

from __future__ import annotations

from collections import deque

from ._chainring import factor_int, inv_mod, is_prime

DEFAULT_CLOSURE_CAP = 1 << 22


class CapExceeded(RuntimeError):
    """A configured computational cap would be exceeded."""


IDENTITY = (1, 0, 0, 1)


def mat_mul(m, n, mod):
    a, b, c, d = m
    e, f, g, h = n
    return ((a * e + b * g) % mod, (a * f + b * h) % mod,
            (c * e + d * g) % mod, (c * f + d * h) % mod)


def mat_det(m, mod):
    return (m[0] * m[3] - m[1] * m[2]) % mod


def mat_inv(m, mod):
    a, b, c, d = m
    di = inv_mod(mat_det(m, mod), mod)
    return ((d * di) % mod, (-b * di) % mod, (-c * di) % mod, (a * di) % mod)


def mat_pow(m, n, mod):
    if n < 0:
        return mat_pow(mat_inv(m, mod), -n, mod)
    r = (1 % mod, 0, 0, 1 % mod)
    while n:
        if n & 1:
            r = mat_mul(r, m, mod)
        m = mat_mul(m, m, mod)
        n >>= 1
    return r


def mat_order(m, mod):
    x = m
    n = 1
    while x != IDENTITY:
        x = mat_mul(x, m, mod)
        n += 1
    return n


def is_scalar_mat(m):
    return m[1] == 0 and m[2] == 0 and m[0] == m[3]


def normalize_gen(entries, mod):
    if len(entries) != 4:
        raise ValueError("a generator needs 4 entries, got %r" % (entries,))
    return tuple(x % mod for x in entries)


def close_generators(gens, mod, cap: int = DEFAULT_CLOSURE_CAP):
    """Full element closure of a generator list, in lexicographic order."""
    from math import gcd

    gens = [normalize_gen(g, mod) for g in gens]
    full = []
    for g in gens:
        if gcd(mat_det(g, mod), mod) != 1:
            raise ValueError("singular generator %r modulo %d" % (g, mod))
        full.append(g)
        full.append(mat_inv(g, mod))
    seen = {IDENTITY if mod > 1 else (0, 0, 0, 0)}
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        for g in full:
            y = mat_mul(x, g, mod)
            if y not in seen:
                if len(seen) >= cap:
                    raise CapExceeded("closure too large: cap %d exceeded" % cap)
                seen.add(y)
                queue.append(y)
    return tuple(sorted(seen))


class FiniteMatrixGroup:
    """A finite subgroup of GL2(Z/N) given by generators.

    The element closure is computed on demand and cached; the canonical
    element order is lexicographic on the packed entries.
    """

    def __init__(self, modulus: int, gens, elements=None, cap: int = DEFAULT_CLOSURE_CAP):
        self.modulus = modulus
        self.gens = tuple(normalize_gen(g, modulus) for g in gens)
        self.cap = cap
        self._elements = tuple(sorted(elements)) if elements is not None else None
        self._elem_set = set(self._elements) if elements is not None else None
        self._scalars = None
        self._dets = None

    @classmethod
    def from_elements(cls, modulus: int, elements, gens=None):
        elements = [normalize_gen(m, modulus) for m in elements]
        if gens is None:
            gens = find_generators(elements, modulus)
        return cls(modulus, gens, elements=elements)

    @property
    def elements(self):
        if self._elements is None:
            self._elements = close_generators(self.gens, self.modulus, self.cap)
            self._elem_set = set(self._elements)
        return self._elements

    @property
    def element_set(self):
        self.elements
        return self._elem_set

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, m):
        return normalize_gen(m, self.modulus) in self.element_set

    def __len__(self):
        return self.order

    def __repr__(self):
        return "FiniteMatrixGroup(mod %d, %d gens%s)" % (
            self.modulus, len(self.gens),
            "" if self._elements is None else ", order %d" % len(self._elements))

    def scalar_subgroup(self):
        """All units lambda with lambda*Id in the group."""
        if self._scalars is None:
            s = self.element_set
            self._scalars = tuple(l for l in range(1, self.modulus)
                                  if (l, 0, 0, l) in s)
        return self._scalars

    def determinant_image(self):
        """The subgroup {det g} of (Z/N)*."""
        if self._dets is None:
            self._dets = tuple(sorted({mat_det(m, self.modulus) for m in self.elements}))
        return self._dets

    def reduce(self, new_modulus: int) -> "FiniteMatrixGroup":
        if self.modulus % new_modulus:
            raise ValueError("%d does not divide %d" % (new_modulus, self.modulus))
        gens = [tuple(x % new_modulus for x in g) for g in self.gens]
        if self._elements is not None:
            elems = sorted({tuple(x % new_modulus for x in m) for m in self._elements})
            return FiniteMatrixGroup(new_modulus, gens, elements=elems)
        return FiniteMatrixGroup(new_modulus, gens, cap=self.cap)

    def preimage(self, to_modulus: int) -> "FiniteMatrixGroup":
        """Full inverse image under GL2(Z/M) -> GL2(Z/N), for N | M powers of
        one prime."""
        N, M = self.modulus, to_modulus
        if M % N:
            raise ValueError("%d does not divide %d" % (N, M))
        fn, fm = factor_int(N), factor_int(M)
        if len(fn) != 1 or len(fm) != 1 or next(iter(fn)) != next(iter(fm)):
            raise ValueError("preimage requires powers of a single prime")
        ell = next(iter(fn))
        j = fm[ell] - fn[ell]
        gens = list(self.gens)
        kernel_gens = []
        for t in range(j):
            s = N * ell**t
            kernel_gens.extend([
                (1 + s, 0, 0, 1), (1, s, 0, 1), (1, 0, s, 1), (1, 0, 0, 1 + s),
            ])
        count = self.order * (M // N) ** 4
        elements = []
        offsets = M // N
        for m in self.elements:
            a, b, c, d = m
            for da in range(offsets):
                for db in range(offsets):
                    for dc in range(offsets):
                        for dd in range(offsets):
                            elements.append((a + N * da, b + N * db,
                                             c + N * dc, d + N * dd))
        assert len(elements) == count
        return FiniteMatrixGroup(M, list(gens) + kernel_gens, elements=elements)

    def conjugate(self, g) -> "FiniteMatrixGroup":
        mod = self.modulus
        g = normalize_gen(g, mod)
        gi = mat_inv(g, mod)
        gens = [mat_mul(mat_mul(g, h, mod), gi, mod) for h in self.gens]
        elems = None
        if self._elements is not None:
            elems = [mat_mul(mat_mul(g, h, mod), gi, mod) for h in self._elements]
        return FiniteMatrixGroup(mod, gens, elements=elems)

    def is_normalized_by(self, g) -> bool:
        mod = self.modulus
        g = normalize_gen(g, mod)
        gi = mat_inv(g, mod)
        s = self.element_set
        return all(mat_mul(mat_mul(g, h, mod), gi, mod) in s for h in self.gens)

    def is_p_group(self, p: int) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1


def find_generators(elements, mod):
    """Greedy small generating set for an explicit element list."""
    elems = sorted(set(normalize_gen(m, mod) for m in elements))
    target = set(elems)
    gens = []
    have = {IDENTITY}
    by_order = sorted(elems, key=lambda m: -mat_order(m, mod))
    for m in by_order:
        if m in have:
            continue
        gens.append(m)
        have = set(close_generators(gens, mod))
        if have == target:
            return gens
    if have != target:
        raise ValueError("element list is not closed under multiplication")
    return gens


# ---------------------------------------------------------------------------
# text format: "modulus=N; gens=a,b,c,d | e,f,g,h | ..."

def format_group_text(G: FiniteMatrixGroup) -> str:
    gens = " | ".join(",".join(str(x) for x in g) for g in G.gens)
    return "modulus=%d; gens=%s" % (G.modulus, gens)


def parse_group_text(text: str, cap: int = DEFAULT_CLOSURE_CAP) -> FiniteMatrixGroup:
    parts = [p.strip() for p in text.strip().split(";")]
    fields = {}
    for p in parts:
        if not p:
            continue
        key, _, val = p.partition("=")
        fields[key.strip()] = val.strip()
    if "modulus" not in fields or "gens" not in fields:
        raise ValueError("group text needs 'modulus=N; gens=...'")
    mod = int(fields["modulus"])
    gens = []
    for chunk in fields["gens"].split("|"):
        entries = [int(x) for x in chunk.strip().split(",")]
        gens.append(normalize_gen(entries, mod))
    return FiniteMatrixGroup(mod, gens, cap=cap)


# ---------------------------------------------------------------------------
# standard groups

def gl2_order(mod: int) -> int:
    n = 1
    for p, k in factor_int(mod).items():
        n *= p ** (4 * (k - 1)) * (p * p - 1) * (p * p - p)
    return n


def gl2_group(mod: int) -> FiniteMatrixGroup:
    """All of GL2(Z/N), with its elements enumerated directly."""
    from math import gcd

    elems = [(a, b, c, d)
             for a in range(mod) for b in range(mod)
             for c in range(mod) for d in range(mod)
             if gcd((a * d - b * c) % mod, mod) == 1]
    return FiniteMatrixGroup.from_elements(mod, elems, gens=gl2_generators(mod))


def gl2_generators(mod: int):
    """A standard generating set: S, T for the determinant-one part plus
    diagonal twists covering the unit group."""
    gens = [(0, mod - 1, 1, 0), (1, 1, 0, 1)]
    for u in _unit_group_generators(mod):
        gens.append((1, 0, 0, u))
    return gens


def _unit_group_generators(mod: int):
    from math import gcd

    units = [x for x in range(1, mod) if gcd(x, mod) == 1]
    if len(units) == 1:
        return []
    target = set(units)
    gens = []
    have = {1}
    for x in sorted(units, key=lambda u: -_unit_order(u, mod)):
        if x in have:
            continue
        gens.append(x)
        have = _unit_closure(gens, mod)
        if have == target:
            break
    return gens


def _unit_order(u, mod):
    x = u
    n = 1
    while x != 1:
        x = x * u % mod
        n += 1
    return n


def _unit_closure(gens, mod):
    seen = {1}
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x * g % mod
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def sl2_group(mod: int, cap: int = DEFAULT_CLOSURE_CAP) -> FiniteMatrixGroup:
    return FiniteMatrixGroup(mod, [(0, mod - 1, 1, 0), (1, 1, 0, 1)], cap=cap)


def borel_group(mod: int) -> FiniteMatrixGroup:
    """Upper-triangular invertible matrices mod N."""
    from math import gcd

    units = [x for x in range(1, mod) if gcd(x, mod) == 1]
    elems = [(a, b, 0, d) for a in units for d in units for b in range(mod)]
    gens = [(1, 1, 0, 1)]
    for u in _unit_group_generators(mod):
        gens.extend([(u, 0, 0, 1), (1, 0, 0, u)])
    return FiniteMatrixGroup(mod, gens, elements=elems)


def upper_unitriangular_group(mod: int) -> FiniteMatrixGroup:
    elems = [(1, b, 0, 1) for b in range(mod)]
    return FiniteMatrixGroup(mod, [(1, 1, 0, 1)], elements=elems)


# ---------------------------------------------------------------------------
# Cartan subgroups and their normalizers

def cartan_subgroup(ell: int, delta: int, starred: bool = False) -> FiniteMatrixGroup:
    """The Cartan subgroup with parameter delta: matrices [[x, delta*y], [y, x]]
    with x^2 - delta*y^2 nonzero.  With starred=True, the conjugated model
    (diagonal matrices for delta = 1, else the eps-model with
    eps = (delta+1)/(delta-1))."""
    _check_cartan_args(ell, delta)
    if not starred:
        elems = [(x, delta * y % ell, y, x)
                 for x in range(ell) for y in range(ell)
                 if (x * x - delta * y * y) % ell]
        return FiniteMatrixGroup.from_elements(ell, elems)
    if _is_square(delta, ell):
        if delta % ell == 1:
            elems = [(t, 0, 0, w) for t in range(1, ell) for w in range(1, ell)]
            return FiniteMatrixGroup.from_elements(ell, elems)
        # conjugate the standard model into the starred shape
        g = (1, 1, 1, ell - 1)
        return cartan_subgroup(ell, delta).conjugate(g)
    eps = (delta + 1) * inv_mod(delta - 1, ell) % ell
    elems = [((x + eps * w) % ell, (-w) % ell, w % ell, (x - eps * w) % ell)
             for x in range(ell) for w in range(ell)
             if (x * x + (1 - eps * eps) * w * w) % ell]
    return FiniteMatrixGroup.from_elements(ell, elems)


def cartan_normalizer(ell: int, delta: int, starred: bool = False) -> FiniteMatrixGroup:
    """N(C) = C union w*C, where w = diag(1,-1) for the standard model and
    w = [[0,1],[1,0]] for the starred one."""
    _check_cartan_args(ell, delta)
    C = cartan_subgroup(ell, delta, starred=starred)
    w = (0, 1, 1, 0) if starred else (1, 0, 0, ell - 1)
    elems = list(C.elements) + [mat_mul(w, m, ell) for m in C.elements]
    return FiniteMatrixGroup.from_elements(ell, elems)


def _check_cartan_args(ell, delta):
    if ell == 2:
        raise ValueError("Cartan constructors require odd ell")
    if not is_prime(ell):
        raise ValueError("Cartan constructors require a prime modulus")
    if delta % ell == 0:
        raise ValueError("delta must be a unit")


def _is_square(x, ell):
    x %= ell
    return any(y * y % ell == x for y in range(ell))


def cube_subgroup(G: FiniteMatrixGroup) -> FiniteMatrixGroup:
    """The subgroup generated by the cubes of the elements."""
    cubes = sorted({mat_pow(m, 3, G.modulus) for m in G.elements})
    elems = close_generators(cubes, G.modulus)
    return FiniteMatrixGroup.from_elements(G.modulus, elems)


def normalizer_cube_part(ell: int, delta: int, starred: bool = False) -> FiniteMatrixGroup:
    """The index-3 subgroup C^3 union w*C^3 of a nonsplit Cartan normalizer
    (ell = 2 mod 3): cubes of the Cartan part together with one reflection
    coset.  This is the group whose presence certifies all scalars for
    ell = 2 mod 3."""
    _check_cartan_args(ell, delta)
    if ell % 3 != 2:
        raise ValueError("index-3 cube subgroup requires ell = 2 mod 3")
    if _is_square(delta, ell):
        raise ValueError("requires a nonsplit parameter delta")
    C = cartan_subgroup(ell, delta, starred=starred)
    cubes = sorted({mat_pow(m, 3, ell) for m in C.elements})
    w = (0, 1, 1, 0) if starred else (1, 0, 0, ell - 1)
    elems = cubes + [mat_mul(w, m, ell) for m in cubes]
    return FiniteMatrixGroup.from_elements(ell, elems)


# ---------------------------------------------------------------------------
# lines, eigenlines, Dickson classification

class _QuadExt:
    """F_ell[t] with t^2 = alpha*t + beta: the quadratic extension field."""

    def __init__(self, ell: int):
        self.ell = ell
        if ell == 2:
            self.alpha, self.beta = 1, 1
        else:
            ns = next(x for x in range(2, ell) if not _is_square(x, ell))
            self.alpha, self.beta = 0, ns

    def mul(self, x, y):
        p = self.ell
        a, b = x
        c, d = y
        bd = b * d % p
        return ((a * c + bd * self.beta) % p,
                (a * d + b * c + bd * self.alpha) % p)

    def add(self, x, y):
        p = self.ell
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)

    def sub(self, x, y):
        p = self.ell
        return ((x[0] - y[0]) % p, (x[1] - y[1]) % p)

    def frob(self, x):
        y = (1, 0)
        for _ in range(self.ell):
            y = self.mul(y, x)
        return y

    def inv(self, x):
        if x == (0, 0):
            raise ZeroDivisionError
        xc = self.frob(x)
        n = self.mul(x, xc)
        assert n[1] == 0
        ni = inv_mod(n[0], self.ell)
        return (xc[0] * ni % self.ell, xc[1] * ni % self.ell)

    def elements(self):
        return [(a, b) for a in range(self.ell) for b in range(self.ell)]


def rational_lines(ell: int):
    """The ell+1 lines of P1(F_ell) as primitive column vectors."""
    return [(1, m) for m in range(ell)] + [(0, 1)]


def line_is_stable(m4, line, ell) -> bool:
    x, y = line
    a, b, c, d = m4
    nx, ny = (a * x + b * y) % ell, (c * x + d * y) % ell
    return (nx * y - ny * x) % ell == 0


def stable_lines(G: FiniteMatrixGroup):
    ell = G.modulus
    return [L for L in rational_lines(ell)
            if all(line_is_stable(g, L, ell) for g in G.gens)]


def _char_roots(m4, ext: _QuadExt):
    """Roots of the characteristic polynomial in the quadratic extension."""
    p = ext.ell
    t = (m4[0] + m4[3]) % p
    d = mat_det(m4, p)
    roots = []
    for lam in ext.elements():
        # lam^2 - t*lam + d = 0
        v = ext.add(ext.sub(ext.mul(lam, lam), ext.mul((t, 0), lam)), (d, 0))
        if v == (0, 0):
            roots.append(lam)
    return roots


def _eigenlines(m4, ext: _QuadExt):
    """Projective eigenlines of a non-scalar matrix over F_{ell^2},
    normalised to (1, s) or ((0,0),(1,0))-style representatives."""
    p = ext.ell
    a, b, c, d = m4
    lines = []
    for lam in _char_roots(m4, ext):
        if b % p:
            v = ((b % p, 0), ext.sub(lam, (a % p, 0)))
        elif c % p:
            v = (ext.sub(lam, (d % p, 0)), (c % p, 0))
        else:
            # diagonal, non-scalar: eigenlines are the axes
            if lam == (a % p, 0):
                v = ((1, 0), (0, 0))
            else:
                v = ((0, 0), (1, 0))
        lines.append(_normalize_proj(v, ext))
    # a repeated root contributes one line twice
    out = []
    for L in lines:
        if L not in out:
            out.append(L)
    return out


def _normalize_proj(v, ext):
    v0, v1 = v
    if v0 != (0, 0):
        s = ext.inv(v0)
        return ((1, 0), ext.mul(v1, s))
    s = ext.inv(v1)
    return ((0, 0), (1, 0))


def _apply_proj(m4, L, ext):
    a, b, c, d = (x % ext.ell for x in m4)
    v0, v1 = L
    w0 = ext.add(ext.mul((a, 0), v0), ext.mul((b, 0), v1))
    w1 = ext.add(ext.mul((c, 0), v0), ext.mul((d, 0), v1))
    return _normalize_proj((w0, w1), ext)


def _pair_is_stable(gens, pair, ext):
    s = set(pair)
    for g in gens:
        img = {_apply_proj(g, L, ext) for L in pair}
        if img != s:
            return False
    return True


def _line_is_rational(L):
    return L[0][1] == 0 and L[1][1] == 0


class DicksonVerdict:
    def __init__(self, tag: str, witness=None):
        self.tag = tag
        self.witness = witness

    def __repr__(self):
        return "DicksonVerdict(%r, witness=%r)" % (self.tag, self.witness)

    def __eq__(self, other):
        if isinstance(other, str):
            return self.tag == other
        return isinstance(other, DicksonVerdict) and other.tag == self.tag


_EXCEPTIONAL_ORDER_MULTISETS = {
    "exceptional-A4": (12, {1: 1, 2: 3, 3: 8}),
    "exceptional-S4": (24, {1: 1, 2: 9, 3: 8, 4: 6}),
    "exceptional-A5": (60, {1: 1, 2: 15, 3: 20, 5: 24}),
}


def projective_elements(G: FiniteMatrixGroup):
    """Canonical representatives of the image in PGL2 (prime modulus)."""
    p = G.modulus
    reps = set()
    for m in G.elements:
        first = next(x for x in m if x % p)
        s = inv_mod(first, p)
        reps.add(tuple(x * s % p for x in m))
    return sorted(reps)


def projective_order(m4, p) -> int:
    x = m4
    n = 1
    while not is_scalar_mat(x):
        x = mat_mul(x, m4, p)
        n += 1
    return n


def projective_exponent(G: FiniteMatrixGroup) -> int:
    from math import lcm

    e = 1
    for m in projective_elements(G):
        e = lcm(e, projective_order(m, G.modulus))
    return e


def dickson_classify(G: FiniteMatrixGroup) -> DicksonVerdict:
    """Place a subgroup of GL2(F_ell) in the Dickson trichotomy.

    Precedence: contains-SL2, then Borel (a stable line), then split and
    nonsplit Cartan-normalizer (a stable unordered eigenline pair), then
    exceptional projective image, else 'subline'.
    """
    ell = G.modulus
    if not is_prime(ell):
        raise ValueError("classification defined mod primes only")
    sl2_gens = [(0, ell - 1, 1, 0), (1, 1, 0, 1)]
    if all(g in G.element_set for g in sl2_gens):
        return DicksonVerdict("contains-SL2", witness=sl2_gens)
    lines = stable_lines(G)
    if lines:
        return DicksonVerdict("Borel", witness=lines[0])
    ext = _QuadExt(ell)
    tried = set()
    for h in G.elements:
        if is_scalar_mat(h):
            continue
        eig = _eigenlines(h, ext)
        if len(eig) != 2:
            continue
        pair = frozenset(eig)
        if pair in tried:
            continue
        tried.add(pair)
        if _pair_is_stable(G.gens, tuple(pair), ext):
            split = all(_line_is_rational(L) for L in pair)
            tag = "Cartan-normalizer-split" if split else "Cartan-normalizer-nonsplit"
            return DicksonVerdict(tag, witness=sorted(pair))
    proj = projective_elements(G)
    n = len(proj)
    orders = {}
    for m in proj:
        o = projective_order(m, ell)
        orders[o] = orders.get(o, 0) + 1
    for tag, (size, multiset) in _EXCEPTIONAL_ORDER_MULTISETS.items():
        if n == size and orders == multiset:
            return DicksonVerdict(tag, witness={"projective_order": n})
    return DicksonVerdict("subline", witness={"projective_order": n,
                                              "order_multiset": orders})


def irreducibility_report(G: FiniteMatrixGroup) -> str:
    """'reducible', 'irreducible' or 'absolutely-irreducible' (prime mod)."""
    ell = G.modulus
    if not is_prime(ell):
        raise ValueError("irreducibility report defined mod primes only")
    if stable_lines(G):
        return "reducible"
    ext = _QuadExt(ell)
    h = next((m for m in G.elements if not is_scalar_mat(m)), None)
    if h is None:
        return "reducible"
    for L in _eigenlines(h, ext):
        if all(_apply_proj(g, L, ext) == L for g in G.gens):
            return "irreducible"
    return "absolutely-irreducible"


# ---------------------------------------------------------------------------
# subgroup enumeration (cyclic extensions seeded with perfect subgroups)

class _IndexedGroup:
    """Ambient group with a full multiplication table on element indices."""

    def __init__(self, G: FiniteMatrixGroup):
        self.G = G
        self.mod = G.modulus
        self.elems = list(G.elements)
        self.index = {m: i for i, m in enumerate(self.elems)}
        n = len(self.elems)
        self.n = n
        mod = self.mod
        self.table = [[0] * n for _ in range(n)]
        for i, a in enumerate(self.elems):
            row = self.table[i]
            for j, b in enumerate(self.elems):
                row[j] = self.index[mat_mul(a, b, mod)]
        self.inv = [self.index[mat_inv(m, mod)] for m in self.elems]
        self.id = self.index[IDENTITY]

    def close(self, seed_ids):
        table = self.table
        seen = set(seed_ids)
        seen.add(self.id)
        for i in list(seed_ids):
            seen.add(self.inv[i])
        queue = deque(seen)
        while queue:
            x = queue.popleft()
            for g in seed_ids:
                y = table[x][g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
                y = table[g][x]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def derived_subgroup(self, ids):
        table, inv = self.table, self.inv
        comms = set()
        ids = list(ids)
        for a in ids:
            for b in ids:
                comms.add(table[table[a][b]][table[inv[a]][inv[b]]])
        return self.close(comms)


def enumerate_subgroups(G: FiniteMatrixGroup, order_cap: int = 512,
                        predicate=None, up_to_conjugacy: bool = False):
    """All subgroups of G, by cyclic extension of a prime-index chain.

    Non-solvable subgroups are reached by seeding the extension process with
    the perfect subgroups, which all lie inside the perfect core of G and
    are found there by closing joins of cyclic subgroups.
    """
    if G.order > order_cap:
        raise CapExceeded("enumeration infeasible: order %d exceeds cap %d"
                          % (G.order, order_cap))
    ix = _IndexedGroup(G)
    table, inv = ix.table, ix.inv
    n = ix.n

    # perfect core and its perfect subgroups
    core = frozenset(range(n))
    while True:
        nxt = ix.derived_subgroup(core)
        if nxt == core:
            break
        core = nxt
    seeds = {frozenset([ix.id]): [ix.id]}
    if len(core) > 1:
        for fs in _subgroups_by_joins(ix, core):
            if len(fs) >= 60 and ix.derived_subgroup(fs) == fs:
                seeds[fs] = sorted(fs)

    all_subs = dict(seeds)  # frozenset -> generator id list
    queue = deque(seeds.items())
    while queue:
        H, hgens = queue.popleft()
        hset = H
        # normalizer of H via its generators
        norm = [g for g in range(n)
                if all(table[table[g][h]][inv[g]] in hset for h in hgens)]
        covered = set()
        for x in norm:
            if x in covered or x in hset:
                covered.add(x)
                continue
            covered.update(table[h][x] for h in hset)
            # order of the coset Hx in N(H)/H
            m = 1
            z = x
            while z not in hset:
                z = table[z][x]
                m += 1
            for p in factor_int(m):
                y = _id_pow(ix, x, m // p)
                new = set(hset)
                z = y
                for _ in range(p - 1):
                    new.update(table[h][z] for h in hset)
                    z = table[z][y]
                fs = frozenset(new)
                if fs not in all_subs:
                    gens2 = hgens + [y] if hgens != [ix.id] else [y]
                    all_subs[fs] = gens2
                    queue.append((fs, gens2))

    result = []
    for fs, gens in sorted(all_subs.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        elems = [ix.elems[i] for i in fs]
        gen_mats = [ix.elems[i] for i in gens]
        H = FiniteMatrixGroup(G.modulus, gen_mats, elements=elems)
        if predicate is None or predicate(H):
            result.append(H)
    if up_to_conjugacy:
        result = [cls[0] for cls in conjugacy_classes_of_subgroups(result, G)]
    return result


def _id_pow(ix, x, e):
    r = ix.id
    while e:
        if e & 1:
            r = ix.table[r][x]
        x = ix.table[x][x]
        e >>= 1
    return r


def _subgroups_by_joins(ix, core):
    """All subgroups of the subgroup 'core', via joins of cyclic subgroups."""
    cyclics = set()
    for g in core:
        sub = set()
        x = g
        while x != ix.id:
            sub.add(x)
            x = ix.table[x][g]
        sub.add(ix.id)
        cyclics.add(frozenset(sub))
    subs = set(cyclics)
    subs.add(frozenset([ix.id]))
    queue = deque(subs)
    while queue:
        H = queue.popleft()
        for C in cyclics:
            if C <= H:
                continue
            J = ix.close(H | C)
            if J not in subs and J <= core:
                subs.add(J)
                queue.append(J)
    return subs


def conjugacy_classes_of_subgroups(subgroups, ambient: FiniteMatrixGroup):
    """Partition a subgroup list into ambient-conjugacy classes."""
    mod = ambient.modulus
    canon = {}
    order = []
    for H in subgroups:
        hset = frozenset(H.elements)
        best = None
        for g in ambient.elements:
            gi = mat_inv(g, mod)
            img = frozenset(mat_mul(mat_mul(g, m, mod), gi, mod) for m in hset)
            key = tuple(sorted(img))
            if best is None or key < best:
                best = key
        if best not in canon:
            canon[best] = []
            order.append(best)
        canon[best].append(H)
    return [canon[k] for k in order]


# ---------------------------------------------------------------------------
# the order-288 exceptional group mod 13 and its candidate filter

def exceptional_s4_group_mod13() -> FiniteMatrixGroup:
    """The maximal subgroup of GL2(F_13) with projective image S4."""
    gens = [(2, 0, 0, 2), (2, 0, 0, 3), (0, 12, 1, 0), (1, 1, 12, 1)]
    return FiniteMatrixGroup(13, gens)


def galois_candidate_filter(H: FiniteMatrixGroup) -> bool:
    """Surjective determinant, a trace-zero involution, projective exponent
    at least 3, and no stable line."""
    if H.modulus != 13:
        raise ValueError("this filter is specific to modulus 13")
    if len(H.determinant_image()) != 12:
        return False
    if not any((m[0] + m[3]) % 13 == 0
               for m in H.elements if mat_mul(m, m, 13) == IDENTITY):
        return False
    if projective_exponent(H) < 3:
        return False
    if stable_lines(H):
        return False
    return True


def contains_scalar_outside_pm1(H: FiniteMatrixGroup) -> bool:
    mod = H.modulus
    return any(l not in (1, mod - 1) for l in H.scalar_subgroup())
