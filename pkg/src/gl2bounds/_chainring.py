"""Exact linear algebra over the chain rings Z/l^k.

Every ideal of Z/l^k is (l^e), so elimination always works with a pivot of
minimal valuation; no fractions appear anywhere.  Matrices are lists of row
tuples/lists of canonical representatives in [0, l^k).
"""

from math import gcd


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def residue_valuation(x: int, ell: int, k: int) -> int:
    """Valuation of the residue x in Z/l^k, with v(0) = k."""
    if x % ell**k == 0:
        return k
    return vp(x % ell**k, ell)


def inv_mod(a: int, m: int) -> int:
    a %= m
    g = gcd(a, m)
    if g != 1:
        raise ValueError("%d is not invertible modulo %d" % (a, m))
    return pow(a, -1, m)


def factor_int(n: int) -> dict:
    """Prime factorisation by trial division (moduli here are small)."""
    f = {}
    x = n
    p = 2
    while p * p <= x:
        if x % p == 0:
            e = 0
            while x % p == 0:
                x //= p
                e += 1
            f[p] = e
        p = 3 if p == 2 else p + 2
    if x > 1:
        f[x] = f.get(x, 0) + 1
    return f


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factor_int(n) == {n: 1}


class SpanBasis:
    """Row-span of vectors over Z/l^k in Howell form.

    Howell form (echelon + saturation rows l^(k-v)*row) is the canonical
    basis that makes leading-position reduction a correct membership test
    over a chain ring.
    """

    def __init__(self, ncols: int, ell: int, k: int):
        self.ncols = ncols
        self.ell = ell
        self.k = k
        self.mod = ell**k
        self.pivots = {}  # column -> row (list), pivot entry l^v * unit

    def _leading(self, row):
        for c in range(self.ncols):
            if row[c] % self.mod:
                return c
        return None

    def insert(self, vec) -> bool:
        """Insert a vector; return True if the span grew."""
        grew = False
        stack = [[x % self.mod for x in vec]]
        while stack:
            row = stack.pop()
            while True:
                c = self._leading(row)
                if c is None:
                    break
                v = residue_valuation(row[c], self.ell, self.k)
                if c not in self.pivots:
                    # normalise pivot entry to l^v
                    u = row[c] // self.ell**v
                    ui = inv_mod(u, self.mod)
                    row = [(x * ui) % self.mod for x in row]
                    self.pivots[c] = row
                    grew = True
                    if v > 0:
                        # saturation row exposing later columns
                        s = self.ell ** (self.k - v)
                        stack.append([(x * s) % self.mod for x in row])
                    break
                piv = self.pivots[c]
                pv = residue_valuation(piv[c], self.ell, self.k)
                if v >= pv:
                    q = (row[c] // self.ell**pv) % self.mod
                    row = [(x - q * y) % self.mod for x, y in zip(row, piv)]
                else:
                    # new row has the smaller valuation: swap it in
                    u = row[c] // self.ell**v
                    ui = inv_mod(u, self.mod)
                    row = [(x * ui) % self.mod for x in row]
                    self.pivots[c] = row
                    grew = True
                    stack.append(piv)
                    if v > 0:
                        s = self.ell ** (self.k - v)
                        stack.append([(x * s) % self.mod for x in row])
                    break
        return grew

    def reduce(self, vec):
        """Residual of vec after reduction against the basis."""
        row = [x % self.mod for x in vec]
        while True:
            c = self._leading(row)
            if c is None or c not in self.pivots:
                return row
            piv = self.pivots[c]
            pv = residue_valuation(piv[c], self.ell, self.k)
            v = residue_valuation(row[c], self.ell, self.k)
            if v < pv:
                return row
            q = (row[c] // self.ell**pv) % self.mod
            row = [(x - q * y) % self.mod for x, y in zip(row, piv)]

    def contains(self, vec) -> bool:
        return all(x % self.mod == 0 for x in self.reduce(vec))

    def rows(self):
        """Canonical sorted row list (pivot entries normalised to l^v)."""
        out = []
        for c in sorted(self.pivots):
            out.append(tuple(self.pivots[c]))
        return out

    def size(self) -> int:
        """Number of elements of the spanned submodule."""
        n = 1
        for c, row in self.pivots.items():
            v = residue_valuation(row[c], self.ell, self.k)
            n *= self.ell ** (self.k - v)
        return n


def diagonalize(rows, ncols: int, ell: int, k: int):
    """Reduce a matrix to diagonal form over Z/l^k.

    Returns (pivot valuations by column index of the transformed matrix, F)
    where F is the accumulated invertible column-operation matrix: if D is
    the diagonal form then ker(A) = F . ker(D).  Columns without a pivot get
    valuation k (no constraint).
    """
    mod = ell**k
    A = [list(r) for r in rows]
    nrows = len(A)
    F = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    pivot_val = [k] * ncols
    r0 = 0
    for c0 in range(ncols):
        # find entry of minimal valuation in the remaining block
        best = None
        for i in range(r0, nrows):
            for j in range(c0, ncols):
                x = A[i][j] % mod
                if x:
                    v = residue_valuation(x, ell, k)
                    if best is None or v < best[0]:
                        best = (v, i, j)
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, pi, pj = best
        if pi != r0:
            A[r0], A[pi] = A[pi], A[r0]
        if pj != c0:
            for row in A:
                row[c0], row[pj] = row[pj], row[c0]
            for row in F:
                row[c0], row[pj] = row[pj], row[c0]
        u = A[r0][c0] // ell**v
        ui = inv_mod(u, mod)
        A[r0] = [(x * ui) % mod for x in A[r0]]
        pe = ell**v
        for i in range(nrows):
            if i == r0:
                continue
            x = A[i][c0] % mod
            if x:
                q = x // pe
                A[i] = [(a - q * b) % mod for a, b in zip(A[i], A[r0])]
        # clear the pivot row to the right by column ops
        for j in range(ncols):
            if j == c0:
                continue
            x = A[r0][j] % mod
            if x:
                q = x // pe
                for row in A:
                    row[j] = (row[j] - q * row[c0]) % mod
                for row in F:
                    row[j] = (row[j] - q * row[c0]) % mod
        pivot_val[c0] = v
        r0 += 1
        if r0 == nrows:
            break
    return pivot_val, F


def kernel(rows, ncols: int, ell: int, k: int):
    """Generators of {x : A x = 0} over Z/l^k, as a list of vectors.

    The returned generators g_i are independent in the sense that the kernel
    is the internal direct sum of the cyclic modules R.g_i, with g_i of
    annihilator l^(e_i) where e_i is the matching pivot valuation.
    """
    mod = ell**k
    pivot_val, F = diagonalize(rows, ncols, ell, k)
    gens = []
    for j in range(ncols):
        e = pivot_val[j]
        s = ell ** (k - e)
        if s % mod == 0:
            continue  # pivot is a unit: coordinate forced to zero
        g = [(F[i][j] * s) % mod for i in range(ncols)]
        gens.append((tuple(g), e))
    return gens


def solve(rows, rhs, ncols: int, ell: int, k: int):
    """One solution of A x = b over Z/l^k, or None.

    Row operations are mirrored on the right-hand side; column operations
    are tracked so the solution can be pulled back.
    """
    mod = ell**k
    A = [list(r) + [b % mod] for r, b in zip(rows, rhs)]
    # diagonalise the left block with the rhs glued on as a final column
    # that never becomes a pivot.
    F = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    nrows = len(A)
    pivot_val = [k] * ncols
    r0 = 0
    for c0 in range(ncols):
        best = None
        for i in range(r0, nrows):
            for j in range(c0, ncols):
                x = A[i][j] % mod
                if x:
                    v = residue_valuation(x, ell, k)
                    if best is None or v < best[0]:
                        best = (v, i, j)
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, pi, pj = best
        if pi != r0:
            A[r0], A[pi] = A[pi], A[r0]
        if pj != c0:
            for row in A:
                row[c0], row[pj] = row[pj], row[c0]
            for row in F:
                row[c0], row[pj] = row[pj], row[c0]
        u = A[r0][c0] // ell**v
        ui = inv_mod(u, mod)
        A[r0] = [(x * ui) % mod for x in A[r0]]
        pe = ell**v
        for i in range(nrows):
            if i == r0:
                continue
            x = A[i][c0] % mod
            if x:
                q = x // pe
                A[i] = [(a - q * b) % mod for a, b in zip(A[i], A[r0])]
        for j in range(ncols):
            if j == c0:
                continue
            x = A[r0][j] % mod
            if x:
                q = x // pe
                for row in A:
                    row[j] = (row[j] - q * row[c0]) % mod
                for row in F:
                    row[j] = (row[j] - q * row[c0]) % mod
        pivot_val[c0] = v
        r0 += 1
        if r0 == nrows:
            break
    y = [0] * ncols
    for i in range(nrows):
        lead = None
        for j in range(ncols):
            if A[i][j] % mod:
                lead = j
                break
        b = A[i][ncols] % mod
        if lead is None:
            if b:
                return None
            continue
        e = pivot_val[lead]
        if b % ell**e:
            return None
        y[lead] = b // ell**e
    x = [0] * ncols
    for i in range(ncols):
        x[i] = sum(F[i][j] * y[j] for j in range(ncols)) % mod
    return x


def smith_normal_form(mat):
    """Diagonal of the Smith normal form of a small integer matrix."""
    A = [list(r) for r in mat]
    if not A or not A[0]:
        return []
    m, n = len(A), len(A[0])
    diag = []
    r = 0
    c = 0
    while r < m and c < n:
        # find minimal nonzero entry
        best = None
        for i in range(r, m):
            for j in range(c, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i0, j0 = best
        A[r], A[i0] = A[i0], A[r]
        for row in A:
            row[c], row[j0] = row[j0], row[c]
        done = False
        while not done:
            done = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    if A[i][c]:
                        A[r], A[i] = A[i], A[r]
                        done = False
            for j in range(c + 1, n):
                if A[r][j]:
                    q = A[r][j] // A[r][c]
                    for row in A:
                        row[j] -= q * row[c]
                    if A[r][j]:
                        for row in A:
                            row[c], row[j] = row[j], row[c]
                        done = False
        diag.append(abs(A[r][c]))
        r += 1
        c += 1
    # enforce divisibility d1 | d2 | ...
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            a, b = diag[i], diag[j]
            if a == 0:
                diag[i], diag[j] = b, a
                continue
            g = gcd(a, b)
            l = a * b // g if g else 0
            diag[i], diag[j] = g, l
    return diag


def quotient_invariants(orders, relation_vectors):
    """Invariant factors of (+ Z/orders[i]) / <relation_vectors>.

    Presented as Z^n modulo the columns diag(orders) and the relation
    vectors; invariant factors are the nontrivial Smith diagonal entries.
    """
    n = len(orders)
    if n == 0:
        return []
    cols = [[orders[i] if i == j else 0 for i in range(n)] for j in range(n)]
    cols.extend([list(v) for v in relation_vectors])
    mat = [[cols[j][i] for j in range(len(cols))] for i in range(n)]
    diag = smith_normal_form(mat)
    return sorted(d for d in diag if d > 1)


def merge_invariant_factors(lists):
    """Invariant factors of a direct sum given per-prime factor lists."""
    from math import lcm

    width = max((len(l) for l in lists), default=0)
    merged = []
    for i in range(width):
        f = 1
        for l in lists:
            padded = [1] * (width - len(l)) + sorted(l)
            f = lcm(f, padded[i])
        if f > 1:
            merged.append(f)
    return merged
