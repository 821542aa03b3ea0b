"""Exact integer and rational linear algebra on plain Python lists.

Everything here works with Python ``int`` and ``fractions.Fraction`` so
results are exact.  Matrices are lists of rows.  Sizes in this package stay
small (at most a few hundred rows), so simple elimination is fast enough and
keeps the code easy to audit.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x) if x else out
    return out


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def valuation(x: int | Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def common_denominator(values) -> int:
    out = 1
    for v in values:
        out = lcm(out, Fraction(v).denominator)
    return out


def hnf_rows(rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Row-style Hermite normal form of the Z-span of ``rows``.

    Returns a basis in echelon form with positive pivots and entries above
    each pivot reduced into ``[0, pivot)``.  Zero rows are dropped.
    """
    a = [list(map(int, r)) for r in rows]
    if not a:
        return []
    ncols = len(a[0]) if ncols is None else ncols
    prow = 0
    pivots: list[tuple[int, int]] = []
    for col in range(ncols):
        while True:
            nz = [i for i in range(prow, len(a)) if a[i][col]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i][col]))
            a[prow], a[i0] = a[i0], a[prow]
            piv = a[prow]
            if len(nz) == 1:
                break
            for i in range(prow + 1, len(a)):
                if a[i][col]:
                    q = a[i][col] // piv[col]
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], piv)]
        if prow < len(a) and a[prow][col]:
            if a[prow][col] < 0:
                a[prow] = [-x for x in a[prow]]
            pivots.append((prow, col))
            prow += 1
            if prow == len(a):
                break
    a = a[:prow]
    for r, col in pivots:
        p = a[r][col]
        for i in range(r):
            q = a[i][col] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
    return a


def rational_row_basis(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], int]:
    """Z-basis of the Z-span of rational row vectors.

    Returns ``(basis, denominator)`` where ``basis`` rows are Fractions.
    """
    den = common_denominator(x for r in rows for x in r)
    ints = [[int(Fraction(x) * den) for x in r] for r in rows]
    h = hnf_rows(ints, len(rows[0]) if rows else 0)
    return [[Fraction(x, den) for x in r] for r in h], den


def smith_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form with transforms.

    Returns ``(u, d, v)`` with ``u @ a @ v == d``, ``u`` and ``v`` unimodular,
    ``d`` diagonal with nonnegative entries d_1 | d_2 | ... .
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, r)) for r in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            changed = False
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        changed = True
            if changed:
                cand = [(abs(d[i][t]), i, t) for i in range(t, m) if d[i][t]]
                cand += [(abs(d[t][j]), t, j) for j in range(t, n) if d[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                if j != t:
                    swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % d[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, d, v


def smith_diagonal(a: Sequence[Sequence[int]]) -> list[int]:
    _, d, _ = smith_form(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def integer_kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Z-basis (as rows) of the saturated lattice {x in Z^n : a x = 0}."""
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    if not a:
        return identity(n)
    _, d, v = smith_form(a)
    r = sum(1 for i in range(min(len(d), n)) if d[i][i])
    vt = transpose(v)
    return hnf_rows(vt[r:], n) if r < n else []


def quotient_order(gens: Sequence[Sequence[int]], moduli: Sequence[int]) -> int:
    """Order of (Z/b_1 + ... + Z/b_m) / <gens>.

    ``gens`` are coordinate vectors (length m).  Works modulo M = lcm(b) so
    intermediate entries stay bounded.
    """
    m = len(moduli)
    if m == 0:
        return 1
    big = lcm(*moduli)
    cols = [[int(x) % big for x in g] for g in gens]
    cols += [[moduli[i] if j == i else 0 for j in range(m)] for i in range(m)]
    order = 1
    for row in range(m):
        live = [c for c in cols if c[row] % big]
        rest = [c for c in cols if not c[row] % big]
        g = big
        piv: list[int] | None = None
        for c in live:
            if piv is None:
                piv = c
                g = c[row]
                continue
            gg, s, t = xgcd(piv[row], c[row])
            a1, a2 = piv[row] // gg, c[row] // gg
            new_piv = [(s * x + t * y) % big for x, y in zip(piv, c)]
            other = [(a1 * y - a2 * x) % big for x, y in zip(piv, c)]
            piv = new_piv
            rest.append(other)
        if piv is None:
            # only multiples of big remain in this row: pivot is big itself
            order *= big
            cols = rest
            continue
        gg = gcd(piv[row], big)
        # combine the pivot column with big*e_row, which lies in the lattice;
        # the new pivot is gg and the leftover column has a zero in this row
        e_row = [big if j == row else 0 for j in range(m)]
        other = [((big // gg) * x - (piv[row] // gg) * y) % big for x, y in zip(piv, e_row)]
        rest.append(other)
        order *= gg
        cols = [[x % big for x in c] for c in rest]
    return order


def frac_rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    n = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def solve_rational(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution x of a x = b over Q, or None if inconsistent."""
    aug = [list(r) + [bb] for r, bb in zip(a, b)]
    n = len(a[0]) if a else 0
    red, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(red, piv):
        x[c] = row[-1]
    return x


def express_in_basis(basis: Sequence[Sequence], vec: Sequence) -> list[Fraction] | None:
    """Coefficients c with sum c_k basis_k = vec, or None if vec is outside the span."""
    return solve_rational(transpose(basis), vec)


def det_fraction(a: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in r] for r in a]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def inverse_fraction(a: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(a)
    aug = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]
