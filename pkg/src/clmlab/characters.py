"""Character tables by the Burnside-Dixon method.

The class-multiplication coefficients are diagonalised simultaneously over a
prime field GF(p) with p = 1 mod exponent(G).  Each common eigenvector gives a
character modulo p, and the eigenvalue multiplicities of every element are then
recovered mod p and lifted to exact values in Z[zeta_e].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt

import numpy as np
from sympy import isprime, primitive_root

from .cyclotomic import CyclotomicRing, Elt, cyclotomic_ring
from .errors import CapExceeded, InvariantViolated
from .groups import ConjugacyClass, Group, class_index, conjugacy_classes
from .lattice import common_denominator
from .limits import DEFAULT_LIMITS


@dataclass(frozen=True, eq=False)
class CharacterTable:
    group: Group
    exponent: int
    classes: tuple[ConjugacyClass, ...]
    values: tuple[tuple[Elt, ...], ...]  # values[char][class]

    @property
    def ring(self) -> CyclotomicRing:
        return cyclotomic_ring(self.exponent)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def degrees(self) -> list[int]:
        return [self.ring.to_int(row[0]) for row in self.values]

    @property
    def class_sizes(self) -> list[int]:
        return [c.size for c in self.classes]

    @cached_property
    def inverse_class(self) -> list[int]:
        ci = class_index(self.group)
        return [int(ci[self.group.inv(c.representative)]) for c in self.classes]

    @cached_property
    def power_class(self) -> dict[int, list[int]]:
        """power_class[k][l] = class of g_l^k, for k in 0..e-1."""
        ci = class_index(self.group)
        g = self.group
        return {k: [int(ci[g.power(c.representative, k)]) for c in self.classes] for k in range(self.exponent)}

    def inner(self, a, b) -> Elt:
        """<a, b> = (1/|G|) sum_g a(g) conj(b(g)) for class functions in Z[zeta]."""
        ring = self.ring
        tot = ring.zero
        for l, c in enumerate(self.classes):
            term = ring.mul(a[l], ring.conj(b[l]))
            tot = ring.add(tot, ring.scale(term, c.size))
        n = self.group.order
        if any(x % n for x in tot):
            raise InvariantViolated(f"inner product {tot} is not divisible by |G| = {n}")
        return tuple(x // n for x in tot)

    def inner_int(self, a, b) -> int:
        return self.ring.to_int(self.inner(a, b))

    def rational_class_function(self, vals) -> tuple[Elt, ...]:
        return tuple(self.ring.rational(int(v)) for v in vals)

    def inner_rational(self, f, b) -> Fraction:
        """<f, b> for a rational-valued class function f (list of Fractions)."""
        ring = self.ring
        den = common_denominator(f)
        scaled = [ring.rational(int(Fraction(v) * den)) for v in f]
        val = self.inner(scaled, b)
        return Fraction(ring.to_int(val), den)

    def check(self) -> None:
        """Row orthogonality, sum of squared degrees, positive integer degrees."""
        n = len(self.values)
        if n != len(self.classes):
            raise InvariantViolated("table is not square")
        degs = self.degrees
        if any(d <= 0 for d in degs):
            raise InvariantViolated("nonpositive degree")
        if sum(d * d for d in degs) != self.group.order:
            raise InvariantViolated("sum of squared degrees differs from |G|")
        for a in range(n):
            for b in range(a, n):
                ip = self.inner(self.values[a], self.values[b])
                want = self.ring.rational(int(a == b))
                if ip != want:
                    raise InvariantViolated(f"rows {a},{b} are not orthonormal")

    def format(self) -> str:
        ring = self.ring
        lines = [f"group {self.group.name}  exponent {self.exponent}  (z = exp(2 pi i/{self.exponent}))"]
        lines.append("class reps: " + "  ".join(self.group.labels[c.representative] for c in self.classes))
        lines.append("class sizes: " + "  ".join(str(c.size) for c in self.classes))
        for i, row in enumerate(self.values):
            lines.append(f"chi{i}: " + "  |  ".join(ring.format(v) for v in row))
        return "\n".join(lines)


def _dixon_prime(e: int, n: int) -> int:
    p = e + 1
    while not (isprime(p) and p > 2 * n):
        p += e
    return p


def _nullspace_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (as columns) of the right null space of a over GF(p)."""
    a = a.copy() % p
    rows, cols = a.shape
    piv_cols = []
    r = 0
    for c in range(cols):
        nz = np.nonzero(a[r:, c])[0] if r < rows else []
        if len(nz) == 0:
            continue
        i = r + nz[0]
        a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        for k in range(rows):
            if k != r and a[k, c]:
                a[k] = (a[k] - a[k, c] * a[r]) % p
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in piv_cols]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(piv_cols):
            basis[pc, j] = (-a[i, f]) % p
    return basis


def class_coefficients(g: Group) -> np.ndarray:
    """a[j, k, l] = #{x in C_j : x^-1 g_l in C_k}, so C_j C_k = sum_l a[j,k,l] C_l."""
    classes = conjugacy_classes(g)
    ci = class_index(g)
    r = len(classes)
    a = np.zeros((r, r, r), dtype=np.int64)
    xs = np.arange(g.order)
    for l, c in enumerate(classes):
        ks = ci[g.mul[g.inverse[xs], c.representative]]
        js = ci[xs]
        np.add.at(a[:, :, l], (js, ks), 1)
    return a


def character_table(g: Group, cap: int | None = None) -> CharacterTable:
    cached = g.__dict__.get("_character_table")
    if cached is not None:
        return cached
    cap = DEFAULT_LIMITS.group_order if cap is None else cap
    if g.order > cap:
        raise CapExceeded(f"|G| = {g.order} exceeds the cap {cap}")
    classes = tuple(conjugacy_classes(g))
    r = len(classes)
    n = g.order
    e = g.exponent
    p = _dixon_prime(e, n)
    a = class_coefficients(g) % p
    sizes = [c.size for c in classes]

    # simultaneous eigenspaces of the matrices M_j[k, l] = a[j, k, l]
    spaces = [np.eye(r, dtype=np.int64)]
    for j in range(r):
        if all(s.shape[1] == 1 for s in spaces):
            break
        m = a[j]
        new = []
        for b in spaces:
            if b.shape[1] == 1:
                new.append(b)
                continue
            mb = (m @ b) % p
            found = 0
            for lam in range(p):
                ns = _nullspace_mod((mb - lam * b) % p, p)
                if ns.shape[1]:
                    new.append((b @ ns) % p)
                    found += ns.shape[1]
                    if found == b.shape[1]:
                        break
            if found != b.shape[1]:
                raise InvariantViolated("class matrices failed to diagonalise mod p")
        spaces = new
    if len(spaces) != r or any(s.shape[1] != 1 for s in spaces):
        raise InvariantViolated("common eigenvectors are not one dimensional")

    inv_cls = [int(class_index(g)[g.inv(c.representative)]) for c in classes]
    ring = cyclotomic_ring(e)
    z_e = pow(primitive_root(p), (p - 1) // e, p)
    ci = class_index(g)
    rows = []
    for s in spaces:
        w = s[:, 0] % p
        w = (w * pow(int(w[0]), -1, p)) % p
        tot = sum(int(w[l]) * int(w[inv_cls[l]]) * pow(sizes[l], -1, p) for l in range(r)) % p
        d2 = (n * pow(tot, -1, p)) % p
        d = next((d for d in range(1, isqrt(n) + 1) if (d * d - d2) % p == 0), None)
        if d is None:
            raise InvariantViolated("no degree lifts the eigenvector")
        chi_mod = [(d * int(w[l]) * pow(sizes[l], -1, p)) % p for l in range(r)]
        row = []
        for l, c in enumerate(classes):
            x = c.representative
            o = g.element_order(x)
            zo = pow(z_e, e // o, p)
            pw = [int(ci[g.power(x, j)]) for j in range(o)]
            vec = [0] * e
            for k in range(o):
                m_k = sum(chi_mod[pw[j]] * pow(zo, (-j * k) % o, p) for j in range(o))
                m_k = (m_k * pow(o, -1, p)) % p
                if m_k > d:
                    raise InvariantViolated("eigenvalue multiplicity failed to lift")
                vec[k * (e // o)] += m_k
            row.append(ring.from_exponents(vec))
        rows.append(tuple(row))

    trivial = tuple(ring.rational(1) for _ in classes)
    rows.sort(key=lambda row: (row != trivial, ring.to_int(row[0]), row))
    table = CharacterTable(g, e, classes, tuple(rows))
    table.check()
    object.__setattr__(g, "_character_table", table)
    return table
