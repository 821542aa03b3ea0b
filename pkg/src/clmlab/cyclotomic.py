"""Arithmetic in Z[zeta_e] on the power basis 1, zeta, ..., zeta^(phi(e)-1).

An element is a tuple of ``phi(e)`` Python ints.  Products and Galois
conjugates are formed as exponent vectors of length ``e`` and then reduced
modulo the cyclotomic polynomial through a precomputed table.
"""

from __future__ import annotations

import cmath
from functools import lru_cache
from math import gcd

from sympy import Poly, cyclotomic_poly, symbols

Elt = tuple[int, ...]


class CyclotomicRing:
    def __init__(self, e: int):
        if e < 1:
            raise ValueError("level must be positive")
        self.e = e
        x = symbols("x")
        coeffs = [int(c) for c in Poly(cyclotomic_poly(e, x), x).all_coeffs()]
        self.phi = len(coeffs) - 1
        # low-to-high coefficients of the monic Phi_e
        low = coeffs[::-1]
        # reduce zeta^k for k < e
        table = []
        cur = [0] * self.phi
        cur[0] = 1
        for _ in range(e):
            table.append(tuple(cur))
            # multiply by zeta
            top = cur[-1]
            nxt = [0] + cur[:-1]
            if top:
                nxt = [a - top * b for a, b in zip(nxt, low[:-1])]
            cur = nxt
        self._powers = table

    def __repr__(self) -> str:
        return f"CyclotomicRing({self.e})"

    @property
    def zero(self) -> Elt:
        return (0,) * self.phi

    @property
    def one(self) -> Elt:
        return self.rational(1)

    def rational(self, n: int) -> Elt:
        return (int(n),) + (0,) * (self.phi - 1)

    def zeta_power(self, k: int) -> Elt:
        return self._powers[k % self.e]

    def from_exponents(self, vec) -> Elt:
        """Reduce sum_k vec[k] zeta^k (k taken mod e)."""
        out = [0] * self.phi
        for k, c in enumerate(vec):
            if c:
                for i, t in enumerate(self._powers[k % self.e]):
                    if t:
                        out[i] += c * t
        return tuple(out)

    def add(self, a: Elt, b: Elt) -> Elt:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: Elt, b: Elt) -> Elt:
        return tuple(x - y for x, y in zip(a, b))

    def scale(self, a: Elt, n: int) -> Elt:
        return tuple(n * x for x in a)

    def mul(self, a: Elt, b: Elt) -> Elt:
        vec = [0] * self.e
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        vec[(i + j) % self.e] += x * y
        return self.from_exponents(vec)

    def galois(self, a: Elt, k: int) -> Elt:
        """Image under zeta -> zeta^k (k a unit mod e)."""
        if gcd(k, self.e) != 1:
            raise ValueError(f"{k} is not a unit mod {self.e}")
        vec = [0] * self.e
        for i, x in enumerate(a):
            if x:
                vec[(i * k) % self.e] += x
        return self.from_exponents(vec)

    def conj(self, a: Elt) -> Elt:
        return self.galois(a, -1 % self.e if self.e > 1 else 1)

    def is_rational(self, a: Elt) -> bool:
        return not any(a[1:])

    def to_int(self, a: Elt) -> int:
        if not self.is_rational(a):
            raise ValueError(f"{a} is not a rational integer")
        return a[0]

    def to_complex(self, a: Elt) -> complex:
        z = cmath.exp(2j * cmath.pi / self.e)
        return sum(c * z**i for i, c in enumerate(a))

    def units(self) -> list[int]:
        return [k for k in range(1, self.e + 1) if gcd(k, self.e) == 1] if self.e > 1 else [1]

    def format(self, a: Elt) -> str:
        terms = []
        for i, c in enumerate(a):
            if not c:
                continue
            mon = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if i == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mon)
            elif c == -1:
                terms.append("-" + mon)
            else:
                terms.append(f"{c}*{mon}")
        s = " + ".join(terms).replace("+ -", "- ")
        return s or "0"


@lru_cache(maxsize=None)
def cyclotomic_ring(e: int) -> CyclotomicRing:
    return CyclotomicRing(e)
