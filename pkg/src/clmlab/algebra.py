"""Elements of the rational group algebra Q[G] as dense coefficient vectors."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .groups import Group
from .lattice import common_denominator

Elem = tuple[Fraction, ...]


def basis_element(g: Group, x: int) -> Elem:
    return tuple(Fraction(int(i == x)) for i in range(g.order))


def one(g: Group) -> Elem:
    return basis_element(g, g.identity)


def to_ints(a: Sequence) -> tuple[np.ndarray, int]:
    den = common_denominator(a)
    return np.array([int(Fraction(x) * den) for x in a], dtype=object), den


def mul(g: Group, a: Sequence, b: Sequence) -> Elem:
    """(a b)(z) = sum_{x y = z} a(x) b(y)."""
    ai, da = to_ints(a)
    bi, db = to_ints(b)
    out = np.zeros(g.order, dtype=object)
    for x in np.nonzero(ai)[0]:
        out[g.mul[x]] += ai[x] * bi
    den = da * db
    return tuple(Fraction(int(v), den) for v in out)


def add(a: Sequence, b: Sequence) -> Elem:
    return tuple(Fraction(x) + Fraction(y) for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Elem:
    return tuple(Fraction(x) - Fraction(y) for x, y in zip(a, b))


def scale(a: Sequence, c) -> Elem:
    c = Fraction(c)
    return tuple(Fraction(x) * c for x in a)


def left_translate(g: Group, a: Sequence, s: int) -> Elem:
    """s * a."""
    out = [Fraction(0)] * g.order
    for x, c in enumerate(a):
        if c:
            out[g.m(s, x)] += Fraction(c)
    return tuple(out)


def right_translate(g: Group, a: Sequence, s: int) -> Elem:
    """a * s."""
    out = [Fraction(0)] * g.order
    for x, c in enumerate(a):
        if c:
            out[g.m(x, s)] += Fraction(c)
    return tuple(out)


def subgroup_average(g: Group, elements: Sequence[int]) -> Elem:
    """(1/|H|) sum_{h in H} h."""
    out = [Fraction(0)] * g.order
    for x in elements:
        out[x] = Fraction(1, len(elements))
    return tuple(out)


def trace_form(g: Group, a: Sequence, b: Sequence) -> Fraction:
    """(a b)(1) = sum_x a(x) b(x^-1)."""
    return sum((Fraction(a[x]) * Fraction(b[g.inv(x)]) for x in range(g.order) if a[x]), Fraction(0))


def is_central(g: Group, a: Sequence) -> bool:
    return all(left_translate(g, a, s) == right_translate(g, a, s) for s in g.generators)


def format_element(g: Group, a: Sequence) -> str:
    terms = [f"{Fraction(c)}*{g.labels[x]}" for x, c in enumerate(a) if c]
    return " + ".join(terms) if terms else "0"
