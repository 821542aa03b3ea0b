"""Partitions and closed-form counts for modules over a complete DVR.

A partition ``lam = (l_1 >= l_2 >= ...)`` stands for the module
``O/p^l_1 + O/p^l_2 + ...`` over a discrete valuation ring with residue field of
size ``q``.  By Morita equivalence the same counts hold for modules over the
matrix ring ``M_h(O)``, so nothing here depends on ``h``.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import ParseError

Partition = tuple[int, ...]


def normalize(parts: Sequence[int]) -> Partition:
    if any(int(x) < 0 for x in parts):
        raise ParseError(f"negative part in {tuple(parts)}")
    return tuple(sorted((int(x) for x in parts if int(x) > 0), reverse=True))


def parse_partition(text: str) -> Partition:
    """Parse ``"2,1"``, ``"(2,1)"``, ``"2.1"`` or ``""`` (the empty partition)."""
    s = text.strip()
    if s[:1] in ("(", "[") and len(s) >= 2 and s[-1] == {"(": ")", "[": "]"}[s[0]]:
        s = s[1:-1]
    if any(ch in s for ch in "()[]"):
        raise ParseError(f"bad partition {text!r}")
    s = s.replace(".", ",").replace(" ", "")
    if not s:
        return ()
    try:
        return normalize([int(x) for x in s.split(",") if x])
    except ValueError as exc:
        raise ParseError(f"bad partition {text!r}") from exc


def format_partition(lam: Sequence[int]) -> str:
    return "(" + ",".join(map(str, lam)) + ")"


def size(lam: Sequence[int]) -> int:
    return sum(lam)


def transpose(lam: Sequence[int]) -> Partition:
    """Conjugate partition: lam'_j = #{i : lam_i >= j}."""
    if not lam:
        return ()
    return tuple(sum(1 for x in lam if x >= j) for j in range(1, max(lam) + 1))


def partitions_of(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of n in reverse lexicographic order."""
    max_part = n if max_part is None else max_part
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            yield (first,) + rest


def partitions_up_to(max_size: int) -> Iterator[Partition]:
    for n in range(max_size + 1):
        yield from partitions_of(n)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def hom_formula(lam: Sequence[int], mu: Sequence[int], q: int) -> int:
    """|Hom(lam, mu)| = q^(sum_j lam'_j mu'_j)."""
    return q ** _dot(transpose(lam), transpose(mu))


def sur_formula(lam: Sequence[int], mu: Sequence[int], q: int) -> int:
    """Number of surjections from the module of type lam onto the module of type mu.

    Choose images of the generators of mu in turn, grouped into blocks of equal
    part size v (largest first).  A generator of order p^v must come from the
    q^(number of parts of lam that are >= v) classes available modulo the
    radical, and must avoid the span of the generators already chosen.
    """
    lam, mu = normalize(lam), normalize(mu)
    if not mu:
        return 1
    if len(mu) > len(lam) or any(m > l for m, l in zip(mu, lam)):
        return 0
    total = Fraction(hom_formula(lam, mu, q))
    before = 0
    for v, r in sorted(Counter(mu).items(), reverse=True):
        c = sum(1 for x in lam if x >= v)
        for s in range(r):
            total *= 1 - Fraction(1, q ** (c - before - s))
        before += r
    if total.denominator != 1:
        raise ArithmeticError("surjection count is not integral")
    return int(total)


def q_pochhammer_inverse(k: int, q: int) -> Fraction:
    """prod_{j=1..k} (1 - q^-j)."""
    out = Fraction(1)
    for j in range(1, k + 1):
        out *= 1 - Fraction(1, q**j)
    return out


def aut_formula(mu: Sequence[int], q: int) -> int:
    """|Aut(mu)| = q^(sum_j (mu'_j)^2) prod_i prod_{j<=m_i} (1 - q^-j), m_i the part multiplicities."""
    mu = normalize(mu)
    val = Fraction(q ** _dot(transpose(mu), transpose(mu)))
    for m in Counter(mu).values():
        val *= q_pochhammer_inverse(m, q)
    if val.denominator != 1:
        raise ArithmeticError("automorphism count is not integral")
    return int(val)


def module_order(lam: Sequence[int], q: int, h: int = 1) -> int:
    return q ** (h * size(lam))
