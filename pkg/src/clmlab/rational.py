"""Simple components of Q[G], their central idempotents, good primes and ranks.

Components are indexed from 1, and component 1 is always the trivial one.
A component collects one Galois orbit of absolutely irreducible characters:
``chi_i`` is the orbit sum, ``h_i`` is the common degree, and the central
idempotent is ``e_i = (h_i/|G|) sum_g chi_i(g^-1) g``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

from . import algebra
from .characters import CharacterTable, character_table
from .errors import InvariantViolated, UnsupportedComponent
from .groups import Group, Subgroup, class_index
from math import gcd

from .lattice import common_denominator, det_fraction, hnf_rows, smith_diagonal, valuation

GOOD, BAD, UNSUPPORTED = "good", "bad", "unsupported"


def _load_registry() -> dict:
    text = resources.files("clmlab").joinpath("data/split_registry.json").read_text()
    return json.loads(text)["schur_index_one"]


SPLIT_REGISTRY = _load_registry()


@dataclass(frozen=True, eq=False)
class AlgebraComponent:
    index: int
    table: CharacterTable
    members: tuple[int, ...]
    constituent: int
    h: int
    center_degree: int
    character: tuple[int, ...]
    split: bool

    @property
    def group(self) -> Group:
        return self.table.group

    @property
    def dim(self) -> int:
        return self.center_degree * self.h * self.h

    @property
    def is_trivial(self) -> bool:
        return self.index == 1

    @property
    def phi(self):
        return self.table.values[self.constituent]

    @cached_property
    def idempotent(self) -> tuple[Fraction, ...]:
        g = self.group
        ci = class_index(g)
        n = g.order
        return tuple(Fraction(self.h * self.character[int(ci[g.inv(x)])], n) for x in range(n))

    @cached_property
    def lattice_basis(self) -> tuple[list[int], int]:
        """Z-basis of span{e_i * s : s in G} as integer rows over a common denominator."""
        g = self.group
        e = self.idempotent
        den = common_denominator(e)
        ints = np.array([int(c * den) for c in e], dtype=object)
        # (e s)(z) = e(z s^-1)
        rows = [list(ints[g.mul[:, g.inv(s)]]) for s in range(g.order)]
        return hnf_rows(rows, g.order), den

    def __repr__(self) -> str:
        return f"AlgebraComponent(e{self.index}, h={self.h}, center_degree={self.center_degree}, dim={self.dim})"


def rational_components(t: CharacterTable | Group) -> tuple[AlgebraComponent, ...]:
    if isinstance(t, Group):
        t = character_table(t)
    g = t.group
    cached = g.__dict__.get("_components")
    if cached is not None:
        return cached
    ring = t.ring
    rows = t.values
    index_of = {row: i for i, row in enumerate(rows)}
    seen: set[int] = set()
    orbits: list[list[int]] = []
    for i, row in enumerate(rows):
        if i in seen:
            continue
        orb = sorted({index_of[tuple(ring.galois(v, k) for v in row)] for k in ring.units()})
        seen.update(orb)
        orbits.append(orb)

    registry = SPLIT_REGISTRY.get(g.name)
    comps_raw = []
    for orb in orbits:
        h = t.degrees[orb[0]]
        total = [ring.zero] * len(t.classes)
        for i in orb:
            total = [ring.add(a, b) for a, b in zip(total, rows[i])]
        if not all(ring.is_rational(v) for v in total):
            raise InvariantViolated("Galois orbit sum is not rational")
        chi = tuple(ring.to_int(v) for v in total)
        constituent = min(orb, key=lambda i: rows[i])
        comps_raw.append((h, len(orb), chi, tuple(orb), constituent))
    trivial_chi = tuple(1 for _ in t.classes)
    comps_raw.sort(key=lambda c: (c[2] != trivial_chi, c[0], c[1], tuple(-x for x in c[2])))

    split = False
    if registry is not None and registry["order"] == g.order:
        want = sorted(tuple(x) for x in registry["components"])
        have = sorted((c[0], c[1]) for c in comps_raw)
        split = want == have
    comps = tuple(
        AlgebraComponent(
            index=k + 1,
            table=t,
            members=orb,
            constituent=con,
            h=h,
            center_degree=deg,
            character=chi,
            split=split,
        )
        for k, (h, deg, chi, orb, con) in enumerate(comps_raw)
    )
    object.__setattr__(g, "_components", comps)
    return comps


def check_decomposition(comps: Sequence[AlgebraComponent]) -> None:
    """Orthogonality, completeness, centrality and dimension count, exactly."""
    g = comps[0].group
    total = [Fraction(0)] * g.order
    for a in comps:
        if not algebra.is_central(g, a.idempotent):
            raise InvariantViolated(f"e{a.index} is not central")
        for b in comps:
            prod = algebra.mul(g, a.idempotent, b.idempotent)
            want = a.idempotent if a is b else (Fraction(0),) * g.order
            if prod != want:
                raise InvariantViolated(f"e{a.index} e{b.index} has the wrong value")
        total = [x + y for x, y in zip(total, a.idempotent)]
    if tuple(total) != algebra.one(g):
        raise InvariantViolated("idempotents do not sum to 1")
    if sum(c.dim for c in comps) != g.order:
        raise InvariantViolated("component dimensions do not sum to |G|")
    if comps[0].idempotent != tuple(Fraction(1, g.order) for _ in range(g.order)):
        raise InvariantViolated("component 1 is not the trivial one")


def format_components(comps: Sequence[AlgebraComponent]) -> str:
    g = comps[0].group
    lines = [f"group {g.name} order {g.order}: {len(comps)} components"]
    for c in comps:
        lines.append(
            f"e{c.index}: h={c.h} center_degree={c.center_degree} dim={c.dim} "
            f"split={'yes' if c.split else 'unconfirmed'}"
        )
        lines.append("  character: " + " ".join(str(v) for v in c.character))
        coeffs = " ".join(f"{g.labels[x]}:{v}" for x, v in enumerate(c.idempotent))
        lines.append("  idempotent: " + coeffs)
    return "\n".join(lines)


# ----------------------------------------------------------------------------
# good primes


@dataclass(frozen=True)
class PrimeReport:
    prime: int
    verdict: str
    denominator_ok: bool | None = None
    gram_valuation: int | None = None
    closed_good: bool | None = None

    @property
    def tests_agree(self) -> bool:
        if self.verdict == UNSUPPORTED or self.denominator_ok is None:
            return True
        gram_ok = self.gram_valuation == 0
        return self.denominator_ok == gram_ok == self.closed_good


def denominator_test(c: AlgebraComponent, p: int) -> bool:
    return all(x.denominator % p for x in c.idempotent)


def projection_gram_determinant(c: AlgebraComponent) -> Fraction:
    """Determinant of the reduced-trace form on a Z-basis of the projection e Z[G].

    On a split component with center Q the reduced trace is
    trd(x) = (1/h) Tr(left multiplication by x on e Q[G]) = (|G|/h) x(1).
    """
    cached = c.__dict__.get("_proj_gram_det")
    if cached is not None:
        return cached
    g = c.group
    basis, den = c.lattice_basis
    b = np.array(basis, dtype=object)
    gram_int = b[:, g.inverse] @ b.T
    scale = Fraction(g.order, c.h) / (den * den)
    det = det_fraction(gram_int.tolist()) * scale ** len(basis)
    object.__setattr__(c, "_proj_gram_det", det)
    return det


def intersection_index(c: AlgebraComponent) -> int:
    """Index of Z[G] n e Q[G] inside the projection e Z[G].

    With the projection basis written as B_int/den, the intersection is
    {c : c B_int = 0 mod den}, so the index is the size of the row span of
    B_int modulo den, read off the Smith invariants of B_int.
    """
    basis, den = c.lattice_basis
    index = 1
    for d in smith_diagonal(basis):
        index *= den // gcd(d, den)
    return index


def gram_determinant(c: AlgebraComponent) -> Fraction:
    """Reduced-trace discriminant of the order Z[G] n e Q[G].

    Localised at p this order equals e Z_(p)[G] when e is p-integral and is
    strictly smaller than that projection otherwise, so its discriminant is a
    p-unit exactly when p is good for e.
    """
    idx = intersection_index(c)
    return projection_gram_determinant(c) * idx * idx


def gram_valuation(c: AlgebraComponent, p: int) -> int:
    return valuation(gram_determinant(c), p)


def prime_report(c: AlgebraComponent, p: int) -> PrimeReport:
    n = c.group.order
    supported = c.split and c.center_degree == 1
    if not supported:
        if n % p:
            return PrimeReport(p, GOOD)
        return PrimeReport(p, UNSUPPORTED)
    den = denominator_test(c, p)
    gv = gram_valuation(c, p)
    closed = (n // c.h) % p != 0
    rep = PrimeReport(p, GOOD if closed else BAD, den, gv, closed)
    if not rep.tests_agree:
        raise InvariantViolated(
            f"good-prime tests disagree for e{c.index} at p={p}: denominator={den}, gram valuation={gv}, closed={closed}"
        )
    return rep


def good_primes(
    comps: AlgebraComponent | Iterable[AlgebraComponent], primes: Iterable[int], strict: bool = False
) -> dict[int, str]:
    """Verdict per prime for a component or a sum of components.

    A sum is good exactly when every summand is good; any unsupported summand
    at a prime where no summand is bad makes the sum unsupported.  With
    ``strict`` an unsupported verdict raises UnsupportedComponent.
    """
    if isinstance(comps, AlgebraComponent):
        comps = [comps]
    comps = list(comps)
    out = {}
    for p in primes:
        verdicts = [prime_report(c, p).verdict for c in comps]
        if BAD in verdicts:
            v = BAD
        elif UNSUPPORTED in verdicts:
            v = UNSUPPORTED
        else:
            v = GOOD
        if strict and v == UNSUPPORTED:
            raise UnsupportedComponent(f"good-prime status at p={p} is not supported for these components")
        out[p] = v
    return out


def is_good(comps: AlgebraComponent | Iterable[AlgebraComponent], p: int) -> bool:
    return good_primes(comps, [p])[p] == GOOD


# ----------------------------------------------------------------------------
# ranks


def induced_trivial(g: Group, h: Subgroup) -> tuple[Fraction, ...]:
    """Values of Ind_H^G 1 on the conjugacy classes of G."""
    t = character_table(g)
    ci = class_index(g)
    counts = [0] * len(t.classes)
    for x in h.elements:
        counts[int(ci[x])] += 1
    n, m = g.order, h.order
    return tuple(Fraction(n * counts[l], m * c.size) for l, c in enumerate(t.classes))


@dataclass(frozen=True, eq=False)
class RankSpec:
    group: Group
    places: tuple[Subgroup, ...] | None
    chi_k: tuple[Fraction, ...] | None
    u: dict[int, Fraction]

    def __getitem__(self, i: int) -> Fraction:
        return self.u[i]

    def vector(self) -> list[Fraction]:
        """(u_2, ..., u_m)."""
        return [self.u[i] for i in sorted(self.u) if i != 1]

    def format(self) -> str:
        parts = [f"u{i}={v}" for i, v in sorted(self.u.items())]
        return " ".join(parts)


def rank_u(g: Group, places: Sequence[Subgroup | None]) -> RankSpec:
    """chi_K = -1 + sum_v Ind_{G_v}^G 1 and u_i = <chi_K, phi_i>/h_i.

    A place given as ``None`` has trivial decomposition group.  The entry
    ``u[1]`` records <chi_K, 1>.
    """
    from .groups import trivial_subgroup

    t = character_table(g)
    comps = rational_components(t)
    subs = tuple(trivial_subgroup(g) if s is None else s for s in places)
    for s in subs:
        if s.parent is not g:
            raise InvariantViolated("place subgroup belongs to another group")
    chi = [Fraction(-1)] * len(t.classes)
    for s in subs:
        chi = [a + b for a, b in zip(chi, induced_trivial(g, s))]
    u = {}
    for c in comps:
        u[c.index] = t.inner_rational(chi, c.phi) / c.h
    return RankSpec(g, subs, tuple(chi), u)


def rank_from_vector(g: Group, values: Sequence[Fraction]) -> RankSpec:
    """Rank given directly as (u_2, ..., u_m); u_1 is recorded as 0."""
    comps = rational_components(g)
    if len(values) != len(comps) - 1:
        raise ValueError(f"expected {len(comps) - 1} rank entries, got {len(values)}")
    u = {1: Fraction(0)}
    for c, v in zip(comps[1:], values):
        u[c.index] = Fraction(v)
    return RankSpec(g, None, None, u)
