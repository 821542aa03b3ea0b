"""Hecke orders, the invariants functor and rank transfer for a subgroup.

For a subgroup ``H`` of ``G`` write ``e1' = (1/|H|) sum_{h in H} h``, ``a`` for
``Ind_H^G 1 - 1`` and ``e`` for the sum of the central idempotents of the
components meeting ``a``.  The order ``o`` is the ring of left-H-invariant
elements of ``e Z_S[G] e1'``; taking H-invariants turns finite
``e Z_S[G]``-modules into ``o``-modules, and this module checks the resulting
correspondence computationally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import algebra
from .characters import character_table
from .errors import (
    BadPrime,
    InvariantViolated,
    NotFound,
    NotNormal,
    NotUnique,
    UnsupportedComponent,
)
from .finmod import FiniteModule, aut_count, is_isomorphic, p_primary_exponents
from .gmodules import GammaModule, ModuleType, count_maps, enumerate_types, module_from_type
from .groups import Group, Subgroup, class_index, coset_and_quotient, image_subgroup, left_cosets
from .lattice import (
    common_denominator,
    det_fraction,
    express_in_basis,
    hnf_rows,
    integer_kernel,
    transpose,
    valuation,
)
from .limits import DEFAULT_LIMITS, Limits
from .rational import BAD, UNSUPPORTED, AlgebraComponent, RankSpec, good_primes, induced_trivial, rank_u, rational_components

Elem = tuple[Fraction, ...]


# ----------------------------------------------------------------------------
# the augmentation idempotent


@dataclass(frozen=True, eq=False)
class Augmentation:
    group: Group
    subgroup: Subgroup
    character: tuple[Fraction, ...]  # a = Ind_H^G 1 - 1 on classes
    multiplicities: dict[int, int]  # component index -> <a, phi_i>
    constituents: tuple[AlgebraComponent, ...]
    idempotent: Elem
    e1_prime: Elem

    @property
    def degree(self) -> int:
        return self.group.order // self.subgroup.order - 1

    @property
    def absolutely_irreducible(self) -> bool:
        if len(self.constituents) != 1:
            return False
        c = self.constituents[0]
        return c.center_degree == 1 and c.split and self.multiplicities[c.index] == 1


def _sum_elems(elems: Sequence[Sequence[Fraction]], n: int) -> Elem:
    out = [Fraction(0)] * n
    for a in elems:
        out = [x + y for x, y in zip(out, a)]
    return tuple(out)


def augmentation_component(g: Group, h: Subgroup) -> Augmentation:
    """The virtual character a, its components and their idempotent sum.

    Two independent routes pick the components: the support of a in the
    character inner product, and the nonvanishing of e_i e1' for i != 1.
    They must agree.
    """
    if h.parent is not g:
        raise InvariantViolated("subgroup belongs to another group")
    t = character_table(g)
    comps = rational_components(t)
    a = tuple(x - 1 for x in induced_trivial(g, h))
    mult = {}
    by_character = []
    for c in comps[1:]:
        m = t.inner_rational(a, c.phi)
        if m.denominator != 1:
            raise InvariantViolated(f"<a, phi_{c.index}> = {m} is not an integer")
        if m:
            mult[c.index] = int(m)
            by_character.append(c)
    e1p = algebra.subgroup_average(g, h.elements)
    by_product = [c for c in comps[1:] if any(algebra.mul(g, c.idempotent, e1p))]
    if [c.index for c in by_character] != [c.index for c in by_product]:
        raise InvariantViolated(
            f"component routes disagree: characters give {[c.index for c in by_character]}, "
            f"products give {[c.index for c in by_product]}"
        )
    e_char = _sum_elems([c.idempotent for c in by_character], g.order)
    e_prod = _sum_elems([c.idempotent for c in by_product], g.order)
    if e_char != e_prod:
        raise InvariantViolated("idempotent routes disagree")
    return Augmentation(g, h, a, mult, tuple(by_character), e_char, e1p)


def frobenius_property(g: Group, h: Subgroup) -> bool:
    """e1' e_i != 0 exactly when i = 1 or e_i lies under the augmentation idempotent."""
    aug = augmentation_component(g, h)
    inside = {c.index for c in aug.constituents}
    for c in rational_components(g):
        nonzero = any(algebra.mul(g, aug.e1_prime, c.idempotent))
        under = algebra.mul(g, c.idempotent, aug.idempotent) == tuple(c.idempotent)
        if nonzero != (c.index == 1 or under):
            return False
        if under != (c.index in inside):
            return False
    return True


# ----------------------------------------------------------------------------
# the Hecke order


def _frac_mod(x: Fraction, modulus: int) -> int:
    x = Fraction(x)
    try:
        inv = pow(x.denominator, -1, modulus)
    except ValueError as exc:
        raise BadPrime(f"coefficient {x} is not integral modulo {modulus}") from exc
    return x.numerator * inv % modulus


def _p_integral(x: Fraction, p: int) -> bool:
    return Fraction(x).denominator % p != 0


@dataclass(frozen=True)
class ComponentReport:
    index: int
    multiplicity: int  # <a, phi_i>
    dim: int  # dim_Q of e_i e1' Q[G] e1'
    gram_valuations: dict[int, int] | None  # None when maximality is not checkable

    @property
    def maximal(self) -> bool | None:
        if self.gram_valuations is None:
            return None
        return all(v == 0 for v in self.gram_valuations.values())


@dataclass(frozen=True, eq=False)
class HeckeOrder:
    """Basis (elements of Q[G]) and structure constants of the order o.

    One Z-basis of the left-H-invariants of the lattice spanned by the
    elements e x e1' serves every good prime, since localisation commutes
    with spans and with taking invariants.
    """

    aug: Augmentation
    primes: tuple[int, ...]
    basis: tuple[Elem, ...]
    structure: tuple[tuple[tuple[Fraction, ...], ...], ...]  # structure[i][j] = coords of b_i b_j
    identity: tuple[Fraction, ...]
    components: tuple[ComponentReport, ...] = field(default=())

    @property
    def group(self) -> Group:
        return self.aug.group

    @property
    def subgroup(self) -> Subgroup:
        return self.aug.subgroup

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, x: Sequence[Fraction]) -> list[Fraction] | None:
        return express_in_basis([list(b) for b in self.basis], list(x))

    def element(self, coords: Sequence[Fraction]) -> Elem:
        out = [Fraction(0)] * self.group.order
        for c, b in zip(coords, self.basis):
            if c:
                out = [x + Fraction(c) * y for x, y in zip(out, b)]
        return tuple(out)

    def contains(self, x: Sequence[Fraction], p: int) -> bool:
        """x lies in o localised at p."""
        co = self.coordinates(x)
        return co is not None and all(_p_integral(c, p) for c in co)

    def is_local_basis(self, elements: Sequence[Sequence[Fraction]], p: int) -> bool:
        """The given elements form a Z_(p)-basis of o localised at p."""
        if len(elements) != self.rank:
            return False
        rows = []
        for x in elements:
            co = self.coordinates(x)
            if co is None or not all(_p_integral(c, p) for c in co):
                return False
            rows.append(co)
        d = det_fraction(rows)
        return d != 0 and valuation(d, p) == 0

    def multiply(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> list[Fraction]:
        """Product of coordinate vectors."""
        out = [Fraction(0)] * self.rank
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if b:
                    for k, c in enumerate(self.structure[i][j]):
                        out[k] += a * b * c
        return out

    @cached_property
    def _traces(self) -> list[Fraction]:
        # trace of left multiplication by b_k on the Hecke algebra
        return [sum((self.structure[k][j][j] for j in range(self.rank)), Fraction(0)) for k in range(self.rank)]

    def format(self) -> str:
        g = self.group
        lines = [
            f"hecke order for ({g.name}, H of order {self.subgroup.order}) over primes {list(self.primes)}",
            f"rank {self.rank}",
        ]
        for k, b in enumerate(self.basis):
            lines.append(f"b{k} = {algebra.format_element(g, b)}")
        lines.append("identity = " + " + ".join(f"{c}*b{k}" for k, c in enumerate(self.identity) if c))
        for i in range(self.rank):
            for j in range(self.rank):
                terms = " + ".join(f"{c}*b{k}" for k, c in enumerate(self.structure[i][j]) if c) or "0"
                lines.append(f"b{i}*b{j} = {terms}")
        for c in self.components:
            status = "n/a" if c.maximal is None else ("maximal" if c.maximal else "NOT maximal")
            lines.append(f"component e{c.index}: multiplicity {c.multiplicity}, dim {c.dim}, {status}")
        verdicts = good_primes(self.aug.constituents, self.primes)
        lines.append("good primes: " + ", ".join(f"{p}:{v}" for p, v in verdicts.items()))
        return "\n".join(lines)

    def to_csv(self) -> str:
        rows = ["basis,element"]
        g = self.group
        for k, b in enumerate(self.basis):
            rows.append(f"b{k},{' '.join(f'{c}*{g.labels[x]}' for x, c in enumerate(b) if c)}")
        rows.append("component,multiplicity,dim,maximal")
        for c in self.components:
            rows.append(f"e{c.index},{c.multiplicity},{c.dim},{c.maximal}")
        return "\n".join(rows) + "\n"


def _rows_to_ints(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], int]:
    den = common_denominator([x for r in rows for x in r]) if rows else 1
    return [[int(Fraction(x) * den) for x in r] for r in rows], den


def _invariant_lattice(g: Group, aug: Augmentation) -> list[Elem]:
    """Z-basis of the left-H-invariant part of span_Z{e x e1' : x in G}."""
    ee = algebra.mul(g, aug.idempotent, aug.e1_prime)
    spans = [algebra.left_translate(g, ee, x) for x in range(g.order)]  # x e e1' = e x e1'
    ints, den = _rows_to_ints(spans)
    lat = hnf_rows(ints, g.order)
    if not lat:
        return []
    # y . lat is left-H-invariant iff y (lat s - lat) = 0 for every generator s of H
    blocks = []
    for s in aug.subgroup.generators:
        moved = [[row[g.m(g.inv(s), z)] for z in range(g.order)] for row in lat]  # (s . v)(z) = v(s^-1 z)
        blocks.append([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(moved, lat)])
    if blocks:
        stacked = [sum((blk[i] for blk in blocks), []) for i in range(len(lat))]
        ker = integer_kernel(transpose(stacked), len(lat))
    else:
        ker = [[int(i == j) for j in range(len(lat))] for i in range(len(lat))]
    vecs = [[sum(c * row[z] for c, row in zip(y, lat)) for z in range(g.order)] for y in ker]
    return [tuple(Fraction(v, den) for v in row) for row in hnf_rows(vecs, g.order)] if vecs else []


def hecke_order(g: Group, h: Subgroup, primes: Sequence[int]) -> HeckeOrder:
    """The order o with exact structure constants, verified ring axioms and,
    for split components with center Q, a Gram-determinant maximality check."""
    aug = augmentation_component(g, h)
    primes = tuple(sorted(set(int(p) for p in primes)))
    if aug.constituents:
        verdicts = good_primes(aug.constituents, primes)
        for p, v in verdicts.items():
            if v == BAD:
                raise BadPrime(f"p={p} is bad for the augmentation idempotent of {g.name} and a subgroup of order {h.order}")
            if v == UNSUPPORTED:
                raise UnsupportedComponent(f"good-prime status at p={p} is not supported")
    basis = _invariant_lattice(g, aug)
    blist = [list(b) for b in basis]
    r = len(basis)

    def coords(x) -> tuple[Fraction, ...]:
        co = express_in_basis(blist, list(x))
        if co is None:
            raise InvariantViolated("product leaves the Hecke algebra")
        for p in primes:
            if not all(_p_integral(c, p) for c in co):
                raise InvariantViolated(f"product is not {p}-integral in the order")
        return tuple(co)

    structure = tuple(tuple(coords(algebra.mul(g, basis[i], basis[j])) for j in range(r)) for i in range(r))
    ident_elem = algebra.mul(g, aug.idempotent, aug.e1_prime)
    identity = coords(ident_elem) if r else ()
    o = HeckeOrder(aug, primes, tuple(basis), structure, identity)
    _check_ring_axioms(o)
    comps = tuple(_component_report(o, c) for c in aug.constituents)
    object.__setattr__(o, "components", comps)
    expected = sum(c.center_degree * aug.multiplicities[c.index] ** 2 for c in aug.constituents if c.split)
    if all(c.split for c in aug.constituents) and expected != r:
        raise InvariantViolated(f"rank {r} differs from the character count {expected}")
    if sum(c.dim for c in comps) != r:
        raise InvariantViolated("component dimensions do not add up to the rank")
    return o


def _check_ring_axioms(o: HeckeOrder) -> None:
    r = o.rank
    unit = [[Fraction(int(i == k)) for k in range(r)] for i in range(r)]
    for i in range(r):
        if o.multiply(o.identity, unit[i]) != unit[i] or o.multiply(unit[i], o.identity) != unit[i]:
            raise InvariantViolated("identity of the order does not act as identity")
    for i in range(r):
        for j in range(r):
            for k in range(r):
                lhs = o.multiply(o.structure[i][j], unit[k])
                rhs = o.multiply(unit[i], o.structure[j][k])
                if lhs != rhs:
                    raise InvariantViolated("multiplication is not associative")


def _component_report(o: HeckeOrder, c: AlgebraComponent) -> ComponentReport:
    g = o.group
    m = o.aug.multiplicities[c.index]
    eps = algebra.mul(g, c.idempotent, o.aug.e1_prime)
    eps_co = o.coordinates(eps)
    if eps_co is None:
        raise InvariantViolated(f"e{c.index} e1' is outside the Hecke algebra")
    projected = [o.multiply(eps_co, [Fraction(int(i == k)) for k in range(o.rank)]) for i in range(o.rank)]
    ints, den = _rows_to_ints(projected)
    lat = [[Fraction(x, den) for x in row] for row in hnf_rows(ints, o.rank)]
    dim = len(lat)
    if not (c.split and c.center_degree == 1):
        return ComponentReport(c.index, m, dim, None)
    traces = o._traces

    def trd(x) -> Fraction:
        return sum((a * t for a, t in zip(x, traces)), Fraction(0)) / m

    gram = [[trd(o.multiply(x, y)) for y in lat] for x in lat]
    det = det_fraction(gram)
    if det == 0:
        raise InvariantViolated(f"reduced trace form is degenerate on e{c.index}")
    return ComponentReport(c.index, m, dim, {p: valuation(det, p) for p in o.primes})


# ----------------------------------------------------------------------------
# modules over the Hecke order


@dataclass(frozen=True, eq=False)
class OModule(FiniteModule):
    """Finite abelian group with one operator per basis element of ``order``."""

    order: HeckeOrder | None = None

    def __post_init__(self):
        super().__post_init__()
        if self.order is None:
            raise InvariantViolated("an o-module needs its order")
        if len(self.ops) != self.order.rank:
            raise InvariantViolated("one operator per basis element is required")
        self.check_structure()

    def combination(self, coeffs: Sequence[Fraction]) -> np.ndarray:
        """Table of the operator sum_k coeffs[k] b_k (p-integral coefficients)."""
        n = self.exponent
        acc = np.zeros((self.size, self.rank), dtype=np.int64)
        mods = np.array(self.invariants, dtype=np.int64)
        for c, t in zip(coeffs, self.op_tables):
            k = _frac_mod(c, n) if n > 1 else 0
            if k:
                acc = (acc + k * self.coords[t]) % mods
        return self.encode(acc)

    def check_structure(self) -> None:
        if self.size == 1:
            return
        if not np.array_equal(self.combination(self.order.identity), np.arange(self.size)):
            raise InvariantViolated("identity of the order does not act as identity")
        tabs = self.op_tables
        for i in range(self.order.rank):
            for j in range(self.order.rank):
                if not np.array_equal(tabs[i][tabs[j]], self.combination(self.order.structure[i][j])):
                    raise InvariantViolated("operators do not respect the structure constants")


def zero_omodule(o: HeckeOrder) -> OModule:
    return OModule((), tuple(np.zeros((0, 0), dtype=np.int64) for _ in range(o.rank)), o)


def _basis_action(m: GammaModule, b: Elem, reps: Sequence[int], hsize: int) -> np.ndarray:
    n = m.exponent
    coeffs = [0] * m.group.order
    for x in reps:
        coeffs[x] = _frac_mod(hsize * b[x], n)
    return m.algebra_action(coeffs)


def invariants_functor(m: GammaModule, o: HeckeOrder) -> OModule:
    """The H-fixed points of m with (x e1') acting through x."""
    g = o.group
    if m.group is not g:
        raise InvariantViolated("module and order belong to different groups")
    if m.size == 1:
        return zero_omodule(o)
    e_table = m.algebra_action([_frac_mod(c, m.exponent) for c in o.aug.idempotent])
    if not np.array_equal(e_table, np.arange(m.size)):
        raise InvariantViolated("the module is not supported on the augmentation idempotent")
    h = o.subgroup
    fixed = m.fixed_mask(h.generators)
    cosets = left_cosets(g, h)
    first = [c[0] for c in cosets]
    last = [c[-1] for c in cosets]
    tables = []
    for b in o.basis:
        ta = _basis_action(m, b, first, h.order)
        tb = _basis_action(m, b, last, h.order)
        if not np.array_equal(ta[fixed], tb[fixed]):
            raise InvariantViolated("basis action depends on the coset representative")
        if not fixed[ta[fixed]].all():
            raise InvariantViolated("basis action leaves the fixed points")
        tables.append(ta)
    sub, _ = m.realize(fixed, tables)
    return OModule(sub.invariants, sub.ops, o)


@dataclass(frozen=True)
class MoritaLift:
    module: GammaModule
    mtype: ModuleType
    aut_gamma: int
    aut_o: int
    candidates: int


def _vp(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _entry_order(t: ModuleType, component: int, p: int) -> int:
    return next((e.order for e in t.entries if e.component == component and e.prime == p), 1)


def component_part(m: OModule, c: AlgebraComponent) -> int:
    """Order of e_i e1' m."""
    if m.size == 1:
        return 1
    o = m.order
    eps = o.coordinates(algebra.mul(o.group, c.idempotent, o.aug.e1_prime))
    return int(m.image_mask(m.combination(eps)).sum())


def lift_order_bound(o: HeckeOrder, size: int) -> int:
    """|G| <= |H|^(max_i h_i / <a, phi_i>)."""
    ratio = max(Fraction(c.h, o.aug.multiplicities[c.index]) for c in o.aug.constituents)
    bound = 1
    while Fraction(bound) ** ratio.denominator < Fraction(size) ** ratio.numerator:
        bound *= 2
    lo = bound // 2
    while lo < bound:  # least B with B^den >= size^num
        mid = (lo + bound) // 2
        if mid**ratio.denominator >= size**ratio.numerator:
            bound = mid
        else:
            lo = mid + 1
    return bound


def morita_lift(h: OModule, o: HeckeOrder | None = None, order_bound: int | None = None) -> MoritaLift:
    """The unique e Z_S[G]-module whose H-invariants are isomorphic to h."""
    o = h.order if o is None else o
    g = o.group
    if h.size == 1:
        z = module_from_type(ModuleType(), list(rational_components(g)))
        return MoritaLift(z, ModuleType(), 1, 1, 1)
    bound = lift_order_bound(o, h.size) if order_bound is None else order_bound
    exps = {p: max(p_primary_exponents(h.invariants, p)) for p in h.primes}
    # |e_i G| = |e_i e1' H|^(h_i / m_i) component by component
    want = {}
    for c in o.aug.constituents:
        part = component_part(h, c)
        for p in h.primes:
            k = _vp(part, p) * c.h
            if k % o.aug.multiplicities[c.index]:
                raise NotFound(f"the e{c.index}-part of h has no lift of integral size")
            want[(c.index, p)] = p ** (k // o.aug.multiplicities[c.index])
    found = []
    types = [
        t
        for t in enumerate_types(list(o.aug.constituents), exps, bound)
        if all(_entry_order(t, i, p) == n for (i, p), n in want.items())
    ]
    for t in types:
        if t.is_zero:
            continue
        gmod = module_from_type(t, list(o.aug.constituents))
        fm = invariants_functor(gmod, o)
        if is_isomorphic(fm, h):
            found.append((t, gmod))
    if not found:
        raise NotFound(f"no lift of an o-module of order {h.size} up to order {bound}")
    if len(found) > 1:
        raise NotUnique(f"{len(found)} non-isomorphic lifts: {[t.format() for t, _ in found]}")
    t, gmod = found[0]
    a_gamma = aut_count(gmod)
    a_o = aut_count(h)
    formula = count_maps("aut", t, method="formula")
    if not (a_gamma == a_o == formula):
        raise InvariantViolated(f"automorphism counts differ: Gamma {a_gamma}, formula {formula}, o {a_o}")
    return MoritaLift(gmod, t, a_gamma, a_o, len(types))


# ----------------------------------------------------------------------------
# rank transfer and the non-Galois table


def rank_transfer(r: RankSpec, h: Subgroup) -> dict[int, Fraction]:
    """v_i = (h_i / <phi_i, a>) u_i on every component of the Hecke algebra."""
    aug = augmentation_component(r.group, h)
    return {c.index: Fraction(c.h, aug.multiplicities[c.index]) * r.u[c.index] for c in aug.constituents}


def size_power(m: OModule, v: dict[int, Fraction]) -> Fraction:
    """|H|^v, splitting H by the central idempotents e_i e1' of the Hecke algebra."""
    o = m.order
    total = Fraction(1)
    for c in o.aug.constituents:
        if v[c.index].denominator != 1:
            raise InvariantViolated(f"rank exponent {v[c.index]} is not an integer")
        total *= Fraction(component_part(m, c)) ** v[c.index]
    return total


@dataclass(frozen=True)
class NonGaloisRow:
    module: OModule
    label: str
    lifts: tuple[ModuleType, ...]
    column_a: Fraction
    column_b: Fraction


def nongalois_table(
    g: Group, h: Subgroup, r: RankSpec, primes: dict[int, int], order_bound: int, limits: Limits = DEFAULT_LIMITS
) -> list[NonGaloisRow]:
    """Group the enumerated e Z_S[G]-modules by the isomorphism class of their
    invariants and compare the two weights of every class."""
    o = hecke_order(g, h, list(primes))
    comps = list(o.aug.constituents)
    v = rank_transfer(r, h)
    classes: list[tuple[OModule, list[ModuleType], Fraction]] = []
    for t in enumerate_types(comps, primes, order_bound):
        gmod = module_from_type(t, comps)
        w = Fraction(1, count_maps("aut", t, method="formula"))
        upow = Fraction(1)
        for ent in t.entries:
            upow *= Fraction(ent.order) ** r.u[ent.component]
        w /= upow
        fm = invariants_functor(gmod, o)
        for k, (rep, lifts, acc) in enumerate(classes):
            if is_isomorphic(rep, fm):
                lifts.append(t)
                classes[k] = (rep, lifts, acc + w)
                break
        else:
            classes.append((fm, [t], w))
    out = []
    for rep, lifts, acc in classes:
        b = Fraction(1) / (size_power(rep, v) * aut_count(rep))
        label = "+".join(x.format() for x in lifts)
        out.append(NonGaloisRow(rep, label, tuple(lifts), acc, b))
    return out


# ----------------------------------------------------------------------------
# rank independence


@dataclass(frozen=True)
class IndependenceReport:
    v_sigma: dict[int, Fraction]
    v_gamma: dict[int, Fraction]
    matching: dict[int, int]  # component of Gamma -> component of Sigma
    dims_sigma: tuple[int, ...]
    dims_gamma: tuple[int, ...]

    @property
    def ok(self) -> bool:
        if sorted(self.matching.values()) != sorted(self.v_sigma):
            return False
        if sorted(self.matching) != sorted(self.v_gamma):
            return False
        if any(self.v_gamma[i] != self.v_sigma[j] for i, j in self.matching.items()):
            return False
        return self.dims_sigma == self.dims_gamma


def _hecke_dims(aug: Augmentation, order: Sequence[int]) -> tuple[int, ...]:
    by = {c.index: c for c in aug.constituents}
    return tuple(by[i].center_degree * aug.multiplicities[i] ** 2 for i in order)


def rank_independence_check(sigma: Group, delta: Subgroup, sigma_prime: Subgroup, r_sigma: RankSpec) -> IndependenceReport:
    """Compare the transferred rank through (Sigma, Sigma') with the one through
    the quotient (Sigma/Delta, image of Sigma')."""
    if not set(delta.elements) <= set(sigma_prime.elements):
        raise InvariantViolated("Sigma' must contain Delta")
    cq = coset_and_quotient(sigma, delta)
    if not cq.is_normal:
        raise NotNormal(f"Delta is not normal in {sigma.name}")
    gamma, proj = cq.quotient, cq.projection
    gamma_prime = image_subgroup(proj, sigma_prime)
    if r_sigma.places is None:
        raise InvariantViolated("rank independence needs the places of the rank")
    r_gamma = rank_u(gamma, [image_subgroup(proj, s) for s in r_sigma.places])
    v_sigma = rank_transfer(r_sigma, sigma_prime)
    v_gamma = rank_transfer(r_gamma, gamma_prime)
    # match components through inflation of characters
    t_sigma = character_table(sigma)
    comps_sigma = rational_components(t_sigma)
    t_gamma = character_table(gamma)
    ci_g = class_index(gamma)
    reps_sigma = [c.representative for c in t_sigma.classes]
    matching = {}
    for c in rational_components(t_gamma):
        inflated = tuple(c.character[int(ci_g[proj.image[x]])] for x in reps_sigma)
        for cs in comps_sigma:
            if tuple(cs.character) == inflated:
                matching[c.index] = cs.index
                break
        else:
            raise InvariantViolated(f"no inflated component for e{c.index} of the quotient")
    aug_s = augmentation_component(sigma, sigma_prime)
    aug_g = augmentation_component(gamma, gamma_prime)
    matching = {i: j for i, j in matching.items() if i in aug_g.multiplicities}
    order_g = sorted(aug_g.multiplicities)
    dims_g = _hecke_dims(aug_g, order_g)
    # the Sigma-side dimensions in the matched order, then any unmatched ones
    matched = [matching[i] for i in order_g if i in matching]
    rest = sorted(set(aug_s.multiplicities) - set(matched))
    dims_s = _hecke_dims(aug_s, matched + rest)
    return IndependenceReport(v_sigma, v_gamma, matching, dims_s, dims_g)
