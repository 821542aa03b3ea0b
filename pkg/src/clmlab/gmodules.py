"""Finite Gamma-modules: types, construction, type recovery and counting.

A module of type ``(i, p, lam)`` is ``L/p^lam_1 L + L/p^lam_2 L + ...`` where
``L`` is a Gamma-stable lattice in the irreducible representation belonging to
component ``e_i``.  At a good prime ``e_i Z_p[Gamma]`` is a full matrix ring
``M_h(Z_p)`` and every such lattice is its unique simple projective module, so
the construction does not depend on the lattice chosen.

The lattice is found inside a permutation module: pick a subgroup ``H`` such
that the constituent character ``phi`` has exactly one ``H``-fixed line, and take
the Z-span of ``e_i . xH`` over the cosets of ``H``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadPrime,
    InvariantViolated,
    NotHomogeneous,
    ParseError,
    TooLarge,
    UnsupportedComponent,
)
from .finmod import (
    FiniteModule,
    aut_count,
    exhaustive_counts,
    hom_count,
    is_isomorphic,
    p_primary_exponents,
    sur_count,
)
from .groups import Group, Subgroup, all_subgroups_two_generated, class_index, conjugacy_classes, left_cosets
from .lattice import common_denominator, express_in_basis, hnf_rows
from .limits import DEFAULT_LIMITS, Limits
from .partitions import (
    Partition,
    aut_formula,
    format_partition,
    hom_formula,
    normalize,
    parse_partition,
    partitions_of,
    sur_formula,
)
from .rational import AlgebraComponent, denominator_test, is_good


# ----------------------------------------------------------------------------
# types


@dataclass(frozen=True, order=True)
class TypeEntry:
    component: int
    prime: int
    partition: Partition
    h: int = 1

    @property
    def q(self) -> int:
        return self.prime

    @property
    def order(self) -> int:
        return self.prime ** (self.h * sum(self.partition))

    def format(self) -> str:
        return f"e{self.component}@{self.prime}:{format_partition(self.partition)}"


@dataclass(frozen=True)
class ModuleType:
    """A finite module over a product of good local components, one partition per (i, p)."""

    entries: tuple[TypeEntry, ...] = ()

    def __post_init__(self):
        ents = tuple(sorted(e for e in self.entries if e.partition))
        keys = [(e.component, e.prime) for e in ents]
        if len(set(keys)) != len(keys):
            raise InvariantViolated(f"repeated (component, prime) pair in {keys}")
        object.__setattr__(self, "entries", ents)

    @property
    def order(self) -> int:
        return prod(e.order for e in self.entries)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def keys(self) -> set[tuple[int, int]]:
        return {(e.component, e.prime) for e in self.entries}

    def partition(self, component: int, prime: int) -> Partition:
        for e in self.entries:
            if (e.component, e.prime) == (component, prime):
                return e.partition
        return ()

    def format(self) -> str:
        return " + ".join(e.format() for e in self.entries) if self.entries else "0"

    def __str__(self) -> str:
        return self.format()


def _supported(c: AlgebraComponent) -> None:
    if c.center_degree != 1 or not c.split:
        raise UnsupportedComponent(
            f"e{c.index} of {c.group.name} has center degree {c.center_degree}"
            f" and split={c.split}; only split components with center Q are supported"
        )


def make_type(comps: Sequence[AlgebraComponent], entries: Iterable[tuple[int, int, Sequence[int]]]) -> ModuleType:
    """Build a validated type from ``(component index, prime, partition)`` triples."""
    by_index = {c.index: c for c in comps}
    out = []
    for i, p, lam in entries:
        if i not in by_index:
            raise ParseError(f"no component e{i}")
        c = by_index[i]
        _supported(c)
        if not is_good(c, p):
            raise BadPrime(f"p={p} is not good for e{i} of {c.group.name}")
        out.append(TypeEntry(i, p, normalize(lam), c.h))
    return ModuleType(tuple(out))


def parse_type(text: str, comps: Sequence[AlgebraComponent]) -> ModuleType:
    """Parse ``"e2@3:(2,1) + e5@2:(1)"``; ``"0"`` or ``""`` is the zero type."""
    s = text.strip()
    if s in ("", "0"):
        return ModuleType()
    triples = []
    for part in s.split("+"):
        part = part.strip()
        try:
            head, lam = part.split(":", 1)
            comp, prime = head.split("@")
            triples.append((int(comp.strip().lstrip("e")), int(prime), parse_partition(lam)))
        except ValueError as exc:
            raise ParseError(f"bad type entry {part!r}; expected e<i>@<p>:(parts)") from exc
    return make_type(comps, triples)


# ----------------------------------------------------------------------------
# integral forms


@dataclass(frozen=True)
class IntegralForm:
    """A Gamma-stable lattice in the representation of one component."""

    component: int
    subgroup: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]  # rows, in coset coordinates (scaled)
    generator_matrices: tuple[tuple[tuple[int, ...], ...], ...]  # per group generator, columns = images


def _phi_values(c: AlgebraComponent) -> list[int]:
    # center Q: the orbit sum is the absolutely irreducible character itself
    return list(c.character)


def integral_form(c: AlgebraComponent) -> IntegralForm:
    cached = c.__dict__.get("_integral_form")
    if cached is not None:
        return cached
    _supported(c)
    g = c.group
    ci = class_index(g)
    phi = _phi_values(c)
    chosen: Subgroup | None = None
    candidates = sorted(all_subgroups_two_generated(g), key=lambda s: (-s.order, s.elements))
    for s in candidates:
        if sum(phi[int(ci[x])] for x in s.elements) == s.order:
            chosen = s
            break
    if chosen is None:
        raise UnsupportedComponent(f"no subgroup with a unique fixed line for e{c.index} of {g.name}")
    cosets = left_cosets(g, chosen)
    which = np.empty(g.order, dtype=np.int64)
    for k, cs in enumerate(cosets):
        which[list(cs)] = k
    m = len(cosets)
    e = c.idempotent
    den = common_denominator(e)
    eint = np.array([int(x * den) for x in e], dtype=object)
    vecs = []
    for cs in cosets:
        x = cs[0]
        v = np.zeros(m, dtype=object)
        np.add.at(v, which[g.mul[:, x]], eint)
        vecs.append([int(t) for t in v])
    basis = [r for r in hnf_rows(vecs, m) if any(r)]
    if len(basis) != c.h:
        raise InvariantViolated(f"lattice for e{c.index} has rank {len(basis)}, expected {c.h}")
    mats = []
    for s in g.generators:
        # s . (coset k) = coset which[s * rep_k]
        perm = [int(which[g.m(s, cs[0])]) for cs in cosets]
        cols = []
        for b in basis:
            img = [0] * m
            for k, val in enumerate(b):
                img[perm[k]] += val
            coeffs = express_in_basis(basis, img)
            if coeffs is None or any(Fraction(x).denominator != 1 for x in coeffs):
                raise InvariantViolated("lattice is not stable under the group")
            cols.append([int(x) for x in coeffs])
        # matrix with columns = images of basis vectors
        mats.append(tuple(tuple(cols[j][i] for j in range(c.h)) for i in range(c.h)))
    form = IntegralForm(c.index, chosen.elements, tuple(tuple(r) for r in basis), tuple(mats))
    object.__setattr__(c, "_integral_form", form)
    return form


# ----------------------------------------------------------------------------
# Gamma-modules


@dataclass(frozen=True, eq=False)
class GammaModule(FiniteModule):
    """A finite abelian group with one operator per generator of ``group``.

    ``invariants`` is a list of cyclic orders (not necessarily a divisibility
    chain; see :meth:`abelian_type` for the canonical form).
    """

    group: Group | None = None
    mtype: ModuleType | None = field(default=None, compare=False)

    def __post_init__(self):
        super().__post_init__()
        if self.group is None:
            raise InvariantViolated("a Gamma-module needs its group")
        if len(self.ops) != len(self.group.generators):
            raise InvariantViolated("one action matrix per group generator is required")
        for t in self.op_tables:
            if len(np.unique(t)) != self.size:
                raise InvariantViolated("an action matrix is not invertible")
        self.check_relations()

    @classmethod
    def from_finite(cls, m: FiniteModule, group: Group, mtype: ModuleType | None = None) -> "GammaModule":
        return cls(m.invariants, m.ops, group, mtype)

    @property
    def element_tables(self) -> np.ndarray:
        """tables[x][v] = code of x . v for every group element x."""
        cached = self.__dict__.get("_element_tables")
        if cached is not None:
            return cached
        g = self.group
        parent, via = g.words
        tabs = np.empty((g.order, self.size), dtype=np.int64)
        for x in g.bfs_order:
            if parent[x] < 0:
                tabs[x] = np.arange(self.size)
            else:
                # x = parent * s acts as parent(s(v))
                tabs[x] = tabs[parent[x]][self.op_tables[via[x]]]
        object.__setattr__(self, "_element_tables", tabs)
        return tabs

    def check_relations(self) -> None:
        """rho(x) rho(s) = rho(x s) for every element x and generator s."""
        g = self.group
        tabs = self.element_tables
        for k, s in enumerate(g.generators):
            lhs = tabs[:, self.op_tables[k]]
            rhs = tabs[g.mul[:, s]]
            if not np.array_equal(lhs, rhs):
                raise InvariantViolated(f"action does not satisfy the relations of {g.name}")

    def fixed_mask(self, elements: Iterable[int] | None = None) -> np.ndarray:
        elems = self.group.generators if elements is None else list(elements)
        mask = np.ones(self.size, dtype=bool)
        ar = np.arange(self.size)
        for x in elems:
            mask &= self.element_tables[x] == ar
        return mask

    @property
    def has_trivial_invariants(self) -> bool:
        return int(self.fixed_mask().sum()) == 1

    def algebra_action(self, coeffs: Sequence[int]) -> np.ndarray:
        """Table of v -> sum_x coeffs[x] (x . v) for integer coefficients."""
        acc = np.zeros((self.size, self.rank), dtype=np.int64)
        mods = np.array(self.invariants, dtype=np.int64)
        tabs = self.element_tables
        for x, c in enumerate(coeffs):
            c = int(c)
            if c:
                acc = (acc + (c % self.exponent) * self.coords[tabs[x]]) % mods
        return self.encode(acc)

    def serialize(self) -> str:
        g = self.group
        lines = [f"group {g.name}", "invariants " + " ".join(map(str, self.invariants))]
        for s, a in zip(g.generators, self.ops):
            rows = "; ".join(" ".join(str(int(x)) for x in r) for r in a)
            lines.append(f"gen {g.labels[s]}: {rows}")
        return "\n".join(lines)


def parse_module(text: str, group: Group) -> GammaModule:
    """Inverse of :meth:`GammaModule.serialize`."""
    inv: tuple[int, ...] | None = None
    mats = []
    for raw in text.strip().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key == "group":
            if rest.strip() != group.name:
                raise ParseError(f"module is for group {rest.strip()!r}, not {group.name!r}")
        elif key == "invariants":
            inv = tuple(int(x) for x in rest.split())
        elif key == "gen":
            _, _, body = rest.partition(":")
            rows = [[int(x) for x in r.split()] for r in body.split(";") if r.strip()] if body.strip() else []
            mats.append(np.array(rows, dtype=np.int64).reshape(len(rows), len(rows)))
        else:
            raise ParseError(f"unknown module line {line!r}")
    if inv is None:
        raise ParseError("missing invariants line")
    if not inv:
        mats = [np.zeros((0, 0), dtype=np.int64) for _ in group.generators]
    return GammaModule(inv, tuple(mats), group)


def zero_module(g: Group) -> GammaModule:
    return GammaModule((), tuple(np.zeros((0, 0), dtype=np.int64) for _ in g.generators), g, ModuleType())


def module_from_type(t: ModuleType, comps: Sequence[AlgebraComponent]) -> GammaModule:
    g = comps[0].group
    cache = g.__dict__.setdefault("_type_modules", {})
    if t in cache:
        return cache[t]
    by_index = {c.index: c for c in comps}
    inv: list[int] = []
    blocks: list[list[np.ndarray]] = [[] for _ in g.generators]
    for ent in t.entries:
        c = by_index.get(ent.component)
        if c is None:
            raise UnsupportedComponent(f"no component e{ent.component}")
        if not is_good(c, ent.prime):
            raise BadPrime(f"p={ent.prime} is not good for e{c.index}")
        form = integral_form(c)
        for part in ent.partition:
            inv.extend([ent.prime**part] * c.h)
            for k, mat in enumerate(form.generator_matrices):
                blocks[k].append(np.array(mat, dtype=np.int64))
    ops = []
    n = len(inv)
    for k in range(len(g.generators)):
        m = np.zeros((n, n), dtype=np.int64)
        pos = 0
        for b in blocks[k]:
            h = b.shape[0]
            m[pos : pos + h, pos : pos + h] = b
            pos += h
        ops.append(m)
    mod = GammaModule(tuple(inv), tuple(ops), g, t)
    cache[t] = mod
    return mod


def _idempotent_integer(c: AlgebraComponent, modulus: int, p: int) -> list[int]:
    """Coefficients of e_i reduced into Z/modulus (modulus a power of p)."""
    if not denominator_test(c, p):
        raise BadPrime(f"e{c.index} is not {p}-integral")
    out = []
    for x in c.idempotent:
        out.append(x.numerator * pow(x.denominator, -1, modulus) % modulus)
    return out


def type_of_module(m: GammaModule, comps: Sequence[AlgebraComponent]) -> ModuleType:
    """Recover the type from the abelian invariants of e_i applied to each p-part."""
    if m.size == 1:
        return ModuleType()
    entries = []
    for p in m.primes:
        mp = m if m.primes == (p,) else GammaModule.from_finite(m.primary_part(p), m.group)
        exps_all = p_primary_exponents(mp.invariants, p)
        modulus = p ** max(exps_all)
        seen = 0
        for c in comps:
            if not denominator_test(c, p):
                continue
            img_table = mp.algebra_action(_idempotent_integer(c, modulus, p))
            sub = mp.realize(mp.image_mask(img_table))[0]
            exps = p_primary_exponents(sub.invariants, p)
            if not exps:
                continue
            seen += sum(exps)
            counts: dict[int, int] = {}
            for x in exps:
                counts[x] = counts.get(x, 0) + 1
            if any(v % c.h for v in counts.values()):
                raise NotHomogeneous(f"e{c.index} image has invariants {exps}, not divisible by h={c.h}")
            _supported(c)
            lam = tuple(sorted((x for x, v in counts.items() for _ in range(v // c.h)), reverse=True))
            entries.append(TypeEntry(c.index, p, lam, c.h))
        if seen != sum(exps_all):
            raise BadPrime(f"part of the {p}-part lies outside the components that are {p}-integral")
    return ModuleType(tuple(entries))


@dataclass(frozen=True)
class FixedNorm:
    fixed: np.ndarray
    norm: np.ndarray

    @property
    def fixed_order(self) -> int:
        return int(self.fixed.sum())

    @property
    def norm_order(self) -> int:
        return int(self.norm.sum())

    @property
    def tate_h0_trivial(self) -> bool:
        return bool(np.array_equal(self.fixed, self.norm))


def fixed_and_norm(m: GammaModule, sub: Subgroup) -> FixedNorm:
    fixed = m.fixed_mask(sub.generators if sub.generators else [])
    coeffs = [0] * m.group.order
    for x in sub.elements:
        coeffs[x] = 1
    norm = m.image_mask(m.algebra_action(coeffs)) if m.size > 1 else m.zero_mask()
    if not (norm <= fixed).all():
        raise InvariantViolated("norm image is not fixed")
    return FixedNorm(fixed, norm)


# ----------------------------------------------------------------------------
# counting


KINDS = ("hom", "sur", "aut")


def _formula_for_types(kind: str, src: ModuleType, dst: ModuleType) -> int:
    keys = sorted(src.keys() | dst.keys())
    total = 1
    for comp, p in keys:
        lam, mu = src.partition(comp, p), dst.partition(comp, p)
        if kind == "hom":
            total *= hom_formula(lam, mu, p)
        elif kind == "sur":
            total *= sur_formula(lam, mu, p)
        else:
            total *= aut_formula(lam, p)
    return total


def count_maps(
    kind: str,
    src: GammaModule | ModuleType,
    dst: GammaModule | ModuleType | None = None,
    method: str = "formula",
    comps: Sequence[AlgebraComponent] | None = None,
    limits: Limits = DEFAULT_LIMITS,
) -> int:
    """Count Gamma-equivariant homomorphisms, surjections or automorphisms.

    ``formula`` uses the partition formulas (types are recovered from modules
    when needed); ``bruteforce`` counts kernels exactly and obtains surjections
    by Mobius inversion over the submodule lattice of the target.
    """
    if kind not in KINDS:
        raise ParseError(f"kind must be one of {KINDS}")
    if kind == "aut":
        dst = src if dst is None else dst
    if dst is None:
        raise ParseError("a target is required")

    def as_type(x):
        if isinstance(x, ModuleType):
            return x
        if comps is None:
            raise ParseError("components are needed to recover a type")
        return type_of_module(x, comps)

    def as_module(x):
        if isinstance(x, GammaModule):
            return x
        if comps is None:
            raise ParseError("components are needed to build a module from a type")
        return module_from_type(x, comps)

    if method == "formula":
        s, d = as_type(src), as_type(dst)
        if kind == "aut":
            return _formula_for_types("aut", s, s)
        return _formula_for_types(kind, s, d)
    if method not in ("bruteforce", "exhaustive"):
        raise ParseError("method must be formula, bruteforce or exhaustive")
    s, d = as_module(src), as_module(dst)
    if s.group.order > limits.module_group_order:
        raise TooLarge(f"|Gamma| = {s.group.order} exceeds {limits.module_group_order}")
    if max(s.size, d.size) > limits.module_order:
        raise TooLarge(f"module order exceeds {limits.module_order}")
    if method == "exhaustive":
        return exhaustive_counts(s, d, limits.exhaustive_hom_size)[kind]
    if kind == "hom":
        return hom_count(s, d)
    if kind == "sur":
        return sur_count(s, d)
    return aut_count(s)


def isomorphic(a: GammaModule, b: GammaModule) -> bool:
    return a.group is b.group and is_isomorphic(a, b)


# ----------------------------------------------------------------------------
# enumeration


def _partitions_bounded(max_part: int, max_size: int) -> list[Partition]:
    out = []
    for n in range(max_size + 1):
        out.extend(partitions_of(n, max_part))
    return out


def enumerate_types(
    comps: Sequence[AlgebraComponent],
    primes: dict[int, int],
    order_bound: int | None = None,
) -> list[ModuleType]:
    """All types over ``comps`` with largest part at most n_p at each prime.

    Partitions with parts bounded by n_p still have unbounded length, so a
    finite ``order_bound`` is required as soon as some n_p is positive.
    """
    slots = []
    for c in comps:
        for p in sorted(primes):
            _supported(c)
            if not is_good(c, p):
                raise BadPrime(f"p={p} is not good for e{c.index} of {c.group.name}")
            slots.append((c, p, primes[p]))
    if any(n > 0 for _, _, n in slots) and order_bound is None:
        raise TooLarge("an order bound is required to enumerate types")
    choices = []
    for c, p, n in slots:
        if n <= 0:
            choices.append([()])
            continue
        max_size = 0
        while p ** (c.h * (max_size + 1)) <= order_bound:
            max_size += 1
        parts = _partitions_bounded(n, max_size)
        parts.sort(key=lambda lam: (len(lam), lam))
        choices.append(parts)
    out = []
    for combo in product(*choices):
        ents = tuple(TypeEntry(c.index, p, lam, c.h) for (c, p, _), lam in zip(slots, combo))
        t = ModuleType(ents)
        if order_bound is None or t.order <= order_bound:
            out.append(t)
    return out


# ----------------------------------------------------------------------------
# brute-force module structures


def _endomorphism_matrices(inv: Sequence[int], limit: int) -> np.ndarray:
    from math import gcd

    k = len(inv)
    ranges = [gcd(inv[i], inv[j]) for i in range(k) for j in range(k)]
    total = prod(ranges)
    if total > limit:
        raise TooLarge(f"|End(A)| = {total} exceeds {limit}")
    grid = np.indices(ranges).reshape(len(ranges), -1).T
    steps = np.array([inv[i] // gcd(inv[i], inv[j]) for i in range(k) for j in range(k)], dtype=np.int64)
    return (grid * steps).reshape(-1, k, k)


def automorphism_tables(a: FiniteModule, limits: Limits = DEFAULT_LIMITS) -> tuple[np.ndarray, np.ndarray]:
    """All automorphisms of the abelian group as (matrices, element permutations)."""
    mats = _endomorphism_matrices(a.invariants, limits.structure_end_size)
    keep_m, keep_t = [], []
    ar = np.arange(a.size)
    mods = np.array(a.invariants, dtype=np.int64)
    for start in range(0, len(mats), 20000):
        chunk = mats[start : start + 20000]
        tabs = ((a.coords[None, :, :] @ chunk.transpose(0, 2, 1)) % mods) @ a.strides
        ok = (np.sort(tabs, axis=1) == ar[None, :]).all(axis=1)
        keep_m.append(chunk[ok])
        keep_t.append(tabs[ok])
        if sum(len(x) for x in keep_t) > limits.structure_aut_order:
            raise TooLarge(f"|Aut(A)| exceeds {limits.structure_aut_order}")
    return np.concatenate(keep_m), np.concatenate(keep_t)


def _perm_order(t: np.ndarray) -> int:
    ar = np.arange(len(t))
    cur = t.copy()
    k = 1
    while not np.array_equal(cur, ar):
        cur = t[cur]
        k += 1
    return k


def bruteforce_module_structures(
    g: Group, invariants: Sequence[int], limits: Limits = DEFAULT_LIMITS
) -> list[GammaModule]:
    """Every action of ``g`` on the abelian group, up to Gamma-isomorphism."""
    inv = tuple(int(d) for d in invariants if int(d) > 1)
    if g.order > limits.module_group_order:
        raise TooLarge(f"|Gamma| = {g.order} exceeds {limits.module_group_order}")
    if prod(inv) > limits.structure_module_order:
        raise TooLarge(f"module order {prod(inv)} exceeds {limits.structure_module_order}")
    if not inv:
        return [zero_module(g)]
    a = FiniteModule(inv, ())
    mats, tabs = automorphism_tables(a, limits)
    n_aut = len(tabs)
    orders = np.array([_perm_order(t) for t in tabs])
    inv_tabs = np.argsort(tabs, axis=1)

    def key_of(assign: Sequence[int]) -> bytes:
        return b"".join(tabs[i].tobytes() for i in assign)

    # conjugacy-class representatives among automorphisms (for the first generator)
    index_of = {tabs[i].tobytes(): i for i in range(n_aut)}

    def conj(alpha: int, x: int) -> int:
        # alpha x alpha^-1 as a permutation
        return index_of[tabs[alpha][tabs[x][inv_tabs[alpha]]].tobytes()]

    gens = g.generators
    gen_orders = [g.element_order(s) for s in gens]
    first_reps = []
    covered = np.zeros(n_aut, dtype=bool)
    for x in range(n_aut):
        if covered[x] or gen_orders[0] % orders[x]:
            continue
        first_reps.append(x)
        for alpha in range(n_aut):
            covered[conj(alpha, x)] = True
    cands = [first_reps] + [[x for x in range(n_aut) if o % orders[x] == 0] for o in gen_orders[1:]]

    parent, via = g.words
    bfs = g.bfs_order
    seen: set[bytes] = set()
    found: list[tuple[int, ...]] = []
    for assign in product(*cands):
        key = key_of(assign)
        if key in seen:
            continue
        # extend along the spanning tree and check every relation x*s
        el = np.empty((g.order, a.size), dtype=np.int64)
        for x in bfs:
            el[x] = np.arange(a.size) if parent[x] < 0 else el[parent[x]][tabs[assign[via[x]]]]
        ok = all(np.array_equal(el[:, tabs[assign[k]]], el[g.mul[:, s]]) for k, s in enumerate(gens))
        if not ok:
            continue
        found.append(tuple(assign))
        for alpha in range(n_aut):
            seen.add(key_of([conj(alpha, x) for x in assign]))
    out = []
    for assign in found:
        ops = tuple(mats[i] for i in assign)
        out.append(GammaModule(inv, ops, g))
    return out
