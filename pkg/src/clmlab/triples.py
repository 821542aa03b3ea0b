"""Class triples (G, c, pi): a group G onto Gamma with abelian kernel h.

The kernel h is a Gamma-module of order prime to |Gamma| with no Gamma-fixed
points, and c picks out an element of order dividing 2 lying over a chosen
``s`` in Gamma.  Such a triple is realized as the semidirect product
``h x| Gamma`` with ``(x, g)(y, d) = (x + g.y, gd)``, projection onto the
second factor and ``c = (0, s)``.

Automorphisms of a triple are automorphisms of G commuting with pi and fixing
c.  They are counted by formula (|h^<s>| |Aut_Gamma(h)|) and by an exhaustive
search over generator images, vectorized over candidates.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

import numpy as np

from .errors import InvariantViolated, TooLarge
from .gmodules import GammaModule, count_maps
from .groups import Group, GroupHom, cayley_group
from .limits import DEFAULT_LIMITS, Limits
from .rational import rational_components


@dataclass(frozen=True, eq=False)
class ClassTriple:
    module: GammaModule
    gamma: Group
    group: Group
    projection: GroupHom
    c: int
    s: int

    @property
    def kernel(self) -> np.ndarray:
        return np.nonzero(np.asarray(self.projection.image) == self.gamma.identity)[0]

    def element(self, x: int, g: int) -> int:
        return x * self.gamma.order + g

    def check(self) -> dict[str, bool]:
        """Evaluate every defining property; returns a named checklist."""
        G, gam, pi = self.group, self.gamma, self.projection
        ker = self.kernel
        kset = set(int(k) for k in ker)
        checks = {}
        checks["projection surjective"] = len(set(pi.image)) == gam.order
        sub = G.mul[np.ix_(ker, ker)]
        checks["kernel abelian"] = bool(np.array_equal(sub, sub.T))
        checks["kernel order prime to |Gamma|"] = gcd(len(ker), gam.order) == 1
        checks["pi(c) = s"] = int(pi.image[self.c]) == self.s
        checks["c^2 = 1"] = G.m(self.c, self.c) == G.identity
        image = np.asarray(pi.image)
        lifts = [int(np.nonzero(image == s)[0][0]) for s in gam.generators]
        fixed = [k for k in ker if all(G.conj(lft, int(k)) == int(k) for lft in lifts)]
        checks["no Gamma-invariants in kernel"] = fixed == [G.identity]
        checks["<c> meets kernel trivially"] = self.c == G.identity or self.c not in kset
        return checks

    def report(self, limits: Limits = DEFAULT_LIMITS) -> str:
        lines = [
            f"class triple over {self.gamma.name}: |G| = {self.group.order}, |ker pi| = {len(self.kernel)},"
            f" s = {self.gamma.labels[self.s]}"
        ]
        for name, ok in self.check().items():
            lines.append(f"  [{'ok' if ok else 'FAIL'}] {name}")
        lines.append(f"  aut (formula)    = {aut_count(self, 'formula')}")
        try:
            lines.append(f"  aut (bruteforce) = {aut_count(self, 'bruteforce', limits)}")
        except TooLarge as exc:
            lines.append(f"  aut (bruteforce) skipped: {exc}")
        return "\n".join(lines)


def build_class_triple(h: GammaModule, s: int, limits: Limits = DEFAULT_LIMITS) -> ClassTriple:
    gam = h.group
    if gcd(h.size, gam.order) != 1:
        raise InvariantViolated(f"|h| = {h.size} is not prime to |Gamma| = {gam.order}")
    if not h.has_trivial_invariants:
        raise InvariantViolated("h has nonzero Gamma-invariants")
    if gam.m(s, s) != gam.identity:
        raise InvariantViolated("s must have order dividing 2")
    n, k = gam.order, h.size
    tabs = h.element_tables  # tabs[g][y] = g.y
    xs = np.repeat(np.arange(k), n)
    gs = np.tile(np.arange(n), k)
    # (x, g)(y, d) = (x + g.y, g d)
    prod_x = h.add_table[xs[:, None], tabs[gs[:, None], xs[None, :]]]
    prod_g = gam.mul[gs[:, None], gs[None, :]]
    table = prod_x * n + prod_g
    gens = [0 * n + t for t in gam.generators]
    span_gens = _module_generators(h)
    gens += [int(x) * n + gam.identity for x in span_gens]
    labels = [f"({x},{gam.labels[g]})" for x, g in zip(xs, gs)]
    G = cayley_group(f"h:{gam.name}", table, generators=gens, labels=labels, cap=max(limits.triple_group_order, k * n))
    pi = GroupHom(G, gam, tuple(int(g) for g in gs))
    t = ClassTriple(h, gam, G, pi, int(0 * n + s), int(s))
    bad = [name for name, ok in t.check().items() if not ok]
    if bad:
        raise InvariantViolated("class triple fails: " + ", ".join(bad))
    return t


def _module_generators(h: GammaModule) -> list[int]:
    gens: list[int] = []
    span = h.zero_mask()
    for x in range(1, h.size):
        if not span[x]:
            gens.append(x)
            span = h.submodule_generated(gens)
            if span.all():
                break
    return gens


def _minimal_generators(G: Group, first: Sequence[int], pool: Sequence[int]) -> list[int]:
    from .groups import subgroup_generated

    gens: list[int] = []
    size = 1
    for x in list(first) + list(pool):
        if x == G.identity:
            continue
        new = subgroup_generated(G, gens + [x]).order
        if new > size:
            gens.append(int(x))
            size = new
        if size == G.order:
            break
    return gens


def _count_extensions(
    G: Group,
    gens: Sequence[int],
    candidates: Sequence[np.ndarray],
    limits: Limits,
    collect: int | None = None,
) -> tuple[int, list[np.ndarray]]:
    """Count assignments gens[k] -> candidates[k] extending to automorphisms of G.

    Generators are assigned one at a time; after each step the partial
    assignment must define an injective homomorphism on the subgroup generated
    so far, which is checked on every element and generator of that subgroup.
    Returns the count and, when ``collect`` is an element, its images under
    every automorphism found.
    """
    states = np.zeros((1, 0), dtype=np.int64)
    for k in range(len(gens)):
        sub_gens = list(gens[: k + 1])
        parent, via, order = _bfs_subgroup(G, sub_gens)
        cand = np.asarray(candidates[k], dtype=np.int64)
        if len(states) * len(cand) > limits.triple_candidates:
            raise TooLarge(
                f"{len(states) * len(cand)} partial assignments exceed {limits.triple_candidates}"
            )
        chunk = max(1, 4_000_000 // (len(order) * max(len(cand), 1)))
        kept = []
        for start in range(0, len(states), chunk):
            st = states[start : start + chunk]
            a = np.concatenate([np.repeat(st, len(cand), axis=0), np.tile(cand, len(st))[:, None]], axis=1)
            kept.append(a[_valid_partial(G, sub_gens, a, parent, via, order)])
        states = np.concatenate(kept) if kept else np.zeros((0, k + 1), dtype=np.int64)
        if not len(states):
            break
    images: list[np.ndarray] = []
    if collect is not None and len(states):
        parent, via, order = _bfs_subgroup(G, list(gens))
        for start in range(0, len(states), max(1, 4_000_000 // G.order)):
            a = states[start : start + max(1, 4_000_000 // G.order)]
            img = _images(G, a, parent, via, order)
            images.append(img[:, order.index(collect)])
    return len(states), images


def _bfs_subgroup(G: Group, gens: Sequence[int]):
    """Spanning tree of the subgroup generated by ``gens`` (parent/via indexed by position)."""
    pos = {G.identity: 0}
    order = [G.identity]
    parent = [-1]
    via = [-1]
    i = 0
    while i < len(order):
        x = order[i]
        for k, s in enumerate(gens):
            y = int(G.mul[x, s])
            if y not in pos:
                pos[y] = len(order)
                order.append(y)
                parent.append(i)
                via.append(k)
        i += 1
    return np.array(parent), np.array(via), order


def _images(G: Group, a: np.ndarray, parent, via, order) -> np.ndarray:
    img = np.empty((len(a), len(order)), dtype=np.int64)
    img[:, 0] = G.identity
    for i in range(1, len(order)):
        img[:, i] = G.mul[img[:, parent[i]], a[:, via[i]]]
    return img


def _valid_partial(G: Group, gens, a: np.ndarray, parent, via, order) -> np.ndarray:
    img = _images(G, a, parent, via, order)
    pos = {x: i for i, x in enumerate(order)}
    ok = np.ones(len(a), dtype=bool)
    elems = np.array(order)
    for k, s in enumerate(gens):
        targets = np.array([pos[int(y)] for y in G.mul[elems, s]])
        ok &= (img[:, targets] == G.mul[img, a[:, k][:, None]]).all(axis=1)
    ok &= (img == G.identity).sum(axis=1) == 1
    return ok


def aut_count(t: ClassTriple, method: str = "formula", limits: Limits = DEFAULT_LIMITS) -> int:
    """|Aut(G, c, pi)|."""
    if method == "formula":
        h = t.module
        if h.size == 1:
            return 1
        fixed_s = int(h.fixed_mask([t.s]).sum())
        comps = rational_components(t.gamma)
        return fixed_s * count_maps("aut", h, method="formula", comps=comps)
    if method != "bruteforce":
        raise ValueError("method must be formula or bruteforce")
    G = t.group
    if G.order > limits.triple_group_order:
        raise TooLarge(f"|G| = {G.order} exceeds {limits.triple_group_order}")
    pi = np.array(t.projection.image)
    gens = _minimal_generators(G, [t.c], G.generators)
    cands = [np.array([t.c]) if x == t.c else np.nonzero(pi == pi[x])[0] for x in gens]
    return _count_extensions(G, gens, cands, limits)[0]


def valid_archimedean_lifts(t: ClassTriple) -> list[int]:
    """Elements c' of order dividing 2 over s with <c'> meeting ker pi trivially."""
    G = t.group
    pi = np.array(t.projection.image)
    out = []
    for x in np.nonzero(pi == t.s)[0]:
        x = int(x)
        if G.m(x, x) != G.identity:
            continue
        if x != G.identity and pi[x] == t.gamma.identity:
            continue
        out.append(x)
    return out


def verify_uniqueness(h: GammaModule, s: int, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Every valid c' on h x| Gamma gives a triple isomorphic to the canonical one."""
    t = build_class_triple(h, s, limits)
    G = t.group
    valid = set(valid_archimedean_lifts(t))
    # conjugation by kernel elements commutes with pi
    orbit = {G.conj(int(k), t.c) for k in t.kernel}
    if valid <= orbit:
        return True
    if G.order > limits.triple_group_order:
        raise TooLarge(f"|G| = {G.order} exceeds {limits.triple_group_order}")
    pi = np.array(t.projection.image)
    gens = _minimal_generators(G, [], G.generators)
    cands = [np.nonzero(pi == pi[x])[0] for x in gens]
    _, imgs = _count_extensions(G, gens, cands, limits, collect=t.c)
    orbit = set(int(x) for arr in imgs for x in arr)
    return valid <= orbit


def splitting_count(t: ClassTriple, limits: Limits = DEFAULT_LIMITS) -> int:
    """Number of homomorphisms sigma: Gamma -> G with pi o sigma = id."""
    G, gam = t.group, t.gamma
    pi = np.array(t.projection.image)
    cands = [np.nonzero(pi == s)[0] for s in gam.generators]
    total = 1
    for c in cands:
        total *= len(c)
    if total > limits.triple_candidates:
        raise TooLarge(f"{total} candidate splittings exceed {limits.triple_candidates}")
    parent, via = gam.words
    order = gam.bfs_order
    grids = np.meshgrid(*cands, indexing="ij")
    a = np.stack([x.ravel() for x in grids], axis=1)
    img = np.empty((len(a), gam.order), dtype=np.int64)
    for x in order:
        img[:, x] = G.identity if parent[x] < 0 else G.mul[img[:, parent[x]], a[:, via[x]]]
    ok = np.ones(len(a), dtype=bool)
    for k, s in enumerate(gam.generators):
        ok &= (img[:, gam.mul[:, s]] == G.mul[img, a[:, k][:, None]]).all(axis=1)
    return int(ok.sum())


def order_two_classes(g: Group) -> list[int]:
    """Representatives of conjugacy classes of elements with x^2 = 1 (identity first)."""
    from .groups import conjugacy_classes

    return [c.representative for c in conjugacy_classes(g) if g.m(c.representative, c.representative) == g.identity]
