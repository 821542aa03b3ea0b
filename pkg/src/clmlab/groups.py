"""Finite groups given by permutation generators or by a Cayley table.

Elements are integer ids.  ``mul[a, b]`` is the id of ``a * b`` where the
product of permutations is composition with ``b`` applied first, so
``(a * b)(x) = a(b(x))``.  In permutation mode the ids follow the sorted order
of the permutation words, which keeps ids stable across runs.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, NotAGroup, NotASubgroup, ParseError
from .limits import DEFAULT_LIMITS

Perm = tuple[int, ...]


# ----------------------------------------------------------------------------
# permutations and the text format


def cycles_to_perm(cycles: Sequence[Sequence[int]], degree: int) -> Perm:
    img = list(range(degree))
    seen: set[int] = set()
    for cyc in cycles:
        pts = [int(x) - 1 for x in cyc]
        if any(x < 0 or x >= degree for x in pts):
            raise ParseError(f"cycle {list(cyc)} has points outside 1..{degree}")
        if len(set(pts)) != len(pts) or seen & set(pts):
            raise ParseError(f"cycle {list(cyc)} repeats a point")
        seen |= set(pts)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return tuple(img)


def perm_to_cycles(perm: Perm) -> list[list[int]]:
    out, seen = [], set()
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x + 1)
            x = perm[x]
        out.append(cyc)
    return out


def perm_label(perm: Perm) -> str:
    cyc = perm_to_cycles(perm)
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


def compose(a: Perm, b: Perm) -> Perm:
    """a * b with b applied first."""
    return tuple(a[x] for x in b)


@dataclass(frozen=True)
class GroupSpec:
    """Parsed group description document.

    The on-disk form is JSON::

        {"name": "S3", "degree": 3,
         "generators": [[[1, 2]], [[1, 2, 3]]],
         "subgroups": {"S2": [[[1, 2]]]}}

    Each generator is a list of cycles over the points ``1..degree``; an empty
    list is the identity.  ``subgroups`` maps a name to its generator list.
    A Cayley-table document replaces ``degree``/``generators`` by ``table``
    (square list of lists of ids, identity anywhere) and names subgroups by
    lists of element ids.
    """

    name: str
    degree: int
    generators: tuple[tuple[tuple[int, ...], ...], ...] = ()
    subgroups: tuple[tuple[str, tuple], ...] = ()
    table: tuple[tuple[int, ...], ...] | None = None


def _cycles_tuple(gen) -> tuple[tuple[int, ...], ...]:
    if not isinstance(gen, list) or not all(isinstance(c, list) for c in gen):
        raise ParseError(f"generator must be a list of cycles, got {gen!r}")
    for c in gen:
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in c):
            raise ParseError(f"cycle entries must be integers, got {c!r}")
    return tuple(tuple(c) for c in gen)


def parse_group_spec(text: str) -> GroupSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("group spec must be a JSON object")
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise ParseError("missing field 'name'")
    unknown = set(doc) - {"name", "degree", "generators", "subgroups", "table"}
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}")
    if "table" in doc:
        table = doc["table"]
        if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
            raise ParseError("table must be a list of rows")
        subs = doc.get("subgroups", {})
        if not isinstance(subs, dict):
            raise ParseError("subgroups must be an object")
        return GroupSpec(
            name=name,
            degree=len(table),
            table=tuple(tuple(int(x) for x in r) for r in table),
            subgroups=tuple((k, tuple(int(x) for x in v)) for k, v in subs.items()),
        )
    degree = doc.get("degree")
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
        raise ParseError("field 'degree' must be a positive integer")
    gens = doc.get("generators", [])
    if not isinstance(gens, list):
        raise ParseError("field 'generators' must be a list")
    subs = doc.get("subgroups", {})
    if not isinstance(subs, dict):
        raise ParseError("field 'subgroups' must be an object")
    sub_items = []
    for k, v in subs.items():
        if not isinstance(v, list):
            raise ParseError(f"subgroup {k!r} must be a generator list")
        sub_items.append((k, tuple(_cycles_tuple(g) for g in v)))
    return GroupSpec(
        name=name,
        degree=degree,
        generators=tuple(_cycles_tuple(g) for g in gens),
        subgroups=tuple(sub_items),
    )


def format_group_spec(spec: GroupSpec) -> str:
    """Inverse of :func:`parse_group_spec` (canonical layout, one entry per line)."""
    dump = json.dumps
    lines = ["{", f' "name": {dump(spec.name)},']
    if spec.table is not None:
        rows = ",\n".join("  " + dump(list(r)) for r in spec.table)
        lines.append(' "table": [\n' + rows + "\n ],")
        subs = [(k, list(v)) for k, v in spec.subgroups]
    else:
        lines.append(f' "degree": {spec.degree},')
        lines.append(f' "generators": {dump([[list(c) for c in g] for g in spec.generators])},')
        subs = [(k, [[list(c) for c in g] for g in v]) for k, v in spec.subgroups]
    if subs:
        body = ",\n".join(f"  {dump(k)}: {dump(v)}" for k, v in subs)
        lines.append(' "subgroups": {\n' + body + "\n }")
    else:
        lines.append(' "subgroups": {}')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
# groups


@dataclass(frozen=True, eq=False)
class Group:
    name: str
    degree: int
    mul: np.ndarray
    identity: int
    generators: tuple[int, ...]
    labels: tuple[str, ...]
    perms: tuple[Perm, ...] | None = None
    named: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        self.mul.setflags(write=False)

    @property
    def order(self) -> int:
        return int(self.mul.shape[0])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"Group({self.name!r}, order={self.order})"

    @cached_property
    def inverse(self) -> np.ndarray:
        rows, cols = np.nonzero(self.mul == self.identity)
        inv = np.empty(self.order, dtype=np.int64)
        inv[rows] = cols
        inv.setflags(write=False)
        return inv

    def m(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def power(self, a: int, k: int) -> int:
        k %= self.element_order(a)
        out = self.identity
        for _ in range(k):
            out = self.m(out, a)
        return out

    @cached_property
    def orders(self) -> np.ndarray:
        out = np.zeros(self.order, dtype=np.int64)
        for a in range(self.order):
            x, k = a, 1
            while x != self.identity:
                x = int(self.mul[x, a])
                k += 1
            out[a] = k
        return out

    def element_order(self, a: int) -> int:
        return int(self.orders[a])

    @cached_property
    def exponent(self) -> int:
        from math import lcm

        return lcm(*(int(x) for x in self.orders))

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return int(self.mul[self.mul[g, x], self.inverse[g]])

    @cached_property
    def words(self) -> tuple[np.ndarray, np.ndarray]:
        """Breadth-first spanning tree: ``parent[x]``, ``gen_index[x]`` with
        ``x = parent[x] * generators[gen_index[x]]``; the identity has parent -1."""
        parent = np.full(self.order, -1, dtype=np.int64)
        via = np.full(self.order, -1, dtype=np.int64)
        seen = np.zeros(self.order, dtype=bool)
        seen[self.identity] = True
        order = [self.identity]
        q = deque([self.identity])
        while q:
            x = q.popleft()
            for k, s in enumerate(self.generators):
                y = int(self.mul[x, s])
                if not seen[y]:
                    seen[y] = True
                    parent[y], via[y] = x, k
                    order.append(y)
                    q.append(y)
        object.__setattr__(self, "_bfs_order", tuple(order))
        return parent, via

    @property
    def bfs_order(self) -> tuple[int, ...]:
        self.words
        return self._bfs_order

    def subgroup(self, name: str) -> "Subgroup":
        if name not in self.named:
            raise NotASubgroup(f"{self.name} has no subgroup named {name!r}; known: {sorted(self.named)}")
        return subgroup_generated(self, self.named[name])

    def element(self, perm_or_cycles) -> int:
        """Id of a permutation given as a tuple of images or a list of cycles."""
        if self.perms is None:
            raise ValueError("group is not a permutation group")
        if perm_or_cycles and isinstance(perm_or_cycles[0], (list, tuple)):
            perm = cycles_to_perm(perm_or_cycles, self.degree)
        else:
            perm = tuple(perm_or_cycles) if perm_or_cycles else tuple(range(self.degree))
        return self._perm_index[perm]

    @cached_property
    def _perm_index(self) -> dict[Perm, int]:
        return {p: i for i, p in enumerate(self.perms or ())}

    def check_axioms(self) -> None:
        check_group_table(self.mul, self.generators)


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: Group
    elements: tuple[int, ...]
    generators: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self.element_set

    @cached_property
    def element_set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def __repr__(self) -> str:
        return f"Subgroup(of {self.parent.name}, order={self.order})"


@dataclass(frozen=True, eq=False)
class GroupHom:
    source: Group
    target: Group
    image: tuple[int, ...]

    def __post_init__(self):
        img = np.asarray(self.image)
        if len(img) != self.source.order:
            raise NotAGroup("image table has the wrong length")
        lhs = img[self.source.mul]
        rhs = self.target.mul[img[:, None], img[None, :]]
        if not np.array_equal(lhs, rhs):
            raise NotAGroup("map is not multiplicative")

    def __call__(self, x: int) -> int:
        return self.image[x]

    @cached_property
    def kernel(self) -> tuple[int, ...]:
        return tuple(i for i, y in enumerate(self.image) if y == self.target.identity)


def check_group_table(mul: np.ndarray, generators: Iterable[int] | None = None) -> int:
    """Validate group axioms; returns the identity id.

    Associativity uses Light's test: if (xy)z = x(yz) for all x, y and every z
    in a generating set, the operation is associative.  Without a generating
    set the check runs over all z.
    """
    n = mul.shape[0]
    if mul.shape != (n, n) or n == 0:
        raise NotAGroup("table must be square and nonempty")
    if mul.min() < 0 or mul.max() >= n:
        raise NotAGroup("table entries out of range")
    ids = [e for e in range(n) if np.array_equal(mul[e], np.arange(n)) and np.array_equal(mul[:, e], np.arange(n))]
    if len(ids) != 1:
        raise NotAGroup("no two-sided identity")
    e = ids[0]
    for r in range(n):
        if len(np.unique(mul[r])) != n or len(np.unique(mul[:, r])) != n:
            raise NotAGroup("table is not a Latin square (inverses fail)")
    zs = list(range(n)) if generators is None else list(generators)
    if generators is not None:
        closure = _closure(mul, zs, e)
        if len(closure) != n:
            raise NotAGroup("generators do not generate the table")
    for z in zs:
        lhs = mul[mul[:, :], z]  # (x y) z
        rhs = mul[:, mul[:, z]]  # x (y z)
        if not np.array_equal(lhs, rhs):
            raise NotAGroup("multiplication is not associative")
    return e


def _closure(mul: np.ndarray, gens: Sequence[int], e: int) -> list[int]:
    seen = {e}
    q = deque([e])
    while q:
        x = q.popleft()
        for s in gens:
            y = int(mul[x, s])
            if y not in seen:
                seen.add(y)
                q.append(y)
    return sorted(seen)


def permutation_group(
    name: str,
    degree: int,
    generators: Sequence[Perm],
    subgroups: dict[str, Sequence[Perm]] | None = None,
    cap: int | None = None,
) -> Group:
    cap = DEFAULT_LIMITS.group_order if cap is None else cap
    ident = tuple(range(degree))
    gens = [tuple(g) for g in generators]
    for g in gens:
        if sorted(g) != list(ident):
            raise ParseError(f"{g} is not a permutation of degree {degree}")
    seen = {ident}
    q = deque([ident])
    while q:
        x = q.popleft()
        for s in gens:
            y = compose(x, s)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise CapExceeded(f"group {name} exceeds the cap of {cap} elements")
                q.append(y)
    perms = sorted(seen)
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    arr = np.array(perms, dtype=np.int64).reshape(n, degree)
    # mul[a, b] = a o b: (a o b)(x) = a[b[x]]
    composed = np.take_along_axis(
        np.broadcast_to(arr[:, None, :], (n, n, degree)),
        np.broadcast_to(arr[None, :, :], (n, n, degree)),
        axis=2,
    )
    mul = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            mul[a, b] = index[tuple(composed[a, b])]
    gen_ids = []
    for g in gens:
        i = index[g]
        if i not in gen_ids:
            gen_ids.append(i)
    named = {}
    for sname, sgens in (subgroups or {}).items():
        ids = []
        for g in sgens:
            g = tuple(g)
            if g not in index:
                raise NotASubgroup(f"generator {perm_label(g)} of {sname} is not in {name}")
            ids.append(index[g])
        named[sname] = tuple(ids)
    return Group(
        name=name,
        degree=degree,
        mul=mul,
        identity=index[ident],
        generators=tuple(gen_ids),
        labels=tuple(perm_label(p) for p in perms),
        perms=tuple(perms),
        named=named,
    )


def cayley_group(
    name: str,
    table,
    generators: Sequence[int] | None = None,
    labels: Sequence[str] | None = None,
    named: dict[str, Sequence[int]] | None = None,
    cap: int | None = None,
    check: bool = True,
) -> Group:
    cap = DEFAULT_LIMITS.group_order if cap is None else cap
    mul = np.array(table, dtype=np.int64)
    n = mul.shape[0]
    if n > cap:
        raise CapExceeded(f"group {name} of order {n} exceeds the cap of {cap}")
    if mul.ndim != 2 or mul.shape[1] != n:
        raise NotAGroup("table must be square")
    if generators is None:
        generators = _greedy_generators(mul)
    e = check_group_table(mul, generators) if check else int(np.nonzero((mul == np.arange(n)).all(axis=1))[0][0])
    return Group(
        name=name,
        degree=n,
        mul=mul,
        identity=e,
        generators=tuple(int(g) for g in generators),
        labels=tuple(labels) if labels is not None else tuple(f"g{i}" for i in range(n)),
        perms=None,
        named={k: tuple(int(x) for x in v) for k, v in (named or {}).items()},
    )


def _greedy_generators(mul: np.ndarray) -> list[int]:
    n = mul.shape[0]
    e = next(i for i in range(n) if np.array_equal(mul[i], np.arange(n)))
    gens: list[int] = []
    span = {e}
    for x in range(n):
        if x not in span:
            gens.append(x)
            span = set(_closure(mul, gens, e))
    return gens


def group_from_spec(spec: GroupSpec | str, cap: int | None = None) -> Group:
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    if spec.table is not None:
        g = cayley_group(spec.name, spec.table, cap=cap, named={})
        named = {}
        for k, v in spec.subgroups:
            named[k] = tuple(v)
        g = Group(g.name, g.degree, g.mul.copy(), g.identity, g.generators, g.labels, None, named)
        for k in named:
            subgroup_from_elements(g, named[k])
        return g
    gens = [cycles_to_perm(c, spec.degree) for c in spec.generators]
    subs = {k: [cycles_to_perm(c, spec.degree) for c in v] for k, v in spec.subgroups}
    return permutation_group(spec.name, spec.degree, gens, subs, cap=cap)


def load_group(path) -> Group:
    from pathlib import Path

    return group_from_spec(Path(path).read_text())


# ----------------------------------------------------------------------------
# subgroups, classes, cosets


def subgroup_generated(g: Group, gens: Iterable[int]) -> Subgroup:
    gens = tuple(int(x) for x in gens)
    for x in gens:
        if not 0 <= x < g.order:
            raise NotASubgroup(f"id {x} is not an element of {g.name}")
    return Subgroup(g, tuple(_closure(g.mul, gens, g.identity)), gens)


def subgroup_from_elements(g: Group, elements: Iterable[int]) -> Subgroup:
    els = sorted(set(int(x) for x in elements))
    s = set(els)
    if g.identity not in s:
        raise NotASubgroup("subset does not contain the identity")
    sub = g.mul[np.ix_(els, els)]
    if not set(np.unique(sub)).issubset(s):
        raise NotASubgroup("subset is not closed under multiplication")
    return Subgroup(g, tuple(els), tuple(els))


def trivial_subgroup(g: Group) -> Subgroup:
    return Subgroup(g, (g.identity,), ())


def whole_group(g: Group) -> Subgroup:
    return Subgroup(g, tuple(range(g.order)), g.generators)


@dataclass(frozen=True)
class ConjugacyClass:
    representative: int
    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


def conjugacy_classes(g: Group) -> list[ConjugacyClass]:
    """Classes ordered with the identity first, then by smallest member id."""
    return list(_classes_cached(g))


def _classes_cached(g: Group) -> tuple[ConjugacyClass, ...]:
    cached = g.__dict__.get("_classes")
    if cached is not None:
        return cached
    n = g.order
    label = np.full(n, -1, dtype=np.int64)
    classes: list[list[int]] = []
    for x in range(n):
        if label[x] >= 0:
            continue
        orbit = np.unique(g.mul[g.mul[:, x], g.inverse])
        for y in orbit:
            label[y] = len(classes)
        classes.append(sorted(int(y) for y in orbit))
    classes.sort(key=lambda c: (c != [g.identity], c[0]))
    out = tuple(ConjugacyClass(c[0], tuple(c)) for c in classes)
    object.__setattr__(g, "_classes", out)
    return out


def class_index(g: Group) -> np.ndarray:
    """Array mapping element id -> index of its conjugacy class."""
    cached = g.__dict__.get("_class_index")
    if cached is not None:
        return cached
    idx = np.empty(g.order, dtype=np.int64)
    for i, c in enumerate(conjugacy_classes(g)):
        idx[list(c.members)] = i
    object.__setattr__(g, "_class_index", idx)
    return idx


@dataclass(frozen=True)
class CosetData:
    cosets: list[tuple[int, ...]]
    is_normal: bool
    quotient: Group | None
    projection: GroupHom | None


def left_cosets(g: Group, h: Subgroup) -> list[tuple[int, ...]]:
    hs = np.array(h.elements)
    seen = np.zeros(g.order, dtype=bool)
    out = []
    for x in range(g.order):
        if not seen[x]:
            c = np.unique(g.mul[x, hs])
            seen[c] = True
            out.append(tuple(int(y) for y in c))
    return out


def is_normal(g: Group, h: Subgroup) -> bool:
    hs = np.array(h.elements)
    s = h.element_set
    for x in g.generators:
        conj = g.mul[g.mul[x, hs], g.inverse[x]]
        if not set(int(y) for y in conj) <= s:
            return False
    return True


def coset_and_quotient(g: Group, h: Subgroup, name: str | None = None) -> CosetData:
    if h.parent is not g:
        raise NotASubgroup("subgroup belongs to a different group")
    subgroup_from_elements(g, h.elements)
    cosets = left_cosets(g, h)
    normal = is_normal(g, h)
    if not normal:
        return CosetData(cosets, False, None, None)
    which = np.empty(g.order, dtype=np.int64)
    for i, c in enumerate(cosets):
        which[list(c)] = i
    reps = [c[0] for c in cosets]
    k = len(cosets)
    table = [[int(which[g.mul[reps[a], reps[b]]]) for b in range(k)] for a in range(k)]
    gens = []
    for s in g.generators:
        t = int(which[s])
        if t != which[g.identity] and t not in gens:
            gens.append(t)
    labels = [g.labels[r] + "N" for r in reps]
    q = cayley_group(name or f"{g.name}/N", table, generators=gens, labels=labels, cap=max(k, 1))
    proj = GroupHom(g, q, tuple(int(x) for x in which))
    return CosetData(cosets, True, q, proj)


def image_subgroup(hom: GroupHom, h: Subgroup) -> Subgroup:
    return subgroup_from_elements(hom.target, {hom.image[x] for x in h.elements})


def centralizer_order(g: Group, x: int) -> int:
    return int(np.sum(g.mul[:, x] == g.mul[x, :]))


def cyclic_subgroups(g: Group) -> list[Subgroup]:
    seen, out = set(), []
    for x in range(g.order):
        s = subgroup_generated(g, [x])
        if s.elements not in seen:
            seen.add(s.elements)
            out.append(s)
    return out


def all_subgroups_two_generated(g: Group) -> list[Subgroup]:
    """Subgroups generated by at most two elements (class representative first)."""
    seen, out = set(), []
    reps = [c.representative for c in conjugacy_classes(g)]
    for a in reps:
        for b in range(g.order):
            s = subgroup_generated(g, [a, b])
            if s.elements not in seen:
                seen.add(s.elements)
                out.append(s)
    return out


def direct_product(g1: Group, g2: Group, name: str | None = None) -> Group:
    n1, n2 = g1.order, g2.order
    idx = lambda a, b: a * n2 + b  # noqa: E731
    table = [[idx(g1.m(a1, b1), g2.m(a2, b2)) for b1 in range(n1) for b2 in range(n2)] for a1 in range(n1) for a2 in range(n2)]
    gens = [idx(s, g2.identity) for s in g1.generators] + [idx(g1.identity, s) for s in g2.generators]
    labels = [f"({g1.labels[a]},{g2.labels[b]})" for a in range(n1) for b in range(n2)]
    return cayley_group(name or f"{g1.name}x{g2.name}", table, generators=gens, labels=labels, cap=n1 * n2)


BUILTIN_GROUPS = ("C2", "C3", "V4", "S3", "D4", "A4", "S4", "A5", "S5")


def builtin_spec_text(name: str) -> str:
    from importlib import resources

    path = resources.files("clmlab").joinpath(f"data/groups/{name}.json")
    if not path.is_file():
        raise ParseError(f"no shipped group spec named {name!r}; known: {', '.join(BUILTIN_GROUPS)}")
    return path.read_text()


_BUILTIN_CACHE: dict[str, Group] = {}


def builtin_group(name: str) -> Group:
    """Shipped group by name (cached; groups are immutable)."""
    if name not in _BUILTIN_CACHE:
        _BUILTIN_CACHE[name] = group_from_spec(builtin_spec_text(name))
    return _BUILTIN_CACHE[name]
