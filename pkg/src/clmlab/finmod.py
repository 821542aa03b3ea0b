"""Finite abelian groups with a list of operators acting on them.

A :class:`FiniteModule` is ``Z/d_1 + ... + Z/d_k`` (the ``invariants``) with a
tuple of integer matrices ``ops``; the matrix ``A`` acts on column vectors by
``x -> A x`` with the i-th coordinate reduced mod ``d_i``.  Group modules use
one operator per group generator, Hecke-order modules one per basis element.
Two modules can be compared (Hom, Sur, isomorphism) when their operator lists
correspond entry by entry.

Elements are coded as integers in mixed radix so that submodules can be kept as
boolean masks over ``range(size)``.  Everything here is brute force and meant
for modules with at most a few thousand elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint

from .errors import InvariantViolated, TooLarge
from .lattice import hnf_rows, smith_form


def _reduce_matrix(mat, inv: Sequence[int]) -> np.ndarray:
    m = np.array(mat, dtype=np.int64).reshape(len(inv), len(inv))
    if len(inv):
        m = m % np.array(inv, dtype=np.int64)[:, None]
    return m


@dataclass(frozen=True, eq=False)
class FiniteModule:
    invariants: tuple[int, ...]
    ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariants)
        if any(d < 2 for d in inv):
            raise InvariantViolated(f"cyclic orders must be at least 2, got {inv}")
        object.__setattr__(self, "invariants", inv)
        ops = tuple(_reduce_matrix(a, inv) for a in self.ops)
        for a in ops:
            a.setflags(write=False)
            # column j must have order dividing d_j
            for i in range(len(inv)):
                for j in range(len(inv)):
                    if (int(a[i, j]) * inv[j]) % inv[i]:
                        raise InvariantViolated(f"operator entry ({i},{j}) is not a well-defined map")
        object.__setattr__(self, "ops", ops)

    # ------------------------------------------------------------ basics
    @property
    def rank(self) -> int:
        return len(self.invariants)

    @cached_property
    def size(self) -> int:
        return prod(self.invariants)

    @property
    def order(self) -> int:
        return self.size

    @cached_property
    def strides(self) -> np.ndarray:
        s, out = 1, []
        for d in self.invariants:
            out.append(s)
            s *= d
        return np.array(out, dtype=np.int64)

    @cached_property
    def coords(self) -> np.ndarray:
        """coords[c] = coordinate vector of the element with code c."""
        n = self.size
        if self.rank == 0:
            return np.zeros((1, 0), dtype=np.int64)
        codes = np.arange(n, dtype=np.int64)
        return (codes[:, None] // self.strides[None, :]) % np.array(self.invariants)[None, :]

    def encode(self, vecs) -> np.ndarray:
        v = np.asarray(vecs, dtype=np.int64)
        if self.rank == 0:
            return np.zeros(v.shape[:-1], dtype=np.int64)
        v = v % np.array(self.invariants)
        return v @ self.strides

    @cached_property
    def add_table(self) -> np.ndarray:
        c = self.coords
        return self.encode(c[:, None, :] + c[None, :, :])

    @cached_property
    def neg(self) -> np.ndarray:
        return self.encode(-self.coords)

    def apply_matrix(self, mat) -> np.ndarray:
        """Table code -> code for a matrix acting on coordinates."""
        if self.rank == 0:
            return np.zeros(1, dtype=np.int64)
        m = np.asarray(mat, dtype=np.int64)
        return self.encode(self.coords @ m.T)

    @cached_property
    def op_tables(self) -> tuple[np.ndarray, ...]:
        return tuple(self.apply_matrix(a) for a in self.ops)

    def scalar_table(self, k: int) -> np.ndarray:
        return self.encode(self.coords * k)

    @cached_property
    def exponent(self) -> int:
        from math import lcm

        return lcm(*self.invariants) if self.invariants else 1

    @cached_property
    def primes(self) -> tuple[int, ...]:
        return tuple(sorted(factorint(self.size))) if self.size > 1 else ()

    def with_ops(self, ops) -> "FiniteModule":
        return FiniteModule(self.invariants, tuple(ops))

    # ------------------------------------------------------------ masks
    def full_mask(self) -> np.ndarray:
        return np.ones(self.size, dtype=bool)

    def zero_mask(self) -> np.ndarray:
        m = np.zeros(self.size, dtype=bool)
        m[0] = True
        return m

    def subgroup_closure(self, mask: np.ndarray, extra: Iterable[int]) -> np.ndarray:
        """Additive subgroup generated by the subgroup ``mask`` and elements ``extra``."""
        mask = mask.copy()
        add = self.add_table
        for x in extra:
            if mask[x]:
                continue
            # add multiples of x to the subgroup
            mult = [0]
            y = int(x)
            while y != 0:
                mult.append(y)
                y = int(add[y, x])
            members = np.nonzero(mask)[0]
            mask[np.unique(add[np.ix_(members, np.array(mult))])] = True
        return mask

    def submodule_generated(self, elements: Iterable[int], base: np.ndarray | None = None) -> np.ndarray:
        mask = self.zero_mask() if base is None else base.copy()
        queue = [int(x) for x in elements]
        tables = self.op_tables
        while queue:
            mask = self.subgroup_closure(mask, queue)
            members = np.nonzero(mask)[0]
            queue = []
            for t in tables:
                img = np.unique(t[members])
                missing = img[~mask[img]]
                if len(missing):
                    queue.extend(int(x) for x in missing)
        return mask

    def is_submodule(self, mask: np.ndarray) -> bool:
        members = np.nonzero(mask)[0]
        if not mask[0]:
            return False
        if not mask[self.add_table[np.ix_(members, members)]].all():
            return False
        return all(mask[t[members]].all() for t in self.op_tables)

    def image_mask(self, table: np.ndarray, mask: np.ndarray | None = None) -> np.ndarray:
        src = np.arange(self.size) if mask is None else np.nonzero(mask)[0]
        out = np.zeros(self.size, dtype=bool)
        out[table[src]] = True
        return out

    # ------------------------------------------------------------ lattice
    @cached_property
    def cyclic_submodules(self) -> list[np.ndarray]:
        seen: dict[bytes, np.ndarray] = {}
        for x in range(1, self.size):
            m = self.submodule_generated([x])
            key = np.packbits(m).tobytes()
            if key not in seen:
                seen[key] = m
        return list(seen.values())

    def submodules(self, containing: np.ndarray | None = None) -> list[np.ndarray]:
        """All submodules containing ``containing`` (default: all), sorted by size."""
        base = self.zero_mask() if containing is None else containing
        start = self.submodule_generated([], base=base) if containing is not None else base
        found: dict[bytes, np.ndarray] = {np.packbits(start).tobytes(): start}
        frontier = [start]
        cyc = self.cyclic_submodules
        cyc_arr = np.array(cyc, dtype=bool)
        cyc_members = [np.nonzero(c)[0] for c in cyc]
        add = self.add_table
        while frontier:
            nxt = []
            for s in frontier:
                sm = np.nonzero(s)[0]
                outside = (cyc_arr & ~s[None, :]).any(axis=1)
                for ci in np.nonzero(outside)[0]:
                    cm = cyc_members[ci]
                    t = np.zeros(self.size, dtype=bool)
                    t[add[np.ix_(sm, cm)].ravel()] = True
                    key = np.packbits(t).tobytes()
                    if key not in found:
                        found[key] = t
                        nxt.append(t)
            frontier = nxt
        out = list(found.values())
        out.sort(key=lambda m: (int(m.sum()), np.packbits(m).tobytes()))
        return out

    def radical_cover(self) -> np.ndarray:
        """A submodule contained in every maximal submodule: sum of p*M over primes p.

        Every simple quotient of a finite module over Z[Gamma] is killed by some
        prime p, hence every maximal submodule contains p*M for the matching p
        and, as the quotient is simple, also q*M for every other prime q.
        """
        mask = self.zero_mask()
        for p in self.primes:
            mask = mask | self.image_mask(self.scalar_table(p))
        gens = np.nonzero(mask)[0]
        return self.submodule_generated(gens)

    def mobius_top(self) -> list[tuple[np.ndarray, int]]:
        """(H', mu(H', M)) for submodules H' with nonzero Mobius value against the top.

        By the crosscut theorem mu(H', M) vanishes unless H' contains the
        radical, so only the interval above :meth:`radical_cover` is searched.
        """
        cached = self.__dict__.get("_mobius")
        if cached is not None:
            return cached
        subs = self.submodules(containing=self.radical_cover())
        n = len(subs)
        masks = np.array(subs, dtype=np.int64)  # (n, size)
        # contains[a, b] = sub a contains sub b
        outside = masks @ (1 - masks).T  # [b, a] = # elements of b outside a
        contains = (outside == 0).T
        mu = np.zeros(n, dtype=np.int64)
        top = n - 1
        if not subs[top].all():
            raise InvariantViolated("largest submodule is not the whole module")
        mu[top] = 1
        for a in range(n - 2, -1, -1):
            above = np.nonzero(contains[:, a])[0]
            above = above[above != a]
            mu[a] = -int(mu[above].sum())
        out = [(subs[a], int(mu[a])) for a in range(n) if mu[a]]
        object.__setattr__(self, "_mobius", out)
        return out

    # ------------------------------------------------------------ realization
    def realize(self, mask: np.ndarray, tables: Sequence[np.ndarray] | None = None) -> tuple["FiniteModule", np.ndarray]:
        """Submodule given by ``mask`` as a module in its own invariant basis.

        The operators of the result are the restrictions of ``tables`` (element
        maps code -> code, default: the module's own operators).  Returns
        ``(sub, basis_codes)`` where ``basis_codes[i]`` is the code in ``self``
        of the i-th basis element of ``sub``.
        """
        tables = self.op_tables if tables is None else tuple(tables)
        members = np.nonzero(mask)[0]
        k = self.rank
        if len(members) == 1:
            return FiniteModule((), tuple(np.zeros((0, 0), dtype=np.int64) for _ in tables)), np.zeros(0, dtype=np.int64)
        # greedy generating set
        span = self.zero_mask()
        gens: list[int] = []
        for x in members:
            if not span[x]:
                gens.append(int(x))
                span = self.subgroup_closure(span, [int(x)])
                if span.sum() == len(members):
                    break
        if not np.array_equal(span, mask):
            raise InvariantViolated("mask is not a subgroup")
        inv = self.invariants
        rows = [list(map(int, self.coords[x])) for x in gens]
        rows += [[inv[i] if j == i else 0 for j in range(k)] for i in range(k)]
        basis = hnf_rows(rows, k)  # upper triangular rows b_1..b_k, full rank
        # relations: row i solves x B = d_i e_i
        rel = [_solve_upper_left(basis, [inv[i] if j == i else 0 for j in range(k)]) for i in range(k)]
        u, d, v = smith_form(rel)
        # U R V = S with S invertible, so V^-1 = S^-1 U R
        ur = [[sum(u[i][t] * rel[t][j] for t in range(k)) for j in range(k)] for i in range(k)]
        vinv = []
        for i in range(k):
            if any(x % d[i][i] for x in ur[i]):
                raise InvariantViolated("Smith transform is not unimodular")
            vinv.append([x // d[i][i] for x in ur[i]])
        # new generator i: row i of V^-1 B
        newgens = []
        orders = []
        for i in range(k):
            s = d[i][i]
            if s == 1:
                continue
            vec = [sum(vinv[i][t] * basis[t][j] for t in range(k)) for j in range(k)]
            newgens.append(vec)
            orders.append(s)
        codes = self.encode(np.array(newgens, dtype=np.int64)) if newgens else np.zeros(0, dtype=np.int64)
        sub0 = FiniteModule(tuple(orders), ())
        # coordinates of every member: enumerate combinations
        lookup = np.full(self.size, -1, dtype=np.int64)
        combo = sub0.coords  # (|sub|, r)
        gen_coords = self.coords[codes] if len(codes) else np.zeros((0, k), dtype=np.int64)
        amb = self.encode(combo @ gen_coords) if len(codes) else np.zeros(1, dtype=np.int64)
        if len(np.unique(amb)) != len(members) or not mask[amb].all():
            raise InvariantViolated("submodule realization failed")
        lookup[amb] = np.arange(len(amb))
        mats = []
        for t in tables:
            imgs = lookup[t[codes]]
            if (imgs < 0).any():
                raise InvariantViolated("mask is not stable under the operators")
            mats.append(sub0.coords[imgs].T.copy())
        sub = FiniteModule(tuple(orders), tuple(mats))
        return sub, codes

    def primary_part(self, p: int) -> "FiniteModule":
        m = self.size
        while m % p == 0:
            m //= p
        return self.realize(self.image_mask(self.scalar_table(m)))[0]

    def direct_sum(self, other: "FiniteModule") -> "FiniteModule":
        if len(self.ops) != len(other.ops):
            raise InvariantViolated("operator lists differ in length")
        k1, k2 = self.rank, other.rank
        ops = []
        for a, b in zip(self.ops, other.ops):
            m = np.zeros((k1 + k2, k1 + k2), dtype=np.int64)
            m[:k1, :k1] = a
            m[k1:, k1:] = b
            ops.append(m)
        return FiniteModule(self.invariants + other.invariants, tuple(ops))

    # ------------------------------------------------------------ misc
    def abelian_type(self) -> tuple[int, ...]:
        """Canonical invariant factors d_1 | d_2 | ... of the underlying group."""
        return invariant_factors(self.invariants)

    def serialize(self) -> str:
        lines = ["invariants " + " ".join(map(str, self.invariants))]
        for k, a in enumerate(self.ops):
            rows = ";".join(" ".join(str(int(x)) for x in r) for r in a)
            lines.append(f"op{k} {rows}")
        return "\n".join(lines)


def _solve_upper_left(b, target):
    """Integer x with x b = target for an upper triangular integer matrix b."""
    k = len(b)
    x = []
    for j in range(k):
        rest = target[j] - sum(x[t] * b[t][j] for t in range(j))
        if rest % b[j][j]:
            raise InvariantViolated("relation matrix is not integral")
        x.append(rest // b[j][j])
    return x


def invariant_factors(orders: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors of Z/o_1 + ... + Z/o_k, as d_1 | d_2 | ... with d_i >= 2."""
    primes: dict[int, list[int]] = {}
    for o in orders:
        for p, e in factorint(o).items():
            primes.setdefault(p, []).append(e)
    if not primes:
        return ()
    length = max(len(v) for v in primes.values())
    out = [1] * length
    for p, exps in primes.items():
        exps = sorted(exps, reverse=True)
        for i, e in enumerate(exps):
            out[length - 1 - i] *= p**e
    return tuple(d for d in out if d > 1)


def p_primary_exponents(orders: Sequence[int], p: int) -> tuple[int, ...]:
    """Partition (decreasing exponents) of the p-part of the abelian group."""
    exps = []
    for o in orders:
        e = 0
        while o % p == 0:
            o //= p
            e += 1
        if e:
            exps.append(e)
    return tuple(sorted(exps, reverse=True))


# ----------------------------------------------------------------------------
# counting


def _valuation_array(a: np.ndarray, p: int, cap: int) -> np.ndarray:
    out = np.full(a.shape, cap, dtype=np.int64)
    nz = a != 0
    x = np.where(nz, a, 1)
    v = np.zeros(a.shape, dtype=np.int64)
    for _ in range(cap):
        div = (x % p == 0) & nz
        if not div.any():
            break
        v += div
        x = np.where(div, x // p, x)
    out[nz] = v[nz]
    return out


def local_cokernel_exponent(cols: np.ndarray, exps: Sequence[int], p: int) -> int:
    """log_p |(+ Z/p^exps[r]) / span(cols)| by elimination over Z/p^N."""
    r = len(exps)
    if r == 0:
        return 0
    big_n = max(exps)
    mod = p**big_n
    diag = np.diag([p**e % mod for e in exps]).astype(np.int64)
    a = np.concatenate([np.asarray(cols, dtype=np.int64).reshape(r, -1) % mod, diag], axis=1)
    total = 0
    for t in range(r):
        sub = a[t:, t:]
        if not sub.any():
            total += big_n * (r - t)
            break
        val = _valuation_array(sub, p, big_n)
        i, j = np.unravel_index(int(np.argmin(val)), val.shape)
        v = int(val[i, j])
        i += t
        j += t
        a[[t, i]] = a[[i, t]]
        a[:, [t, j]] = a[:, [j, t]]
        pv = p**v
        unit = int(a[t, t]) // pv
        inv = pow(unit, -1, mod)
        factors = ((a[t + 1 :, t] // pv) * inv) % mod
        a[t + 1 :] = (a[t + 1 :] - factors[:, None] * a[t][None, :]) % mod
        a[t, t + 1 :] = 0
        total += v
    return total


def _equivariance_system(g: FiniteModule, h: FiniteModule):
    """Parameters and the linear map F -> (B F - F A) for all operator pairs.

    Returns (param list, param moduli, columns array, codomain moduli).
    """
    d, e = g.invariants, h.invariants
    params = [(a, b) for a in range(len(e)) for b in range(len(d)) if gcd(d[b], e[a]) > 1]
    pmod = [gcd(d[b], e[a]) for a, b in params]
    targets = [(k, i, j) for k in range(len(g.ops)) for i in range(len(e)) for j in range(len(d)) if gcd(d[j], e[i]) > 1]
    tmod = [gcd(d[j], e[i]) for _, i, j in targets]
    tindex = {t: n for n, t in enumerate(targets)}
    cols = np.zeros((len(targets), len(params)), dtype=np.int64)
    for col, (a, b) in enumerate(params):
        c_ab = e[a] // gcd(d[b], e[a])
        for k, (amat, bmat) in enumerate(zip(g.ops, h.ops)):
            # (B F)[i][b] = B[i][a] c_ab ; (F A)[a][j] = c_ab A[b][j]
            vals: dict[tuple[int, int], int] = {}
            for i in range(len(e)):
                if bmat[i, a]:
                    vals[(i, b)] = vals.get((i, b), 0) + int(bmat[i, a]) * c_ab
            for j in range(len(d)):
                if amat[b, j]:
                    vals[(a, j)] = vals.get((a, j), 0) - c_ab * int(amat[b, j])
            for (i, j), val in vals.items():
                gij = gcd(d[j], e[i])
                val %= e[i]
                if gij == 1:
                    if val:
                        raise InvariantViolated("equivariance defect outside Hom")
                    continue
                step = e[i] // gij
                if val % step:
                    raise InvariantViolated("equivariance defect is not a homomorphism")
                cols[tindex[(k, i, j)], col] = (val // step) % gij
    return params, pmod, cols, tmod


def hom_count(g: FiniteModule, h: FiniteModule) -> int:
    """|Hom(G, H)| commuting with the paired operators, by exact kernel counting."""
    if len(g.ops) != len(h.ops):
        raise InvariantViolated("operator lists differ in length")
    if g.size == 1 or h.size == 1:
        return 1
    total = 1
    for p in sorted(set(g.primes) & set(h.primes)):
        gp, hp = (g, h) if g.primes == (p,) and h.primes == (p,) else (g.primary_part(p), h.primary_part(p))
        total *= _hom_count_primary(gp, hp, p)
    return total


def _hom_count_primary(g: FiniteModule, h: FiniteModule, p: int) -> int:
    params, pmod, cols, tmod = _equivariance_system(g, h)
    dom = prod(pmod)
    if not tmod:
        return dom
    exps = [_vp(m, p) for m in tmod]
    coker = local_cokernel_exponent(cols, exps, p)
    codom_exp = sum(exps)
    # |ker| = |dom| / |im| and |im| = |codom| / |coker|
    return dom * p**coker // p**codom_exp


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


_HOM_CACHE: dict = {}


def _module_key(m: FiniteModule):
    return (m.invariants, tuple(a.tobytes() for a in m.ops))


def hom_count_cached(g: FiniteModule, h: FiniteModule) -> int:
    key = (_module_key(g), _module_key(h))
    val = _HOM_CACHE.get(key)
    if val is None:
        val = hom_count(g, h)
        if len(_HOM_CACHE) > 200_000:
            _HOM_CACHE.clear()
        _HOM_CACHE[key] = val
    return val


def sur_count(g: FiniteModule, h: FiniteModule) -> int:
    """|Sur(G, H)| = sum over submodules H' of mu(H', H) |Hom(G, H')|."""
    if h.size == 1:
        return 1
    if g.size < h.size:
        return 0
    total = 0
    realized = h.__dict__.get("_mobius_realized")
    if realized is None:
        realized = [(h.realize(mask)[0], mu) for mask, mu in h.mobius_top()]
        object.__setattr__(h, "_mobius_realized", realized)
    for sub, mu in realized:
        total += mu * hom_count_cached(g, sub)
    return total


def aut_count(g: FiniteModule) -> int:
    return sur_count(g, g)


def is_isomorphic(g: FiniteModule, h: FiniteModule) -> bool:
    if g.size != h.size or g.abelian_type() != h.abelian_type():
        return False
    return sur_count(g, h) > 0


# ----------------------------------------------------------------------------
# exhaustive enumeration of Hom_Z(G, H) (small cases only)


def exhaustive_counts(g: FiniteModule, h: FiniteModule, limit: int = 200_000) -> dict[str, int]:
    """Enumerate every group homomorphism G -> H and count the equivariant,
    surjective and bijective ones directly."""
    d, e = g.invariants, h.invariants
    shapes = [gcd(d[b], e[a]) for a in range(len(e)) for b in range(len(d))]
    total = prod(shapes) if shapes else 1
    if total > limit:
        raise TooLarge(f"|Hom_Z(G,H)| = {total} exceeds the exhaustive limit {limit}")
    if g.size == 1 or h.size == 1:
        n = 1
        return {"hom": n, "sur": int(h.size == 1), "aut": int(g.size == h.size == 1)}
    grid = np.indices(shapes).reshape(len(shapes), -1).T  # (total, k_h * k_g)
    steps = np.array([e[a] // gcd(d[b], e[a]) for a in range(len(e)) for b in range(len(d))], dtype=np.int64)
    fs = (grid * steps[None, :]).reshape(-1, len(e), len(d))
    emod = np.array(e, dtype=np.int64)[None, :, None]
    ok = np.ones(len(fs), dtype=bool)
    for amat, bmat in zip(g.ops, h.ops):
        lhs = np.einsum("ia,nab->nib", bmat, fs) % emod
        rhs = np.einsum("nab,bj->naj", fs, amat) % emod
        ok &= (lhs == rhs).all(axis=(1, 2))
    homs = fs[ok]
    # Frattini: f is onto iff it is onto modulo pH for every prime p dividing |H|
    onto = np.ones(len(homs), dtype=bool)
    for p in h.primes:
        rows = [a for a in range(len(e)) if e[a] % p == 0]
        onto &= _batch_rank_mod_p(homs[:, rows, :], p) == len(rows)
    sur = int(onto.sum())
    aut = sur if g.size == h.size else 0
    return {"hom": int(len(homs)), "sur": sur, "aut": aut}


def _batch_rank_mod_p(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks over F_p of a stack of integer matrices, by batched elimination."""
    a = mats % p
    n, r, c = a.shape
    rank = np.zeros(n, dtype=np.int64)
    inv = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)
    rows = np.arange(r)
    for col in range(c):
        cand = (a[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
        sel = np.nonzero(cand.any(axis=1))[0]
        if len(sel) == 0:
            continue
        piv = np.argmax(cand[sel], axis=1)
        rr = rank[sel]
        prow = a[sel, piv].copy()
        a[sel, piv] = a[sel, rr]
        a[sel, rr] = prow * inv[prow[:, col]][:, None] % p
        factors = a[sel, :, col].copy()
        factors[np.arange(len(sel)), rr] = 0
        a[sel] = (a[sel] - factors[:, :, None] * a[sel, rr][:, None, :]) % p
        rank[sel] += 1
    return rank
