"""Exact weights, truncated probability tables, moments and samplers.

The weight of a finite module ``G`` is ``1/(|G|^u |Aut(G)|)`` where
``|G|^u = prod_i |e_i G|^{u_i}``.  A truncated table lists every type whose
p-parts have parts at most ``n_p`` and whose order is at most the order bound,
with probabilities normalized by the partial sum of weights.

Random numbers come from numpy's PCG64 bit generator seeded with the given
integer, so sample streams are reproducible across platforms.  The exact
sampler draws a uniform integer below the common denominator of the table by
rejection on whole 32-bit words and inverts the cumulative numerators; no
floating point is involved.
"""

from __future__ import annotations

import csv
import io

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import BadPrime, InvariantViolated, NonIntegralPower, SingularSystem, UnsupportedComponent
from .gmodules import ModuleType, TypeEntry, enumerate_types, module_from_type
from .lattice import common_denominator, solve_rational
from .partitions import Partition, aut_formula, sur_formula
from .rational import AlgebraComponent, RankSpec, is_good, rational_components

PLACE_CHECK_ORDER = 3**6


# ----------------------------------------------------------------------------
# truncation


@dataclass(frozen=True)
class TruncationSpec:
    """Parts at prime p are at most ``exponents[p]``; total order at most ``order_bound``.

    The distinguished module N has N_p of type (n_p), so ``G (x) N`` is the
    type with every part at p cut down to n_p.
    """

    exponents: tuple[tuple[int, int], ...]
    order_bound: int | None = None

    def __post_init__(self):
        ex = tuple(sorted((int(p), int(n)) for p, n in dict(self.exponents).items()))
        if any(n < 0 for _, n in ex):
            raise InvariantViolated("truncation exponents must be nonnegative")
        object.__setattr__(self, "exponents", ex)

    @classmethod
    def make(cls, exponents: dict[int, int], order_bound: int | None = None) -> "TruncationSpec":
        return cls(tuple(exponents.items()), order_bound)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.exponents)

    def n(self, p: int) -> int:
        return dict(self.exponents).get(p, 0)

    def reduce(self, t: ModuleType) -> ModuleType:
        """Type of G (x) N."""
        ents = []
        for e in t.entries:
            n = self.n(e.prime)
            lam = tuple(min(x, n) for x in e.partition if min(x, n) > 0)
            ents.append(TypeEntry(e.component, e.prime, lam, e.h))
        return ModuleType(tuple(ents))

    def contains(self, t: ModuleType) -> bool:
        if self.order_bound is not None and t.order > self.order_bound:
            return False
        return all(e.prime in dict(self.exponents) and max(e.partition) <= self.n(e.prime) for e in t.entries)

    def format(self) -> str:
        ex = ",".join(f"{p}^{n}" for p, n in self.exponents)
        return f"n=[{ex}] bound={self.order_bound}"


def level_truncation(primes: Iterable[int], level: int, max_parts: int = 4, h: int = 1) -> TruncationSpec:
    """Level-n truncation: n_p = n, order bound prod_p p^(h n max_parts)."""
    primes = sorted(set(primes))
    bound = prod(p ** (h * level * max_parts) for p in primes) if primes else 1
    return TruncationSpec.make({p: level for p in primes}, bound)


def default_components(g_or_comps, primes: Iterable[int]) -> tuple[AlgebraComponent, ...]:
    """Nontrivial split center-Q components that are good at every prime given."""
    comps = rational_components(g_or_comps) if not isinstance(g_or_comps, (list, tuple)) else g_or_comps
    primes = list(primes)
    out = []
    for c in comps:
        if c.is_trivial or c.center_degree != 1 or not c.split:
            continue
        if all(is_good(c, p) for p in primes):
            out.append(c)
    return tuple(out)


# ----------------------------------------------------------------------------
# weights


def _u_power(t: ModuleType, r: RankSpec) -> Fraction:
    """|G|^u from component exponents; the exponent of p must be an integer."""
    val = Fraction(1)
    for e in t.entries:
        u = Fraction(r.u[e.component])
        ex = u * e.h * sum(e.partition)
        if ex.denominator != 1:
            raise NonIntegralPower(f"|e{e.component}G|^{u} = {e.prime}^({ex}) is not an integral power")
        val *= Fraction(e.prime) ** int(ex)
    return val


def u_power_by_places(t: ModuleType, r: RankSpec, comps: Sequence[AlgebraComponent]) -> Fraction:
    """prod_v |G^{Gamma_v}| on a realized module (valid when e_1 G = 0)."""
    if r.places is None:
        raise InvariantViolated("rank carries no places")
    m = module_from_type(t, comps)
    return Fraction(prod(int(m.fixed_mask(s.elements).sum()) for s in r.places))


def aut_of_type(t: ModuleType) -> int:
    return prod(aut_formula(e.partition, e.prime) for e in t.entries)


def weight(
    t: ModuleType,
    r: RankSpec,
    comps: Sequence[AlgebraComponent] | None = None,
    check_places: bool = True,
) -> Fraction:
    comps = rational_components(r.group) if comps is None else comps
    by_index = {c.index: c for c in comps}
    for e in t.entries:
        c = by_index.get(e.component)
        if c is None:
            raise UnsupportedComponent(f"no component e{e.component}")
        if not is_good(c, e.prime):
            raise BadPrime(f"p={e.prime} is not good for e{e.component}")
    upow = _u_power(t, r)
    if (
        check_places
        and r.places is not None
        and t.entries
        and all(e.component != 1 for e in t.entries)
        and t.order <= PLACE_CHECK_ORDER
    ):
        other = u_power_by_places(t, r, comps)
        if other != upow:
            raise InvariantViolated(f"|G|^u routes disagree for {t}: components {upow}, places {other}")
    return 1 / (upow * aut_of_type(t))


# ----------------------------------------------------------------------------
# tables


@dataclass(frozen=True)
class TableRow:
    mtype: ModuleType
    weight: Fraction
    probability: Fraction


@dataclass(frozen=True, eq=False)
class DistributionTable:
    rank: RankSpec
    trunc: TruncationSpec
    components: tuple[AlgebraComponent, ...]
    rows: tuple[TableRow, ...]
    z_trunc: Fraction

    def __len__(self) -> int:
        return len(self.rows)

    def probability(self, t: ModuleType) -> Fraction:
        for row in self.rows:
            if row.mtype == t:
                return row.probability
        return Fraction(0)

    def types(self) -> list[ModuleType]:
        return [row.mtype for row in self.rows]

    def to_csv(self) -> str:
        lines = ["type,weight_num,weight_den,probability"]
        for row in self.rows:
            lines.append(
                csv_row(row.mtype.format(), row.weight.numerator, row.weight.denominator, fmt_float(row.probability))
            )
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        head = (
            f"group {self.rank.group.name}  rank {self.rank.format()}  truncation {self.trunc.format()}\n"
            f"components {' '.join('e%d' % c.index for c in self.components)}  Z_trunc = {self.z_trunc}"
        )
        width = max([len(r.mtype.format()) for r in self.rows] + [4])
        body = [f"{'type'.ljust(width)}  {'weight':>24}  probability"]
        for r in self.rows:
            body.append(f"{r.mtype.format().ljust(width)}  {str(r.weight):>24}  {fmt_float(r.probability)}")
        return head + "\n" + "\n".join(body) + "\n"


def fmt_float(x) -> str:
    return f"{float(x):.12g}"


def csv_row(*fields) -> str:
    """One CSV line (no terminator); fields holding commas are quoted."""
    buf = io.StringIO()
    csv.writer(buf, lineterminator="").writerow(fields)
    return buf.getvalue()


def truncated_table(
    comps: Sequence[AlgebraComponent],
    r: RankSpec,
    trunc: TruncationSpec,
    check_places: bool = True,
) -> DistributionTable:
    comps = tuple(comps)
    if not trunc.exponents:
        types = [ModuleType()]
    else:
        types = enumerate_types(comps, dict(trunc.exponents), trunc.order_bound)
    weights = [weight(t, r, comps, check_places=check_places) for t in types]
    if any(w <= 0 for w in weights):
        raise InvariantViolated("nonpositive weight")
    z = sum(weights, Fraction(0))
    rows = tuple(TableRow(t, w, w / z) for t, w in zip(types, weights))
    if sum((row.probability for row in rows), Fraction(0)) != 1:
        raise InvariantViolated("probabilities do not sum to 1")
    return DistributionTable(r, trunc, comps, rows, z)


def local_normalizer(q: int, h: int, u: Fraction, terms: int = 60) -> float:
    """prod_{j>=1} (1 - q^-(h u + j))^-1, the full sum of weights at one (i, p)."""
    val = 1.0
    for j in range(1, terms + 1):
        val /= 1 - float(q) ** (-(float(h * u) + j))
    return val


# ----------------------------------------------------------------------------
# moments


def sur_of_types(src: ModuleType, dst: ModuleType) -> int:
    keys = sorted(src.keys() | dst.keys())
    return prod(sur_formula(src.partition(i, p), dst.partition(i, p), p) for i, p in keys)


def closed_moment(h: ModuleType, r: RankSpec) -> Fraction:
    """E|Sur(X, H)| = 1/|H|^u."""
    return 1 / _u_power(h, r)


def closed_moment_by_places(h: ModuleType, r: RankSpec, comps: Sequence[AlgebraComponent]) -> Fraction:
    return 1 / u_power_by_places(h, r, comps)


@dataclass(frozen=True)
class MomentReport:
    h: ModuleType
    truncated: Fraction
    closed_form: Fraction

    @property
    def gap(self) -> Fraction:
        return abs(self.truncated - self.closed_form)


def moment(table: DistributionTable, h: ModuleType) -> MomentReport:
    comp_ids = {c.index for c in table.components}
    if any(e.component not in comp_ids for e in h.entries):
        # H has a part outside the table's components: no surjection can exist
        trunc = Fraction(0)
    else:
        trunc = sum((row.probability * sur_of_types(row.mtype, h) for row in table.rows), Fraction(0))
    return MomentReport(h, trunc, closed_moment(h, table.rank))


def expectation(table: DistributionTable, f: Callable[[ModuleType], Fraction | int | float]):
    """Expectation of a user-supplied function of the type on the truncated table."""
    return sum((row.probability * f(row.mtype) for row in table.rows), Fraction(0))


def moments_csv(reports: Sequence[MomentReport]) -> str:
    lines = ["H_type,truncated,closed_form,gap"]
    for m in reports:
        lines.append(csv_row(m.h.format(), fmt_float(m.truncated), fmt_float(m.closed_form), fmt_float(m.gap)))
    return "\n".join(lines) + "\n"


def tail_band(comps: Sequence[AlgebraComponent], r: RankSpec, coarse: TruncationSpec, fine: TruncationSpec) -> Fraction:
    """Relative growth (Z_fine - Z_coarse) / Z_coarse of the partial normalizer.

    A quantity computed on the level-n table is compared with its limit using
    the band between levels n-1 and n: the mass that entered the table at the
    last level.  Empirically the level-n moment gap is about twice the mass
    that the next level would add, and well below the mass the last level
    added, so this band is conservative without being loose.
    """
    z0 = truncated_table(comps, r, coarse, check_places=False).z_trunc
    z1 = truncated_table(comps, r, fine, check_places=False).z_trunc
    if z1 < z0:
        raise InvariantViolated("partial normalizer decreased as the truncation grew")
    return (z1 - z0) / z0


# ----------------------------------------------------------------------------
# inversion


def sur_matrix(types: Sequence[ModuleType]) -> list[list[int]]:
    """M[H][G] = |Sur(G, H)| for H, G in ``types``."""
    return [[sur_of_types(g, h) for g in types] for h in types]


def invert_moments(types: Sequence[ModuleType], moments: Sequence[Fraction]) -> list[Fraction]:
    """Solve sum_G |Sur(G, H)| x_G = m_H exactly for the probabilities x."""
    if len(types) != len(moments):
        raise SingularSystem("one moment per type is required")
    mat = sur_matrix(types)
    sol = solve_rational(mat, [Fraction(m) for m in moments])
    if sol is None:
        raise SingularSystem("the surjection matrix is singular; are the types closed under quotients?")
    return sol


def reduced_distribution(table: DistributionTable, trunc: TruncationSpec) -> dict[ModuleType, Fraction]:
    """Distribution of X (x) N computed from a (finer) table."""
    out: dict[ModuleType, Fraction] = {}
    for row in table.rows:
        t = trunc.reduce(row.mtype)
        out[t] = out.get(t, Fraction(0)) + row.probability
    return out


# ----------------------------------------------------------------------------
# samplers


def _uniform_below(rng: np.random.Generator, n: int) -> int:
    """Uniform integer in [0, n) from whole 32-bit words, by rejection."""
    if n <= 0:
        raise ValueError("empty range")
    words = (max(n - 1, 1).bit_length() + 31) // 32
    top_bits = max(n - 1, 1).bit_length() - 32 * (words - 1)
    while True:
        raw = rng.integers(0, 2**32, size=words, dtype=np.uint64)
        x = 0
        for w in raw:
            x = (x << 32) | int(w)
        x >>= 32 - top_bits
        if x < n:
            return x


def sample(table: DistributionTable, seed: int, count: int) -> list[ModuleType]:
    """Exact inverse-CDF sampling from a table, reproducible from ``seed``."""
    if not table.rows:
        raise InvariantViolated("empty table")
    den = common_denominator([row.probability for row in table.rows])
    cum = []
    acc = 0
    for row in table.rows:
        acc += int(row.probability * den)
        cum.append(acc)
    if acc != den:
        raise InvariantViolated("probabilities do not sum to 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    out = []
    for _ in range(count):
        x = _uniform_below(rng, den)
        lo, hi = 0, len(cum) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if cum[mid] > x:
                hi = mid
            else:
                lo = mid + 1
        out.append(table.rows[lo].mtype)
    return out


@dataclass(frozen=True)
class CokernelSamplerConfig:
    """Cokernels of uniformly random n x (n + u) matrices over Z/p^N.

    By Morita equivalence the partition type of a module over a split local
    component of any degree h has the same law as for h = 1, so only the
    prime is used from the component.
    """

    prime: int
    n: int
    u: int = 0
    precision: int = 6
    seed: int = 0
    component: int | None = None
    batch: int = 20000

    def __post_init__(self):
        if self.n < 1 or self.precision < 1 or self.u < 0:
            raise InvariantViolated("need n >= 1, N >= 1 and u >= 0")


def _cokernel_batch(mats: np.ndarray, p: int, big_n: int) -> np.ndarray:
    """Smith valuations (capped at N) of a batch of n x m matrices mod p^N."""
    mod = p**big_n
    a = mats % mod
    b, n, m = a.shape
    val_table = np.full(mod, big_n, dtype=np.int64)
    for x in range(1, mod):
        v, y = 0, x
        while y % p == 0:
            y //= p
            v += 1
        val_table[x] = v
    inv_table = np.zeros(mod, dtype=np.int64)
    for x in range(1, mod):
        if x % p:
            inv_table[x] = pow(x, -1, mod)
    out = np.full((b, n), big_n, dtype=np.int64)
    ar = np.arange(b)
    for t in range(n):
        sub = a[:, t:, t:]
        vals = val_table[sub].reshape(b, -1)
        flat = np.argmin(vals, axis=1)
        vmin = vals[ar, flat]
        i = t + flat // (m - t)
        j = t + flat % (m - t)
        # swap rows t <-> i and columns t <-> j
        row_t = a[ar, t, :].copy()
        a[ar, t, :] = a[ar, i, :]
        a[ar, i, :] = row_t
        col_t = a[ar, :, t].copy()
        a[ar, :, t] = a[ar, :, j]
        a[ar, :, j] = col_t
        out[:, t] = np.minimum(vmin, big_n)
        live = vmin < big_n
        pv = p ** np.minimum(vmin, big_n - 1)
        piv = a[ar, t, t]
        unit_inv = inv_table[(piv // pv) % mod]
        factors = ((a[:, t + 1 :, t] // pv[:, None]) * unit_inv[:, None]) % mod
        factors[~live] = 0
        a[:, t + 1 :, :] = (a[:, t + 1 :, :] - factors[:, :, None] * a[:, t : t + 1, :]) % mod
        a[:, t, t + 1 :] = np.where(live[:, None], 0, a[:, t, t + 1 :])
    return out


def sample_cokernel(cfg: CokernelSamplerConfig, count: int) -> list[Partition]:
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    mod = cfg.prime**cfg.precision
    out: list[Partition] = []
    left = count
    while left > 0:
        b = min(cfg.batch, left)
        mats = rng.integers(0, mod, size=(b, cfg.n, cfg.n + cfg.u), dtype=np.int64)
        vals = _cokernel_batch(mats, cfg.prime, cfg.precision)
        for row in vals:
            out.append(tuple(sorted((int(v) for v in row if v > 0), reverse=True)))
        left -= b
    return out


def trivial_frequency(cfg: CokernelSamplerConfig, count: int) -> float:
    parts = sample_cokernel(cfg, count)
    return sum(1 for lam in parts if not lam) / count


def trivial_probability_limit(p: int, u: int = 0, terms: int = 200) -> float:
    """prod_{k>=1} (1 - p^-(u+k))."""
    val = 1.0
    for k in range(1, terms + 1):
        val *= 1 - float(p) ** (-(u + k))
    return val
