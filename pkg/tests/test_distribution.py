from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clmlab.distribution import (
    CokernelSamplerConfig,
    TruncationSpec,
    closed_moment,
    closed_moment_by_places,
    default_components,
    invert_moments,
    level_truncation,
    moment,
    reduced_distribution,
    sample,
    sample_cokernel,
    tail_band,
    trivial_frequency,
    trivial_probability_limit,
    truncated_table,
    weight,
)
from clmlab.errors import InvariantViolated, NonIntegralPower, SingularSystem
from clmlab.gmodules import ModuleType, make_type
from clmlab.groups import builtin_group, whole_group
from clmlab.partitions import normalize
from clmlab.rational import rank_from_vector, rank_u, rational_components

small = st.lists(st.integers(1, 2), max_size=3).map(normalize)


@pytest.fixture(scope="module")
def c2_setup():
    g = builtin_group("C2")
    return g, default_components(g, [3]), rank_u(g, [whole_group(g)]), rank_u(g, [None])


@pytest.fixture(scope="module")
def d4_setup():
    g = builtin_group("D4")
    return g, default_components(g, [3]), rank_u(g, [None])


def test_default_components(c2_setup, d4_setup):
    assert [c.index for c in c2_setup[1]] == [2]
    assert [c.index for c in d4_setup[1]] == [2, 3, 4, 5]


@given(lam=small, mu=small)
def test_weight_factorizes_over_components(d4_setup, lam, mu):
    g, comps, r = d4_setup
    a = make_type(comps, [(2, 3, lam)])
    b = make_type(comps, [(5, 3, mu)])
    both = ModuleType(a.entries + b.entries)
    assert weight(both, r, comps) == weight(a, r, comps) * weight(b, r, comps)


@given(lam=small, i=st.sampled_from([2, 3, 4, 5]))
def test_place_route_agrees_with_rank_route(d4_setup, lam, i):
    g, comps, r = d4_setup
    t = make_type(comps, [(i, 3, lam)])
    assert closed_moment(t, r) == closed_moment_by_places(t, r, comps)


def test_zero_module_moment_is_one(c2_setup):
    g, comps, imag, _ = c2_setup
    table = truncated_table(comps, imag, level_truncation([3], 1))
    rep = moment(table, ModuleType())
    assert rep.truncated == rep.closed_form == 1


def test_table_is_a_probability_distribution(c2_setup):
    _, comps, imag, real = c2_setup
    for r in (imag, real):
        table = truncated_table(comps, r, level_truncation([3], 2))
        assert sum(row.probability for row in table.rows) == 1
        assert all(row.probability > 0 for row in table.rows)


def test_real_quadratic_moment_converges(c2_setup):
    _, comps, _, real = c2_setup
    h = make_type(comps, [(2, 3, (1,))])
    gaps = []
    for n in (1, 2, 3):
        table = truncated_table(comps, real, level_truncation([3], n))
        rep = moment(table, h)
        assert rep.closed_form == Fraction(1, 3)
        band = tail_band(comps, real, level_truncation([3], n - 1), level_truncation([3], n))
        assert rep.gap <= band
        gaps.append(rep.gap)
    assert gaps[0] > gaps[1] > gaps[2]


def test_tail_band_shrinks(c2_setup):
    _, comps, _, real = c2_setup
    bands = [tail_band(comps, real, level_truncation([3], n - 1), level_truncation([3], n)) for n in (1, 2, 3, 4)]
    assert all(b > 0 for b in bands)
    assert all(x > y for x, y in zip(bands, bands[1:]))


def test_d4_moment_instances(d4_setup):
    _, comps, r = d4_setup
    assert closed_moment(make_type(comps, [(2, 3, (1,))]), r) == Fraction(1, 3)
    assert closed_moment(make_type(comps, [(5, 3, (1,))]), r) == Fraction(1, 9)


def test_inversion_round_trip(c2_setup):
    _, comps, imag, _ = c2_setup
    table = truncated_table(comps, imag, level_truncation([3], 2))
    types = table.types()
    x = invert_moments(types, [moment(table, t).truncated for t in types])
    assert x == [row.probability for row in table.rows]


def test_inversion_of_trivial_system():
    assert invert_moments([ModuleType()], [Fraction(1)]) == [1]
    with pytest.raises(SingularSystem):
        invert_moments([ModuleType()], [])


def test_reduction_preserves_mass(c2_setup):
    _, comps, imag, _ = c2_setup
    table = truncated_table(comps, imag, level_truncation([3], 3))
    red = reduced_distribution(table, level_truncation([3], 1))
    assert sum(red.values()) == 1
    assert all(max(e.partition) <= 1 for t in red for e in t.entries)


def test_non_integral_power_is_rejected(c2_setup):
    g, comps, _, _ = c2_setup
    r = rank_from_vector(g, [Fraction(1, 2)])
    with pytest.raises(NonIntegralPower):
        weight(make_type(comps, [(2, 3, (1,))]), r, comps)


def test_truncation_spec_validation():
    with pytest.raises(InvariantViolated):
        TruncationSpec.make({3: -1})
    t = TruncationSpec.make({3: 2}, 81)
    assert t.primes == (3,) and t.n(3) == 2 and t.n(5) == 0


def test_exact_sampler_is_deterministic(c2_setup):
    _, comps, imag, _ = c2_setup
    table = truncated_table(comps, imag, level_truncation([3], 2))
    a = sample(table, 7, 50)
    assert a == sample(table, 7, 50)
    assert a != sample(table, 8, 50)
    assert set(a) <= set(table.types())


def test_single_row_table_gives_constant_samples(c2_setup):
    _, comps, imag, _ = c2_setup
    table = truncated_table(comps, imag, TruncationSpec.make({3: 0}, 1))
    assert len(table) == 1
    assert sample(table, 1, 5) == [ModuleType()] * 5


def test_cokernel_sampler():
    cfg = CokernelSamplerConfig(prime=3, n=6, u=0, precision=4, seed=5)
    parts = sample_cokernel(cfg, 2000)
    assert parts == sample_cokernel(cfg, 2000)
    assert all(max(lam, default=0) <= 4 for lam in parts)
    freq = sum(1 for lam in parts if not lam) / len(parts)
    assert abs(freq - trivial_probability_limit(3)) < 0.05
    assert abs(trivial_probability_limit(3) - 0.560126) < 1e-6


def test_cokernel_sampler_with_extra_columns():
    cfg = CokernelSamplerConfig(prime=3, n=6, u=1, precision=4, seed=2)
    assert abs(trivial_frequency(cfg, 4000) - trivial_probability_limit(3, 1)) < 0.03


def test_cokernel_config_validation():
    with pytest.raises(InvariantViolated):
        CokernelSamplerConfig(prime=3, n=0)
