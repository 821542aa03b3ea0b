import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clmlab.errors import InvariantViolated
from clmlab.finmod import (
    FiniteModule,
    aut_count,
    exhaustive_counts,
    hom_count,
    invariant_factors,
    is_isomorphic,
    p_primary_exponents,
    sur_count,
)
from clmlab.partitions import aut_formula, hom_formula, normalize, sur_formula


def module(lam, q):
    return FiniteModule(tuple(q**x for x in lam), ())


small_partitions = st.lists(st.integers(1, 3), min_size=0, max_size=3).map(normalize)


def test_invariant_factors():
    assert invariant_factors([2, 3]) == (6,)
    assert invariant_factors([4, 6, 9]) == (6, 36)
    assert invariant_factors([]) == ()
    assert p_primary_exponents([12, 18], 3) == (2, 1)


def test_rejects_ill_defined_operator():
    with pytest.raises(InvariantViolated):
        FiniteModule((3, 9), (np.array([[1, 0], [1, 1]]),))


@given(small_partitions, small_partitions, st.sampled_from([2, 3]))
def test_counts_match_formulas(lam, mu, q):
    if q ** (sum(lam) + sum(mu)) > 3**6:
        return
    g, h = module(lam, q), module(mu, q)
    assert hom_count(g, h) == hom_formula(lam, mu, q)
    assert sur_count(g, h) == sur_formula(lam, mu, q)


@given(small_partitions, st.sampled_from([2, 3]))
def test_aut_count(lam, q):
    if q ** sum(lam) > 3**4:
        return
    assert aut_count(module(lam, q)) == aut_formula(lam, q)


@pytest.mark.parametrize("lam,mu,q", [((2, 1), (1, 1), 3), ((1, 1), (2,), 2), ((2,), (1,), 3), ((1, 1), (1, 1), 2)])
def test_exhaustive_route(lam, mu, q):
    ex = exhaustive_counts(module(lam, q), module(mu, q))
    assert ex["hom"] == hom_formula(lam, mu, q)
    assert ex["sur"] == sur_formula(lam, mu, q)


def test_aut_of_type_21_at_3():
    assert aut_count(module((2, 1), 3)) == 108
    assert exhaustive_counts(module((2, 1), 3), module((2, 1), 3))["aut"] == 108


def test_exhaustive_handles_mixed_primes():
    g = FiniteModule((6,), ())
    ex = exhaustive_counts(g, g)
    assert ex == {"hom": 6, "sur": 2, "aut": 2}


@given(small_partitions, st.sampled_from([2, 3]))
def test_hom_is_sum_of_sur_over_subgroups(mu, q):
    """|Hom(G, H)| = sum over subgroups K of H of |Sur(G, K)|."""
    if q ** sum(mu) > 3**4:
        return
    lam = (2, 1)
    h = module(mu, q)
    total = 0
    for mask in h.submodules():
        sub, _ = h.realize(mask)
        kt = tuple(sorted((sum(p_primary_exponents([d], q)) for d in sub.invariants), reverse=True))
        total += sur_formula(lam, kt, q)
    assert total == hom_formula(lam, mu, q)


@given(small_partitions, small_partitions)
def test_isomorphism_test(lam, mu):
    assert is_isomorphic(module(lam, 3), module(mu, 3)) == (lam == mu)


def test_submodule_count_bound():
    # the number of subgroups of (Z/3)^2 is 1 + 4 + 1
    assert len(module((1, 1), 3).submodules()) == 6
    # Z/4 + Z/2: trivial, three of order 2, three of order 4, whole
    assert len(module((2, 1), 2).submodules()) == 8
