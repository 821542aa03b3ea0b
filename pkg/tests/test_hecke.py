from fractions import Fraction

import pytest

from clmlab import algebra
from clmlab.errors import BadPrime, NotNormal
from clmlab.finmod import is_isomorphic
from clmlab.gmodules import enumerate_types, isomorphic, module_from_type
from clmlab.groups import builtin_group, trivial_subgroup
from clmlab.hecke import (
    augmentation_component,
    frobenius_property,
    hecke_order,
    invariants_functor,
    lift_order_bound,
    morita_lift,
    nongalois_table,
    rank_independence_check,
    rank_transfer,
)
from clmlab.rational import rank_u

PAIRS = [("S3", "S2"), ("S4", "S3"), ("D4", "tau"), ("A4", "V4"), ("A4", "C3"), ("V4", "first"), ("A5", "twisted_S3")]


@pytest.mark.parametrize("name,sub", PAIRS)
def test_augmentation_and_frobenius(name, sub):
    g = builtin_group(name)
    h = g.subgroup(sub)
    aug = augmentation_component(g, h)
    assert aug.degree == g.order // h.order - 1
    assert algebra.mul(g, aug.idempotent, aug.idempotent) == aug.idempotent
    assert frobenius_property(g, h)


@pytest.mark.parametrize(
    "name,sub,prime,rank",
    [("S3", "S2", 5, 1), ("S4", "S3", 5, 1), ("D4", "tau", 3, 2), ("A4", "V4", 5, 2), ("A5", "twisted_S3", 7, 2)],
)
def test_hecke_ranks(name, sub, prime, rank):
    g = builtin_group(name)
    o = hecke_order(g, g.subgroup(sub), [prime])
    assert o.rank == rank
    assert (o.rank == 1) == o.aug.absolutely_irreducible
    assert all(c.maximal in (True, None) for c in o.components)


def test_d4_presentation(d4):
    h = d4.subgroup("tau")
    o = hecke_order(d4, h, [3])
    aug = o.aug
    sigma = d4.labels.index("(1 2 3 4)")
    sq = d4.m(sigma, sigma)
    t = algebra.mul(d4, algebra.mul(d4, algebra.basis_element(d4, sq), aug.idempotent), aug.e1_prime)
    one = algebra.mul(d4, aug.idempotent, aug.e1_prime)
    assert o.contains(t, 3)
    assert algebra.mul(d4, t, t) == one
    assert o.is_local_basis([one, t], 3)


def test_bad_prime_rejected(d4):
    with pytest.raises(BadPrime):
        hecke_order(d4, d4.subgroup("tau"), [2])


def test_functor_and_lift_round_trip(s3):
    h = s3.subgroup("S2")
    o = hecke_order(s3, h, [2])
    comps = list(o.aug.constituents)
    for t in enumerate_types(comps, {2: 2}, 2**6):
        gm = module_from_type(t, comps)
        om = invariants_functor(gm, o)
        lift = morita_lift(om, o)
        assert lift.mtype == t and isomorphic(lift.module, gm)
        assert is_isomorphic(invariants_functor(lift.module, o), om)
        assert lift.aut_gamma == lift.aut_o


def test_lift_bound(s3):
    o = hecke_order(s3, s3.subgroup("S2"), [2])
    # h = 2 and <a, phi> = 1: |G| <= |H|^2
    assert lift_order_bound(o, 4) == 16


def test_s3_nongalois_rows(s3):
    h = s3.subgroup("S2")
    rows = nongalois_table(s3, h, rank_u(s3, [None]), {2: 1}, 2**4)
    by_size = {row.module.size: row for row in rows}
    assert all(row.column_a == row.column_b for row in rows)
    assert by_size[1].column_a == 1
    assert by_size[2].column_a == Fraction(1, 4)


def test_rank_transfer():
    for n, name, sub in ((3, "S3", "S2"), (4, "S4", "S3"), (5, "S5", "S4")):
        g = builtin_group(name)
        assert list(rank_transfer(rank_u(g, [None]), g.subgroup(sub)).values()) == [n - 1]


def test_rank_independence(d4):
    r = rank_u(d4, [None])
    assert rank_independence_check(d4, d4.subgroup("center"), d4.subgroup("tau_center"), r).ok
    assert rank_independence_check(d4, trivial_subgroup(d4), d4.subgroup("tau"), r).ok
    s3 = builtin_group("S3")
    with pytest.raises(NotNormal):
        rank_independence_check(s3, s3.subgroup("S2"), s3.subgroup("S2"), rank_u(s3, [None]))
