from fractions import Fraction

import pytest

from clmlab import algebra
from clmlab.characters import character_table
from clmlab.groups import BUILTIN_GROUPS, builtin_group, whole_group
from clmlab.rational import (
    BAD,
    GOOD,
    check_decomposition,
    good_primes,
    induced_trivial,
    prime_report,
    rank_from_vector,
    rank_u,
    rational_components,
)


@pytest.mark.parametrize("name", BUILTIN_GROUPS)
def test_character_orthogonality(name):
    t = character_table(builtin_group(name))
    t.check()
    n = len(t)
    for i in range(n):
        for j in range(n):
            assert t.inner_int(t.values[i], t.values[j]) == (1 if i == j else 0)
    assert sum(d * d for d in t.degrees) == t.group.order


@pytest.mark.parametrize("name", BUILTIN_GROUPS)
def test_components_are_orthogonal_central_idempotents(name):
    g = builtin_group(name)
    comps = rational_components(g)
    check_decomposition(comps)
    assert sum(c.dim for c in comps) == g.order
    total = [Fraction(0)] * g.order
    for c in comps:
        e = c.idempotent
        assert algebra.is_central(g, e)
        assert algebra.mul(g, e, e) == e
        total = algebra.add(total, e)
    assert total == algebra.one(g)
    for a in comps:
        for b in comps:
            if a.index < b.index:
                assert all(x == 0 for x in algebra.mul(g, a.idempotent, b.idempotent))


def test_d4_components(d4):
    comps = rational_components(d4)
    assert [c.dim for c in comps] == [1, 1, 1, 1, 4]
    assert comps[-1].h == 2 and comps[-1].split


def test_a5_has_degree_two_center():
    comps = rational_components(builtin_group("A5"))
    assert sorted(c.center_degree for c in comps) == [1, 1, 1, 2]


@pytest.mark.parametrize(
    "name,index,bad",
    [("S3", 3, {3}), ("D4", 5, {2}), ("C2", 2, {2}), ("S3", 2, {2, 3})],
)
def test_good_prime_verdicts(name, index, bad):
    c = rational_components(builtin_group(name))[index - 1]
    verdict = good_primes(c, [2, 3, 5, 7])
    assert {p for p, v in verdict.items() if v == BAD} == bad
    assert all(v == GOOD for p, v in verdict.items() if p not in bad)
    for p in (2, 3, 5, 7):
        assert prime_report(c, p).tests_agree


def test_rank_u_quadratic(c2):
    imag = rank_u(c2, [whole_group(c2)])
    real = rank_u(c2, [None])
    assert imag.vector() == [0] and real.vector() == [1]


def test_rank_u_totally_real_d4(d4):
    r = rank_u(d4, [None])
    assert r.vector() == [1, 1, 1, 1]
    # chi_K = regular character - 1 for one place with trivial decomposition group
    assert r.chi_k[0] == d4.order - 1


def test_rank_from_vector(d4):
    r = rank_from_vector(d4, [Fraction(1, 2), 0, 1, 2])
    assert r.u[2] == Fraction(1, 2) and r.u[1] == 0
    with pytest.raises(ValueError):
        rank_from_vector(d4, [1])


def test_induced_trivial_degree(s3):
    chi = induced_trivial(s3, s3.subgroup("S2"))
    assert chi[0] == 3
