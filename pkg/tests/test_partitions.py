from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clmlab.errors import ParseError
from clmlab.partitions import (
    aut_formula,
    format_partition,
    hom_formula,
    module_order,
    normalize,
    parse_partition,
    partitions_of,
    partitions_up_to,
    q_pochhammer_inverse,
    size,
    sur_formula,
    transpose,
)

partitions = st.lists(st.integers(1, 5), max_size=5).map(normalize)
primes = st.sampled_from([2, 3, 5])


@given(partitions)
def test_transpose_is_an_involution(lam):
    assert transpose(transpose(lam)) == lam
    assert size(transpose(lam)) == size(lam)


@given(partitions)
def test_format_parse_round_trip(lam):
    assert parse_partition(format_partition(lam)) == lam


@pytest.mark.parametrize("text", ["(a)", "(1,-2)", "((1)", "(1]"])
def test_bad_partition_text(text):
    with pytest.raises(ParseError):
        parse_partition(text)


def test_partition_counts():
    assert [len(list(partitions_of(n))) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
    assert len(list(partitions_up_to(4))) == 1 + 1 + 2 + 3 + 5


@given(partitions, primes)
def test_aut_equals_self_surjections(lam, q):
    assert aut_formula(lam, q) == sur_formula(lam, lam, q)


@given(partitions, partitions, primes)
def test_sur_bounded_by_hom(lam, mu, q):
    s = sur_formula(lam, mu, q)
    assert 0 <= s <= hom_formula(lam, mu, q)
    # a surjection needs |G| >= |H|
    if s:
        assert size(lam) >= size(mu)


@given(partitions, partitions, primes)
def test_hom_symmetry(lam, mu, q):
    # Hom(A, B) and Hom(B, A) have the same order for finite abelian groups
    assert hom_formula(lam, mu, q) == hom_formula(mu, lam, q)


@pytest.mark.parametrize("q", [2, 3, 5])
@pytest.mark.parametrize("n", range(0, 9))
def test_mass_formula(q, n):
    """sum over abelian q-groups of order q^n of 1/|Aut| = q^-n / prod_{k<=n} (1 - q^-k)."""
    total = sum(Fraction(1, aut_formula(lam, q)) for lam in partitions_of(n))
    assert total == Fraction(1, q**n) / q_pochhammer_inverse(n, q)


def test_known_values():
    assert aut_formula((1,), 3) == 2
    assert aut_formula((1, 1), 3) == 48
    assert aut_formula((2, 1), 3) == 108
    assert sur_formula((1, 1), (1,), 2) == 3
    assert hom_formula((2,), (1, 1), 3) == 9
    assert module_order((2, 1), 3, h=2) == 3**6
    assert q_pochhammer_inverse(2, 2) == Fraction(3, 8)
