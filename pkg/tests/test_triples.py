import pytest
from hypothesis import given
from hypothesis import strategies as st

from clmlab.errors import InvariantViolated
from clmlab.gmodules import make_type, module_from_type
from clmlab.groups import builtin_group
from clmlab.partitions import normalize
from clmlab.rational import rational_components
from clmlab.triples import (
    aut_count,
    build_class_triple,
    order_two_classes,
    splitting_count,
    valid_archimedean_lifts,
    verify_uniqueness,
)


def _module(name, entries):
    g = builtin_group(name)
    comps = rational_components(g)
    return g, module_from_type(make_type(comps, entries), comps)


def test_quadratic_examples():
    g, h = _module("C2", [(2, 3, (1,))])
    imag = build_class_triple(h, g.generators[0])
    real = build_class_triple(h, g.identity)
    assert aut_count(imag) == aut_count(imag, "bruteforce") == 2
    assert aut_count(real) == aut_count(real, "bruteforce") == 6
    assert imag.group.order == 6


@pytest.mark.parametrize(
    "name,entries",
    [
        ("C2", [(2, 5, (1,))]),
        ("C2", [(2, 3, (2,))]),
        ("C2", [(2, 3, (1, 1))]),
        ("S3", [(3, 5, (1,))]),
        ("S3", [(2, 5, (1,))]),
        ("D4", [(2, 3, (1,)), (5, 3, (1,))]),
        ("D4", [(5, 3, (1,))]),
    ],
)
def test_formula_against_bruteforce(name, entries):
    g, h = _module(name, entries)
    for s in order_two_classes(g):
        t = build_class_triple(h, s)
        assert all(t.check().values())
        assert aut_count(t) == aut_count(t, "bruteforce")
        assert verify_uniqueness(h, s)


@given(lam=st.lists(st.integers(1, 2), min_size=1, max_size=2).map(normalize))
def test_splittings_and_lifts(lam):
    g, h = _module("C2", [(2, 3, lam)])
    t = build_class_triple(h, g.generators[0])
    # the sections of pi are the conjugates of the canonical one by the kernel
    assert splitting_count(t) == h.size
    assert len(valid_archimedean_lifts(t)) == h.size


def test_order_two_classes(d4, s3):
    assert len(order_two_classes(d4)) == 4
    assert len(order_two_classes(s3)) == 2
    assert order_two_classes(d4)[0] == d4.identity


def test_invalid_inputs():
    g, h = _module("S3", [(3, 5, (1,))])
    with pytest.raises(InvariantViolated):
        build_class_triple(h, g.labels.index("(1 2 3)"))
    g2, trivial_part = _module("C2", [(1, 3, (1,))])
    with pytest.raises(InvariantViolated):
        build_class_triple(trivial_part, g2.identity)
    # |h| = 4 shares the prime 2 with |S3|
    g3, not_coprime = _module("S3", [(3, 2, (1,))])
    with pytest.raises(InvariantViolated):
        build_class_triple(not_coprime, g3.identity)
