import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clmlab.errors import BadPrime, ParseError, TooLarge, UnsupportedComponent
from clmlab.gmodules import (
    ModuleType,
    bruteforce_module_structures,
    count_maps,
    enumerate_types,
    fixed_and_norm,
    isomorphic,
    make_type,
    module_from_type,
    parse_module,
    parse_type,
    type_of_module,
    zero_module,
)
from clmlab.groups import all_subgroups_two_generated, builtin_group
from clmlab.partitions import normalize
from clmlab.rational import rational_components

# (group, component index, good prime) with split center-Q components
CASES = [("C2", 2, 3), ("S3", 2, 5), ("S3", 3, 2), ("S3", 3, 5), ("D4", 2, 3), ("D4", 5, 3)]
small = st.lists(st.integers(1, 2), max_size=2).map(normalize)


def _type(name, i, p, lam):
    g = builtin_group(name)
    comps = rational_components(g)
    return g, comps, make_type(comps, [(i, p, lam)])


@pytest.mark.parametrize("name,i,p", CASES)
@given(lam=small)
def test_type_round_trip(name, i, p, lam):
    g, comps, t = _type(name, i, p, lam)
    if t.order > 5**4:
        return
    m = module_from_type(t, comps)
    assert m.size == t.order
    assert type_of_module(m, comps) == t
    assert parse_module(m.serialize(), g).invariants == m.invariants


@pytest.mark.parametrize("name,i,p", [("C2", 2, 3), ("S3", 3, 2), ("D4", 5, 3)])
@given(lam=small, mu=small)
def test_formula_matches_bruteforce(name, i, p, lam, mu):
    g, comps, s = _type(name, i, p, lam)
    _, _, t = _type(name, i, p, mu)
    if max(s.order, t.order) > 3**4:
        return
    for kind in ("hom", "sur"):
        assert count_maps(kind, s, t, comps=comps) == count_maps(kind, s, t, method="bruteforce", comps=comps)
    assert count_maps("aut", s, comps=comps) == count_maps("aut", s, method="bruteforce", comps=comps)


@pytest.mark.parametrize("name,i,p", CASES)
@given(lam=small)
def test_tate_h0_vanishes(name, i, p, lam):
    g, comps, t = _type(name, i, p, lam)
    m = module_from_type(t, comps)
    for sub in all_subgroups_two_generated(g):
        assert fixed_and_norm(m, sub).tate_h0_trivial


def test_bad_prime_and_unsupported(s3, a5):
    comps = rational_components(s3)
    with pytest.raises(BadPrime):
        make_type(comps, [(3, 3, (1,))])
    a5c = rational_components(a5)
    deg2 = next(c for c in a5c if c.center_degree == 2)
    with pytest.raises(UnsupportedComponent):
        make_type(a5c, [(deg2.index, 7, (1,))])


def test_parse_type(d4):
    comps = rational_components(d4)
    t = parse_type("e2@3:(2,1) + e5@3:(1)", comps)
    assert t.format() == "e2@3:(2,1) + e5@3:(1)"
    assert t.order == 3**3 * 3**2
    assert parse_type("0", comps) == ModuleType()
    with pytest.raises(ParseError):
        parse_type("e2/3", comps)


def test_enumerate_types_counts(c2):
    comps = [c for c in rational_components(c2) if c.index == 2]
    types = enumerate_types(comps, {3: 1}, 3**3)
    assert [t.format() for t in types] == ["0", "e2@3:(1)", "e2@3:(1,1)", "e2@3:(1,1,1)"]
    assert all(t.order <= 27 for t in enumerate_types(comps, {3: 2}, 27))


def test_enumeration_needs_a_bound(c2):
    comps = [c for c in rational_components(c2) if c.index == 2]
    with pytest.raises(TooLarge):
        enumerate_types(comps, {3: 1})


def test_bruteforce_structures_c2_on_z3(c2):
    # C2 acts on Z/3 trivially or by -1
    mods = bruteforce_module_structures(c2, [3])
    assert len(mods) == 2
    comps = rational_components(c2)
    assert sorted(type_of_module(m, comps).format() for m in mods) == ["e1@3:(1)", "e2@3:(1)"]


def test_bruteforce_cap(c2):
    with pytest.raises(TooLarge):
        bruteforce_module_structures(c2, [3, 3, 3, 3, 3])


def test_isomorphic_and_zero(d4):
    comps = rational_components(d4)
    a = module_from_type(parse_type("e2@3:(1)", comps), comps)
    b = module_from_type(parse_type("e3@3:(1)", comps), comps)
    assert isomorphic(a, a) and not isomorphic(a, b)
    assert zero_module(d4).size == 1
    assert np.array_equal(fixed_and_norm(a, d4.subgroup("tau")).fixed, fixed_and_norm(a, d4.subgroup("tau")).norm)
