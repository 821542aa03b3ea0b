import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clmlab.errors import NotAGroup, NotASubgroup, ParseError
from clmlab.groups import (
    BUILTIN_GROUPS,
    builtin_group,
    builtin_spec_text,
    cayley_group,
    check_group_table,
    coset_and_quotient,
    conjugacy_classes,
    cycles_to_perm,
    format_group_spec,
    group_from_spec,
    is_normal,
    left_cosets,
    parse_group_spec,
    perm_to_cycles,
    subgroup_generated,
    trivial_subgroup,
    whole_group,
)

ORDERS = {"C2": 2, "C3": 3, "V4": 4, "S3": 6, "D4": 8, "A4": 12, "S4": 24, "A5": 60, "S5": 120}
CLASS_COUNTS = {"C2": 2, "C3": 3, "V4": 4, "S3": 3, "D4": 5, "A4": 4, "S4": 5, "A5": 5, "S5": 7}


@pytest.mark.parametrize("name", BUILTIN_GROUPS)
def test_builtin_orders_and_axioms(name):
    g = builtin_group(name)
    assert g.order == ORDERS[name]
    g.check_axioms()
    assert len(conjugacy_classes(g)) == CLASS_COUNTS[name]
    assert sum(c.size for c in conjugacy_classes(g)) == g.order


@pytest.mark.parametrize("name", BUILTIN_GROUPS)
def test_spec_round_trip(name):
    spec = parse_group_spec(builtin_spec_text(name))
    assert parse_group_spec(format_group_spec(spec)) == spec


def test_cycle_conversion_round_trip():
    p = cycles_to_perm([[1, 3, 2], [4, 5]], 6)
    assert cycles_to_perm(perm_to_cycles(p), 6) == p


@pytest.mark.parametrize(
    "doc",
    [
        "not json",
        "[]",
        '{"degree": 3}',
        '{"name": "X", "degree": 0}',
        '{"name": "X", "degree": 3, "generators": [[1, 2]]}',
        '{"name": "X", "degree": 3, "colour": 1}',
    ],
)
def test_malformed_specs(doc):
    with pytest.raises(ParseError):
        group_from_spec(doc)


def test_cayley_table_input_matches_permutations(s3):
    doc = {"name": "S3t", "table": s3.mul.tolist(), "subgroups": {"A3": [0, 3, 4]}}
    g = group_from_spec(json.dumps(doc))
    assert g.order == 6
    assert g.subgroup("A3").order == 3
    assert len(conjugacy_classes(g)) == 3


def test_bad_cayley_table_rejected():
    table = np.array([[0, 1], [0, 1]])
    with pytest.raises(NotAGroup):
        check_group_table(table)
    with pytest.raises(NotAGroup):
        cayley_group("bad", table)


def test_named_subgroups(d4):
    assert d4.subgroup("tau").order == 2
    assert d4.subgroup("center").order == 2
    assert d4.subgroup("tau_center").order == 4
    with pytest.raises(NotASubgroup):
        d4.subgroup("nope")


def test_cosets_and_quotient(s3, d4):
    a3 = s3.subgroup("A3")
    cq = coset_and_quotient(s3, a3)
    assert cq.is_normal and cq.quotient.order == 2
    assert not is_normal(s3, s3.subgroup("S2"))
    assert not coset_and_quotient(s3, s3.subgroup("S2")).is_normal
    q = coset_and_quotient(d4, d4.subgroup("center")).quotient
    assert q.order == 4
    # D4 / Z is the Klein four-group: every element squares to 1
    assert all(q.m(x, x) == q.identity for x in range(4))


@given(st.sampled_from(["S3", "D4", "A4", "S4"]), st.data())
def test_cosets_partition_the_group(name, data):
    g = builtin_group(name)
    gens = data.draw(st.lists(st.integers(0, g.order - 1), max_size=2))
    h = subgroup_generated(g, gens)
    cosets = left_cosets(g, h)
    assert len(cosets) * h.order == g.order
    assert sorted(x for c in cosets for x in c) == list(range(g.order))
    # Lagrange and closure
    assert g.order % h.order == 0
    els = set(h.elements)
    assert all(g.m(a, b) in els for a in els for b in els)


def test_trivial_and_whole(a5):
    assert trivial_subgroup(a5).order == 1
    assert whole_group(a5).order == 60
