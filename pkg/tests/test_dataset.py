from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clmlab.dataset import DatasetRow, compare, ingest_text, parse_row, rows_to_csv
from clmlab.distribution import TruncationSpec, default_components
from clmlab.errors import FormatError
from clmlab.groups import builtin_group
from clmlab.rational import rank_from_vector


def test_parse_row_examples():
    assert parse_row("-23,3") == DatasetRow(-23, (3,))
    assert parse_row("-4027,3.3").invariants == (3, 3)
    assert parse_row("-3,") == DatasetRow(-3, ())
    assert parse_row("-3299,3.9").p_partition(3) == (2, 1)


@pytest.mark.parametrize("line", ["-7,3.2", "x,3", "-7,1", "-7,3,3", "-7,a.b"])
def test_parse_row_rejects(line):
    with pytest.raises(FormatError):
        parse_row(line)


def test_lenient_and_strict_ingest():
    text = "label,invariants\n-3,\n-7,3.2\n\n-23,3\n"
    res = ingest_text(text)
    assert [r.label for r in res.rows] == [-3, -23]
    assert [line for line, _ in res.rejected] == [3]
    with pytest.raises(FormatError, match="line 3"):
        ingest_text(text, strict=True)


def test_header_is_required():
    with pytest.raises(FormatError, match="header"):
        ingest_text("-3,\n-4,\n")


@given(st.lists(st.tuples(st.integers(-10**6, -1), st.lists(st.integers(1, 3), max_size=3)), min_size=1, max_size=20))
def test_rows_to_csv_round_trip(raw):
    rows = []
    for label, steps in raw:
        inv, d = [], 1
        for k in steps:  # build a divisibility chain
            d *= k + 1
            inv.append(d)
        rows.append(DatasetRow(label, tuple(inv)))
    assert ingest_text(rows_to_csv(rows), strict=True).rows == tuple(rows)


@pytest.fixture
def c2_real():
    g = builtin_group("C2")
    return g, default_components(g, [3]), rank_from_vector(g, [Fraction(1)])


def test_compare_prediction_for_real_quadratic_3_parts(c2_real):
    g, comps, r = c2_real
    rows = [DatasetRow(5, ()), DatasetRow(229, (3,)), DatasetRow(1, (2,))]
    rep = compare(rows, comps, r, TruncationSpec.make({3: 1}, 81))
    trivial = rep.rows[0]
    assert trivial.mtype.order == 1
    assert trivial.predicted == pytest.approx(0.840189, abs=1e-6)
    assert rep.trivial_closed_form == pytest.approx(trivial.predicted)
    assert trivial.count == 2 and trivial.empirical == pytest.approx(2 / 3)
    assert sum(r.count for r in rep.rows) + rep.outside == rep.total == 3


def test_compare_prediction_for_imaginary_quadratic_3_parts():
    g = builtin_group("C2")
    comps, r = default_components(g, [3]), rank_from_vector(g, [Fraction(0)])
    rep = compare([DatasetRow(-3, ())], comps, r, TruncationSpec.make({3: 1}, 81))
    assert rep.rows[0].predicted == pytest.approx(0.560126, abs=1e-6)


def test_compare_without_primes_is_a_single_trivial_row(c2_real):
    g, _, r = c2_real
    rep = compare([DatasetRow(-3, ()), DatasetRow(-23, (3,))], (), r, TruncationSpec.make({}, 1))
    assert len(rep.rows) == 1
    assert rep.rows[0].predicted == 1.0 and rep.rows[0].empirical == 1.0


def test_compare_all_trivial_rows(c2_real):
    g, comps, r = c2_real
    rep = compare([DatasetRow(-3, ()), DatasetRow(-4, (2,))], comps, r, TruncationSpec.make({3: 1}, 81))
    assert rep.rows[0].empirical == 1.0 and rep.outside == 0
    assert all(row.count == 0 for row in rep.rows[1:])


def test_compare_needs_rows(c2_real):
    _, comps, r = c2_real
    with pytest.raises(FormatError):
        compare([], comps, r, TruncationSpec.make({3: 1}, 81))
