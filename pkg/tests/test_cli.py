import csv
import io
import json
from pathlib import Path

import pytest

from clmlab import cli
from clmlab.cli import RunConfig, UsageError, build_parser, config_from_args, main, run
from clmlab.dataset import ingest_text
from clmlab.errors import InvariantViolated, NotUnique, TooLarge

GOLDEN = Path(__file__).parent / "golden"
CASES = json.loads((GOLDEN / "cases.json").read_text())


def invoke(argv):
    cfg = config_from_args(build_parser().parse_args(argv))
    out, err = io.StringIO(), io.StringIO()
    code = run(cfg, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    code, out, err = invoke(CASES[name])
    assert code == 0, err
    assert out == (GOLDEN / f"{name}.txt").read_text()


def test_golden_cases_cover_every_subcommand_but_verify():
    used = {argv[0] for argv in CASES.values()}
    assert used == {
        "decompose", "good-primes", "rank", "enumerate", "dist", "moments", "invert", "sample",
        "class-triples", "hecke", "nongalois", "independence", "compare",
    }


def test_reports_are_deterministic():
    argv = CASES["sample_C2_stream"]
    assert invoke(argv)[1] == invoke(argv)[1]


def test_d4_decomposition_golden_shows_displayed_idempotents():
    text = (GOLDEN / "decompose_D4.txt").read_text()
    assert "e5: h=2 center_degree=1 dim=4" in text
    assert "idempotent: ():1/2 (2 4):0 (1 2)(3 4):0 (1 2 3 4):0 (1 3):0 (1 3)(2 4):-1/2" in text


def test_moments_example():
    code, out, _ = invoke(["moments", "--group", "C2", "--u", "1", "--primes", "3", "--trunc", "3", "--type", "e2@3:(1)"])
    assert code == 0
    assert "closed form 1/3" in out and "gap 0.000391" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["dist", "--group", "C2", "--primes", "3"],  # no rank
        ["dist", "--group", "C2", "--u", "1", "--places", "G", "--primes", "3"],  # both ranks
        ["rank", "--group", "NoSuchGroup", "--places", "G"],
        ["hecke", "--group", "D4", "--subgroup", "nope", "--primes", "3"],
        ["hecke", "--group", "D4", "--subgroup", "tau", "--primes", "2"],  # bad prime
        ["dist", "--group", "C2", "--u", "1", "--primes", "4"],
        ["dist", "--group", "C2", "--u", "1", "--primes", "3,3"],
        ["moments", "--group", "C2", "--u", "1", "--primes", "3", "--type", "e9@3:(1)"],
        ["class-triples", "--group", "C2"],
        ["verify", "--criteria", "99"],
        ["nosuch"],
        ["dist", "--primes", "x"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


@pytest.mark.parametrize("exc, code", [(InvariantViolated, 1), (NotUnique, 1), (TooLarge, 2), (ValueError, 2)])
def test_error_classes_map_to_exit_codes(monkeypatch, exc, code):
    def boom(cfg, out):
        raise exc("synthetic")

    monkeypatch.setitem(cli.HANDLERS, "decompose", boom)
    err = io.StringIO()
    assert run(RunConfig("decompose", group="C2"), io.StringIO(), err) == code
    assert "synthetic" in err.getvalue()


def test_failing_criterion_makes_verify_exit_1(monkeypatch):
    from clmlab import acceptance

    monkeypatch.setitem(acceptance.CRITERIA, 99, acceptance._Criterion(99, "always fails", lambda lim: (False, "no"), None))
    out = io.StringIO()
    assert run(RunConfig("verify", criteria=(1, 99)), out, io.StringIO()) == 1
    assert "[FAIL] criterion 99" in out.getvalue() and "1/2 criteria passed" in out.getvalue()


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig("dist", primes=(3,), trunc=(1, 2))
    with pytest.raises(UsageError):
        RunConfig("dist", trunc=(-1,))
    cfg = RunConfig("dist", primes=(3, 5), trunc=(2,))
    assert cfg.exponents() == {3: 2, 5: 2}
    assert cfg.order_bound() == 3**8 * 5**8


def test_group_spec_path(tmp_path):
    spec = tmp_path / "c2.json"
    spec.write_text('{"name": "MyC2", "degree": 2, "generators": [[[1, 2]]], "subgroups": {}}')
    code, out, _ = invoke(["decompose", "--group", str(spec)])
    assert code == 0 and out.startswith("group MyC2 order 2")


def test_compare_csv_round_trips_through_ingest(tmp_path):
    data = tmp_path / "rows.csv"
    data.write_text("label,invariants\n-3,\n-4,\n-23,3\n-87,6\n-4027,3.3\n-3299,3.9\n-bad,3\n-7,3.2\n")
    code, out, err = invoke(["compare", "--group", "C2", "--places", "G", "--primes", "3", "--trunc", "1",
                             "--bound", "81", "--dataset", str(data), "--format", "csv"])
    assert code == 0
    assert "skipped line 8" in err and "skipped line 9" in err
    rows = list(csv.reader(out.splitlines()))
    assert rows[0] == ["type", "count", "empirical", "predicted", "predicted_truncated"]
    counts = {r[0]: int(r[1]) for r in rows[1:]}
    assert counts["0"] == 2 and counts["e2@3:(1)"] == 2 and counts["e2@3:(1,1)"] == 1 and counts["outside"] == 1
    code, _, err = invoke(["compare", "--group", "C2", "--places", "G", "--primes", "3", "--trunc", "1",
                           "--dataset", str(data), "--strict"])
    assert code == 2 and "line 8" in err


def test_enumerate_csv_types_parse_back():
    from clmlab.gmodules import parse_type
    from clmlab.groups import builtin_group
    from clmlab.rational import rational_components

    _, out, _ = invoke(CASES["enumerate_D4_csv"])
    comps = rational_components(builtin_group("D4"))
    for t, order, _ in list(csv.reader(out.splitlines()))[1:]:
        assert parse_type(t, comps).order == int(order)


def test_sample_dataset_ingests_cleanly():
    from clmlab.dataset import sample_dataset_path

    res = ingest_text(sample_dataset_path().read_text(), strict=True)
    assert len(res.rows) > 1000 and not res.rejected
