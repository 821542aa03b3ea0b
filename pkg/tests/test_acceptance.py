"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines.
"""

import subprocess
import sys
import time

import pytest

from clmlab.acceptance import CRITERIA, run_criterion

FULL_RUN_BUDGET = 300.0  # seconds for the whole suite through the CLI


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    res = run_criterion(number)
    print(res.line())
    assert res.passed, res.detail
    assert res.within_budget, f"{res.seconds:.1f}s over the {res.budget}s budget"


@pytest.mark.slow
def test_criterion_12_full_verify_through_cli():
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-c", "import sys; from clmlab.cli import main; sys.exit(main())", "verify"],
        capture_output=True,
        text=True,
        timeout=2 * FULL_RUN_BUDGET,
    )
    elapsed = time.perf_counter() - t0
    ok = proc.returncode == 0 and elapsed < FULL_RUN_BUDGET
    last = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr.strip()
    print(f"[{'PASS' if ok else 'FAIL'}] criterion 12: full suite via 'clmlab verify': {last} [{elapsed:.2f}s (budget {FULL_RUN_BUDGET:g}s)]")
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert elapsed < FULL_RUN_BUDGET
