"""Regenerate the CLI golden files listed in tests/golden/cases.json.

Run after an intentional change in report layout, then review the diff:

    python scripts/regen_golden.py && git diff tests/golden
"""

from __future__ import annotations

import io
import json
from pathlib import Path

from clmlab.cli import build_parser, config_from_args, run

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def render(argv: list[str]) -> tuple[int, str]:
    cfg = config_from_args(build_parser().parse_args(argv))
    out, err = io.StringIO(), io.StringIO()
    code = run(cfg, out, err)
    return code, out.getvalue()


def main() -> int:
    cases = json.loads((GOLDEN / "cases.json").read_text())
    for name, argv in cases.items():
        code, text = render(argv)
        if code != 0:
            print(f"{name}: exit {code}")
            return 1
        (GOLDEN / f"{name}.txt").write_text(text)
        print(f"{name}: {len(text.splitlines())} lines")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
