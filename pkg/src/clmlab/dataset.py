"""Ingest tables of class groups and compare them with the predicted distribution.

A dataset is a comma-separated file with header ``label,invariants``; the
invariants are the factors of a divisibility chain joined by dots (``3.3``
for Z/3 x Z/3, empty for the trivial group).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from .distribution import TruncationSpec, csv_row, fmt_float, local_normalizer, truncated_table, weight
from .errors import FormatError, UnsupportedComponent
from .finmod import p_primary_exponents
from .gmodules import ModuleType, TypeEntry
from .rational import AlgebraComponent, RankSpec

HEADER = "label,invariants"


@dataclass(frozen=True)
class DatasetRow:
    label: int
    invariants: tuple[int, ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariants:
            out *= d
        return out

    def p_partition(self, p: int) -> tuple[int, ...]:
        return tuple(sorted(p_primary_exponents(self.invariants, p), reverse=True))

    def to_csv(self) -> str:
        return f"{self.label},{'.'.join(map(str, self.invariants))}"


@dataclass(frozen=True)
class IngestResult:
    rows: tuple[DatasetRow, ...]
    rejected: tuple[tuple[int, str], ...]  # (line number, reason)


def parse_row(line: str) -> DatasetRow:
    fields = line.split(",")
    if len(fields) != 2:
        raise FormatError(f"expected 2 fields, got {len(fields)}")
    label_s, inv_s = (f.strip() for f in fields)
    try:
        label = int(label_s)
    except ValueError as exc:
        raise FormatError(f"label {label_s!r} is not an integer") from exc
    inv: tuple[int, ...] = ()
    if inv_s:
        try:
            inv = tuple(int(x) for x in inv_s.split("."))
        except ValueError as exc:
            raise FormatError(f"invariants {inv_s!r} are not dot-joined integers") from exc
    if any(d < 2 for d in inv):
        raise FormatError(f"invariant factors must be at least 2: {inv_s!r}")
    for a, b in zip(inv, inv[1:]):
        if b % a:
            raise FormatError(f"{a} does not divide {b}: {inv_s!r} is not a divisibility chain")
    return DatasetRow(label, inv)


def ingest_text(text: str, strict: bool = False) -> IngestResult:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise FormatError(f"line 1: header must be {HEADER!r}")
    rows, rejected = [], []
    for num, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        try:
            rows.append(parse_row(raw))
        except FormatError as exc:
            reason = exc.args[0] if exc.args else str(exc)
            if strict:
                raise FormatError(f"line {num}: {reason}") from exc
            rejected.append((num, reason))
    return IngestResult(tuple(rows), tuple(rejected))


def ingest_dataset(path: str | Path, strict: bool = False) -> IngestResult:
    return ingest_text(Path(path).read_text(), strict=strict)


def sample_dataset_path() -> Path:
    return Path(str(resources.files("clmlab").joinpath("data/sample_class_groups.csv")))


def rows_to_csv(rows: Sequence[DatasetRow]) -> str:
    return HEADER + "\n" + "".join(r.to_csv() + "\n" for r in rows)


# ----------------------------------------------------------------------------
# comparison


@dataclass(frozen=True)
class CompareRow:
    mtype: ModuleType
    count: int
    empirical: float
    predicted: float  # limiting probability w(t) / Z
    predicted_truncated: Fraction  # probability within the truncated table


@dataclass(frozen=True)
class CompareReport:
    rows: tuple[CompareRow, ...]
    total: int
    outside: int  # data rows whose type lies outside the truncation
    trivial_closed_form: float

    def to_csv(self) -> str:
        lines = ["type,count,empirical,predicted,predicted_truncated"]
        for r in self.rows:
            lines.append(
                csv_row(
                    r.mtype.format(), r.count, fmt_float(r.empirical), fmt_float(r.predicted), fmt_float(r.predicted_truncated)
                )
            )
        lines.append(f"outside,{self.outside},{fmt_float(self.outside / self.total if self.total else 0)},,")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [
            f"rows {self.total}; outside truncation {self.outside}",
            f"closed-form P(trivial) {fmt_float(self.trivial_closed_form)}",
            f"{'type':<28} {'count':>7} {'empirical':>14} {'predicted':>14} {'truncated':>14}",
        ]
        for r in self.rows:
            lines.append(
                f"{r.mtype.format():<28} {r.count:>7} {fmt_float(r.empirical):>14} "
                f"{fmt_float(r.predicted):>14} {fmt_float(r.predicted_truncated):>14}"
            )
        return "\n".join(lines)


def compare(rows: Sequence[DatasetRow], comps: Sequence[AlgebraComponent], r: RankSpec, trunc: TruncationSpec) -> CompareReport:
    """Empirical frequencies of the p-parts next to the predicted probabilities.

    The rows carry bare abelian groups, so the comparison needs a single
    component with h = 1 to attach their p-parts to.  No verdict is drawn.
    """
    if not rows:
        raise FormatError("the dataset has no rows")
    primes = trunc.primes
    if primes and (len(comps) != 1 or comps[0].h != 1):
        raise UnsupportedComponent("comparison needs exactly one component with h = 1")
    c = comps[0] if comps else None
    table = truncated_table(comps, r, trunc, check_places=False)
    z_full = 1.0
    for p in primes:
        z_full *= local_normalizer(p, c.h, r.u[c.index])
    counts: dict[ModuleType, int] = {}
    outside = 0
    for row in rows:
        ents = []
        for p in primes:
            lam = row.p_partition(p)
            if lam:
                ents.append(TypeEntry(c.index, p, lam, c.h))
        t = ModuleType(tuple(ents))
        if trunc.contains(t):
            counts[t] = counts.get(t, 0) + 1
        else:
            outside += 1
    n = len(rows)
    out = []
    for trow in table.rows:
        k = counts.get(trow.mtype, 0)
        w = weight(trow.mtype, r, comps, check_places=False)
        out.append(CompareRow(trow.mtype, k, k / n, float(w) / z_full, trow.probability))
    return CompareReport(tuple(out), n, outside, 1.0 / z_full)
