"""Command-line workbench.

Every subcommand reads one flat RunConfig built from the command line, writes
its report to stdout and returns an exit status: 0 on success, 1 when a
verification fails, 2 on a usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from pathlib import Path
from typing import Callable, Sequence, TextIO

from .errors import ClmError, InvariantViolated, NotUnique, ParseError
from .limits import DEFAULT_LIMITS, Limits

SUBCOMMANDS = (
    "decompose",
    "good-primes",
    "rank",
    "enumerate",
    "dist",
    "moments",
    "invert",
    "sample",
    "class-triples",
    "hecke",
    "nongalois",
    "independence",
    "verify",
    "compare",
)

DEFAULT_GOOD_PRIME_LIST = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)
# errors that mean "the computation contradicts a proven property"
VERIFICATION_ERRORS = (InvariantViolated, NotUnique)


class UsageError(ClmError):
    code = "USAGE"


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    group: str | None = None
    subgroup: str | None = None
    normal: str | None = None
    primes: tuple[int, ...] = ()
    trunc: tuple[int, ...] = ()
    bound: int | None = None
    u: tuple[Fraction, ...] | None = None
    places: tuple[str, ...] | None = None
    components: tuple[int, ...] | None = None
    types: tuple[str, ...] = ()
    s: str | None = None
    seed: int = 0
    count: int = 10
    method: str = "table"
    source: str = "closed"
    n: int = 8
    precision: int = 6
    tally: bool = False
    dataset: str | None = None
    criteria: tuple[int, ...] | None = None
    format: str = "text"
    strict: bool = False
    limits: Limits = field(default_factory=lambda: DEFAULT_LIMITS)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if any(p < 2 for p in self.primes) or len(set(self.primes)) != len(self.primes):
            raise UsageError("primes must be distinct integers >= 2")
        for p in self.primes:
            if any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
                raise UsageError(f"{p} is not prime")
        if any(n < 0 for n in self.trunc):
            raise UsageError("truncation exponents must be nonnegative")
        if self.trunc and len(self.trunc) not in (1, len(self.primes)):
            raise UsageError("give one truncation exponent, or one per prime")
        if self.u is not None and self.places is not None:
            raise UsageError("give either --u or --places, not both")
        if self.format not in ("text", "csv"):
            raise UsageError("format must be text or csv")

    def exponents(self, default: int = 1) -> dict[int, int]:
        if not self.trunc:
            return {p: default for p in self.primes}
        if len(self.trunc) == 1:
            return {p: self.trunc[0] for p in self.primes}
        return dict(zip(self.primes, self.trunc))

    def order_bound(self, max_parts: int = 4) -> int:
        """Explicit --bound, else prod_p p^(max_parts * n_p)."""
        if self.bound is not None:
            return self.bound
        return prod(p ** (max_parts * n) for p, n in self.exponents().items())


# ----------------------------------------------------------------------------
# argument parsing


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _fraction_list(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(x.strip()) for x in text.split(",") if x.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals a/b, got {text!r}") from exc


def _name_list(text: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", help="group spec file, or a shipped group name (C2, S3, D4, A5, ...)")
    common.add_argument("--subgroup", help="named subgroup; 'trivial' and 'G' are always available")
    common.add_argument("--primes", type=_int_list, default=(), help="comma-separated primes")
    common.add_argument("--trunc", type=_int_list, default=(), help="truncation exponent n_p (one, or one per prime)")
    common.add_argument("--bound", type=int, help="order bound for enumerated modules (default prod p^(4 n_p))")
    rank = common.add_mutually_exclusive_group()
    rank.add_argument("--u", type=_fraction_list, help="rank vector u_2,...,u_m as rationals a/b")
    rank.add_argument(
        "--places",
        type=_name_list,
        help="decomposition groups of the infinite places: subgroup names, 'trivial' or 'G'",
    )
    common.add_argument("--components", type=_int_list, help="component indices to use (default: all good ones)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "csv"), default="text")
    common.add_argument("--strict", action="store_true", help="abort on the first malformed dataset row")

    ap = argparse.ArgumentParser(prog="clmlab", description="Exact Cohen-Lenstra-Martinet workbench.")
    sub = ap.add_subparsers(dest="subcommand", required=True)
    helps = {
        "decompose": "rational group algebra components and idempotents",
        "good-primes": "good/bad verdict per component and prime",
        "rank": "rank vector u from places, and its transfer to a subgroup",
        "enumerate": "module types within a truncation",
        "dist": "truncated distribution table",
        "moments": "truncated and closed-form Sur-moments",
        "invert": "probabilities recovered from moments",
        "sample": "exact table sampler or random-cokernel sampler",
        "class-triples": "class triples and their automorphism counts",
        "hecke": "integral Hecke order of (G, H)",
        "nongalois": "non-Galois weights computed through the Morita correspondence",
        "independence": "rank transfer through a quotient",
        "verify": "run the acceptance suites",
        "compare": "empirical class-group frequencies against the predictions",
    }
    parsers = {name: sub.add_parser(name, parents=[common], help=helps[name]) for name in SUBCOMMANDS}
    parsers["moments"].add_argument("--type", dest="types", action="append", default=[], help="H as e<i>@<p>:(parts)")
    parsers["class-triples"].add_argument("--type", dest="types", action="append", default=[], help="h as e<i>@<p>:(parts)")
    parsers["class-triples"].add_argument("--s", help="element of order dividing 2 (label); default: one per class")
    parsers["invert"].add_argument("--source", choices=("closed", "table"), default="closed")
    p = parsers["sample"]
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--method", choices=("table", "cokernel"), default="table")
    p.add_argument("--n", type=int, default=8, help="cokernel sampler: matrix size")
    p.add_argument("--precision", type=int, default=6, help="cokernel sampler: entries mod p^N")
    p.add_argument("--tally", action="store_true", help="print counts per type instead of the stream")
    parsers["independence"].add_argument("--normal", help="normal subgroup Delta contained in --subgroup")
    parsers["compare"].add_argument("--dataset", help="CSV with header label,invariants (default: shipped sample)")
    parsers["verify"].add_argument("--criteria", type=_int_list, help="criterion numbers (default: all)")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        subcommand=ns.subcommand,
        group=ns.group,
        subgroup=ns.subgroup,
        normal=getattr(ns, "normal", None),
        primes=tuple(ns.primes),
        trunc=tuple(ns.trunc),
        bound=ns.bound,
        u=ns.u,
        places=ns.places,
        components=tuple(ns.components) if ns.components else None,
        types=tuple(getattr(ns, "types", ())),
        s=getattr(ns, "s", None),
        seed=ns.seed,
        count=getattr(ns, "count", 10),
        method=getattr(ns, "method", "table"),
        source=getattr(ns, "source", "closed"),
        n=getattr(ns, "n", 8),
        precision=getattr(ns, "precision", 6),
        tally=getattr(ns, "tally", False),
        dataset=getattr(ns, "dataset", None),
        criteria=tuple(ns.criteria) if getattr(ns, "criteria", None) else None,
        format=ns.format,
        strict=ns.strict,
    )


# ----------------------------------------------------------------------------
# resolution helpers


def resolve_group(cfg: RunConfig):
    from .groups import builtin_group, load_group

    if not cfg.group:
        raise UsageError(f"{cfg.subcommand} needs --group")
    path = Path(cfg.group)
    if path.is_file():
        return load_group(path)
    return builtin_group(cfg.group)


def resolve_subgroup(g, name: str | None, required: bool = True):
    from .groups import trivial_subgroup, whole_group

    if name is None:
        if required:
            raise UsageError("this subcommand needs --subgroup")
        return None
    if name in g.named:
        return g.subgroup(name)
    if name.lower() in ("trivial", "1"):
        return trivial_subgroup(g)
    if name in ("G", "whole"):
        return whole_group(g)
    return g.subgroup(name)  # raises NotASubgroup listing the known names


def resolve_rank(cfg: RunConfig, g, required: bool = True):
    from .rational import rank_from_vector, rank_u

    if cfg.u is not None:
        try:
            return rank_from_vector(g, cfg.u)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if cfg.places is not None:
        subs = []
        for name in cfg.places:
            s = resolve_subgroup(g, name)
            subs.append(None if s.order == 1 else s)
        return rank_u(g, subs)
    if required:
        raise UsageError(f"{cfg.subcommand} needs exactly one of --u or --places")
    return None


def resolve_components(cfg: RunConfig, g):
    from .distribution import default_components
    from .rational import rational_components

    if cfg.components is None:
        return default_components(g, cfg.primes)
    by_index = {c.index: c for c in rational_components(g)}
    missing = [i for i in cfg.components if i not in by_index]
    if missing:
        raise UsageError(f"{g.name} has no components {missing}; indices run 1..{len(by_index)}")
    return tuple(by_index[i] for i in cfg.components)


def truncation(cfg: RunConfig):
    from .distribution import TruncationSpec

    return TruncationSpec.make(cfg.exponents(), cfg.order_bound())


def _frac(x: Fraction) -> str:
    from .distribution import fmt_float

    return f"{x} ({fmt_float(x)})" if Fraction(x).denominator != 1 else str(x)


# ----------------------------------------------------------------------------
# subcommands


def cmd_decompose(cfg: RunConfig, out: TextIO) -> int:
    from .rational import check_decomposition, format_components, rational_components

    g = resolve_group(cfg)
    comps = rational_components(g)
    check_decomposition(comps)
    if cfg.format == "csv":
        out.write("component,h,center_degree,dim,split,character\n")
        for c in comps:
            out.write(f"e{c.index},{c.h},{c.center_degree},{c.dim},{c.split},{' '.join(map(str, c.character))}\n")
    else:
        out.write(format_components(comps) + "\n")
    return 0


def cmd_good_primes(cfg: RunConfig, out: TextIO) -> int:
    from .hecke import augmentation_component
    from .rational import good_primes, prime_report, rational_components

    g = resolve_group(cfg)
    primes = cfg.primes or DEFAULT_GOOD_PRIME_LIST
    comps = rational_components(g)
    rows = []
    for c in comps:
        for p in primes:
            r = prime_report(c, p)
            rows.append((f"e{c.index}", p, r.verdict, r.denominator_ok, r.gram_valuation, r.closed_good))
    if cfg.subgroup is not None:
        aug = augmentation_component(g, resolve_subgroup(g, cfg.subgroup))
        for p, v in good_primes(aug.constituents, primes).items():
            rows.append(("augmentation", p, v, None, None, None))
    if cfg.format == "csv":
        out.write("component,prime,verdict,denominator_test,gram_valuation,closed_form\n")
        for row in rows:
            out.write(",".join("" if x is None else str(x) for x in row) + "\n")
    else:
        out.write(f"good primes for {g.name}\n")
        for name, p, v, d, gv, cf in rows:
            extra = "" if d is None else f"  (denominators ok {d}, gram valuation {gv}, closed form {cf})"
            out.write(f"{name:>12} p={p:<3} {v}{extra}\n")
    return 0


def cmd_rank(cfg: RunConfig, out: TextIO) -> int:
    from .hecke import rank_transfer
    from .rational import rational_components

    g = resolve_group(cfg)
    r = resolve_rank(cfg, g)
    comps = rational_components(g)
    v = rank_transfer(r, resolve_subgroup(g, cfg.subgroup)) if cfg.subgroup else None
    if cfg.format == "csv":
        out.write("component,h,u" + (",v" if v is not None else "") + "\n")
        for c in comps:
            line = f"e{c.index},{c.h},{r.u[c.index]}"
            if v is not None:
                line += f",{v.get(c.index, '')}"
            out.write(line + "\n")
    else:
        out.write(f"rank of {g.name}: {r.format()}\n")
        if r.chi_k is not None:
            out.write("chi_K on classes: " + " ".join(str(x) for x in r.chi_k) + "\n")
        if v is not None:
            out.write("transferred to the subgroup: " + " ".join(f"v{i}={x}" for i, x in sorted(v.items())) + "\n")
    return 0


def cmd_enumerate(cfg: RunConfig, out: TextIO) -> int:
    from .distribution import aut_of_type, csv_row
    from .gmodules import enumerate_types

    g = resolve_group(cfg)
    comps = resolve_components(cfg, g)
    types = enumerate_types(comps, cfg.exponents(), cfg.order_bound())
    if cfg.format == "csv":
        out.write("type,order,aut\n")
        for t in types:
            out.write(csv_row(t.format(), t.order, aut_of_type(t)) + "\n")
    else:
        out.write(f"{len(types)} types over {' '.join('e%d' % c.index for c in comps)}, bound {cfg.order_bound()}\n")
        for t in types:
            out.write(f"{t.format():<40} |G| = {t.order:<8} |Aut| = {aut_of_type(t)}\n")
    return 0


def _table(cfg: RunConfig):
    from .distribution import truncated_table

    g = resolve_group(cfg)
    if not cfg.primes:
        raise UsageError(f"{cfg.subcommand} needs --primes")
    comps = resolve_components(cfg, g)
    r = resolve_rank(cfg, g)
    return g, comps, r, truncated_table(comps, r, truncation(cfg))


def cmd_dist(cfg: RunConfig, out: TextIO) -> int:
    _, _, _, table = _table(cfg)
    out.write(table.to_csv() if cfg.format == "csv" else table.to_text())
    return 0


def cmd_moments(cfg: RunConfig, out: TextIO) -> int:
    from .distribution import moment, moments_csv
    from .gmodules import parse_type

    g, comps, r, table = _table(cfg)
    if cfg.types:
        hs = [parse_type(t, comps) for t in cfg.types]
    else:
        hs = table.types()
    reports = [moment(table, h) for h in hs]
    if cfg.format == "csv":
        out.write(moments_csv(reports))
    else:
        out.write(f"moments E|Sur(X, H)| for {g.name}, {r.format()}, truncation {table.trunc.format()}\n")
        for m in reports:
            out.write(
                f"H = {m.h.format()}: truncated {_frac(m.truncated)}; closed form {_frac(m.closed_form)}; "
                f"gap {float(m.gap):.6g}\n"
            )
    return 0


def cmd_invert(cfg: RunConfig, out: TextIO) -> int:
    from .distribution import closed_moment, csv_row, fmt_float, invert_moments, moment

    g, comps, r, table = _table(cfg)
    types = table.types()
    if cfg.source == "table":
        moments = [moment(table, t).truncated for t in types]
    else:
        moments = [closed_moment(t, r) for t in types]
    x = invert_moments(types, moments)
    status = 0
    if cfg.source == "table" and x != [row.probability for row in table.rows]:
        status = 1
    if cfg.format == "csv":
        out.write("type,moment,probability_num,probability_den,probability\n")
        for t, m, p in zip(types, moments, x):
            out.write(csv_row(t.format(), fmt_float(m), p.numerator, p.denominator, fmt_float(p)) + "\n")
    else:
        out.write(f"inversion of {cfg.source} moments for {g.name}, {r.format()}, {table.trunc.format()}\n")
        for t, p in zip(types, x):
            out.write(f"{t.format():<40} {_frac(p)}\n")
        if cfg.source == "table":
            out.write(f"round trip exact: {status == 0}\n")
    return status


def cmd_sample(cfg: RunConfig, out: TextIO) -> int:
    from .distribution import CokernelSamplerConfig, csv_row, fmt_float, sample, sample_cokernel
    from .partitions import format_partition

    if cfg.count < 0:
        raise UsageError("--count must be nonnegative")
    if cfg.method == "cokernel":
        if len(cfg.primes) != 1:
            raise UsageError("the cokernel sampler needs exactly one prime")
        u = 0
        if cfg.u is not None:
            if len(cfg.u) != 1 or cfg.u[0].denominator != 1:
                raise UsageError("the cokernel sampler needs a single integer --u")
            u = int(cfg.u[0])
        sc = CokernelSamplerConfig(cfg.primes[0], cfg.n, u, cfg.precision, cfg.seed)
        labels = [format_partition(lam) for lam in sample_cokernel(sc, cfg.count)]
    else:
        _, _, _, table = _table(cfg)
        labels = [t.format() for t in sample(table, cfg.seed, cfg.count)]
    if cfg.tally:
        counts: dict[str, int] = {}
        for lab in labels:
            counts[lab] = counts.get(lab, 0) + 1
        out.write("type,count,frequency\n")
        for lab, k in sorted(counts.items(), key=lambda kv: -kv[1]):
            out.write(csv_row(lab, k, fmt_float(k / len(labels))) + "\n")
        return 0
    if cfg.format == "csv":
        out.write("index,type\n")
        out.writelines(csv_row(i, lab) + "\n" for i, lab in enumerate(labels))
    else:
        out.writelines(lab + "\n" for lab in labels)
    return 0


def _element_by_label(g, label: str) -> int:
    want = label.replace(" ", "")
    if want in ("1", "e", "id", "identity"):
        return g.identity
    for x, lab in enumerate(g.labels):
        if lab.replace(" ", "") == want:
            return x
    raise UsageError(f"{g.name} has no element labelled {label!r}")


def cmd_class_triples(cfg: RunConfig, out: TextIO) -> int:
    from .gmodules import module_from_type, parse_type
    from .rational import rational_components
    from .triples import aut_count, build_class_triple, order_two_classes, verify_uniqueness

    g = resolve_group(cfg)
    if len(cfg.types) != 1:
        raise UsageError("class-triples needs one --type for the kernel h")
    comps = rational_components(g)
    h = module_from_type(parse_type(cfg.types[0], comps), comps)
    ss = [_element_by_label(g, cfg.s)] if cfg.s else order_two_classes(g)
    status = 0
    rows = []
    for s in ss:
        t = build_class_triple(h, s, cfg.limits)
        checks_ok = all(t.check().values())
        f = aut_count(t, "formula")
        try:
            b: int | None = aut_count(t, "bruteforce", cfg.limits)
        except ClmError:
            b = None
        try:
            unique: bool | None = verify_uniqueness(h, s, cfg.limits)
        except ClmError:
            unique = None
        if not checks_ok or (b is not None and b != f) or unique is False:
            status = 1
        rows.append((t, f, b, unique))
    if cfg.format == "csv":
        out.write("s,group_order,aut_formula,aut_bruteforce,unique\n")
        for t, f, b, unique in rows:
            out.write(f"{g.labels[t.s]},{t.group.order},{f},{'' if b is None else b},{'' if unique is None else unique}\n")
    else:
        for t, f, b, unique in rows:
            out.write(t.report(cfg.limits) + "\n")
            out.write(f"  unique up to isomorphism: {'skipped (too large)' if unique is None else unique}\n")
    return status


def cmd_hecke(cfg: RunConfig, out: TextIO) -> int:
    from .hecke import hecke_order

    g = resolve_group(cfg)
    o = hecke_order(g, resolve_subgroup(g, cfg.subgroup), cfg.primes)
    out.write(o.to_csv() if cfg.format == "csv" else o.format() + "\n")
    return 1 if any(c.maximal is False for c in o.components) else 0


def cmd_nongalois(cfg: RunConfig, out: TextIO) -> int:
    from .distribution import csv_row, fmt_float
    from .finmod import invariant_factors
    from .hecke import nongalois_table

    g = resolve_group(cfg)
    if not cfg.primes:
        raise UsageError("nongalois needs --primes")
    h = resolve_subgroup(g, cfg.subgroup)
    r = resolve_rank(cfg, g)
    rows = nongalois_table(g, h, r, cfg.exponents(), cfg.order_bound(), cfg.limits)
    status = 0 if all(row.column_a == row.column_b for row in rows) else 1
    if cfg.format == "csv":
        out.write("lifts,invariants,column_a,column_b,equal\n")
        for row in rows:
            inv = ".".join(map(str, invariant_factors(row.module.invariants)))
            out.write(csv_row(row.label, inv, fmt_float(row.column_a), fmt_float(row.column_b), row.column_a == row.column_b) + "\n")
    else:
        out.write(f"non-Galois weights for ({g.name}, H of order {h.order}), {r.format()}\n")
        for row in rows:
            inv = ".".join(map(str, invariant_factors(row.module.invariants))) or "0"
            out.write(
                f"o-module {inv:<10} lifts {row.label}: A = {_frac(row.column_a)}, B = {_frac(row.column_b)}"
                f"{'' if row.column_a == row.column_b else '  MISMATCH'}\n"
            )
    return status


def cmd_independence(cfg: RunConfig, out: TextIO) -> int:
    from .hecke import rank_independence_check

    g = resolve_group(cfg)
    if cfg.normal is None:
        raise UsageError("independence needs --normal")
    if cfg.places is None:
        raise UsageError("independence needs --places")
    delta = resolve_subgroup(g, cfg.normal)
    sigma_prime = resolve_subgroup(g, cfg.subgroup)
    rep = rank_independence_check(g, delta, sigma_prime, resolve_rank(cfg, g))
    if cfg.format == "csv":
        out.write("quotient_component,sigma_component,v_quotient,v_sigma\n")
        for i, j in sorted(rep.matching.items()):
            out.write(f"e{i},e{j},{rep.v_gamma[i]},{rep.v_sigma[j]}\n")
    else:
        out.write("v on Sigma:    " + " ".join(f"v{i}={x}" for i, x in sorted(rep.v_sigma.items())) + "\n")
        out.write("v on quotient: " + " ".join(f"v{i}={x}" for i, x in sorted(rep.v_gamma.items())) + "\n")
        out.write("matching:      " + " ".join(f"e{i}->e{j}" for i, j in sorted(rep.matching.items())) + "\n")
        out.write(f"Hecke dimensions {list(rep.dims_sigma)} vs {list(rep.dims_gamma)}\n")
        out.write(f"independent: {rep.ok}\n")
    return 0 if rep.ok else 1


def cmd_verify(cfg: RunConfig, out: TextIO) -> int:
    from .acceptance import CRITERIA, run_criterion

    numbers = cfg.criteria or tuple(sorted(CRITERIA))
    unknown = [n for n in numbers if n not in CRITERIA]
    if unknown:
        raise UsageError(f"unknown criteria {unknown}; known: {sorted(CRITERIA)}")
    failed = 0
    for n in numbers:
        res = run_criterion(n, cfg.limits)
        out.write(res.line() + "\n")
        out.flush()
        failed += not res.ok
    out.write(f"{len(numbers) - failed}/{len(numbers)} criteria passed\n")
    return 1 if failed else 0


def cmd_compare(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    from .dataset import compare, ingest_dataset, sample_dataset_path

    g = resolve_group(cfg)
    comps = resolve_components(cfg, g)
    r = resolve_rank(cfg, g)
    path = Path(cfg.dataset) if cfg.dataset else sample_dataset_path()
    res = ingest_dataset(path, strict=cfg.strict)
    for line, reason in res.rejected:
        err.write(f"skipped line {line}: {reason}\n")
    rep = compare(res.rows, comps, r, truncation(cfg))
    out.write(rep.to_csv() if cfg.format == "csv" else rep.to_text() + "\n")
    return 0


HANDLERS: dict[str, Callable[[RunConfig, TextIO], int]] = {
    "decompose": cmd_decompose,
    "good-primes": cmd_good_primes,
    "rank": cmd_rank,
    "enumerate": cmd_enumerate,
    "dist": cmd_dist,
    "moments": cmd_moments,
    "invert": cmd_invert,
    "sample": cmd_sample,
    "class-triples": cmd_class_triples,
    "hecke": cmd_hecke,
    "nongalois": cmd_nongalois,
    "independence": cmd_independence,
    "verify": cmd_verify,
}


def run(cfg: RunConfig, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    """Dispatch one subcommand; module errors become exit codes with their code on stderr."""
    try:
        if cfg.subcommand == "compare":
            return cmd_compare(cfg, out, err)
        return HANDLERS[cfg.subcommand](cfg, out)
    except VERIFICATION_ERRORS as exc:
        err.write(f"error: {exc}\n")
        return 1
    except ClmError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except (OSError, ValueError) as exc:
        err.write(f"error: [{ParseError.code}] {exc}\n")
        return 2


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors itself
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
    except ClmError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return run(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
