"""Command-line interface.

Exit codes: 0 success / Exists / verified magic, 1 NotExists / not magic,
2 Unknown / BudgetExceeded / no constructive method, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path
from typing import Sequence

from .abelian import GroupError, GroupSpec, enumerate_groups, exponent, parse_group
from .construct import ConstructionError, construct_lcm_half, construct_square
from .labeling import LabelingError, read_labeling, verify, write_labeling
from .oracle import (
    Status,
    cyclic_factor_choices,
    decide,
    read_survey_keys,
    survey,
    write_survey_rows,
)
from .search import AUDIT_COLUMNS, ORDERS, SearchConfig, SearchStatus, audit_conjecture, search_exhaustive
from .torus import GraphError, TorusSpec

EXIT_OK, EXIT_NO, EXIT_UNDECIDED, EXIT_INPUT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _group(text: str) -> GroupSpec:
    try:
        return parse_group(text)
    except GroupError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _range(text: str) -> range:
    lo, sep, hi = text.partition("-")
    try:
        a, b = int(lo), int(hi) if sep else int(lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A or A-B, got {text!r}") from None
    if a > b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(a, b + 1)


def _instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--group", type=_group, required=True, help="modulus list, e.g. 2,2,3")


def _search_args(p: argparse.ArgumentParser, node_budget: int = 10**9) -> None:
    p.add_argument("--node-budget", type=int, default=node_budget)
    p.add_argument("--time-budget", type=float, default=None, help="seconds")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--symmetry", choices=("translate", "full"), default="translate")
    p.add_argument("--order", choices=ORDERS, default="neighbourhood")


def _config(args: argparse.Namespace) -> SearchConfig:
    return SearchConfig(
        node_budget=args.node_budget,
        time_budget=args.time_budget,
        parallel_width=args.workers,
        symmetry_level=args.symmetry,
        order=args.order,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="torusmagic", description="Group distance magic labelings of C_m x C_n tori.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a labeling file")
    p.add_argument("path")

    p = sub.add_parser("construct", help="build a labeling")
    _instance_args(p)
    p.add_argument("--method", choices=("auto", "square", "lcm-half"), default="auto")
    p.add_argument("--alpha", type=int, help="cyclic factor order for lcm-half (default: best feasible)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("decide", help="apply the existence rules")
    _instance_args(p)
    p.add_argument("--search-on-unknown", action="store_true")
    p.add_argument("--out", help="write the witness labeling here, if any")
    _search_args(p)

    p = sub.add_parser("search", help="exhaustive search")
    _instance_args(p)
    p.add_argument("--out")
    _search_args(p)

    p = sub.add_parser("survey", help="decide every group for ranges of m and n")
    p.add_argument("--m-range", type=_range, required=True, help="A-B")
    p.add_argument("--n-range", type=_range, required=True, help="A-B")
    p.add_argument("--out", required=True, help="CSV file")
    p.add_argument("--witness-dir")
    p.add_argument("--resume", action="store_true", help="skip rows already in --out")

    p = sub.add_parser("audit-conjecture", help="compare the conjectured criterion with known answers")
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--out", required=True, help="CSV file")
    p.add_argument("--certificate-dir", default=None)
    p.add_argument("--search-all", action="store_true", help="also search instances the rules decide")
    _search_args(p, node_budget=10**6)

    p = sub.add_parser("groups", help="list the Abelian groups of an order")
    p.add_argument("--order", type=int, required=True)
    return parser


def _cmd_verify(args) -> int:
    lab = read_labeling(args.path)
    report = verify(lab)
    if report.is_magic:
        print(f"magic: {lab.graph.describe()} over {lab.group.notation()}, mu = {report.magic_constant}")
        return EXIT_OK
    if not report.is_bijection:
        print(f"not a bijection: label {report.duplicate} repeats")
    else:
        v, want, got = report.first_violation
        print(f"not magic: vertex {v} has weight {got}, expected {want}")
    return EXIT_NO


def _cmd_construct(args) -> int:
    m, n, group = args.m, args.n, args.group
    TorusSpec(m, n)
    method = args.method
    if method == "auto":
        if m == n and m % 2 == 0:
            method = "square"
        elif cyclic_factor_choices(m, n, group):
            method = "lcm-half"
        else:
            print(
                f"no constructive method for C_{m} x C_{n} over {group.notation()}: "
                f"not a square torus and no cyclic factor of order divisible by lcm(m, n)/2"
            )
            return EXIT_UNDECIDED
    if method == "square":
        if m != n:
            raise ConstructionError("the square method needs m = n")
        lab = construct_square(n, group)
        detail = "square"
    else:
        choices = cyclic_factor_choices(m, n, group)
        if args.alpha is not None:
            choices = [c for c in choices if c[0] == args.alpha]
        if not choices:
            raise ConstructionError(f"{group.notation()} has no suitable cyclic factor for lcm-half")
        alpha, comp = choices[0]
        lab = construct_lcm_half(m, n, alpha, comp)
        detail = f"lcm-half alpha={alpha} A={comp.notation()}"
    write_labeling(lab, args.out)
    mu = verify(lab).magic_constant
    print(f"{detail}: wrote {args.out}, mu = {mu}")
    return EXIT_OK


def _report_search(outcome) -> None:
    print(f"search: {outcome.status} after {outcome.nodes_explored} nodes in {outcome.elapsed:.2f}s")


def _cmd_decide(args) -> int:
    dec = decide(args.m, args.n, args.group)
    print(f"{dec.status} [{dec.rule}] {dec.citation}")
    witness = dec.witness
    code = {Status.EXISTS: EXIT_OK, Status.NOT_EXISTS: EXIT_NO, Status.UNKNOWN: EXIT_UNDECIDED}[dec.status]
    if dec.status is Status.UNKNOWN and args.search_on_unknown:
        outcome = search_exhaustive(args.m, args.n, args.group, _config(args))
        _report_search(outcome)
        code = _search_code(outcome.status)
        witness = outcome.labeling
    if witness is not None and args.out:
        write_labeling(witness, args.out)
        print(f"witness written to {args.out}")
    return code


def _search_code(status: SearchStatus) -> int:
    return {SearchStatus.FOUND: EXIT_OK, SearchStatus.PROVEN_NONE: EXIT_NO}.get(status, EXIT_UNDECIDED)


def _cmd_search(args) -> int:
    outcome = search_exhaustive(args.m, args.n, args.group, _config(args))
    _report_search(outcome)
    if outcome.labeling is not None and args.out:
        write_labeling(outcome.labeling, args.out)
        print(f"witness written to {args.out}")
    return _search_code(outcome.status)


def _cmd_survey(args) -> int:
    skip = read_survey_keys(args.out) if args.resume else set()
    rows = survey(args.m_range, args.n_range, witness_dir=args.witness_dir, skip=skip)
    count = write_survey_rows(rows, args.out, append=args.resume)
    print(f"{count} rows written to {args.out} ({len(skip)} already present)")
    return EXIT_OK


def _cmd_audit(args) -> int:
    cert_dir = args.certificate_dir or str(Path(args.out).with_suffix("")) + "_certificates"
    report = audit_conjecture(args.max_order, _config(args), search_all=args.search_all, certificate_dir=cert_dir)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(AUDIT_COLUMNS)
        writer.writerows(report.csv_rows())
    print(report.summary())
    for row in report.candidates:
        print(f"candidate: m={row.m} n={row.n} group={row.group} -> {row.certificate}")
    return EXIT_OK


def _cmd_groups(args) -> int:
    for g in enumerate_groups(args.order):
        print(f"{str(g):<16} {g.notation():<28} exponent {exponent(g)}")
    return EXIT_OK


COMMANDS = {
    "verify": _cmd_verify,
    "construct": _cmd_construct,
    "decide": _cmd_decide,
    "search": _cmd_search,
    "survey": _cmd_survey,
    "audit-conjecture": _cmd_audit,
    "groups": _cmd_groups,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (GroupError, GraphError, LabelingError, ConstructionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
