"""Existence decisions for group distance magic labelings of ``C_m □ C_n``.

``decide`` runs a fixed cascade of rules and stops at the first that applies::

    R1  mn odd                                   -> NotExists
    R2  gcd(m, n) = 1                            -> Exists iff G is Z_mn or Z_2 x Z_{mn/2}
    R3  2 exp(G) min(f(m), f(n)) < lcm(m, n)     -> NotExists
    R4  2 exp(G) gcd(m, n) < lcm(m, n)           -> NotExists
    R5  m = n                                    -> Exists (square construction)
    R6  G = Z_alpha x A with lcm/2 | alpha       -> Exists (lcm-half construction)
    R7  otherwise                                -> Unknown
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from sympy import factorint

from .abelian import GroupError, GroupSpec, canonicalize, enumerate_groups, exponent, is_isomorphic
from .construct import ConstructionError, construct_lcm_half, construct_square
from .labeling import Labeling, OrderMismatchError, verify, write_labeling
from .torus import TorusSpec, f

__all__ = [
    "Status",
    "Decision",
    "OutOfScopeError",
    "has_cyclic_factor",
    "cyclic_factor_choices",
    "decide",
    "conjecture_predicate",
    "SurveyRow",
    "survey",
    "SURVEY_COLUMNS",
    "write_survey_rows",
    "read_survey_keys",
]


class Status(enum.Enum):
    EXISTS = "Exists"
    NOT_EXISTS = "NotExists"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value


class OutOfScopeError(ValueError):
    pass


@dataclass(frozen=True)
class Decision:
    status: Status
    rule: str
    citation: str
    witness: Labeling | None = None

    def __post_init__(self) -> None:
        if self.witness is not None:
            assert self.status is Status.EXISTS
            assert verify(self.witness).is_magic


def _check_instance(m: int, n: int, group: GroupSpec) -> TorusSpec:
    t = TorusSpec(m, n)
    if group.order != t.order:
        raise OrderMismatchError(f"|G| = {group.order} but C_{m} □ C_{n} has {t.order} vertices")
    return t


def has_cyclic_factor(group: GroupSpec, alpha: int) -> tuple[bool, GroupSpec | None]:
    """Whether ``group = Z_alpha x A``; on success also returns ``A``.

    ``Z_alpha`` is a direct factor iff for every prime ``p | alpha`` the
    primary decomposition has a factor ``Z_{p^v}`` with ``v = v_p(alpha)``.
    """
    if alpha < 1 or group.order % alpha:
        raise GroupError(f"alpha = {alpha} does not divide |G| = {group.order}")
    rest = list(group.moduli)
    for p, v in factorint(alpha).items():
        if p**v not in rest:
            return False, None
        rest.remove(p**v)
    return True, canonicalize(rest)


def cyclic_factor_choices(m: int, n: int, group: GroupSpec) -> list[tuple[int, GroupSpec]]:
    """Feasible ``(alpha, A)`` for the lcm-half construction, best first.

    Multiples of ``lcm`` come before odd multiples of ``lcm/2``; within each
    class larger ``alpha`` comes first.
    """
    t = _check_instance(m, n, group)
    l = t.lcm
    if (m * n) % 2 or l % 2:
        return []
    half = l // 2
    out = []
    for alpha in range(half, group.order + 1, half):
        if group.order % alpha:
            continue
        ok, comp = has_cyclic_factor(group, alpha)
        if ok:
            out.append((alpha, comp))
    return sorted(out, key=lambda ac: (ac[0] % l != 0, -ac[0]))


def _elementary_two_power_context(m: int, n: int, group: GroupSpec) -> str:
    def is_pow2(x: int) -> bool:
        return x & (x - 1) == 0

    if is_pow2(m) and is_pow2(n) and set(group.moduli) == {2}:
        return (
            "; C_{2^a} □ C_{2^b} over an elementary Abelian 2-group has a labeling"
            " if and only if a = b"
        )
    return ""


def decide(m: int, n: int, group: GroupSpec) -> Decision:
    t = _check_instance(m, n, group)
    l, g = t.lcm, t.gcd
    mn = t.order
    r = exponent(group)

    if mn % 2:
        return Decision(Status.NOT_EXISTS, "R1", "m and n both odd: no group distance magic labeling")

    if g == 1:
        if is_isomorphic(group, (mn,)):
            lab = construct_lcm_half(m, n, mn)
        elif is_isomorphic(group, (2, mn // 2)):
            lab = construct_lcm_half(m, n, mn // 2, canonicalize((2,)))
        else:
            return Decision(
                Status.NOT_EXISTS,
                "R2",
                f"gcd(m, n) = 1: a labeling exists only for Z_{mn} and Z_2 x Z_{mn // 2}",
            )
        return Decision(
            Status.EXISTS,
            "R2",
            f"gcd(m, n) = 1 and G is Z_{mn} or Z_2 x Z_{mn // 2}; witness from the lcm-half construction",
            lab,
        )

    bound3 = 2 * r * min(f(m), f(n))
    if bound3 < l:
        return Decision(
            Status.NOT_EXISTS,
            "R3",
            f"diagonal repetition bound: 2 exp(G) min(f(m), f(n)) = {bound3} < lcm(m, n) = {l}"
            + _elementary_two_power_context(m, n, group),
        )

    bound4 = 2 * r * g
    if bound4 < l:
        return Decision(
            Status.NOT_EXISTS,
            "R4",
            f"gcd bound: 2 exp(G) gcd(m, n) = {bound4} < lcm(m, n) = {l}",
        )

    if m == n:
        citation = f"C_{n} □ C_{n} with n even has a labeling over every group of order {mn}"
        try:
            witness = construct_square(n, group)
        except ConstructionError:
            witness = None
            citation += "; no explicit witness: neither square construction applies"
        return Decision(Status.EXISTS, "R5", citation + _elementary_two_power_context(m, n, group), witness)

    choices = cyclic_factor_choices(m, n, group)
    if choices:
        alpha, comp = choices[0]
        return Decision(
            Status.EXISTS,
            "R6",
            f"G = Z_{alpha} x A with alpha ≡ 0 mod lcm(m, n)/2 = {l // 2}, A = {comp.notation()}",
            construct_lcm_half(m, n, alpha, comp),
        )

    return Decision(Status.UNKNOWN, "R7", "no rule applies")


def conjecture_predicate(m: int, n: int, group: GroupSpec) -> bool:
    """``2 exp(G) min(f(m), f(n), gcd(m, n)) >= lcm(m, n)``, conjectured to characterize existence."""
    t = _check_instance(m, n, group)
    if t.order % 2:
        raise OutOfScopeError(f"mn = {t.order} is odd; the predicate only covers even orders")
    return 2 * exponent(group) * min(f(m), f(n), t.gcd) >= t.lcm


SURVEY_COLUMNS = ["m", "n", "group", "status", "rule", "conjecture_predicate", "witness_file"]


@dataclass(frozen=True)
class SurveyRow:
    m: int
    n: int
    group: GroupSpec
    decision: Decision
    predicate: bool | None
    witness_file: str | None = None

    def as_csv(self) -> list[str]:
        pred = "" if self.predicate is None else str(self.predicate).lower()
        return [
            str(self.m),
            str(self.n),
            str(self.group),
            str(self.decision.status),
            self.decision.rule,
            pred,
            self.witness_file or "",
        ]


def survey(
    m_range: Iterable[int],
    n_range: Iterable[int],
    witness_dir: str | Path | None = None,
    skip: set[tuple[int, int, str]] | frozenset = frozenset(),
) -> Iterator[SurveyRow]:
    """One row per ``(m, n, G)``, ``m`` outer, ``n`` inner, groups in enumeration order.

    Rows whose ``(m, n, str(G))`` key is in ``skip`` are not produced.
    """
    ms, ns = list(m_range), list(n_range)
    for m in ms:
        for n in ns:
            TorusSpec(m, n)
            for group in enumerate_groups(m * n):
                if (m, n, str(group)) in skip:
                    continue
                dec = decide(m, n, group)
                pred = None if (m * n) % 2 else conjecture_predicate(m, n, group)
                path = None
                if witness_dir is not None and dec.witness is not None:
                    out = Path(witness_dir)
                    out.mkdir(parents=True, exist_ok=True)
                    path = out / f"torus_{m}x{n}_{'-'.join(map(str, group.moduli))}.json"
                    write_labeling(dec.witness, path)
                    path = str(path)
                yield SurveyRow(m, n, group, dec, pred, path)


def read_survey_keys(path: str | Path) -> set[tuple[int, int, str]]:
    """``(m, n, group)`` keys already present in a survey CSV (empty if the file is missing)."""
    p = Path(path)
    if not p.exists():
        return set()
    with p.open(newline="") as fh:
        reader = csv.DictReader(fh)
        return {(int(r["m"]), int(r["n"]), r["group"]) for r in reader}


def write_survey_rows(rows: Iterable[SurveyRow], path: str | Path, append: bool = False) -> int:
    """Write (or append) rows, flushing each so an interrupted sweep can resume."""
    p = Path(path)
    fresh = not (append and p.exists() and p.stat().st_size > 0)
    count = 0
    with p.open("w" if fresh else "a", newline="") as fh:
        writer = csv.writer(fh)
        if fresh:
            writer.writerow(SURVEY_COLUMNS)
        for row in rows:
            writer.writerow(row.as_csv())
            fh.flush()
            count += 1
    return count

