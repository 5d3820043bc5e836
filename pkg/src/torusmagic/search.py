"""Exhaustive backtracking search for magic labelings of ``C_m □ C_n``.

Labels are handled as element indices (lexicographic order) with addition
and negation tables.  ``x_{0,0}`` is fixed to the identity: translating a
magic labeling of a regular graph keeps it magic, so this loses nothing.

Once the magic constant is known (at the first complete neighbourhood) a
vertex with a single unlabeled neighbour forces that neighbour's label.
"""

from __future__ import annotations

import enum
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

from .abelian import GroupSpec, enumerate_groups
from .labeling import Labeling, OrderMismatchError, to_document, verify
from .oracle import OutOfScopeError, Status, conjecture_predicate, decide
from .torus import TorusSpec, build_torus, diagonal

__all__ = [
    "SearchStatus",
    "SearchConfig",
    "SearchOutcome",
    "ORDERS",
    "variable_order",
    "search_exhaustive",
    "AuditRow",
    "AuditReport",
    "audit_conjecture",
]

ORDERS = ("neighbourhood", "row-major", "diagonal-major")
SYMMETRY_LEVELS = ("translate", "full")
SPLIT_DEPTH = 2


class SearchStatus(enum.Enum):
    FOUND = "Found"
    PROVEN_NONE = "ProvenNone"
    BUDGET_EXCEEDED = "BudgetExceeded"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SearchConfig:
    node_budget: int = 10**9
    time_budget: float | None = None  # seconds; None means no wall-clock limit
    parallel_width: int = 1
    symmetry_level: str = "translate"
    order: str = "neighbourhood"

    def __post_init__(self) -> None:
        if self.node_budget < 1:
            raise ValueError("node_budget must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time_budget must be positive")
        if self.parallel_width < 1:
            raise ValueError("parallel_width must be positive")
        if self.symmetry_level not in SYMMETRY_LEVELS:
            raise ValueError(f"symmetry_level must be one of {SYMMETRY_LEVELS}")
        if self.order not in ORDERS:
            raise ValueError(f"order must be one of {ORDERS}")


@dataclass(frozen=True)
class SearchOutcome:
    status: SearchStatus
    labeling: Labeling | None
    nodes_explored: int
    elapsed: float


def variable_order(m: int, n: int, order: str) -> list[int]:
    """Vertex visiting order.

    ``neighbourhood`` repeatedly completes the neighbourhood with the fewest
    unvisited vertices, so the magic constant is fixed after a handful of
    branchings and propagation starts early.
    """
    t = TorusSpec(m, n)
    if order == "row-major":
        return list(range(t.order))
    if order == "diagonal-major":
        return [t.index(i, j) for d in range(t.gcd) for i, j in diagonal(t, d)]
    if order != "neighbourhood":
        raise ValueError(f"unknown order {order!r}")
    adj = build_torus(m, n).adjacency
    placed = [0]
    seen = {0}
    while len(placed) < t.order:
        best = min(
            (u for u in range(t.order) if any(w not in seen for w in adj[u])),
            key=lambda u: sum(w not in seen for w in adj[u]),
        )
        for w in sorted(adj[best]):
            if w not in seen:
                seen.add(w)
                placed.append(w)
    return placed


def _symmetry_pairs(m: int, n: int, level: str) -> list[tuple[int, int]]:
    """Pairs ``(u, w)`` with ``l(u) < l(w)`` imposed by the automorphisms fixing ``x_{0,0}``.

    Reflecting rows or columns swaps the two vertical or the two horizontal
    neighbours of ``x_{0,0}``; for ``m = n`` the transpose swaps the two pairs.
    """
    if level == "translate":
        return []
    t = TorusSpec(m, n)
    a, b = t.index(0, 1), t.index(0, -1)
    c, d = t.index(1, 0), t.index(-1, 0)
    pairs = [(a, b), (c, d)]
    if m == n:
        pairs += [(a, c), (a, d)]
    return pairs


class _Budget(Exception):
    pass


class _Engine:
    """Mutable search state for one instance; one per process."""

    def __init__(self, m: int, n: int, moduli: Sequence[int], symmetry: str, order: str) -> None:
        self.m, self.n = m, n
        self.group = GroupSpec(tuple(moduli))
        elems = self.group.elements()
        self.N = len(elems)
        self.add = [[self.group.index(a + b) for b in elems] for a in elems]
        self.neg = [self.group.index(-a) for a in elems]
        graph = build_torus(m, n)
        self.graph = graph
        self.V = graph.vertex_count
        self.nb = [list(a) for a in graph.adjacency]
        # inc[v]: the vertices whose neighbourhood contains v (with multiplicity)
        self.inc: list[list[int]] = [[] for _ in range(self.V)]
        for u in range(self.V):
            for w in self.nb[u]:
                self.inc[w].append(u)
        self.order = variable_order(m, n, order)
        self.sym: list[list[tuple[int, int]]] = [[] for _ in range(self.V)]
        for u, w in _symmetry_pairs(m, n, symmetry):
            self.sym[u].append((u, w))
            self.sym[w].append((u, w))
        self.reset()

    def reset(self) -> None:
        self.lab = [-1] * self.V
        self.used = [False] * self.N
        self.missing = [len(a) for a in self.nb]
        self.psum = [0] * self.V
        self.mu = -1
        self.nodes = 0
        self.cap = 0
        self.deadline: float | None = None
        self.solution: list[int] | None = None
        trail: list[int] = []
        ok = self.assign(0, 0, trail)
        assert ok

    def assign(self, v: int, x: int, trail: list[int]) -> bool:
        """Label ``v`` with ``x`` and propagate; entries pushed on ``trail`` are undone by ``undo``."""
        lab, used, add = self.lab, self.used, self.add
        stack = [(v, x)]
        while stack:
            v, x = stack.pop()
            if lab[v] >= 0:
                if lab[v] != x:
                    return False
                continue
            if used[x]:
                return False
            for u, w in self.sym[v]:
                lu = x if u == v else lab[u]
                lw = x if w == v else lab[w]
                if lu >= 0 and lw >= 0 and lu >= lw:
                    return False
            lab[v] = x
            used[x] = True
            trail.append(v)
            fresh_mu = False
            for u in self.inc[v]:
                self.missing[u] -= 1
                self.psum[u] = add[self.psum[u]][x]
            for u in self.inc[v]:
                if self.missing[u] == 0:
                    if self.mu < 0:
                        self.mu = self.psum[u]
                        trail.append(-1)
                        fresh_mu = True
                    elif self.psum[u] != self.mu:
                        return False
            if self.mu >= 0:
                scan = range(self.V) if fresh_mu else self.inc[v]
                for u in scan:
                    if self.missing[u] == 1:
                        w = next(w for w in self.nb[u] if lab[w] < 0)
                        y = add[self.mu][self.neg[self.psum[u]]]
                        # fail before queueing: the forced label is already taken
                        if used[y]:
                            return False
                        stack.append((w, y))
        return True

    def undo(self, trail: list[int]) -> None:
        add, neg = self.add, self.neg
        while trail:
            v = trail.pop()
            if v < 0:
                self.mu = -1
                continue
            x = self.lab[v]
            self.lab[v] = -1
            self.used[x] = False
            for u in self.inc[v]:
                self.missing[u] += 1
                self.psum[u] = add[self.psum[u]][neg[x]]

    def next_vertex(self) -> int | None:
        lab = self.lab
        return next((v for v in self.order if lab[v] < 0), None)

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.cap:
            raise _Budget
        if self.deadline is not None and time.time() > self.deadline:
            raise _Budget

    def _rec(self) -> bool:
        self._tick()
        v = self.next_vertex()
        if v is None:
            self.solution = list(self.lab)
            return True
        for x in range(self.N):
            if self.used[x]:
                continue
            trail: list[int] = []
            ok = self.assign(v, x, trail) and self._rec()
            self.undo(trail)
            if ok:
                return True
        return False

    def prefixes(self, depth: int) -> Iterator[list[tuple[int, int]]]:
        """Consistent branching prefixes of the given depth, in lexicographic order."""

        def walk(path: list[tuple[int, int]]) -> Iterator[list[tuple[int, int]]]:
            v = self.next_vertex()
            if v is None or len(path) == depth:
                yield list(path)
                return
            for x in range(self.N):
                if self.used[x]:
                    continue
                trail: list[int] = []
                if self.assign(v, x, trail):
                    path.append((v, x))
                    yield from walk(path)
                    path.pop()
                self.undo(trail)

        yield from walk([])

    def run_prefix(self, prefix: Sequence[tuple[int, int]], cap: int, deadline: float | None):
        """Search below ``prefix``; returns ``(status, solution, nodes)``."""
        self.reset()
        self.nodes, self.cap, self.deadline = 0, cap, deadline
        for v, x in prefix:
            ok = self.assign(v, x, [])
            assert ok
        try:
            found = self._rec()
        except _Budget:
            return SearchStatus.BUDGET_EXCEEDED, None, self.nodes
        if found:
            return SearchStatus.FOUND, self.solution, self.nodes
        return SearchStatus.PROVEN_NONE, None, self.nodes


_worker: _Engine | None = None


def _init_worker(m: int, n: int, moduli: tuple[int, ...], symmetry: str, order: str) -> None:
    global _worker
    _worker = _Engine(m, n, moduli, symmetry, order)


def _run_task(args):
    prefix, cap, deadline = args
    return _worker.run_prefix(prefix, cap, deadline)


def search_exhaustive(m: int, n: int, group: GroupSpec, cfg: SearchConfig = SearchConfig()) -> SearchOutcome:
    """Decide by exhaustive search whether ``C_m □ C_n`` has a ``G``-distance magic labeling.

    The tree is split into the subtrees below the depth-2 branching prefixes.
    They are merged in lexicographic prefix order with a cumulative node
    count, so the status and the witness do not depend on ``parallel_width``
    (a wall-clock ``time_budget`` is the only nondeterministic limit).
    """
    t = TorusSpec(m, n)
    if group.order != t.order:
        raise OrderMismatchError(f"|G| = {group.order} but C_{m} □ C_{n} has {t.order} vertices")
    start = time.time()
    deadline = None if cfg.time_budget is None else start + cfg.time_budget
    engine = _Engine(m, n, group.moduli, cfg.symmetry_level, cfg.order)
    tasks = list(engine.prefixes(SPLIT_DEPTH))
    spent = 1 + len(tasks)
    if spent > cfg.node_budget:
        return SearchOutcome(SearchStatus.BUDGET_EXCEEDED, None, spent, time.time() - start)
    cap = cfg.node_budget - spent

    def finish(status: SearchStatus, solution: list[int] | None) -> SearchOutcome:
        lab = None
        if solution is not None:
            lab = Labeling(engine.graph, group, tuple(group.from_index(x) for x in solution))
            assert verify(lab).is_magic, "search produced a non-magic labeling"
        return SearchOutcome(status, lab, spent, time.time() - start)

    if cfg.parallel_width == 1:
        for prefix in tasks:
            status, sol, nodes = engine.run_prefix(prefix, cap - (spent - 1 - len(tasks)), deadline)
            spent += nodes
            if status is not SearchStatus.PROVEN_NONE:
                return finish(status, sol)
        return finish(SearchStatus.PROVEN_NONE, None)

    with ProcessPoolExecutor(
        max_workers=cfg.parallel_width,
        initializer=_init_worker,
        initargs=(m, n, group.moduli, cfg.symmetry_level, cfg.order),
    ) as pool:
        results = pool.map(_run_task, [(p, cap, deadline) for p in tasks], chunksize=max(1, len(tasks) // (8 * cfg.parallel_width)))
        used = 0
        for status, sol, nodes in results:
            used += nodes
            spent += nodes
            if used > cap:
                pool.shutdown(wait=False, cancel_futures=True)
                return finish(SearchStatus.BUDGET_EXCEEDED, None)
            if status is not SearchStatus.PROVEN_NONE:
                pool.shutdown(wait=False, cancel_futures=True)
                return finish(status, sol)
    return finish(SearchStatus.PROVEN_NONE, None)


@dataclass(frozen=True)
class AuditRow:
    m: int
    n: int
    group: GroupSpec
    predicate: bool
    decision_status: Status
    rule: str
    search_status: SearchStatus | None
    exists: bool | None  # None: unresolved
    certificate: str | None = None

    @property
    def cell(self) -> str:
        if self.exists is None:
            return "unresolved"
        return "consistent" if self.exists == self.predicate else "counterexample-candidate"

    @property
    def conflict(self) -> bool:
        """Search and the decision rules gave opposite definitive answers."""
        if self.search_status is None or self.decision_status is Status.UNKNOWN:
            return False
        if self.search_status is SearchStatus.FOUND:
            return self.decision_status is Status.NOT_EXISTS
        if self.search_status is SearchStatus.PROVEN_NONE:
            return self.decision_status is Status.EXISTS
        return False


AUDIT_COLUMNS = ["m", "n", "group", "predicate", "status", "rule", "search", "exists", "cell", "certificate"]


@dataclass
class AuditReport:
    max_order: int
    rows: list[AuditRow] = field(default_factory=list)
    expected: int = 0

    def matrix(self) -> dict[tuple[bool, str], int]:
        """Counts per (predicate, existence) cell, existence one of Exists/NotExists/Unresolved."""
        out: dict[tuple[bool, str], int] = {}
        for r in self.rows:
            key = (r.predicate, {True: "Exists", False: "NotExists", None: "Unresolved"}[r.exists])
            out[key] = out.get(key, 0) + 1
        return out

    @property
    def candidates(self) -> list[AuditRow]:
        return [r for r in self.rows if r.cell == "counterexample-candidate"]

    @property
    def complete(self) -> bool:
        return len(self.rows) == self.expected and all(
            r.cell != "counterexample-candidate" or r.certificate for r in self.rows
        )

    def summary(self) -> str:
        mat = self.matrix()
        lines = [f"audit mn <= {self.max_order}: {len(self.rows)} instances"]
        lines.append(f"{'predicate':>10} {'Exists':>8} {'NotExists':>10} {'Unresolved':>11}")
        for pred in (True, False):
            cells = [mat.get((pred, c), 0) for c in ("Exists", "NotExists", "Unresolved")]
            lines.append(f"{str(pred).lower():>10} {cells[0]:>8} {cells[1]:>10} {cells[2]:>11}")
        lines.append(f"counterexample candidates: {len(self.candidates)}")
        conflicts = sum(r.conflict for r in self.rows)
        if conflicts:
            lines.append(f"search/rule conflicts: {conflicts}")
        return "\n".join(lines)

    def csv_rows(self) -> Iterator[list[str]]:
        for r in self.rows:
            yield [
                str(r.m),
                str(r.n),
                str(r.group),
                str(r.predicate).lower(),
                str(r.decision_status),
                r.rule,
                "" if r.search_status is None else str(r.search_status),
                "" if r.exists is None else str(r.exists).lower(),
                r.cell,
                r.certificate or "",
            ]


def _audit_instances(max_order: int) -> Iterator[tuple[int, int, GroupSpec]]:
    for m in range(3, max_order // 3 + 1):
        for n in range(3, max_order // m + 1):
            if (m * n) % 2:
                continue
            for group in enumerate_groups(m * n):
                yield m, n, group


def audit_conjecture(
    max_order: int,
    cfg: SearchConfig = SearchConfig(),
    search_all: bool = False,
    certificate_dir: str | Path | None = None,
) -> AuditReport:
    """Compare the conjectured criterion with established existence for every even ``mn <= max_order``.

    Existence comes from ``decide``; ``Unknown`` instances (or all, with
    ``search_all``) are escalated to ``search_exhaustive``.  Instances where
    the criterion and an established answer disagree are counterexample
    candidates and get a certificate file in ``certificate_dir``.
    """
    if max_order < 1:
        raise OutOfScopeError("max_order must be positive")
    report = AuditReport(max_order)
    instances = list(_audit_instances(max_order))
    report.expected = len(instances)
    for m, n, group in instances:
        pred = conjecture_predicate(m, n, group)
        dec = decide(m, n, group)
        outcome = None
        if search_all or dec.status is Status.UNKNOWN:
            outcome = search_exhaustive(m, n, group, cfg)
        exists: bool | None = {Status.EXISTS: True, Status.NOT_EXISTS: False}.get(dec.status)
        witness = dec.witness
        if exists is None and outcome is not None:
            if outcome.status is SearchStatus.FOUND:
                exists, witness = True, outcome.labeling
            elif outcome.status is SearchStatus.PROVEN_NONE:
                exists = False
        row = AuditRow(m, n, group, pred, dec.status, dec.rule, outcome and outcome.status, exists)
        if row.cell == "counterexample-candidate":
            if certificate_dir is None:
                raise OutOfScopeError("counterexample candidate found but no certificate directory given")
            out = Path(certificate_dir)
            out.mkdir(parents=True, exist_ok=True)
            path = out / f"candidate_{m}x{n}_{'-'.join(map(str, group.moduli))}.json"
            cert = {
                "instance": {"m": m, "n": n, "moduli": list(group.moduli)},
                "predicate": pred,
                "exists": exists,
                "rule": dec.rule,
                "citation": dec.citation,
                "search": None if outcome is None else str(outcome.status),
                "witness": None if witness is None else to_document(witness),
            }
            path.write_text(json.dumps(cert, indent=2) + "\n")
            row = AuditRow(m, n, group, pred, dec.status, dec.rule, row.search_status, exists, str(path))
        report.rows.append(row)
    return report
