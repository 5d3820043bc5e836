"""Explicit group distance magic labelings of cycle products and hypercubes.

All constructors work along diagonals of the torus.  On a diagonal
``d_0, d_1, ..., d_{l-1}`` the weight of ``d_i`` only involves the sums of
two consecutive labels on the neighbouring diagonals, so every construction
here controls those pair sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .abelian import (
    CosetSystem,
    GroupElement,
    GroupSpec,
    canonicalize,
    direct_product,
    element_sum,
    exponent,
    find_element_of_order,
    order_of,
    quotient,
    subgroup_of_order,
)
from .labeling import Labeling, translate, verify
from .torus import (
    TorusSpec,
    build_torus,
    cartesian_product,
    diagonal,
    torus_to_hypercube_map,
    build_hypercube,
)

__all__ = [
    "ConstructionError",
    "RegularityError",
    "PairedCosets",
    "SquareCosetOrder",
    "paired_cosets",
    "square_coset_order",
    "construct_lcm_half",
    "lcm_half_labeling",
    "construct_square",
    "compose_product",
    "torus_as_hypercube",
    "hypercube_chunks",
    "build_hypercube_labeling",
]


class ConstructionError(ValueError):
    pass


class RegularityError(ConstructionError):
    pass


@dataclass(frozen=True)
class PairedCosets:
    """Cosets of ``H`` paired as ``(h_i, h_i')`` with ``h_i + h_i' = b1`` exactly."""

    system: CosetSystem
    b1: GroupElement
    pairs: tuple[tuple[GroupElement, GroupElement], ...]


def paired_cosets(group: GroupSpec, subgroup: frozenset[GroupElement]) -> PairedCosets:
    system = quotient(group, subgroup)
    if len(system) % 2:
        raise ConstructionError(f"quotient of order {len(system)} is odd; cosets cannot be paired")
    doubles = {system.coset_index(r + r) for r in system.representatives}
    b1 = next(r for i, r in enumerate(system.representatives) if i not in doubles)
    pairs = []
    used: set[int] = set()
    for i, r in enumerate(system.representatives):
        if i in used:
            continue
        partner = b1 - r
        j = system.coset_index(partner)
        used.update((i, j))
        pairs.append((r, partner))
    return PairedCosets(system, b1, tuple(pairs))


def _place(t: TorusSpec, group: GroupSpec, rows: Sequence[Sequence[GroupElement]]) -> Labeling:
    """Labeling from per-diagonal label sequences ``rows[j][s]`` for ``d^j_s``."""
    labels: list[GroupElement | None] = [None] * t.order
    for j, seq in enumerate(rows):
        for (i, jj), a in zip(diagonal(t, j), seq):
            labels[t.index(i, jj)] = a
    return Labeling(build_torus(t.m, t.n), group, tuple(labels))


def _transpose(lab: Labeling) -> Labeling:
    m, n = lab.graph.params
    labels = [lab.labels[j * n + i] for i in range(n) for j in range(m)]
    return Labeling(build_torus(n, m), lab.group, tuple(labels))


def lcm_half_labeling(m: int, n: int, group: GroupSpec) -> Labeling:
    """Paired-coset labeling of ``C_m □ C_n`` over any group with an element of order ``lcm/2``.

    With ``h`` of order ``k = lcm/2`` and ``H = <h>``, diagonal ``D^j`` carries
    the coset pair ``(h_j, h_j')``::

        l(d^j_{2i}) = i h + h_j,      l(d^j_{2i+1}) = -(i h + h_j) + b1

    so consecutive labels on every diagonal sum alternately to ``b1`` and
    ``h + b1`` and every weight is ``h + 2 b1``.
    """
    t = TorusSpec(m, n)
    if t.order % 2:
        raise ConstructionError(f"C_{m} □ C_{n} has odd order {t.order}")
    if group.order != t.order:
        raise ConstructionError(f"|G| = {group.order} but C_{m} □ C_{n} has {t.order} vertices")
    if m % 2:
        # the wrap from D^{d-1} back to D^0 shifts positions by a multiple of
        # the first cycle length, which must be even to keep the pair parity
        return _transpose(lcm_half_labeling(n, m, group))
    k = t.lcm // 2
    h = find_element_of_order(group, k)
    pc = paired_cosets(group, frozenset(i * h for i in range(k)))
    rows = []
    for j in range(t.gcd):
        hj = pc.pairs[j][0]
        seq = []
        for i in range(k):
            a = i * h + hj
            seq += [a, -a + pc.b1]
        rows.append(seq)
    return _place(t, group, rows)


def construct_lcm_half(m: int, n: int, alpha: int, complement: GroupSpec | Sequence[int] = ()) -> Labeling:
    """``Z_alpha x A``-distance magic labeling of ``C_m □ C_n`` for ``alpha ≡ 0 (mod lcm/2)``."""
    t = TorusSpec(m, n)
    comp = complement if isinstance(complement, GroupSpec) else canonicalize(complement)
    if t.order % 2:
        raise ConstructionError(f"mn = {t.order} is odd")
    if alpha < 1 or alpha % (t.lcm // 2):
        raise ConstructionError(f"alpha = {alpha} is not a multiple of lcm({m},{n})/2 = {t.lcm // 2}")
    if alpha * comp.order != t.order:
        raise ConstructionError(f"|Z_{alpha} x A| = {alpha * comp.order} differs from mn = {t.order}")
    group = canonicalize((alpha,) + comp.moduli)
    return lcm_half_labeling(m, n, group)


@dataclass(frozen=True)
class SquareCosetOrder:
    """Representatives ``b_0 .. b_{n-1}`` of ``G/H`` for the square construction.

    ``b_0 = 0``, then lifts of the quotient involutions that are involutions of
    ``G`` themselves, then pairs with ``b_{i+1} = -b_i`` exactly.
    """

    system: CosetSystem
    reps: tuple[GroupElement, ...]
    involution_count: int
    iota: GroupElement

    def phi(self, x: GroupElement) -> GroupElement:
        if len(self.reps) % 4 == 0:
            return x + self.iota
        return -x + self.iota


def square_coset_order(group: GroupSpec, n: int) -> SquareCosetOrder:
    sub = subgroup_of_order(group, n)
    system = quotient(group, sub)
    zero = group.identity
    inv_lifts = []
    others = []
    for idx, r in enumerate(system.representatives):
        if idx == 0:
            continue
        if system.coset_index(r + r) == 0:
            lifts = [x for x in system.coset(idx) if (x + x).is_identity()]
            if not lifts:
                raise ConstructionError(f"quotient involution {r} + H has no involution of G in it")
            inv_lifts.append(lifts[0])
        else:
            others.append(r)
    reps = [zero, *inv_lifts]
    paired: set[int] = set()
    for r in others:
        i = system.coset_index(r)
        if i in paired:
            continue
        paired.update((i, system.coset_index(-r)))
        reps += [r, -r]
    iota = min(x for x in sub if not x.is_identity() and (x + x).is_identity())
    if n % 4 == 2 and any(x + x == iota for x in sub):
        raise ConstructionError("iota is a double in H; the pairing -x + iota has a fixed point")
    return SquareCosetOrder(system.with_representatives(reps), tuple(reps), len(inv_lifts), iota)


def _square_by_coset_order(n: int, group: GroupSpec) -> Labeling:
    sco = square_coset_order(group, n)
    b = sco.reps
    hs = []
    seen: set[GroupElement] = set()
    for x in sorted(sco.system.subgroup):
        if x not in seen:
            hs.append(x)
            seen.update((x, sco.phi(x)))
    rows: list[list[GroupElement]] = [[group.identity] * n for _ in range(n)]
    half = n // 2
    for i in range(half):
        rows[0][i] = hs[i]
        rows[0][half + i] = sco.phi(hs[i])

    def alt(i: int, x: GroupElement, delta: GroupElement) -> GroupElement:
        return x + delta if i % 2 == 0 else x - delta

    for i in range(n):
        rows[2][i] = alt(i, -rows[0][(i + 1) % n], b[2])
    for r in (1, 3):
        for i in range(n):
            rows[r][i] = alt(i, rows[r - 1][i], b[r] - b[r - 1])
    for r in range(4, n):
        for i in range(n):
            rows[r][i] = alt(i, rows[r - 4][(i + 2) % n], b[r] - b[r - 4])
    return _place(TorusSpec(n, n), group, rows)


def _cyclic_subgroups(group: GroupSpec, k: int) -> Iterator[tuple[GroupElement, frozenset[GroupElement]]]:
    seen = set()
    for g in group.elements():
        if order_of(g) != k:
            continue
        sub = frozenset(i * g for i in range(k))
        if sub not in seen:
            seen.add(sub)
            yield g, sub


def _match_pairs(
    classes: int, sub: Sequence[Sequence[int]], counts: dict[int, int]
) -> list[tuple[int, int]] | None:
    """Partition quotient classes into pairs ``{a, t - a}`` with ``counts[t]`` pairs of type ``t``."""
    used = [False] * classes
    out: list[tuple[int, int]] = []

    def search(start: int) -> bool:
        a = next((c for c in range(start, classes) if not used[c]), None)
        if a is None:
            return True
        used[a] = True
        for t in counts:
            if not counts[t]:
                continue
            partner = sub[t][a]
            if partner == a or used[partner]:
                continue
            used[partner] = True
            counts[t] -= 1
            out.append((t, a))
            if search(a + 1):
                return True
            out.pop()
            counts[t] += 1
            used[partner] = False
        used[a] = False
        return False

    return out if search(0) else None


def _square_by_diagonal_recursion(n: int, group: GroupSpec, want_zero: bool) -> Labeling | None:
    """Labeling of ``C_n □ C_n`` grown from the first two diagonals.

    With pair sums ``S_r(s) = l(d^r_s) + l(d^r_{s+1})`` the weight of ``d^r_s``
    is ``S_{r-1}(s) + S_{r+1}(s-1)``, so every magic labeling satisfies
    ``l(d^r_s) = -l(d^{r-2}_{s+1}) + c_r(s)`` with ``c_r`` alternating between
    ``gamma_r`` and ``mu - gamma_r``.  Unrolled from ``x = D^0`` (or ``D^1``)::

        l(d^{2t}_s) = (-1)^t x_{s+t} + C_t(s mod 2),   C_t(0) + C_t(1) = t mu

    ``C_t(0)`` is free.  If the even and odd positions of ``x`` each fill a coset
    of a subgroup ``K`` of order ``n/2``, so does every derived diagonal, and
    bijectivity reduces to matching cosets of ``K``.  Closing up at ``D^n = D^0``
    needs ``x_{s+n/2} = x_s - iota`` for an involution ``iota`` of ``K`` when
    ``4 | n``, and ``x_{s+n/2} = kappa - x_s`` with ``mu = 2 kappa`` otherwise.
    """
    k = n // 2
    fours = {4 * a for a in group.elements()}
    period = 4 if n % 4 == 0 else 2
    for sub in _order_k_subgroups(group, k):
        q = quotient(group, sub)
        reps = q.representatives
        nq = len(reps)
        cls = q.coset_index
        qsub = [[cls(reps[t] - reps[a]) for a in range(nq)] for t in range(nq)]
        q4 = {cls(x) for x in fours}
        total = cls(sum(reps, group.identity))
        ks = sorted(sub)
        for types in _beta_patterns(q, period, q4 if want_zero else None):
            # the pairs cover Q once, so the type classes must add up to the sum of Q
            if cls((n // period) * sum((reps[c] for c in types), group.identity)) != total:
                continue
            counts: dict[int, int] = {}
            for r in range(n):
                counts[types[r % period]] = counts.get(types[r % period], 0) + 1
            matching = _match_pairs(nq, qsub, dict(counts))
            if matching is None:
                continue
            pools: dict[int, list[int]] = {}
            for t, a in matching:
                pools.setdefault(t, []).append(a)
            if period == 4:
                mus = [reps[cls(reps[types[0]] + reps[types[2]])] + y for y in ks]
                mu = next(x for x in mus if not want_zero or x in fours)
                iota = next(y for y in ks if not y.is_identity() and (y + y).is_identity())
                closers = [iota, iota]
            else:
                pair = _lift_kappas(reps[types[0]], reps[types[1]], ks, fours if want_zero else None)
                if pair is None:
                    continue
                closers = list(pair)
                mu = 2 * closers[0]
            rows: list[list[GroupElement]] = [[] for _ in range(n)]
            for fam in (0, 1):
                first = [pools[types[(2 * t + fam) % period]].pop(0) for t in range(k)]
                a = reps[first[0]]
                if period == 4:
                    b = reps[cls(reps[types[fam]] - a)]
                else:
                    b = closers[fam] - a
                x = _base_diagonal(n, a, b, ks, period, closers[fam])
                for t in range(k):
                    u = reps[first[t]]
                    ce = group.identity if t == 0 else (u - a if t % 2 == 0 else u + b)
                    co = (t % 2) * mu - ce
                    sign = -1 if t % 2 else 1
                    rows[2 * t + fam] = [sign * x[(s + t) % n] + (co if s % 2 else ce) for s in range(n)]
            return _place(TorusSpec(n, n), group, rows)
    return None


def _order_k_subgroups(group: GroupSpec, k: int) -> Iterator[frozenset[GroupElement]]:
    first = subgroup_of_order(group, k)
    yield first
    for _, sub in _cyclic_subgroups(group, k):
        if sub != first:
            yield sub


def _base_diagonal(
    n: int, a: GroupElement, b: GroupElement, ks: Sequence[GroupElement], period: int, closer: GroupElement
) -> list[GroupElement]:
    """First diagonal of a family: ``a + K`` at even and ``b + K`` at odd positions.

    With ``4 | n`` it satisfies ``x_{s+n/2} = x_s - iota``; otherwise
    ``x_{s+n/2} = kappa - x_s``, which requires ``b + K = kappa - a + K``.
    """
    k = n // 2
    x: list[GroupElement] = [a] * n
    if period == 4:
        iota = closer
        half: list[GroupElement] = []
        seen: set[GroupElement] = set()
        for y in ks:
            if y not in seen:
                half.append(y)
                seen.update((y, y + iota))
        for s in range(k):
            x[s] = (a if s % 2 == 0 else b) + half[s // 2]
            x[s + k] = x[s] - iota
        return x
    kappa = closer
    evens = [a + y for y in ks]
    lead = (k + 1) // 2
    for s in range(k):
        x[s] = evens[s // 2] if s % 2 == 0 else kappa - evens[lead + s // 2]
        x[s + k] = kappa - x[s]
    return x


def _lift_kappas(
    c0: GroupElement, c1: GroupElement, ks: Sequence[GroupElement], fours: set[GroupElement] | None
) -> tuple[GroupElement, GroupElement] | None:
    """``kappa in c0 + K`` and ``kappa' in c1 + K`` with ``2 kappa = 2 kappa'`` (in ``4G`` if asked)."""
    for y0 in ks:
        k0 = c0 + y0
        if fours is not None and k0 + k0 not in fours:
            continue
        for y1 in ks:
            k1 = c1 + y1
            if k1 + k1 == k0 + k0:
                return k0, k1
    return None


def _beta_patterns(q: CosetSystem, period: int, q4: set[int] | None) -> Iterator[tuple[int, ...]]:
    reps = q.representatives
    cls = q.coset_index
    nq = len(reps)
    if period == 4:
        for b0 in range(nq):
            for b2 in range(nq):
                s = cls(reps[b0] + reps[b2])
                if q4 is not None and s not in q4:
                    continue
                for b1 in range(nq):
                    yield b0, b1, b2, cls(reps[b0] + reps[b2] - reps[b1])
    else:
        for b0 in range(nq):
            s = cls(reps[b0] + reps[b0])
            if q4 is not None and s not in q4:
                continue
            for b1 in range(nq):
                if cls(reps[b1] + reps[b1]) == s:
                    yield b0, b1


def _normalize_constant(lab: Labeling, mu: GroupElement) -> Labeling:
    """Translate so the magic constant is the least element of ``mu + 4G``."""
    best = min(lab.group.elements(), key=lambda t: mu + 4 * t)
    return translate(lab, best)


def construct_square(n: int, group: GroupSpec) -> Labeling:
    """``G``-distance magic labeling of ``C_n □ C_n`` for even ``n`` and ``|G| = n^2``.

    The coset-order construction gives magic constant 0 whenever every
    involution of ``G/H`` lifts to an involution of ``G``.  Otherwise the
    labeling grown from the first two diagonals is used and translated so
    the constant is 0.  That is impossible when ``4 | n`` and the Sylow 2-subgroup of ``G`` is
    cyclic: ``C_n □ C_n`` then has a vertex set meeting every neighbourhood
    exactly once, forcing ``(n^2/4) mu`` to equal the (nonzero) sum of all
    elements of ``G``.  In that case the constant is only normalized.
    """
    if n < 3:
        raise ConstructionError(f"cycle length {n} < 3 is not supported")
    if n % 2:
        raise ConstructionError(f"n = {n} is odd; the square construction needs even n")
    if group.order != n * n:
        raise ConstructionError(f"|G| = {group.order} but C_{n} □ C_{n} has {n * n} vertices")
    try:
        lab = _square_by_coset_order(n, group)
    except ConstructionError:
        lab = None
    if lab is not None:
        report = verify(lab)
        if report.is_magic and report.magic_constant.is_identity():
            return lab
    zero_possible = not (n % 4 == 0 and not element_sum(group).is_identity())
    lab = None
    if zero_possible:
        lab = _square_by_diagonal_recursion(n, group, want_zero=True)
    if lab is None:
        lab = _square_by_diagonal_recursion(n, group, want_zero=False)
    if lab is None:
        raise ConstructionError(f"no construction of C_{n} □ C_{n} over {group.notation()} applies")
    report = verify(lab)
    if not report.is_magic:
        raise ConstructionError(f"internal error: square labeling over {group.notation()} is not magic")
    return _normalize_constant(lab, report.magic_constant)


def compose_product(l1: Labeling, l2: Labeling) -> Labeling:
    """Labeling ``(x, y) -> (l1(x), l2(y))`` of the Cartesian product of the two graphs.

    The weight picks up ``deg(G2) * l1(x)`` in the first coordinate and
    ``deg(G1) * l2(y)`` in the second, so ``exp(G1) | deg(G2)`` and
    ``exp(G2) | deg(G1)`` are required.
    """
    reports = (verify(l1), verify(l2))
    for idx, rep in enumerate(reports, 1):
        if not rep.is_magic:
            raise ConstructionError(f"factor {idx} is not a magic labeling")
    d1, d2 = l1.graph.degree, l2.graph.degree
    if d1 is None or d2 is None:
        raise RegularityError("both factor graphs must be regular")
    e1, e2 = exponent(l1.group), exponent(l2.group)
    if d2 % e1 or d1 % e2:
        raise RegularityError(
            f"need exp(G1) | deg(G2) and exp(G2) | deg(G1); got exponents {e1}, {e2} and degrees {d1}, {d2}"
        )
    graph = cartesian_product(l1.graph, l2.graph)
    group, pair = direct_product(l1.group, l2.group)
    labels = tuple(pair(a, b) for a in l1.labels for b in l2.labels)
    return Labeling(graph, group, labels)


def torus_as_hypercube(lab: Labeling) -> Labeling:
    """Transport a labeling of ``C_4 □ C_4`` to ``Q_4`` along the Gray-code isomorphism."""
    if lab.graph.kind != "torus" or lab.graph.params != (4, 4):
        raise ConstructionError("only C_4 □ C_4 is isomorphic to a hypercube")
    labels: list[GroupElement | None] = [None] * 16
    for v, code in enumerate(torus_to_hypercube_map()):
        labels[code] = lab.labels[v]
    return Labeling(build_hypercube(4), lab.group, tuple(labels))


def hypercube_chunks(group: GroupSpec) -> list[GroupSpec]:
    """Split a group of exponent <= 4 into order-16 factors ``Z_4^2``, ``Z_4 x Z_2^2``, ``Z_2^4``."""
    if any(q not in (2, 4) for q in group.moduli):
        raise ConstructionError(f"{group.notation()} has exponent > 4 or odd part")
    fours = group.moduli.count(4)
    twos = group.moduli.count(2)
    chunks = []
    while fours >= 2:
        chunks.append((4, 4))
        fours -= 2
    if fours:
        if twos < 2:
            raise ConstructionError(f"{group.notation()} does not split into order-16 factors")
        chunks.append((4, 2, 2))
        twos -= 2
    while twos >= 4:
        chunks.append((2, 2, 2, 2))
        twos -= 4
    if twos:
        raise ConstructionError(f"{group.notation()} does not split into order-16 factors")
    return [GroupSpec(c) for c in chunks]


def build_hypercube_labeling(d: int, group: GroupSpec) -> Labeling:
    """``G``-distance magic labeling of ``Q_d``, ``4 | d``, ``|G| = 2^d``, ``exp(G) <= 4``."""
    if d < 4 or d % 4:
        raise ConstructionError(f"d = {d} is not a positive multiple of 4")
    if group.order != 2**d:
        raise ConstructionError(f"|G| = {group.order} but Q_{d} has {2**d} vertices")
    if exponent(group) > 4:
        raise ConstructionError(f"exp({group.notation()}) = {exponent(group)} > 4")
    parts = [torus_as_hypercube(construct_square(4, c)) for c in hypercube_chunks(group)]
    lab = parts[0]
    for part in parts[1:]:
        lab = compose_product(lab, part)
    assert lab.group == group
    return lab

