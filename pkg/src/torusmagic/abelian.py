"""Finite Abelian groups in primary (prime-power) canonical form.

A group is described by its list of prime-power moduli, e.g. ``Z_4 x Z_3`` is
``GroupSpec((4, 3))``.  Elements are residue vectors.  Everything here is
exact integer arithmetic; groups are small enough (a few hundred elements at
most) that subgroups are handled as explicit element sets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

from sympy import factorint
from sympy.utilities.iterables import partitions

__all__ = [
    "GroupError",
    "IncompatibleGroupsError",
    "NotASubgroupError",
    "GroupSpec",
    "GroupElement",
    "CosetSystem",
    "canonicalize",
    "residue_converter",
    "parse_group",
    "direct_product",
    "exponent",
    "order_of",
    "involutions",
    "find_element_of_order",
    "subgroup_of_order",
    "quotient",
    "enumerate_groups",
    "is_isomorphic",
    "element_sum",
]


class GroupError(ValueError):
    """Invalid group data or an impossible group-theoretic request."""


class IncompatibleGroupsError(GroupError):
    pass


class NotASubgroupError(GroupError):
    pass


def _prime_power(q: int) -> tuple[int, int]:
    fac = factorint(q)
    if len(fac) != 1:
        raise GroupError(f"{q} is not a prime power")
    ((p, a),) = fac.items()
    return p, a


def _canonical_key(q: int) -> tuple[int, int]:
    p, a = _prime_power(q)
    return p, -a


@dataclass(frozen=True)
class GroupSpec:
    """A finite Abelian group ``Z_{q_1} x ... x Z_{q_k}`` with prime-power ``q_i``.

    ``moduli`` must already be canonical (sorted by prime, then by descending
    exponent); use :func:`canonicalize` to build one from arbitrary moduli.
    The empty tuple is the trivial group.
    """

    moduli: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "moduli", tuple(int(q) for q in self.moduli))
        for q in self.moduli:
            if q < 2:
                raise GroupError(f"invalid modulus {q}: moduli must be >= 2")
            _prime_power(q)
        if list(self.moduli) != sorted(self.moduli, key=_canonical_key):
            raise GroupError(f"moduli {list(self.moduli)} are not in canonical order")

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @cached_property
    def identity(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank)

    def element(self, residues: Iterable[int]) -> GroupElement:
        res = tuple(int(x) for x in residues)
        if len(res) != self.rank:
            raise GroupError(f"expected {self.rank} residues, got {len(res)}")
        for x, q in zip(res, self.moduli):
            if not 0 <= x < q:
                raise GroupError(f"residue {x} out of range for modulus {q}")
        return GroupElement(self, res)

    def elements(self) -> list[GroupElement]:
        """All elements in lexicographic order of their residue vectors."""
        return [GroupElement(self, r) for r in itertools.product(*map(range, self.moduli))]

    def index(self, a: GroupElement) -> int:
        """Position of ``a`` in :meth:`elements` (mixed-radix value)."""
        i = 0
        for x, q in zip(a.residues, self.moduli):
            i = i * q + x
        return i

    def from_index(self, i: int) -> GroupElement:
        res = []
        for q in reversed(self.moduli):
            i, x = divmod(i, q)
            res.append(x)
        return GroupElement(self, tuple(reversed(res)))

    def notation(self) -> str:
        return " x ".join(f"Z_{q}" for q in self.moduli) or "trivial"

    def __str__(self) -> str:
        return ",".join(map(str, self.moduli)) or "1"


@dataclass(frozen=True, order=True)
class GroupElement:
    group: GroupSpec = field(compare=False)
    residues: tuple[int, ...]

    def _check(self, other: GroupElement) -> None:
        if self.group != other.group:
            raise IncompatibleGroupsError(
                f"elements of {self.group.notation()} and {other.group.notation()} cannot be combined"
            )

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return GroupElement(
            self.group,
            tuple((x + y) % q for x, y, q in zip(self.residues, other.residues, self.group.moduli)),
        )

    def __neg__(self) -> GroupElement:
        return GroupElement(self.group, tuple(-x % q for x, q in zip(self.residues, self.group.moduli)))

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self + (-other)

    def __rmul__(self, k: int) -> GroupElement:
        return GroupElement(self.group, tuple(k * x % q for x, q in zip(self.residues, self.group.moduli)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.group == other.group and self.residues == other.residues

    def __hash__(self) -> int:
        return hash(self.residues)

    def is_identity(self) -> bool:
        return not any(self.residues)

    def __repr__(self) -> str:
        return f"({','.join(map(str, self.residues))})"


def _split(moduli: Sequence[int]) -> list[tuple[int, int, int]]:
    """(source coordinate, prime power, sort key) for each primary factor."""
    parts = []
    for src, q in enumerate(moduli):
        q = int(q)
        if q < 2:
            raise GroupError(f"invalid modulus {q}: moduli must be >= 2")
        for p, a in factorint(q).items():
            parts.append((src, p**a, (p, -a)))
    # stable: equal prime powers keep input order
    parts.sort(key=lambda t: t[2])
    return parts


def canonicalize(moduli: Iterable[int]) -> GroupSpec:
    """Primary decomposition of ``Z_{m_1} x ... x Z_{m_k}``.

    >>> canonicalize([12]).moduli
    (4, 3)
    >>> canonicalize([2, 6]).moduli
    (2, 2, 3)
    """
    return GroupSpec(tuple(q for _, q, _ in _split(list(moduli))))


def residue_converter(moduli: Sequence[int]) -> tuple[GroupSpec, Callable[[Sequence[int]], GroupElement]]:
    """Canonical group for ``moduli`` plus the CRT isomorphism onto it."""
    parts = _split(moduli)
    spec = GroupSpec(tuple(q for _, q, _ in parts))

    def convert(residues: Sequence[int]) -> GroupElement:
        if len(residues) != len(moduli):
            raise GroupError(f"expected {len(moduli)} residues, got {len(residues)}")
        for x, q in zip(residues, moduli):
            if not 0 <= int(x) < q:
                raise GroupError(f"residue {x} out of range for modulus {q}")
        return GroupElement(spec, tuple(int(residues[src]) % q for src, q, _ in parts))

    return spec, convert


def parse_group(text: str) -> GroupSpec:
    """Parse the comma-separated modulus notation used by the CLI and files.

    ``"1"`` or an empty string denote the trivial group.
    """
    text = text.strip()
    if text in ("", "1"):
        return GroupSpec(())
    try:
        moduli = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise GroupError(f"cannot parse group {text!r}: expected comma-separated integers") from None
    return canonicalize(moduli)


def direct_product(
    g1: GroupSpec, g2: GroupSpec
) -> tuple[GroupSpec, Callable[[GroupElement, GroupElement], GroupElement]]:
    """``g1 x g2`` in canonical form and the map ``(a, b) -> (a, b)``."""
    spec, convert = residue_converter(g1.moduli + g2.moduli)

    def pair(a: GroupElement, b: GroupElement) -> GroupElement:
        if a.group != g1 or b.group != g2:
            raise IncompatibleGroupsError("pair components do not belong to the factor groups")
        return convert(a.residues + b.residues)

    return spec, pair


def exponent(g: GroupSpec) -> int:
    return math.lcm(*g.moduli) if g.moduli else 1


def order_of(a: GroupElement) -> int:
    return math.lcm(*(q // math.gcd(x, q) for x, q in zip(a.residues, a.group.moduli))) if a.residues else 1


def involutions(g: GroupSpec) -> list[GroupElement]:
    """Elements of order exactly two, in lexicographic order."""
    choices = [(0, q // 2) if q % 2 == 0 else (0,) for q in g.moduli]
    return [GroupElement(g, r) for r in itertools.product(*choices) if any(r)]


def element_sum(g: GroupSpec) -> GroupElement:
    """Sum of all elements of ``g``.

    Zero unless the Sylow 2-subgroup is cyclic and nontrivial, in which case it
    is the unique involution.
    """
    inv = involutions(g)
    return inv[0] if len(inv) == 1 else g.identity


def find_element_of_order(g: GroupSpec, k: int) -> GroupElement:
    """Deterministic element of order exactly ``k``.

    For each prime power ``p^v`` exactly dividing ``k`` the first (largest)
    ``p``-factor ``Z_{p^a}`` with ``a >= v`` gets residue ``p^(a-v)``.
    """
    if k < 1 or exponent(g) % k:
        raise GroupError(f"no element of order {k} in {g.notation()} (exponent {exponent(g)})")
    res = [0] * g.rank
    for p, v in factorint(k).items():
        for i, q in enumerate(g.moduli):
            if q % p**v == 0:
                res[i] = q // p**v
                break
    return GroupElement(g, tuple(res))


def _span(g: GroupSpec, gens: Sequence[tuple[GroupElement, int]]) -> frozenset[GroupElement]:
    elems = {g.identity}
    for gen, order in gens:
        elems = {x + k * gen for x in elems for k in range(order)}
    return frozenset(elems)


def subgroup_of_order(g: GroupSpec, n: int) -> frozenset[GroupElement]:
    """A subgroup of order ``n`` built coordinatewise.

    Per prime ``p`` the ``p``-factors are visited in canonical order and each
    contributes ``d_i = min(a_i, remaining)`` to ``v_p(n)``; the factor
    ``Z_{p^a}`` then contributes the cyclic subgroup generated by ``p^(a-d)``.
    """
    if n < 1 or g.order % n:
        raise GroupError(f"{n} does not divide |G| = {g.order}")
    need = dict(factorint(n))
    gens = []
    for i, q in enumerate(g.moduli):
        p, a = _prime_power(q)
        d = min(a, need.get(p, 0))
        if d:
            need[p] -= d
            res = [0] * g.rank
            res[i] = p ** (a - d)
            gens.append((GroupElement(g, tuple(res)), p**d))
    if any(need.values()):
        raise GroupError(f"greedy construction found no subgroup of order {n} in {g.notation()}")
    return _span(g, gens)


def _check_subgroup(g: GroupSpec, h: frozenset[GroupElement]) -> None:
    if g.identity not in h:
        raise NotASubgroupError("subset does not contain the identity")
    for a in h:
        if a.group != g:
            raise NotASubgroupError("subset contains elements of another group")
    for a in h:
        for b in h:
            if a + b not in h:
                raise NotASubgroupError(f"subset not closed: {a} + {b} missing")


@dataclass(frozen=True)
class CosetSystem:
    """The cosets of ``subgroup`` in ``parent`` with one chosen representative each.

    ``representatives[0]`` always belongs to the identity coset.
    """

    parent: GroupSpec
    subgroup: frozenset[GroupElement]
    representatives: tuple[GroupElement, ...]
    _index: dict[GroupElement, int] = field(repr=False, compare=False)

    def coset_index(self, a: GroupElement) -> int:
        return self._index[a]

    def representative(self, a: GroupElement) -> GroupElement:
        return self.representatives[self._index[a]]

    def coset(self, i: int) -> list[GroupElement]:
        r = self.representatives[i]
        return sorted(r + h for h in self.subgroup)

    def __len__(self) -> int:
        return len(self.representatives)

    def with_representatives(self, reps: Sequence[GroupElement]) -> CosetSystem:
        """Same partition, new representatives (one per coset, any order)."""
        idx = [self._index[r] for r in reps]
        if sorted(idx) != list(range(len(self))):
            raise GroupError("need exactly one representative per coset")
        if idx[0] != self._index[self.parent.identity]:
            raise GroupError("first representative must lie in the identity coset")
        remap = {old: new for new, old in enumerate(idx)}
        return CosetSystem(
            self.parent,
            self.subgroup,
            tuple(reps),
            {a: remap[i] for a, i in self._index.items()},
        )


def quotient(g: GroupSpec, h: Iterable[GroupElement]) -> CosetSystem:
    """Partition ``g`` into cosets of ``h``; representatives are lexicographic minima."""
    h = frozenset(h)
    _check_subgroup(g, h)
    index: dict[GroupElement, int] = {}
    reps = []
    for a in g.elements():
        if a in index:
            continue
        i = len(reps)
        reps.append(a)
        for x in h:
            index[a + x] = i
    return CosetSystem(g, h, tuple(reps), index)


def _prime_power_options(p: int, e: int) -> list[tuple[int, ...]]:
    opts = []
    for part in partitions(e):
        opts.append(tuple(p**k for k, c in sorted(part.items(), reverse=True) for _ in range(c)))
    return opts


def enumerate_groups(order: int) -> list[GroupSpec]:
    """Every Abelian group of the given order up to isomorphism, sorted by moduli."""
    if order < 1:
        raise GroupError(f"group order must be positive, got {order}")
    per_prime = [_prime_power_options(p, e) for p, e in sorted(factorint(order).items())]
    groups = [GroupSpec(tuple(itertools.chain.from_iterable(c))) for c in itertools.product(*per_prime)]
    return sorted(groups, key=lambda s: s.moduli)


def is_isomorphic(g1: GroupSpec | Sequence[int], g2: GroupSpec | Sequence[int]) -> bool:
    def canon(g):
        return g if isinstance(g, GroupSpec) else canonicalize(g)

    return canon(g1).moduli == canon(g2).moduli

