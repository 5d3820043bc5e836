"""Graph model for ``C_m □ C_n`` tori, hypercubes and their Cartesian products.

Torus vertices ``x_{i,j}`` (``0 <= i < m``, ``0 <= j < n``) are stored
row-major as ``i * n + j``.  Hypercube vertices are ``d``-bit codes, adjacent
when they differ in one bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

__all__ = [
    "GraphError",
    "TorusSpec",
    "Graph",
    "neighbors",
    "diagonal",
    "backward_diagonal",
    "f",
    "build_torus",
    "build_hypercube",
    "cartesian_product",
    "gray_code",
    "torus_to_hypercube_map",
]


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class TorusSpec:
    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 3 or self.n < 3:
            raise GraphError(f"cycle lengths must be >= 3, got C_{self.m} □ C_{self.n}")

    @property
    def order(self) -> int:
        return self.m * self.n

    @property
    def lcm(self) -> int:
        return math.lcm(self.m, self.n)

    @property
    def gcd(self) -> int:
        return math.gcd(self.m, self.n)

    def index(self, i: int, j: int) -> int:
        return (i % self.m) * self.n + (j % self.n)

    def coords(self, v: int) -> tuple[int, int]:
        return divmod(v, self.n)

    def _check(self, i: int, j: int) -> None:
        if not (0 <= i < self.m and 0 <= j < self.n):
            raise IndexError(f"vertex ({i},{j}) outside C_{self.m} □ C_{self.n}")


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph given by adjacency lists.

    ``kind`` is ``"torus"`` (params ``(m, n)``), ``"hypercube"`` (``(d,)``) or
    ``"product"`` (params are the two factor graphs).
    """

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    kind: str
    params: tuple[Any, ...]

    @property
    def degree(self) -> int | None:
        """Common degree, or ``None`` if the graph is not regular."""
        degs = {len(a) for a in self.adjacency}
        return degs.pop() if len(degs) == 1 else None

    @property
    def torus(self) -> TorusSpec:
        if self.kind != "torus":
            raise GraphError(f"{self.describe()} is not a torus")
        return TorusSpec(*self.params)

    def edges(self) -> set[tuple[int, int]]:
        return {(u, v) for u, adj in enumerate(self.adjacency) for v in adj if u < v}

    def describe(self) -> str:
        if self.kind == "torus":
            return f"C_{self.params[0]} □ C_{self.params[1]}"
        if self.kind == "hypercube":
            return f"Q_{self.params[0]}"
        return f"({self.params[0].describe()}) □ ({self.params[1].describe()})"


def neighbors(t: TorusSpec, i: int, j: int) -> list[tuple[int, int]]:
    """``x_{i,j-1}, x_{i,j+1}, x_{i+1,j}, x_{i-1,j}`` with wrap-around."""
    t._check(i, j)
    m, n = t.m, t.n
    return [(i, (j - 1) % n), (i, (j + 1) % n), ((i + 1) % m, j), ((i - 1) % m, j)]


def diagonal(t: TorusSpec, j: int) -> list[tuple[int, int]]:
    """The diagonal ``x_{0,j}, x_{1,j+1}, ...`` of length ``lcm(m, n)``.

    The ``gcd(m, n)`` diagonals ``j = 0 .. gcd-1`` partition the vertices.
    """
    if not 0 <= j < t.gcd:
        raise IndexError(f"diagonal index {j} outside 0..{t.gcd - 1}")
    return [(s % t.m, (j + s) % t.n) for s in range(t.lcm)]


def backward_diagonal(t: TorusSpec, j: int) -> list[tuple[int, int]]:
    """``x_{0,j+1}, x_{1,j}, x_{2,j-1}, ...``: +1 in rows, -1 in columns."""
    if not 0 <= j < t.gcd:
        raise IndexError(f"backward diagonal index {j} outside 0..{t.gcd - 1}")
    return [(s % t.m, (j + 1 - s) % t.n) for s in range(t.lcm)]


def f(m: int) -> int:
    """m/4, m/2 or m according as m is 0 mod 4, 2 mod 4 or odd."""
    if m < 1:
        raise ValueError("f is defined for positive integers")
    if m % 4 == 0:
        return m // 4
    if m % 2 == 0:
        return m // 2
    return m


def build_torus(m: int, n: int) -> Graph:
    t = TorusSpec(m, n)
    adj = tuple(
        tuple(t.index(a, b) for a, b in neighbors(t, i, j)) for i in range(m) for j in range(n)
    )
    return Graph(m * n, adj, "torus", (m, n))


def build_hypercube(d: int) -> Graph:
    if d < 1:
        raise GraphError(f"hypercube dimension must be >= 1, got {d}")
    adj = tuple(tuple(v ^ (1 << k) for k in range(d)) for v in range(1 << d))
    return Graph(1 << d, adj, "hypercube", (d,))


def cartesian_product(g1: Graph, g2: Graph) -> Graph:
    """``g1 □ g2`` with vertex ``(x, y)`` stored as ``x * |V(g2)| + y``.

    Two hypercubes give a hypercube (``x * 2^d2 + y`` is the concatenated bit
    code); anything else gives a ``"product"`` graph.
    """
    n2 = g2.vertex_count
    adj = []
    for x in range(g1.vertex_count):
        for y in range(n2):
            adj.append(
                tuple(x2 * n2 + y for x2 in g1.adjacency[x]) + tuple(x * n2 + y2 for y2 in g2.adjacency[y])
            )
    if g1.kind == g2.kind == "hypercube":
        d = g1.params[0] + g2.params[0]
        canonical = build_hypercube(d)
        assert all(set(a) == set(b) for a, b in zip(adj, canonical.adjacency))
        return canonical
    return Graph(g1.vertex_count * n2, tuple(adj), "product", (g1, g2))


def gray_code(k: int) -> int:
    return k ^ (k >> 1)


def torus_to_hypercube_map() -> list[int]:
    """Isomorphism ``C_4 □ C_4 -> Q_4``: ``x_{i,j}`` maps to ``gray(i) * 4 + gray(j)``.

    Consecutive 2-bit Gray codes around the 4-cycle differ in one bit.
    """
    return [gray_code(i) * 4 + gray_code(j) for i in range(4) for j in range(4)]
