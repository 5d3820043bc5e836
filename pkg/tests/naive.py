"""Independent reference implementations used as test oracles.

Nothing here imports the package: groups are plain modulus tuples, elements
plain residue tuples, and tori are indexed by coordinates.
"""

import itertools


def add(moduli, a, b):
    return tuple((x + y) % q for x, y, q in zip(a, b, moduli))


def torus_weights(m, n, moduli, labels):
    """labels[(i, j)] -> residue tuple; returns the weight of every vertex."""
    out = {}
    for i in range(m):
        for j in range(n):
            w = tuple(0 for _ in moduli)
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                w = add(moduli, w, labels[((i + di) % m, (j + dj) % n)])
            out[(i, j)] = w
    return out


def is_magic(m, n, moduli, labels):
    order = 1
    for q in moduli:
        order *= q
    if len(set(labels.values())) != order or len(labels) != m * n:
        return False
    return len(set(torus_weights(m, n, moduli, labels).values())) == 1


def partition_count(k):
    """Number of partitions of k, by the standard dynamic programme over part sizes."""
    ways = [1] + [0] * k
    for part in range(1, k + 1):
        for total in range(part, k + 1):
            ways[total] += ways[total - part]
    return ways[k]


def factor(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def abelian_group_count(n):
    count = 1
    for e in factor(n).values():
        count *= partition_count(e)
    return count


def group_exponent(moduli):
    from math import lcm

    out = 1
    for q in moduli:
        out = lcm(out, q)
    return out


def all_elements(moduli):
    return list(itertools.product(*(range(q) for q in moduli)))
