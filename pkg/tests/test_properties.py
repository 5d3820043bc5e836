"""Property suites: group axioms, involutions, diagonals, verifier invariances."""

import math
import random

from hypothesis import given
from hypothesis import strategies as st

from naive import is_magic as naive_is_magic
from torusmagic.abelian import canonicalize, enumerate_groups, exponent, involutions, order_of
from torusmagic.construct import construct_square, lcm_half_labeling
from torusmagic.labeling import Labeling, translate, verify
from torusmagic.torus import TorusSpec, backward_diagonal, build_torus, diagonal

prime_powers = st.sampled_from([2, 3, 4, 5, 7, 8, 9, 16, 25, 27])
groups = st.lists(prime_powers, min_size=0, max_size=4).map(canonicalize)
tori = st.tuples(st.integers(3, 12), st.integers(3, 12)).map(lambda mn: TorusSpec(*mn))


@st.composite
def group_with_elements(draw, count=3):
    g = draw(groups)
    elems = [g.element([draw(st.integers(0, q - 1)) for q in g.moduli]) for _ in range(count)]
    return g, elems


@given(group_with_elements())
def test_group_axioms(ge):
    g, (a, b, c) = ge
    zero = g.identity
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + zero == a
    assert a + (-a) == zero
    assert a - b == a + (-b)
    assert order_of(a) * a == zero


@given(group_with_elements(count=1))
def test_element_order_divides_group_order(ge):
    g, (a,) = ge
    assert g.order % order_of(a) == 0
    assert all(not (k * a).is_identity() for k in range(1, order_of(a)))


@given(groups)
def test_index_is_a_bijection_onto_lex_order(g):
    elems = g.elements()
    assert elems == sorted(elems)
    assert [g.index(a) for a in elems] == list(range(g.order))
    assert all(g.from_index(i) == a for i, a in enumerate(elems))


@given(groups)
def test_involution_count_is_two_power_minus_one(g):
    inv = involutions(g)
    brute = [a for a in g.elements() if not a.is_identity() and (a + a).is_identity()]
    assert inv == brute
    even_factors = sum(1 for q in g.moduli if q % 2 == 0)
    assert len(inv) == 2**even_factors - 1
    # odd whenever the group has even order
    if g.order % 2 == 0:
        assert len(inv) % 2 == 1


@given(tori)
def test_diagonals_partition_vertices(t):
    seen = []
    for j in range(t.gcd):
        d = diagonal(t, j)
        assert len(d) == t.lcm
        assert len(set(d)) == t.lcm
        for (i1, j1), (i2, j2) in zip(d, d[1:] + d[:1]):
            assert (i2 - i1) % t.m == 1 and (j2 - j1) % t.n == 1
        seen += d
    assert sorted(seen) == [(i, j) for i in range(t.m) for j in range(t.n)]


@given(tori)
def test_backward_diagonals_partition_vertices(t):
    seen = []
    for j in range(t.gcd):
        d = backward_diagonal(t, j)
        assert len(set(d)) == t.lcm
        seen += d
    assert sorted(seen) == [(i, j) for i in range(t.m) for j in range(t.n)]


def _random_labeling(m, n, g, rng):
    elems = g.elements()
    rng.shuffle(elems)
    return Labeling(build_torus(m, n), g, tuple(elems))


def _as_dict(lab):
    m, n = lab.graph.params
    return {(v // n, v % n): a.residues for v, a in enumerate(lab.labels)}


@given(st.integers(3, 6), st.integers(3, 6), st.integers(0, 10**6))
def test_verify_agrees_with_naive_on_random_labelings(m, n, seed):
    rng = random.Random(seed)
    g = rng.choice(enumerate_groups(m * n))
    lab = _random_labeling(m, n, g, rng)
    assert verify(lab).is_magic == naive_is_magic(m, n, g.moduli, _as_dict(lab))


def _magic_instances():
    out = []
    for m, n in [(3, 4), (4, 6), (4, 4), (6, 6), (3, 8), (5, 6)]:
        for g in enumerate_groups(m * n):
            if m == n:
                out.append(construct_square(n, g))
            elif exponent(g) % (math.lcm(m, n) // 2) == 0:
                out.append(lcm_half_labeling(m, n, g))
    return out


MAGIC = _magic_instances()


@given(st.integers(0, len(MAGIC) - 1), st.integers(0, 10**6))
def test_verify_agrees_with_naive_on_perturbed_magic(k, seed):
    lab = MAGIC[k]
    m, n = lab.graph.params
    rng = random.Random(seed)
    labels = list(lab.labels)
    if seed % 3:
        i, j = rng.sample(range(len(labels)), 2)
        labels[i], labels[j] = labels[j], labels[i]
    pert = Labeling(lab.graph, lab.group, tuple(labels))
    assert verify(pert).is_magic == naive_is_magic(m, n, lab.group.moduli, _as_dict(pert))


@given(st.integers(0, len(MAGIC) - 1), st.integers(0, 10**6))
def test_translation_keeps_labelings_magic(k, seed):
    lab = MAGIC[k]
    g = lab.group.from_index(seed % lab.group.order)
    before = verify(lab)
    after = verify(translate(lab, g))
    assert after.is_magic
    assert after.magic_constant == before.magic_constant + 4 * g


@given(st.integers(0, len(MAGIC) - 1), st.integers(0, 10**6))
def test_group_automorphisms_keep_labelings_magic(k, seed):
    lab = MAGIC[k]
    g = lab.group
    # multiplying every coordinate by a unit is an automorphism
    units = [u for u in range(1, 2 * g.order + 1) if all(math.gcd(u, q) == 1 for q in g.moduli)]
    u = units[seed % len(units)]
    image = Labeling(lab.graph, g, tuple(u * a for a in lab.labels))
    rep = verify(image)
    assert rep.is_magic
    assert rep.magic_constant == u * verify(lab).magic_constant


@given(st.integers(0, len(MAGIC) - 1), st.integers(0, 3), st.integers(0, 20))
def test_graph_automorphisms_keep_labelings_magic(k, flips, shift):
    lab = MAGIC[k]
    m, n = lab.graph.params
    t = TorusSpec(m, n)

    def image(i, j):
        if flips & 1:
            i = -i
        if flips & 2:
            j = -j
        return t.index(i + shift, j + 3 * shift)

    labels = [None] * t.order
    for v, a in enumerate(lab.labels):
        labels[image(*t.coords(v))] = a
    rep = verify(Labeling(lab.graph, lab.group, tuple(labels)))
    assert rep.is_magic and rep.magic_constant == verify(lab).magic_constant


@given(st.integers(3, 7), st.integers(3, 7))
def test_partial_duplicate_is_not_bijection(m, n):
    g = enumerate_groups(m * n)[0]
    elems = g.elements()
    elems[1] = elems[0]
    rep = verify(Labeling(build_torus(m, n), g, tuple(elems)))
    assert not rep.is_bijection and not rep.is_magic and rep.duplicate == elems[0]
