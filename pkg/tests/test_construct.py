import math

import pytest

from naive import is_magic as naive_is_magic
from torusmagic.abelian import GroupSpec, canonicalize, element_sum, enumerate_groups, exponent
from torusmagic.construct import (
    ConstructionError,
    RegularityError,
    build_hypercube_labeling,
    compose_product,
    construct_lcm_half,
    construct_square,
    hypercube_chunks,
    lcm_half_labeling,
    paired_cosets,
    square_coset_order,
    torus_as_hypercube,
    _square_by_diagonal_recursion,
)
from torusmagic.labeling import Labeling, verify
from torusmagic.torus import build_hypercube, build_torus


def _naive(lab):
    m, n = lab.graph.params
    return naive_is_magic(m, n, lab.group.moduli, {divmod(v, n): a.residues for v, a in enumerate(lab.labels)})


def test_paired_cosets_sum_to_b1():
    g = GroupSpec((4, 2, 3))
    h = frozenset(k * g.element([1, 0, 0]) for k in range(4))
    pc = paired_cosets(g, h)
    assert len(pc.pairs) == 3
    cls = {pc.system.coset_index(x) for pair in pc.pairs for x in pair}
    assert cls == set(range(6))
    assert all(a + b == pc.b1 for a, b in pc.pairs)


def test_paired_cosets_needs_even_quotient():
    g = GroupSpec((3,))
    with pytest.raises(ConstructionError):
        paired_cosets(g, frozenset([g.identity]))


@pytest.mark.parametrize("m, n", [(3, 4), (4, 3), (4, 6), (6, 9), (5, 10), (3, 8), (7, 4), (6, 6)])
def test_lcm_half_all_groups(m, n):
    k = math.lcm(m, n) // 2
    for g in enumerate_groups(m * n):
        if exponent(g) % k == 0:
            lab = lcm_half_labeling(m, n, g)
            assert verify(lab).is_magic and _naive(lab)


def test_lcm_half_preconditions():
    with pytest.raises(ConstructionError):
        construct_lcm_half(3, 5, 15)
    with pytest.raises(ConstructionError):
        construct_lcm_half(4, 6, 4, [6])  # 4 is not a multiple of lcm/2 = 6
    with pytest.raises(ConstructionError):
        construct_lcm_half(4, 6, 12, [3])
    lab = construct_lcm_half(4, 6, 6, [4])
    assert lab.group.moduli == (4, 2, 3) and verify(lab).is_magic


def test_square_coset_order_structure():
    sco = square_coset_order(GroupSpec((2, 2, 2, 2)), 4)
    assert sco.reps[0].is_identity()
    assert len(set(sco.system.coset_index(b) for b in sco.reps)) == 4
    assert sco.involution_count == 3
    assert (sco.iota + sco.iota).is_identity() and not sco.iota.is_identity()


def test_square_coset_order_missing_involution_lift():
    with pytest.raises(ConstructionError):
        square_coset_order(GroupSpec((16,)), 4)


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_square_all_groups(n):
    for g in enumerate_groups(n * n):
        lab = construct_square(n, g)
        rep = verify(lab)
        assert rep.is_magic and _naive(lab)
        if n % 4 == 0 and not element_sum(g).is_identity():
            # total perfect code: (n^2/4) mu is the sum of all elements
            assert (n * n // 4) * rep.magic_constant == element_sum(g)
            assert not rep.magic_constant.is_identity()
        else:
            assert rep.magic_constant.is_identity()


@pytest.mark.parametrize("n, moduli", [(18, (4, 3, 3, 3, 3)), (12, (16, 3, 3)), (14, (4, 7, 7))])
def test_square_without_cyclic_subgroup_of_half_order(n, moduli):
    # no element of order n/2 and (for n = 18) no involution lifts for the coset order
    g = GroupSpec(moduli)
    lab = construct_square(n, g)
    rep = verify(lab)
    assert rep.is_magic
    forced_nonzero = n % 4 == 0 and not element_sum(g).is_identity()
    assert rep.magic_constant.is_identity() != forced_nonzero


@pytest.mark.parametrize("n", [6, 8, 10, 12])
def test_diagonal_recursion_every_group(n):
    for g in enumerate_groups(n * n):
        lab = _square_by_diagonal_recursion(n, g, want_zero=False)
        assert lab is not None and verify(lab).is_magic


def test_cyclic_sylow_two_forbids_zero_constant():
    # every labeling of C_4 x C_4 over Z_16 has 4 mu = 8
    g = GroupSpec((16,))
    assert element_sum(g) == g.element([8])
    assert {4 * mu for mu in g.elements() if mu.residues[0] in (2, 6, 10, 14)} == {g.element([8])}
    assert verify(construct_square(4, g)).magic_constant == g.element([2])


def test_square_preconditions():
    with pytest.raises(ConstructionError):
        construct_square(5, GroupSpec((25,)))
    with pytest.raises(ConstructionError):
        construct_square(4, GroupSpec((4, 2)))


def test_compose_product_constant_is_pair():
    l1 = construct_square(4, GroupSpec((2, 2, 2, 2)))
    l2 = construct_square(4, GroupSpec((4, 4)))
    lab = compose_product(l1, l2)
    rep = verify(lab)
    assert rep.is_magic and lab.graph.degree == 8
    assert lab.group == canonicalize((2, 2, 2, 2, 4, 4))


def test_compose_product_exponent_condition():
    l1 = construct_square(4, GroupSpec((16,)))
    l2 = construct_square(4, GroupSpec((2, 2, 2, 2)))
    with pytest.raises(RegularityError):
        compose_product(l1, l2)


def test_compose_product_rejects_non_magic():
    g = GroupSpec((4, 4))
    elems = g.elements()
    # the lexicographic labeling (i, j) -> (i, j) is magic; swapping two labels breaks it
    elems[0], elems[1] = elems[1], elems[0]
    bad = Labeling(build_torus(4, 4), g, tuple(elems))
    assert not verify(bad).is_magic
    with pytest.raises(ConstructionError):
        compose_product(bad, bad)


def test_torus_as_hypercube():
    lab = torus_as_hypercube(construct_square(4, GroupSpec((4, 2, 2))))
    assert lab.graph == build_hypercube(4)
    assert verify(lab).is_magic
    with pytest.raises(ConstructionError):
        torus_as_hypercube(construct_lcm_half(3, 4, 12))


def test_hypercube_chunks():
    assert [c.moduli for c in hypercube_chunks(GroupSpec((4, 4, 4, 2, 2)))] == [(4, 4), (4, 2, 2)]
    with pytest.raises(ConstructionError):
        hypercube_chunks(GroupSpec((4, 2, 2, 2, 2)))
    with pytest.raises(ConstructionError):
        hypercube_chunks(GroupSpec((8, 2)))


@pytest.mark.parametrize("moduli", [(2,) * 4, (4, 4), (4, 4, 4, 4), (4, 2, 2, 2, 2, 2, 2), (4, 4, 2, 2, 2, 2)])
def test_hypercube_labelings(moduli):
    g = GroupSpec(moduli)
    d = int(math.log2(g.order))
    lab = build_hypercube_labeling(d, g)
    rep = verify(lab)
    assert rep.is_magic and rep.magic_constant.is_identity()


def test_hypercube_preconditions():
    with pytest.raises(ConstructionError):
        build_hypercube_labeling(6, GroupSpec((4, 4, 4)))
    with pytest.raises(ConstructionError):
        build_hypercube_labeling(4, GroupSpec((8, 2)))
