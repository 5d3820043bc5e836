import pytest
from hypothesis import given
from hypothesis import strategies as st

from naive import abelian_group_count, all_elements, group_exponent
from torusmagic.abelian import (
    GroupError,
    GroupSpec,
    IncompatibleGroupsError,
    NotASubgroupError,
    canonicalize,
    direct_product,
    element_sum,
    enumerate_groups,
    exponent,
    find_element_of_order,
    involutions,
    is_isomorphic,
    order_of,
    parse_group,
    quotient,
    residue_converter,
    subgroup_of_order,
)


@pytest.mark.parametrize(
    "moduli, canonical",
    [
        ([12], (4, 3)),
        ([2, 6], (2, 2, 3)),
        ([6, 2], (2, 2, 3)),
        ([3, 4, 2], (4, 2, 3)),
        ([36], (4, 9)),
        ([15, 10], (2, 3, 5, 5)),
        ([], ()),
    ],
)
def test_canonicalize(moduli, canonical):
    assert canonicalize(moduli).moduli == canonical


def test_noncanonical_spec_rejected():
    with pytest.raises(GroupError):
        GroupSpec((3, 4))
    with pytest.raises(GroupError):
        GroupSpec((6,))
    with pytest.raises(GroupError):
        canonicalize([0])


def test_parse_group():
    assert parse_group("2,2,3").moduli == (2, 2, 3)
    assert parse_group("12").moduli == (4, 3)
    assert parse_group("1").order == 1
    with pytest.raises(GroupError):
        parse_group("2,x")


def test_residue_converter_is_crt():
    spec, convert = residue_converter([6])
    assert spec.moduli == (2, 3)
    assert [convert([x]).residues for x in range(6)] == [(0, 0), (1, 1), (0, 2), (1, 0), (0, 1), (1, 2)]
    with pytest.raises(GroupError):
        convert([6])


def test_mixing_groups_rejected():
    a = canonicalize([4]).element([1])
    b = canonicalize([2, 2]).element([1, 0])
    with pytest.raises(IncompatibleGroupsError):
        a + b


@pytest.mark.parametrize("order", list(range(1, 130)))
def test_enumerate_groups_matches_partition_count(order):
    groups = enumerate_groups(order)
    assert len(groups) == abelian_group_count(order)
    assert len({g.moduli for g in groups}) == len(groups)
    assert all(g.order == order for g in groups)
    assert [g.moduli for g in groups] == sorted(g.moduli for g in groups)


def test_enumerate_groups_examples():
    assert [g.moduli for g in enumerate_groups(16)] == [(2, 2, 2, 2), (4, 2, 2), (4, 4), (8, 2), (16,)]
    assert [len(enumerate_groups(n * n)) for n in (4, 6, 8, 10)] == [5, 4, 11, 4]
    with pytest.raises(GroupError):
        enumerate_groups(0)


@given(st.lists(st.sampled_from([2, 3, 4, 6, 8, 9, 12]), max_size=3))
def test_exponent_matches_naive(moduli):
    g = canonicalize(moduli)
    assert exponent(g) == group_exponent(moduli or [1])
    assert exponent(g) == max((order_of(a) for a in g.elements()), default=1)


def test_element_sum_is_involution_iff_sylow2_cyclic():
    for order in (8, 12, 16, 18, 24, 36):
        for g in enumerate_groups(order):
            brute = g.identity
            for a in g.elements():
                brute = brute + a
            assert element_sum(g) == brute
            assert (not brute.is_identity()) == (len(involutions(g)) == 1)


@pytest.mark.parametrize("moduli", [(8, 2), (4, 3), (2, 2, 3, 5), (9, 3), (16,)])
def test_find_element_of_order(moduli):
    g = GroupSpec(moduli)
    for k in range(1, exponent(g) + 1):
        if exponent(g) % k == 0:
            assert order_of(find_element_of_order(g, k)) == k
    with pytest.raises(GroupError):
        find_element_of_order(g, exponent(g) * 2)


@pytest.mark.parametrize("moduli", [(4, 4), (8, 2), (4, 2, 2), (2, 2, 3, 3), (4, 9), (8, 8)])
def test_subgroup_and_quotient(moduli):
    g = GroupSpec(moduli)
    for n in range(1, g.order + 1):
        if g.order % n:
            continue
        h = subgroup_of_order(g, n)
        assert len(h) == n
        q = quotient(g, h)
        assert len(q) == g.order // n
        assert q.representatives[0] == g.identity
        cosets = [frozenset(q.coset(i)) for i in range(len(q))]
        assert sum(map(len, cosets)) == g.order and len(frozenset().union(*cosets)) == g.order
        for a in g.elements():
            assert a in cosets[q.coset_index(a)]
            assert q.representative(a) - a in h


def test_quotient_rejects_non_subgroup():
    g = GroupSpec((4,))
    with pytest.raises(NotASubgroupError):
        quotient(g, {g.identity, g.element([1])})


def test_with_representatives():
    g = GroupSpec((4, 2))
    h = subgroup_of_order(g, 2)
    q = quotient(g, h)
    reps = [g.identity] + [r + next(iter(h - {g.identity})) for r in q.representatives[1:]]
    q2 = q.with_representatives(reps)
    assert q2.representatives == tuple(reps)
    with pytest.raises(GroupError):
        q.with_representatives(reps[:1] * len(q))


def test_direct_product():
    g1, g2 = GroupSpec((2,)), GroupSpec((3,))
    spec, pair = direct_product(g1, g2)
    assert spec.moduli == (2, 3)
    assert pair(g1.element([1]), g2.element([2])).residues == (1, 2)
    elems = {pair(a, b) for a in g1.elements() for b in g2.elements()}
    assert len(elems) == 6


def test_is_isomorphic():
    assert is_isomorphic((2, 6), (12,)) is False
    assert is_isomorphic((2, 15), (30,))
    assert is_isomorphic([4, 3], [12])


def test_element_listing_matches_naive():
    g = GroupSpec((4, 2, 3))
    assert [a.residues for a in g.elements()] == all_elements((4, 2, 3))
