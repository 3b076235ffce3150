import itertools

import pytest
from hypothesis import given

from tambara.errors import GroupValidationError, ResourceBoundError
from tambara.groups import (
    cyclic,
    direct_product,
    from_table,
    is_subconjugate,
    klein4,
    parse_group_ref,
    symmetric,
    trivial_group,
)

from conftest import groups


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _brute_subgroups(G):
    """Every subset closed under multiplication that contains the identity."""
    out = set()
    for r in range(1, G.order + 1):
        for combo in itertools.combinations(range(1, G.order), r - 1):
            s = {0, *combo}
            if all(G.mul[a][b] in s for a in s for b in s):
                out.add(tuple(sorted(s)))
    return out


@given(groups)
def test_table_axioms(G):
    e = G.identity
    for a in G.elements:
        assert G.mul[e][a] == a == G.mul[a][e]
        assert G.mul[a][G.inv[a]] == e
    for a, b, c in itertools.product(G.elements, repeat=3):
        assert G.mul[G.mul[a][b]][c] == G.mul[a][G.mul[b][c]]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 8, 12])
def test_cyclic_lattice_has_one_subgroup_per_divisor(n):
    assert len(cyclic(n).lattice) == len(_divisors(n))


@pytest.mark.parametrize(
    "G, count",
    [(klein4(), 5), (symmetric(3), 6), (symmetric(4), 30), (direct_product(cyclic(2), cyclic(4)), 8)],
)
def test_lattice_sizes(G, count):
    assert len(G.lattice) == count


@pytest.mark.parametrize("G", [cyclic(4), klein4(), symmetric(3), cyclic(6)])
def test_lattice_matches_brute_force(G):
    found = {H.elements for H in G.lattice.subgroups}
    assert found == _brute_subgroups(G)


@given(groups)
def test_lattice_is_conjugation_stable(G):
    have = {H.elements for H in G.lattice.subgroups}
    for H in G.lattice.subgroups:
        for g in G.elements:
            assert H.conjugate(g).elements in have


@given(groups)
def test_subconjugacy_is_a_preorder(G):
    subs = G.lattice.subgroups
    for H in subs:
        assert is_subconjugate(H, H)
    for A, B, C in itertools.product(subs, repeat=3):
        if is_subconjugate(A, B) and is_subconjugate(B, C):
            assert is_subconjugate(A, C)


def test_class_representative_is_least_conjugate():
    G = symmetric(3)
    lat = G.lattice
    for H in lat.subgroups:
        rep = lat.representative(H)
        conjugates = {H.conjugate(g).elements for g in G.elements}
        assert rep.elements == min(conjugates)


def test_s3_has_three_conjugate_order_two_subgroups():
    lat = symmetric(3).lattice
    sizes = sorted(len(c) for c in lat.conj_classes)
    assert sizes == [1, 1, 1, 3]


def test_rejects_non_group_table():
    with pytest.raises(GroupValidationError) as info:
        from_table([[0, 1], [1, 1]])
    assert info.value.witness is not None


def test_rejects_nonzero_identity():
    with pytest.raises(GroupValidationError):
        from_table([[1, 0], [0, 1]])


def test_order_bound_is_a_hard_error():
    with pytest.raises(ResourceBoundError):
        cyclic(65)
    with pytest.raises(ResourceBoundError):
        direct_product(cyclic(8), cyclic(9))
    assert cyclic(64).order == 64


def test_symmetric_is_limited():
    with pytest.raises(GroupValidationError):
        symmetric(5)


@pytest.mark.parametrize(
    "ref, order",
    [("trivial", 1), ("cyclic:5", 5), ("klein4", 4), ("sym:3", 6), ("product:2x3", 6), ("product:2x2", 4)],
)
def test_group_refs(ref, order):
    assert parse_group_ref(ref).order == order


def test_trivial_group_lattice():
    assert len(trivial_group().lattice) == 1
