import itertools

import pytest

from tambara.errors import NormUnavailableError, ShapeError
from tambara.groups import cyclic, symmetric
from tambara.indexing import IndexingSystem, enumerate_systems
from tambara.models import BurnsideModel, FixedPointModel, swap_square, zmod
from tambara.reciprocity import reciprocity_sum, reciprocity_transfer, verify_reciprocity

C2, C4, S3 = cyclic(2), cyclic(4), symmetric(3)


def _sub(G, order):
    return next(K for K in G.lattice.subgroups if K.order == order)


def _subset_orbits(H, K):
    """K-orbits on subsets of K/H, counted by brute force on cosets."""
    G = K.group
    cosets = sorted({frozenset(G.mul[k][h] for h in H.elements) for k in K.elements}, key=sorted)
    subsets = {frozenset(c) for r in range(len(cosets) + 1) for c in itertools.combinations(cosets, r)}
    orbits = 0
    while subsets:
        s = subsets.pop()
        orbits += 1
        for k in K.elements:
            subsets.discard(frozenset(frozenset(G.mul[k][x] for x in c) for c in s))
    return orbits


@pytest.mark.parametrize(
    "G, h, k",
    [(C2, 1, 2), (C4, 1, 4), (C4, 2, 4), (C4, 1, 2), (cyclic(3), 1, 3), (S3, 2, 6), (S3, 1, 3), (cyclic(6), 2, 6)],
)
def test_sum_summands_are_orbits_of_subsets(G, h, k):
    H, K = _sub(G, h), _sub(G, k)
    if not H <= K:
        H = next(L for L in G.lattice.subgroups if L.order == h and L <= K)
    f = reciprocity_sum(H, K)
    assert len(f) == _subset_orbits(H, K)
    assert f.explicit_agrees
    assert f.pi_set.size == 2 ** (K.order // H.order) * (G.order // K.order)


def test_named_summand_counts():
    assert len(reciprocity_sum(C2.trivial_subgroup, C2.whole)) == 3
    assert len(reciprocity_sum(C4.trivial_subgroup, C4.whole)) == 6


@pytest.mark.parametrize("G", [C2, C4, S3])
def test_summands_do_not_depend_on_the_indexing_system(G):
    H, K = G.trivial_subgroup, G.whole
    base = reciprocity_sum(H, K).summands
    for I in enumerate_systems(G).systems:
        if I.admits(K, H):
            assert reciprocity_sum(H, K, I).summands == base


@pytest.mark.parametrize("G, h, k", [(C4, 1, 2), (C4, 2, 2), (S3, 1, 2), (S3, 1, 3)])
def test_transfer_exponent_counts_sections(G, h, k):
    K = _sub(G, k)
    H = next(L for L in G.lattice.subgroups if L.order == h and L <= K)
    f = reciprocity_transfer(H, K)
    assert f.explicit_agrees
    assert f.pi_set.size == (K.order // H.order) ** (G.order // K.order)


def test_reciprocity_on_z6():
    r = verify_reciprocity(FixedPointModel(zmod(6, C2)), C2.trivial_subgroup, C2.whole, "sum")
    assert r.ok and r.cases == 36 and r.summands == 3


def test_reciprocity_on_swapped_square():
    r = verify_reciprocity(FixedPointModel(swap_square(3)), C2.trivial_subgroup, C2.whole, "sum")
    assert r.ok and r.cases == 81


def test_reciprocity_on_burnside():
    r = verify_reciprocity(BurnsideModel(C2), C2.trivial_subgroup, C2.whole, "sum")
    assert str(r) == "OK (4 cases)"
    r = verify_reciprocity(BurnsideModel(C4), C4.trivial_subgroup, C4.whole, "sum")
    assert r.ok and r.summands == 6


@pytest.mark.parametrize("M", [BurnsideModel(C4), FixedPointModel(zmod(6, C4))])
def test_transfer_reciprocity(M):
    r = verify_reciprocity(M, C4.trivial_subgroup, _sub(C4, 2), "transfer")
    assert r.ok and r.cases > 0


def test_transfer_reciprocity_on_s3():
    r = verify_reciprocity(BurnsideModel(S3), S3.trivial_subgroup, _sub(S3, 3), "transfer")
    assert r.ok


def test_norm_must_be_admissible():
    with pytest.raises(NormUnavailableError):
        reciprocity_sum(C2.trivial_subgroup, C2.whole, IndexingSystem.trivial(C2))
    M = FixedPointModel(zmod(6, C2), IndexingSystem.trivial(C2))
    with pytest.raises(NormUnavailableError):
        verify_reciprocity(M, C2.trivial_subgroup, C2.whole)


def test_subgroups_must_be_nested():
    with pytest.raises(ShapeError):
        reciprocity_sum(C4.whole, C4.trivial_subgroup)


def test_unknown_kind():
    with pytest.raises(ValueError):
        verify_reciprocity(BurnsideModel(C2), C2.trivial_subgroup, C2.whole, "product")
