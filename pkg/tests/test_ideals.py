import pytest

from tambara.groups import cyclic
from tambara.gsets import orbit, point
from tambara.ideals import SubMackeyData, family_ideal, is_O_ideal, whole_ideal, zero_ideal
from tambara.indexing import IndexingSystem
from tambara.models import BurnsideModel, FixedPointModel, zmod

C2 = cyclic(2)
SYSTEMS = [IndexingSystem.trivial(C2), IndexingSystem.complete(C2)]


@pytest.mark.parametrize("I", SYSTEMS)
def test_zero_and_whole_are_ideals(I):
    M = BurnsideModel(C2, I, modulus=4)
    assert is_O_ideal(M, zero_ideal(M), I, bound=3)
    assert is_O_ideal(M, whole_ideal(M), I, bound=3)


def test_free_part_is_an_ideal_without_norms():
    I = SYSTEMS[0]
    M = BurnsideModel(C2, I, modulus=8)
    r = is_O_ideal(M, family_ideal(M, [C2.trivial_subgroup]), I)
    assert r.ok
    assert sum(r.checked.values()) > 0


def test_free_part_fails_once_the_norm_is_admissible():
    # N(1) = 1 is not free
    I = SYSTEMS[1]
    M = BurnsideModel(C2, I, modulus=8)
    r = is_O_ideal(M, family_ideal(M, [C2.trivial_subgroup]), I)
    assert not r.ok and r.condition == "norm"
    assert "not an ideal" in str(r)


def test_family_ideal_is_spanned_by_free_orbits():
    M = BurnsideModel(C2, modulus=8)
    J = family_ideal(M, [C2.trivial_subgroup])
    pt = point(C2)
    assert {M.to_basis(pt, a) for a in J.at_orbit(C2.whole)} == {(c, 0) for c in range(8)}


def test_non_ideal_subset_is_caught():
    M = FixedPointModel(zmod(4, C2))
    # {0, 2} everywhere is a Tambara ideal of Z/4
    parts = tuple((H, frozenset(a for a in M.elements(orbit(H)) if a[0] % 2 == 0)) for H in C2.lattice.class_representatives())
    assert is_O_ideal(M, SubMackeyData(C2, parts), None, bound=3)
    # {0, 1}: not closed under addition
    parts = tuple((H, frozenset(a for a in M.elements(orbit(H)) if a[0] < 2)) for H in C2.lattice.class_representatives())
    r = is_O_ideal(M, SubMackeyData(C2, parts), None, bound=3)
    assert not r.ok and r.condition == "additive closure"
