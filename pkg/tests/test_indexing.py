import itertools

import pytest
from hypothesis import given

from tambara.errors import InvalidSubcategoryError, ResourceBoundError
from tambara.groups import cyclic, klein4, symmetric
from tambara.gsets import enumerate_arrows, orbit_inclusion
from tambara.indexing import (
    IndexingSystem,
    builtin,
    close,
    enumerate_brute_force,
    enumerate_systems,
    from_indexing,
    from_table,
    indexing_from_subcategory,
    initial_implies_mono,
    map_in_category,
    restrict_indexing,
    round_trip_check,
    subcategory_properties,
    validate,
)
from tambara.sampling import random_admissible_map, random_set_over

from conftest import groups, rngs

C4 = cyclic(4)
E, MID, TOP = range(3)  # lattice indices of e < C2 < C4


def _with_diagonal(G, pairs):
    return IndexingSystem(G, frozenset({(i, i) for i in range(len(G.lattice))} | set(pairs)))


@pytest.mark.parametrize("n, count", [(1, 1), (2, 2), (3, 2), (4, 5), (8, 14), (9, 5), (6, 10)])
def test_cyclic_counts(n, count):
    assert len(enumerate_systems(cyclic(n))) == count


def test_cyclic_prime_power_counts_are_catalan():
    # C_{p^n} has Catalan(n + 1) indexing systems
    assert [len(enumerate_systems(cyclic(2**k))) for k in range(4)] == [1, 2, 5, 14]


@pytest.mark.parametrize("G", [cyclic(2), cyclic(3), cyclic(4), klein4(), cyclic(8), symmetric(3), cyclic(6)])
def test_enumerator_agrees_with_subset_oracle(G):
    assert list(enumerate_systems(G).systems) == enumerate_brute_force(G)


def test_oracle_refuses_large_searches():
    with pytest.raises(ResourceBoundError):
        enumerate_brute_force(symmetric(4))


@given(groups)
def test_every_enumerated_system_validates(G):
    P = enumerate_systems(G)
    for I in P.systems:
        assert validate(I)
    assert P.systems[0] == IndexingSystem.trivial(G)
    assert P.systems[-1] == IndexingSystem.complete(G)


@given(groups)
def test_covers_form_the_hasse_diagram(G):
    P = enumerate_systems(G)
    S = P.systems
    for a, b in P.covers:
        assert S[a] < S[b]
        assert not any(S[a] < c < S[b] for c in S)


def test_restriction_violation_has_witness():
    rep = validate(_with_diagonal(C4, [(TOP, E)]))
    assert not rep and rep.axiom == "restriction"
    assert rep.witness == ((0, 1, 2, 3), (0,), (0, 2))


def test_transitivity_violation_has_witness():
    rep = validate(_with_diagonal(C4, [(TOP, MID), (MID, E)]))
    assert not rep and rep.axiom == "transitivity"


def test_trivial_sets_are_required():
    rep = validate(IndexingSystem(C4, frozenset({(E, E), (MID, MID), (TOP, MID)})))
    assert rep.axiom == "trivial"


def test_containment_is_checked_first():
    rep = validate(_with_diagonal(C4, [(E, MID)]))
    assert rep.axiom == "containment"


def test_close_is_least_containing_system():
    I = close(C4, [(TOP, E)])
    assert validate(I)
    # restricting G/e to C2 forces C2/e; nothing forces G/C2
    assert I.nontrivial() == [(MID, E), (TOP, E)]
    for J in enumerate_systems(C4).systems:
        if (TOP, E) in J.admissible:
            assert I <= J


def test_conjugation_closure_on_construction():
    G = symmetric(3)
    lat = G.lattice
    H = next(K for K in lat.subgroups if K.order == 2)
    I = IndexingSystem.from_subgroups(G, [(G.whole, H)])
    conj = {lat.index_of(H.conjugate(g)) for g in G.elements}
    assert {k for h, k in I.admissible if h == lat.index_of(G.whole)} >= conj


@given(groups, rngs)
def test_admissible_maps_are_closed_under_composition(G, rng):
    I = rng.choice(enumerate_systems(G).systems)
    g = random_admissible_map(rng, G, I, max_points=4)
    f = random_set_over(rng, g.source, I, max_points=6)
    assert map_in_category(I, f) and map_in_category(I, g)
    assert map_in_category(I, f.then(g))


@given(groups)
def test_restricted_systems_are_systems(G):
    for I in enumerate_systems(G).systems:
        for H in G.lattice.subgroups:
            assert validate(restrict_indexing(I, H))


@pytest.mark.parametrize("G", [cyclic(2), cyclic(4), symmetric(3)])
def test_round_trip_through_subcategories(G):
    r = round_trip_check(G, bound=3)
    assert r.ok, (r.round_trip_failures, r.order_failures)


def test_orbit_projections_decide_membership():
    I = enumerate_systems(C4).systems[1]
    D = from_indexing(I)
    subs = C4.lattice.subgroups
    for h, k in itertools.product(range(3), repeat=2):
        if subs[k] <= subs[h]:
            assert (orbit_inclusion(subs[k], subs[h]) in D) == ((h, k) in I.admissible)


def test_builtin_epi_is_not_classifiable():
    rep = subcategory_properties(builtin(C4, "epi"), 3)
    assert rep.pullback_stable and rep.composition_closed
    assert not rep.has_initial_map
    assert not rep.classifiable
    with pytest.raises(InvalidSubcategoryError):
        indexing_from_subcategory(builtin(C4, "epi"), 3)


def test_builtin_all_is_the_complete_system():
    assert indexing_from_subcategory(builtin(C4, "all"), 3) == IndexingSystem.complete(C4)


def test_mono_predicate_lacks_fold():
    rep = subcategory_properties(builtin(C4, "mono"), 3)
    assert rep.has_initial_map and not rep.has_fold


def test_user_table_is_certified_only_to_its_bound():
    G = cyclic(2)
    maps = enumerate_arrows(G, 2, 2)
    D = from_table(G, maps, bound=2)
    assert D.bound == 2
    assert all(f in D for f in maps)
    big = orbit_inclusion(G.trivial_subgroup, G.whole)
    assert big in D


@pytest.mark.parametrize("G", [cyclic(2), cyclic(4), symmetric(3)])
def test_initial_and_fold_force_monos(G):
    for I in enumerate_systems(G).systems:
        r = initial_implies_mono(from_indexing(I), 6)
        assert r.applicable and r.ok and r.checked > 0


def test_initial_implies_mono_is_vacuous_without_hypotheses():
    r = initial_implies_mono(builtin(C4, "epi"), 4)
    assert not r.applicable
