import math

import pytest
from hypothesis import given

from tambara.errors import GSetValidationError, ShapeError
from tambara.groups import cyclic, klein4, symmetric
from tambara.gsets import (
    GMap,
    GSet,
    canonicalize,
    coinduce,
    coproduct,
    dependent_product,
    enumerate_gsets,
    fold,
    induce,
    is_isomorphic,
    maps_between,
    orbit,
    orbit_inclusion,
    point,
    product,
    pullback,
    restrict,
    sieve_factorization,
    span_key,
)
from tambara.sampling import random_bispan, random_gset, random_set_over

from conftest import groups, rngs


def relabel(X, perm):
    """The same G-set with point x renamed perm[x]; returns it and the renaming map."""
    rows = []
    for row in X.act:
        new = [0] * X.size
        for x, y in enumerate(row):
            new[perm[x]] = perm[y]
        rows.append(tuple(new))
    Y = GSet(X.group, tuple(rows))
    return Y, GMap(X, Y, tuple(perm))


def shuffled(rng, X):
    perm = list(range(X.size))
    rng.shuffle(perm)
    return relabel(X, perm)


@given(groups, rngs)
def test_random_sets_satisfy_action_axioms(G, rng):
    X = random_gset(rng, G, max_points=8)
    X.validate()
    for g in G.elements:
        for h in G.elements:
            for x in X.points:
                assert X.act[g][X.act[h][x]] == X.act[G.mul[g][h]][x]


def test_invalid_action_is_rejected():
    G = cyclic(2)
    with pytest.raises(GSetValidationError):
        GSet(G, ((0, 1), (0, 0))).validate()


@given(groups, rngs)
def test_pullback_is_the_fiber_product(G, rng):
    B = random_gset(rng, G, max_points=4)
    if B.size == 0:
        return
    f = random_set_over(rng, B, max_points=5)
    g = random_set_over(rng, B, max_points=5)
    P, p1, p2 = pullback(f, g)
    pairs = [(a, b) for a in f.source.points for b in g.source.points if f.fn[a] == g.fn[b]]
    assert P.size == len(pairs)
    assert sorted(zip(p1.fn, p2.fn)) == sorted(pairs)
    assert p1.then(f) == p2.then(g)


@given(groups, rngs)
def test_coproduct_and_product_sizes(G, rng):
    X = random_gset(rng, G, max_points=4)
    Y = random_gset(rng, G, max_points=4)
    Z, (i, j) = coproduct(X, Y)
    assert Z.size == X.size + Y.size
    assert i.is_injective() and j.is_injective()
    assert set(i.fn).isdisjoint(j.fn)
    P, a, b = product(X, Y)
    assert P.size == X.size * Y.size
    assert sorted(zip(a.fn, b.fn)) == sorted((x, y) for x in X.points for y in Y.points)


@given(groups, rngs)
def test_dependent_product_counts_sections(G, rng):
    Y = random_gset(rng, G, max_points=3)
    if Y.size == 0:
        return
    g = random_set_over(rng, Y, max_points=4)
    h = random_set_over(rng, g.source, max_points=5)
    ed = dependent_product(h, g)
    expected = sum(math.prod(len(h.fiber(x)) for x in g.fiber(y)) for y in Y.points)
    assert ed.pi_set.size == expected
    assert ed.outer_is_pullback()
    assert ed.evaluation_lands_in_fibers()


def _maps_over(Z, W):
    """Maps between objects over a common base, given as maps to it."""
    return [m for m in maps_between(Z.source, W.source) if m.then(W) == Z]


@pytest.mark.parametrize("G", [cyclic(1), cyclic(2), cyclic(3)])
def test_dependent_product_is_right_adjoint_to_pullback(G):
    """Maps Z -> Pi_g A over Y correspond to maps g*Z -> A over X."""
    import random

    rng = random.Random(7)
    for _ in range(12):
        Y = random_gset(rng, G, max_points=2)
        if Y.size == 0:
            continue
        g = random_set_over(rng, Y, max_points=3)
        h = random_set_over(rng, g.source, max_points=3)
        z = random_set_over(rng, Y, max_points=3)
        ed = dependent_product(h, g)
        left = len(_maps_over(z, ed.h_prime))
        _, _, zx = pullback(z, g)
        right = len(_maps_over(zx, h))
        assert left == right


@pytest.mark.parametrize(
    "G, order",
    [(cyclic(2), 1), (cyclic(4), 2), (symmetric(3), 2), (symmetric(3), 3), (klein4(), 2)],
)
def test_induction_adjunction_counts(G, order):
    import random

    rng = random.Random(order)
    for H in [K for K in G.lattice.subgroups if K.order == order]:
        Hg = H.as_group
        for _ in range(4):
            U = random_gset(rng, Hg, max_points=3)
            T = random_gset(rng, G, max_points=4)
            ind = induce(H, U)
            assert len(list(maps_between(ind.gset, T))) == len(list(maps_between(U, restrict(H, T))))
            co = coinduce(H, U)
            assert len(list(maps_between(restrict(H, T), U))) == len(list(maps_between(T, co.gset)))


def test_induced_orbit_is_the_bigger_orbit():
    G = cyclic(4)
    H = next(K for K in G.lattice.subgroups if K.order == 2)
    ind = induce(H, point(H.as_group))
    assert is_isomorphic(ind.gset, orbit(H))[0]


def test_induce_needs_a_set_over_the_subgroup():
    G = cyclic(4)
    H = next(K for K in G.lattice.subgroups if K.order == 2)
    with pytest.raises(ShapeError):
        induce(H, point(G))


@given(groups, rngs)
def test_canonical_form_ignores_labels(G, rng):
    X = random_gset(rng, G, max_points=6)
    Y, _ = shuffled(rng, X)
    C1, iso1 = canonicalize(X)
    C2, _ = canonicalize(Y)
    assert C1 == C2
    assert iso1.is_iso()
    ok, iso = is_isomorphic(X, Y)
    assert ok and iso.is_iso()


@given(groups, rngs)
def test_span_key_ignores_labels(G, rng):
    X = random_gset(rng, G, max_points=3)
    Y = random_gset(rng, G, max_points=3)
    b = random_bispan(rng, X, Y, max_points=4)
    f, g, h = b.f, b.g, b.h
    _, s = shuffled(rng, g.source)
    _, t = shuffled(rng, h.source)
    f2 = s.inverse().then(f)
    g2 = s.inverse().then(g).then(t)
    h2 = t.inverse().then(h)
    assert span_key(f, g, h) == span_key(f2, g2, h2)


def test_nonisomorphic_sets_are_told_apart():
    G = cyclic(4)
    a = orbit(G.trivial_subgroup)
    b, _ = coproduct(orbit(next(K for K in G.lattice.subgroups if K.order == 2)), orbit(next(K for K in G.lattice.subgroups if K.order == 2)))
    assert a.size == b.size
    assert not is_isomorphic(a, b)[0]


@pytest.mark.parametrize("n, count", [(0, 1), (1, 2), (2, 4), (3, 6), (4, 9)])
def test_c2_sets_up_to_n_points(n, count):
    # a fixed points and b free orbits with a + 2b <= n
    assert len(enumerate_gsets(cyclic(2), n)) == count


def test_fold_of_three_copies():
    f = fold(point(cyclic(3)), copies=3)
    assert f.is_surjective() and f.source.size == 3


@given(rngs)
def test_sieve_factorization_is_an_isomorphism(rng):
    G = cyclic(4)
    H = next(K for K in G.lattice.subgroups if K.order == 2)
    U = random_gset(rng, H.as_group, max_points=2)
    if U.size == 0:
        return
    ind = induce(H, U)
    f = random_set_over(rng, ind.gset, max_points=6)
    sf = sieve_factorization(ind, f)
    assert sf.iso.is_iso()
    assert sf.iso.then(sf.iso_inverse) == GMap(sf.iso.source, sf.iso.source, tuple(sf.iso.source.points))


def test_orbit_inclusion_shape():
    G = symmetric(3)
    H = next(K for K in G.lattice.subgroups if K.order == 2)
    p = orbit_inclusion(G.trivial_subgroup, H)
    assert (p.source.size, p.target.size) == (6, 3)
    assert all(len(p.fiber(t)) == 2 for t in p.target.points)
