"""Random small G-sets, maps and admissible bispans for property tests."""

from __future__ import annotations

import random

from .bispans import Bispan
from .errors import ShapeError
from .groups import FiniteGroup, Subgroup
from .gsets import GMap, GSet, copair, coproduct, empty, from_empty, orbit, orbit_map, restrict_to
from .indexing import IndexingSystem


def random_subgroup(rng: random.Random, within: Subgroup) -> Subgroup:
    return rng.choice(within.group.lattice.subgroups_of(within))


def random_gset(rng: random.Random, G: FiniteGroup, max_orbits: int = 2, max_points: int = 6) -> GSet:
    orbs = []
    total = 0
    for _ in range(rng.randint(1, max_orbits)):
        H = random_subgroup(rng, G.whole)
        size = G.order // H.order
        if total + size > max_points:
            continue
        orbs.append(orbit(H))
        total += size
    return coproduct(*orbs)[0] if orbs else empty(G)


def random_map(rng: random.Random, S: GSet, X: GSet) -> GMap:
    """A uniformly chosen equivariant map, orbit by orbit; raises if none exists."""
    G = S.group
    fn = [0] * S.size
    for o in S.orbits:
        s = o[0]
        stab = S.stabilizer(s).elements
        fixed = [x for x in X.points if all(X.act[k][x] == x for k in stab)]
        if not fixed:
            raise ShapeError("no equivariant map exists")
        x = rng.choice(fixed)
        for k in G.elements:
            fn[S.act[k][s]] = X.act[k][x]
    return GMap(S, X, tuple(fn))


def random_set_over(
    rng: random.Random,
    T: GSet,
    admissible: IndexingSystem | None = None,
    max_per_orbit: int = 2,
    max_points: int = 6,
) -> GMap:
    """A map S -> T whose fiber orbits are admissible (any if ``admissible`` is None)."""
    G = T.group
    lat = G.lattice
    pieces = []
    total = 0
    for o in T.orbits:
        t0 = o[0]
        K = T.stabilizer(t0)
        opts = [L for L in lat.subgroups_of(K) if admissible is None or admissible.admits(K, L)]
        for _ in range(rng.randint(0, max_per_orbit)):
            L = rng.choice(opts)
            size = G.order // L.order
            if total + size > max_points:
                continue
            pieces.append(orbit_map(L, T, t0))
            total += size
    return copair(pieces) if pieces else from_empty(T)


def random_bispan(
    rng: random.Random,
    X: GSet,
    Y: GSet,
    admissible: IndexingSystem | None = None,
    max_t_orbits: int = 2,
    max_points: int = 6,
) -> Bispan:
    """Random X <- S -> T -> Y with exponent in Set^G_I; Y must be nonempty for T to be."""
    G = X.group
    lat = G.lattice
    t_pieces = []
    total = 0
    if Y.size:
        for _ in range(rng.randint(0, max_t_orbits)):
            y = rng.randrange(Y.size)
            K = rng.choice(lat.subgroups_of(Y.stabilizer(y)))
            size = G.order // K.order
            if total + size > max_points:
                continue
            t_pieces.append(orbit_map(K, Y, y))
            total += size
    h = copair(t_pieces) if t_pieces else from_empty(Y)
    T = h.source
    g = random_set_over(rng, T, admissible, max_points=max_points)
    S = g.source
    # keep only S-orbits that admit a map to X
    if X.size == 0 and S.size:
        g = from_empty(T)
        S = g.source
    else:
        keep = []
        for o in S.orbits:
            stab = S.stabilizer(o[0]).elements
            if any(all(X.act[k][x] == x for k in stab) for x in X.points):
                keep.extend(o)
        if len(keep) != S.size:
            S2, inc = restrict_to(S, sorted(keep))
            g = inc.then(g)
            S = S2
    f = random_map(rng, S, X)
    return Bispan(f, g, h)


def random_composable(
    rng: random.Random,
    G: FiniteGroup,
    admissible: IndexingSystem | None = None,
    max_points: int = 6,
) -> tuple[Bispan, Bispan]:
    X = random_gset(rng, G, max_points=max_points)
    Y = random_gset(rng, G, max_points=max_points)
    Z = random_gset(rng, G, max_points=max_points)
    return (
        random_bispan(rng, X, Y, admissible, max_points=max_points),
        random_bispan(rng, Y, Z, admissible, max_points=max_points),
    )


def random_admissible_map(
    rng: random.Random, G: FiniteGroup, admissible: IndexingSystem | None = None, max_points: int = 6
) -> GMap:
    T = random_gset(rng, G, max_points=max_points)
    return random_set_over(rng, T, admissible, max_points=max_points)
