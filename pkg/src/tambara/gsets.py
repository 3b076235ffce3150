"""Finite G-sets and equivariant maps, at the level of points.

A ``GSet`` stores the full action table ``act[g][x]``; a ``GMap`` stores the
image of every point.  Pullbacks, sections and exponential diagrams are direct
enumerations.  Canonical forms recover the orbit-type (symbolic) view.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import GSetValidationError, ResourceBoundError, ShapeError
from .groups import FiniteGroup, Subgroup, left_cosets, right_cosets, subgroup_classes_within

MAX_POINTS = 200_000

Action = tuple[tuple[int, ...], ...]


@dataclass(frozen=True, eq=False)
class GSet:
    group: FiniteGroup
    act: Action

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, GSet) and self.act == other.act and self.group == other.group

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.group, self.act))

    def __repr__(self) -> str:
        return f"GSet({self.size} pts, {orbit_type(self)})"

    @property
    def size(self) -> int:
        return len(self.act[0]) if self.act else 0

    def __len__(self) -> int:
        return self.size

    @property
    def points(self) -> range:
        return range(self.size)

    def __call__(self, g: int, x: int) -> int:
        return self.act[g][x]

    def validate(self) -> None:
        G = self.group
        n = self.size
        if len(self.act) != G.order:
            raise GSetValidationError(f"action has {len(self.act)} rows, group order is {G.order}")
        for g, row in enumerate(self.act):
            if len(row) != n or any(not 0 <= y < n for y in row):
                raise GSetValidationError(f"row for element {g} is not a map on {n} points")
        if any(self.act[G.identity][x] != x for x in range(n)):
            raise GSetValidationError("identity does not act trivially")
        for g in G.elements:
            ag = self.act[g]
            for h in G.elements:
                ah, agh = self.act[h], self.act[G.mul[g][h]]
                for x in range(n):
                    if ag[ah[x]] != agh[x]:
                        raise GSetValidationError(f"action not compatible: g={g}, h={h}, x={x}")

    @cached_property
    def orbit_ids(self) -> tuple[int, ...]:
        ids = [-1] * self.size
        k = 0
        for x in range(self.size):
            if ids[x] >= 0:
                continue
            for row in self.act:
                ids[row[x]] = k
            k += 1
        return tuple(ids)

    @cached_property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = []
        for x, k in enumerate(self.orbit_ids):
            if k == len(out):
                out.append([])
            out[k].append(x)
        return tuple(tuple(o) for o in out)

    def orbit_of(self, x: int) -> tuple[int, ...]:
        return self.orbits[self.orbit_ids[x]]

    @cached_property
    def _stab_cache(self) -> dict[int, Subgroup]:
        return {}

    def stabilizer(self, x: int) -> Subgroup:
        cache = self._stab_cache
        s = cache.get(x)
        if s is None:
            s = Subgroup(self.group, tuple(g for g, row in enumerate(self.act) if row[x] == x))
            cache[x] = s
        return s

    def is_transitive(self) -> bool:
        return len(self.orbits) == 1


@dataclass(frozen=True, eq=False)
class GMap:
    source: GSet
    target: GSet
    fn: tuple[int, ...]

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, GMap)
            and self.fn == other.fn
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.fn))

    def __repr__(self) -> str:
        return f"GMap({self.source.size}->{self.target.size}: {list(self.fn)})"

    def __call__(self, x: int) -> int:
        return self.fn[x]

    def validate(self) -> None:
        S, T = self.source, self.target
        if S.group != T.group:
            raise GSetValidationError("source and target live over different groups")
        if len(self.fn) != S.size or any(not 0 <= y < T.size for y in self.fn):
            raise GSetValidationError(f"map must send {S.size} points into range({T.size})")
        for g in S.group.elements:
            sa, ta = S.act[g], T.act[g]
            for x in S.points:
                if self.fn[sa[x]] != ta[self.fn[x]]:
                    raise GSetValidationError(f"map not equivariant at g={g}, x={x}")

    def then(self, other: "GMap") -> "GMap":
        """Diagrammatic composite: first self, then other."""
        if self.target != other.source:
            raise ShapeError("maps are not composable")
        return GMap(self.source, other.target, tuple(other.fn[y] for y in self.fn))

    def fiber(self, t: int) -> list[int]:
        return [s for s, y in enumerate(self.fn) if y == t]

    @cached_property
    def fibers(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.target.size)]
        for s, t in enumerate(self.fn):
            out[t].append(s)
        return tuple(tuple(f) for f in out)

    def is_injective(self) -> bool:
        return len(set(self.fn)) == len(self.fn)

    def is_surjective(self) -> bool:
        return len(set(self.fn)) == self.target.size

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> "GMap":
        if not self.is_iso():
            raise ShapeError("map is not invertible")
        inv = [0] * len(self.fn)
        for s, t in enumerate(self.fn):
            inv[t] = s
        return GMap(self.target, self.source, tuple(inv))


def make_gset(group: FiniteGroup, act: Sequence[Sequence[int]]) -> GSet:
    X = GSet(group, tuple(tuple(r) for r in act))
    X.validate()
    return X


def make_gmap(source: GSet, target: GSet, fn: Sequence[int]) -> GMap:
    f = GMap(source, target, tuple(fn))
    f.validate()
    return f


def identity(X: GSet) -> GMap:
    return GMap(X, X, tuple(X.points))


def empty(G: FiniteGroup) -> GSet:
    return GSet(G, tuple(() for _ in G.elements))


def point(G: FiniteGroup) -> GSet:
    return GSet(G, tuple((0,) for _ in G.elements))


def trivial_gset(G: FiniteGroup, n: int) -> GSet:
    row = tuple(range(n))
    return GSet(G, tuple(row for _ in G.elements))


def to_point(X: GSet) -> GMap:
    return GMap(X, point(X.group), (0,) * X.size)


def from_empty(X: GSet) -> GMap:
    return GMap(empty(X.group), X, ())


def from_generators(G: FiniteGroup, gens: Sequence[int], perms: Sequence[Sequence[int]], n: int) -> GSet:
    """Extend an action given on generators to the whole group (breadth first over words)."""
    rows: dict[int, tuple[int, ...]] = {G.identity: tuple(range(n))}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g, p in zip(gens, perms):
                b = G.mul[a][g]
                img = tuple(rows[a][p[x]] for x in range(n))
                if b not in rows:
                    rows[b] = img
                    nxt.append(b)
                elif rows[b] != img:
                    raise GSetValidationError("generator permutations do not define an action")
        frontier = nxt
    if len(rows) != G.order:
        raise GSetValidationError("listed elements do not generate the group")
    X = GSet(G, tuple(rows[g] for g in G.elements))
    X.validate()
    return X


# -- orbits and orbit types ---------------------------------------------------




@dataclass(frozen=True)
class OrbitType:
    """Multiset of subgroup conjugacy-class labels (lattice class indices)."""

    group: FiniteGroup = field(repr=False, compare=False)
    counts: tuple[tuple[int, int], ...]

    def __str__(self) -> str:
        if not self.counts:
            return "{}"
        lat = self.group.lattice
        parts = []
        for label, mult in self.counts:
            K = lat.subgroups[lat.conj_classes[label][0]]
            parts.append(f"G/{subgroup_name(K)}:{mult}")
        return "{" + ", ".join(parts) + "}"

    @property
    def total_orbits(self) -> int:
        return sum(m for _, m in self.counts)


def subgroup_name(K: Subgroup) -> str:
    G = K.group
    if K.order == 1:
        return "e"
    if K.order == G.order:
        return "G"
    lat = G.lattice
    label = lat.label(K)
    same = [c for c in lat.conj_classes if lat.subgroups[c[0]].order == K.order]
    tag = f"H{K.order}"
    if len(same) > 1:
        tag += "." + str(same.index(lat.conj_classes[label]))
    return tag


def orbit_decompose(X: GSet) -> list[tuple[int, Subgroup]]:
    """(least point, stabilizer) per orbit, ordered by (class label, least point)."""
    lat = X.group.lattice
    reps = [(o[0], X.stabilizer(o[0])) for o in X.orbits]
    return sorted(reps, key=lambda r: (lat.label(r[1]), r[0]))


def orbit_type(X: GSet) -> OrbitType:
    lat = X.group.lattice
    counts: dict[int, int] = {}
    for o in X.orbits:
        lab = lat.label(X.stabilizer(o[0]))
        counts[lab] = counts.get(lab, 0) + 1
    return OrbitType(X.group, tuple(sorted(counts.items())))


# -- orbits G/H ---------------------------------------------------------------

_COSETS: dict[Subgroup, tuple[tuple[tuple[int, ...], ...], tuple[int, ...], tuple[int, ...]]] = {}


def coset_data(H: Subgroup) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...], tuple[int, ...]]:
    """(left cosets, coset index of each element, least representative of each coset)."""
    got = _COSETS.get(H)
    if got is None:
        cosets = tuple(left_cosets(H))
        where = [0] * H.group.order
        for i, c in enumerate(cosets):
            for g in c:
                where[g] = i
        got = (cosets, tuple(where), tuple(c[0] for c in cosets))
        _COSETS[H] = got
    return got


_ORBITS: dict[Subgroup, GSet] = {}


def orbit(H: Subgroup) -> GSet:
    """G/H with left translation; point i is the i-th coset by least element (H is point 0)."""
    X = _ORBITS.get(H)
    if X is None:
        G = H.group
        cosets, where, reps = coset_data(H)
        act = tuple(tuple(where[G.mul[g][r]] for r in reps) for g in G.elements)
        X = GSet(G, act)
        _ORBITS[H] = X
    return X


def orbit_inclusion(H: Subgroup, K: Subgroup) -> GMap:
    """The canonical projection G/H -> G/K, gH -> gK, for H <= K."""
    if not H <= K:
        raise ShapeError("projection G/H -> G/K needs H <= K")
    _, _, reps = coset_data(H)
    _, where_k, _ = coset_data(K)
    return GMap(orbit(H), orbit(K), tuple(where_k[r] for r in reps))


def orbit_map(H: Subgroup, X: GSet, x: int) -> GMap:
    """gH -> g.x; needs H inside the stabilizer of x."""
    if any(X.act[h][x] != x for h in H.elements):
        raise ShapeError("H does not fix the chosen point")
    _, _, reps = coset_data(H)
    return GMap(orbit(H), X, tuple(X.act[r][x] for r in reps))


# -- coproducts, products, pullbacks -------------------------------------------


def coproduct(*sets: GSet) -> tuple[GSet, list[GMap]]:
    if not sets:
        raise ShapeError("coproduct of no sets needs a group; use empty(G)")
    G = sets[0].group
    if any(X.group != G for X in sets):
        raise ShapeError("coproduct of G-sets over different groups")
    offsets = list(itertools.accumulate([0] + [X.size for X in sets]))
    act = tuple(
        tuple(y + off for X, off in zip(sets, offsets) for y in X.act[g]) for g in G.elements
    )
    Z = GSet(G, act)
    inj = [GMap(X, Z, tuple(range(off, off + X.size))) for X, off in zip(sets, offsets)]
    return Z, inj


def coproduct_map(maps: Sequence[GMap], source: GSet | None = None, target: GSet | None = None) -> GMap:
    """f1 + f2 + ... between coproducts (computed if not given)."""
    if source is None:
        source = coproduct(*[f.source for f in maps])[0]
    if target is None:
        target = coproduct(*[f.target for f in maps])[0]
    fn: list[int] = []
    off = 0
    for f in maps:
        fn.extend(y + off for y in f.fn)
        off += f.target.size
    return GMap(source, target, tuple(fn))


def copair(maps: Sequence[GMap], source: GSet | None = None) -> GMap:
    """[f1, f2, ...]: X1 + X2 + ... -> Y for maps with common target."""
    target = maps[0].target
    if source is None:
        source = coproduct(*[f.source for f in maps])[0]
    return GMap(source, target, tuple(y for f in maps for y in f.fn))


def fold(X: GSet, copies: int = 2) -> GMap:
    Z, _ = coproduct(*([X] * copies))
    return GMap(Z, X, tuple(x for _ in range(copies) for x in X.points))


def product(X: GSet, Y: GSet) -> tuple[GSet, GMap, GMap]:
    """Points (x, y) are indexed as x * |Y| + y."""
    G = X.group
    ny = Y.size
    act = tuple(
        tuple(X.act[g][x] * ny + Y.act[g][y] for x in X.points for y in Y.points) for g in G.elements
    )
    P = GSet(G, act)
    p1 = GMap(P, X, tuple(x for x in X.points for _ in Y.points))
    p2 = GMap(P, Y, tuple(y for _ in X.points for y in Y.points))
    return P, p1, p2


def pullback(f: GMap, g: GMap) -> tuple[GSet, GMap, GMap]:
    """A x_C B for f: A -> C, g: B -> C; points are pairs (a, b) in lexicographic order."""
    if f.target != g.target:
        raise ShapeError("pullback needs maps with a common target")
    A, B = f.source, g.source
    gfib = g.fibers
    pairs = [(a, b) for a in A.points for b in gfib[f.fn[a]]]
    if len(pairs) > MAX_POINTS:
        raise ResourceBoundError(f"pullback has {len(pairs)} points")
    index = {p: i for i, p in enumerate(pairs)}
    act = tuple(
        tuple(index[(A.act[k][a], B.act[k][b])] for a, b in pairs) for k in A.group.elements
    )
    P = GSet(A.group, act)
    return P, GMap(P, A, tuple(a for a, _ in pairs)), GMap(P, B, tuple(b for _, b in pairs))


def pullback_mediator(f: GMap, g: GMap, u: GMap, v: GMap) -> GMap:
    """The unique W -> A x_C B induced by u: W -> A and v: W -> B with f u = g v."""
    if any(f.fn[u.fn[w]] != g.fn[v.fn[w]] for w in u.source.points):
        raise ShapeError("cone does not commute")
    P, p1, p2 = pullback(f, g)
    index = {(a, b): i for i, (a, b) in enumerate(zip(p1.fn, p2.fn))}
    return GMap(u.source, P, tuple(index[(u.fn[w], v.fn[w])] for w in u.source.points))


def is_pullback_square(top: GMap, left: GMap, right: GMap, bottom: GMap) -> bool:
    """Square W -top-> A -right-> C, W -left-> B -bottom-> C: commutes and W = A x_C B."""
    W = top.source
    if any(right.fn[top.fn[w]] != bottom.fn[left.fn[w]] for w in W.points):
        return False
    pairs = {(top.fn[w], left.fn[w]) for w in W.points}
    if len(pairs) != W.size:
        return False
    expected = sum(len(bottom.fibers[right.fn[a]]) for a in top.target.points)
    return expected == W.size


def preimage(f: GMap, subset: Iterable[int]) -> list[int]:
    want = set(subset)
    return [s for s, t in enumerate(f.fn) if t in want]


def restrict_to(X: GSet, pts: Sequence[int]) -> tuple[GSet, GMap]:
    """A G-stable subset as a G-set, with its inclusion."""
    pts = list(pts)
    index = {x: i for i, x in enumerate(pts)}
    act = tuple(tuple(index[X.act[g][x]] for x in pts) for g in X.group.elements)
    S = GSet(X.group, act)
    return S, GMap(S, X, tuple(pts))


# -- dependent product -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExponentialDiagram:
    """Inputs h: A -> X, g: X -> Y; outputs the dependent product and its pullback.

    ``pi_set`` is the dependent product, ``h_prime: pi_set -> Y``, ``pullback_set`` is
    X x_Y pi_set with ``g_prime`` to pi_set and evaluation ``f_prime`` to A.
    """

    h: GMap
    g: GMap
    pi_set: GSet
    h_prime: GMap
    pullback_set: GSet
    f_prime: GMap
    g_prime: GMap
    sections: tuple[tuple[int, tuple[int, ...]], ...]
    to_x: GMap

    def outer_is_pullback(self) -> bool:
        return is_pullback_square(self.to_x, self.g_prime, self.g, self.h_prime)

    def evaluation_lands_in_fibers(self) -> bool:
        return all(self.h.fn[self.f_prime.fn[e]] == self.to_x.fn[e] for e in self.pullback_set.points)


def dependent_product(h: GMap, g: GMap) -> ExponentialDiagram:
    """Pi_g A for h: A -> X and g: X -> Y, as pairs (y, section of h over the fiber X_y)."""
    if h.target != g.source:
        raise ShapeError("dependent product needs h: A -> X and g: X -> Y")
    A, X, Y = h.source, g.source, g.target
    G = A.group
    xfib = g.fibers
    afib = h.fibers
    pos = {}
    for y in Y.points:
        for j, x in enumerate(xfib[y]):
            pos[x] = j
    total = 0
    for y in Y.points:
        n = 1
        for x in xfib[y]:
            n *= len(afib[x])
        total += n
    if total > MAX_POINTS:
        raise ResourceBoundError(f"dependent product would have {total} points")
    sections: list[tuple[int, tuple[int, ...]]] = []
    for y in Y.points:
        for s in itertools.product(*(afib[x] for x in xfib[y])):
            sections.append((y, s))
    index = {p: i for i, p in enumerate(sections)}
    rows = []
    for k in G.elements:
        kinv = G.inv[k]
        ay, aa, axinv = Y.act[k], A.act[k], X.act[kinv]
        row = []
        for y, s in sections:
            ky = ay[y]
            new = tuple(aa[s[pos[axinv[x2]]]] for x2 in xfib[ky])
            row.append(index[(ky, new)])
        rows.append(tuple(row))
    Pi = GSet(G, tuple(rows))
    h_prime = GMap(Pi, Y, tuple(y for y, _ in sections))
    E, to_x, g_prime = pullback(g, h_prime)
    f_prime = GMap(
        E, A, tuple(sections[p][1][pos[x]] for x, p in zip(to_x.fn, g_prime.fn))
    )
    return ExponentialDiagram(h, g, Pi, h_prime, E, f_prime, g_prime, tuple(sections), to_x)


# -- change of groups ---------------------------------------------------------


def restrict(H: Subgroup, X: GSet) -> GSet:
    """i_H^* X as a set over ``H.as_group``."""
    return GSet(H.as_group, tuple(X.act[h] for h in H.elements))


def restrict_map(H: Subgroup, f: GMap) -> GMap:
    return GMap(restrict(H, f.source), restrict(H, f.target), f.fn)


@dataclass(frozen=True, eq=False)
class Induced:
    """G x_H X with its induction structure: point ``i * |X| + x`` is [r_i, x]."""

    subgroup: Subgroup
    base: GSet
    gset: GSet
    reps: tuple[int, ...]

    def point(self, i: int, x: int) -> int:
        return i * self.base.size + x

    def decode(self, p: int) -> tuple[int, int]:
        return divmod(p, self.base.size)

    def unit(self) -> GMap:
        """X -> i_H^* (G x_H X), x -> [e, x]."""
        return GMap(self.base, restrict(self.subgroup, self.gset), tuple(self.base.points))

    def induce_map(self, f: GMap, other: "Induced") -> GMap:
        """G x_H f : G x_H X -> G x_H X' (``other`` must induce f's target)."""
        if f.source != self.base or f.target != other.base or other.subgroup != self.subgroup:
            raise ShapeError("map does not match the induced sets")
        n = self.base.size
        return GMap(self.gset, other.gset, tuple(other.point(p // n, f.fn[p % n]) for p in self.gset.points))

    def adjunct(self, f: GMap, T: GSet) -> GMap:
        """For an H-map f: X -> i_H^* T, the G-map G x_H X -> T, [g, x] -> g f(x)."""
        if f.source != self.base or f.target != restrict(self.subgroup, T):
            raise ShapeError("adjunct needs f: X -> i_H^* T")
        n = self.base.size
        return GMap(self.gset, T, tuple(T.act[self.reps[p // n]][f.fn[p % n]] for p in self.gset.points))


def _coset_reps(H: Subgroup, side: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Coset representatives (identity first) and coset index of each element."""
    G = H.group
    cosets = left_cosets(H) if side == "left" else right_cosets(H)
    where = [0] * G.order
    for i, c in enumerate(cosets):
        for g in c:
            where[g] = i
    reps = tuple(G.identity if i == where[G.identity] else c[0] for i, c in enumerate(cosets))
    return reps, tuple(where)


def induce(H: Subgroup, X: GSet) -> Induced:
    if X.group != H.as_group:
        raise ShapeError("induce needs a set over the subgroup (H.as_group)")
    G = H.group
    reps, where = _coset_reps(H, "left")
    local = H.local_index
    n = X.size
    rows = []
    for k in G.elements:
        row = []
        for i, r in enumerate(reps):
            kr = G.mul[k][r]
            j = where[kr]
            h = local[G.mul[G.inv[reps[j]]][kr]]
            ah = X.act[h]
            row.extend(j * n + ah[x] for x in range(n))
        rows.append(tuple(row))
    return Induced(H, X, GSet(G, tuple(rows)), reps)


def induce_map(H: Subgroup, f: GMap) -> GMap:
    return induce(H, f.source).induce_map(f, induce(H, f.target))


def counit(H: Subgroup, T: GSet) -> tuple[Induced, GMap]:
    """eps_T: G x_H i_H^* T -> T, [g, t] -> g t."""
    ind = induce(H, restrict(H, T))
    n = T.size
    return ind, GMap(ind.gset, T, tuple(T.act[ind.reps[p // n]][p % n] for p in ind.gset.points))


@dataclass(frozen=True, eq=False)
class Coinduced:
    """Map_H(G, X): H-maps phi(hg) = h phi(g), stored by values on right coset reps.

    G acts by (k . phi)(g) = phi(g k).
    """

    subgroup: Subgroup
    base: GSet
    gset: GSet
    reps: tuple[int, ...]
    values: tuple[tuple[int, ...], ...]

    def counit(self) -> GMap:
        """i_H^* Map_H(G, X) -> X, phi -> phi(e)."""
        return GMap(restrict(self.subgroup, self.gset), self.base, tuple(v[0] for v in self.values))


def coinduce(H: Subgroup, X: GSet) -> Coinduced:
    if X.group != H.as_group:
        raise ShapeError("coinduce needs a set over the subgroup (H.as_group)")
    G = H.group
    reps, where = _coset_reps(H, "right")
    m = len(reps)
    if X.size ** m > MAX_POINTS:
        raise ResourceBoundError(f"coinduction would have {X.size ** m} points")
    local = H.local_index
    values = list(itertools.product(range(X.size), repeat=m))
    index = {v: i for i, v in enumerate(values)}
    # rho_j k = h rho_m'
    moves = []
    for k in G.elements:
        mv = []
        for r in reps:
            rk = G.mul[r][k]
            j2 = where[rk]
            h = local[G.mul[rk][G.inv[reps[j2]]]]
            mv.append((h, j2))
        moves.append(mv)
    rows = tuple(
        tuple(index[tuple(X.act[h][v[j2]] for h, j2 in mv)] for v in values) for mv in moves
    )
    return Coinduced(H, X, GSet(G, rows), reps, tuple(values))


def coinduction_unit(H: Subgroup, T: GSet) -> tuple[Coinduced, GMap]:
    """T -> Map_H(G, i_H^* T), t -> (g -> g t)."""
    co = coinduce(H, restrict(H, T))
    index = {v: i for i, v in enumerate(co.values)}
    return co, GMap(T, co.gset, tuple(index[tuple(T.act[r][t] for r in co.reps)] for t in T.points))


def change_of_groups(direction: str, H: Subgroup, X: GSet) -> GSet:
    if direction == "induce":
        return induce(H, X).gset
    if direction == "restrict":
        return restrict(H, X)
    if direction == "coinduce":
        return coinduce(H, X).gset
    raise ValueError(f"unknown direction {direction!r}")


@dataclass(frozen=True, eq=False)
class SieveFactorization:
    base: GSet  # the H-set T
    to_base: GMap  # T -> S over H
    induced: Induced  # G x_H T
    iso: GMap  # G x_H T -> T'
    iso_inverse: GMap  # T' -> G x_H T


def sieve_factorization(target: Induced, f: GMap) -> SieveFactorization:
    """Factor f: T' -> G x_H S through an induced map, following the pullback construction."""
    if f.target != target.gset:
        raise ShapeError("map does not land in the recorded induced set")
    H = target.subgroup
    unit = target.unit()
    Tprime_res = restrict(H, f.source)
    f_res = GMap(Tprime_res, unit.target, f.fn)
    T, to_s, to_tprime = pullback(unit, f_res)
    ind = induce(H, T)
    n = T.size
    src = f.source
    iso = GMap(ind.gset, src, tuple(src.act[ind.reps[p // n]][to_tprime.fn[p % n]] for p in ind.gset.points))
    if not iso.is_iso():
        raise ShapeError("sieve factorization failed to produce an isomorphism")
    return SieveFactorization(T, to_s, ind, iso, iso.inverse())


# -- canonical forms ------------------------------------------------------------


def canonicalize(X: GSet) -> tuple[GSet, GMap]:
    """Canonical representative of the isomorphism class of X, with an iso X -> canon."""
    G = X.group
    lat = G.lattice
    blocks = []
    for rep, stab in orbit_decompose(X):
        K = lat.representative(stab)
        y = next(y for y in (X.act[g][rep] for g in G.elements) if X.stabilizer(y) == K)
        blocks.append((K, y))
    C, _ = coproduct(*[orbit(K) for K, _ in blocks]) if blocks else (empty(G), [])
    fn = [0] * X.size
    off = 0
    for K, y in blocks:
        _, _, reps = coset_data(K)
        for i, r in enumerate(reps):
            fn[X.act[r][y]] = off + i
        off += len(reps)
    return C, GMap(X, C, tuple(fn))


def is_isomorphic(X: GSet, Y: GSet) -> tuple[bool, GMap | None]:
    if X.group != Y.group or X.size != Y.size or orbit_type(X) != orbit_type(Y):
        return False, None
    CX, ix = canonicalize(X)
    CY, iy = canonicalize(Y)
    return True, ix.then(iy.inverse())


def _k_orbit_labels(K: tuple[int, ...], W: Iterable[int], S: GSet, p: GMap) -> tuple:
    """Canonical labels of the K-orbits of W (a K-stable set of S-points) over p's target."""
    act, xact, pf = S.act, p.target.act, p.fn
    remaining = set(W)
    labels = []
    while remaining:
        w = min(remaining)
        orb = {act[k][w] for k in K}
        remaining -= orb
        x0 = min(xact[k][pf[w]] for k in K)
        best = min(tuple(k for k in K if act[k][w2] == w2) for w2 in orb if pf[w2] == x0)
        labels.append((x0, best))
    labels.sort()
    return tuple(labels)


def slice_key(p: GMap) -> tuple:
    """Isomorphism invariant of a G-set A over X (given by p: A -> X), X fixed pointwise."""
    A = p.source
    return _k_orbit_labels(tuple(A.group.elements), A.points, A, p)


def span_key(f: GMap, g: GMap, h: GMap) -> tuple:
    """Complete isomorphism invariant of X <-f- S -g-> T -h-> Y with X, Y fixed pointwise.

    One entry per orbit of T: (y0, K, labels) where y0 is the least point of the
    image orbit in Y, K the stabilizer of a point t over y0 and labels describe the
    fiber over t as a K-set over X; the least such triple over all choices of t.
    """
    S, T = g.source, g.target
    hf = h.fn
    out = []
    gfib = g.fibers
    for orb in T.orbits:
        y0 = min(hf[t] for t in orb)
        best = None
        for t in orb:
            if hf[t] != y0:
                continue
            K = T.stabilizer(t).elements
            cand = (K, _k_orbit_labels(K, gfib[t], S, f))
            if best is None or cand < best:
                best = cand
        out.append((y0,) + best)
    out.sort()
    return tuple(out)


def span_from_key(X: GSet, Y: GSet, key: tuple) -> tuple[GMap, GMap, GMap]:
    """Canonical representative X <- S -> T -> Y of a span key."""
    G = X.group
    t_blocks = []
    s_blocks = []
    for i, (y0, K_el, labels) in enumerate(key):
        K = Subgroup(G, K_el)
        t_blocks.append(orbit_map(K, Y, y0))
        for x0, L_el in labels:
            L = Subgroup(G, L_el)
            s_blocks.append((i, K, L, x0))
    T = coproduct(*[m.source for m in t_blocks])[0] if t_blocks else empty(G)
    h = GMap(T, Y, tuple(y for m in t_blocks for y in m.fn))
    t_off = list(itertools.accumulate([0] + [m.source.size for m in t_blocks]))
    S = coproduct(*[orbit(L) for _, _, L, _ in s_blocks])[0] if s_blocks else empty(G)
    f_fn: list[int] = []
    g_fn: list[int] = []
    for i, K, L, x0 in s_blocks:
        f_fn.extend(orbit_map(L, X, x0).fn)
        g_fn.extend(t_off[i] + j for j in orbit_inclusion(L, K).fn)
    return GMap(S, X, tuple(f_fn)), GMap(S, T, tuple(g_fn)), h


def arrow_key(g: GMap) -> tuple:
    """Isomorphism class of an arrow S -> T (isos on both ends)."""
    return span_key(to_point(g.source), g, to_point(g.target))


# -- bounded enumeration ---------------------------------------------------------


def _partitions_by_size(items: Sequence[tuple[object, int]], bound: int) -> Iterator[tuple[int, ...]]:
    """Multiplicity vectors over ``items`` (label, size) with total size <= bound."""

    def rec(i: int, left: int) -> Iterator[tuple[int, ...]]:
        if i == len(items):
            yield ()
            return
        size = items[i][1]
        for m in range(left // size + 1):
            for rest in rec(i + 1, left - m * size):
                yield (m,) + rest

    yield from rec(0, bound)


def enumerate_gsets(G: FiniteGroup, max_points: int) -> list[GSet]:
    """Canonical G-sets of every orbit type with at most ``max_points`` points."""
    reps = G.lattice.class_representatives()
    items = [(K, G.order // K.order) for K in reps]
    out = []
    for mult in _partitions_by_size(items, max_points):
        orbs = [orbit(K) for (K, _), m in zip(items, mult) for _ in range(m)]
        out.append(coproduct(*orbs)[0] if orbs else empty(G))
    out.sort(key=lambda X: (X.size, orbit_type(X).counts))
    return out


def sets_over(T: GSet, max_points: int) -> Iterator[GMap]:
    """Maps S -> T with |S| <= max_points, one per multiset of orbit labels over T.

    Different outputs may still be isomorphic over T via automorphisms of T.
    """
    G = T.group
    items = []
    for o in T.orbits:
        t0 = o[0]
        stab = T.stabilizer(t0)
        for cls in subgroup_classes_within(stab):
            L = cls[0]
            items.append(((t0, L), G.order // L.order))
    for mult in _partitions_by_size(items, max_points):
        maps = [orbit_map(L, T, t0) for ((t0, L), _), m in zip(items, mult) for _ in range(m)]
        if maps:
            yield copair(maps)
        else:
            yield from_empty(T)


def enumerate_arrows(G: FiniteGroup, max_source: int, max_target: int) -> list[GMap]:
    """One representative per isomorphism class of arrows S -> T within the bounds."""
    seen = set()
    out = []
    for T in enumerate_gsets(G, max_target):
        for g in sets_over(T, max_source):
            k = arrow_key(g)
            if k not in seen:
                seen.add(k)
                out.append(g)
    return out


def maps_between(S: GSet, T: GSet) -> Iterator[GMap]:
    """Every equivariant map S -> T."""
    choices = []
    reps = [o[0] for o in S.orbits]
    for s in reps:
        stab = S.stabilizer(s).elements
        choices.append([t for t in T.points if all(T.act[k][t] == t for k in stab)])
    G = S.group
    for pick in itertools.product(*choices):
        fn = [0] * S.size
        for s, t in zip(reps, pick):
            for k in G.elements:
                fn[S.act[k][s]] = T.act[k][t]
        yield GMap(S, T, tuple(fn))
