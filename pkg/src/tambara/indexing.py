"""Indexing systems as admissible orbit pairs, and the exponent predicates they define.

A pair ``(H, K)`` of lattice indices with K <= H means that the H-set H/K is
admissible.  Orbits determine everything else: a map lies in the associated
subcategory iff each point's orbit over the stabilizer of its image is admissible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

from .errors import InvalidSubcategoryError, ResourceBoundError
from .gsets import (
    GMap,
    arrow_key,
    coproduct,
    coproduct_map,
    enumerate_arrows,
    enumerate_gsets,
    from_empty,
    fold,
    identity,
    maps_between,
    orbit_inclusion,
    point,
    pullback,
)
from .groups import DEFAULT_ORDER_BOUND, FiniteGroup, Subgroup

ORACLE_PAIR_LIMIT = 20


@lru_cache(maxsize=None)
def _tables(G: FiniteGroup):
    """Conjugation action on subgroup indices, intersections, containment."""
    lat = G.lattice
    subs = lat.subgroups
    n = len(subs)
    conj = tuple(tuple(lat.index[s.conjugate(g).elements] for s in subs) for g in G.elements)
    sets = [frozenset(s.elements) for s in subs]
    inter = tuple(tuple(lat.index[tuple(sorted(sets[i] & sets[j]))] for j in range(n)) for i in range(n))
    below = tuple(tuple(j for j in range(n) if sets[j] <= sets[i]) for i in range(n))
    return conj, inter, below


@dataclass(frozen=True, eq=False)
class IndexingSystem:
    group: FiniteGroup
    admissible: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        conj, _, _ = _tables(self.group)
        closed = {(c[h], c[k]) for h, k in self.admissible for c in conj}
        object.__setattr__(self, "admissible", frozenset(closed))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IndexingSystem) and self.group == other.group and self.admissible == other.admissible

    def __hash__(self) -> int:
        return hash((self.group, self.admissible))

    def __le__(self, other: "IndexingSystem") -> bool:
        return self.admissible <= other.admissible

    def __lt__(self, other: "IndexingSystem") -> bool:
        return self.admissible < other.admissible

    def __repr__(self) -> str:
        return f"IndexingSystem({self.group.name}, {self.describe()})"

    @classmethod
    def from_subgroups(cls, G: FiniteGroup, pairs: Iterable[tuple[Subgroup, Subgroup]], with_trivial: bool = True):
        lat = G.lattice
        adm = {(lat.index_of(H), lat.index_of(K)) for H, K in pairs}
        if with_trivial:
            adm |= {(i, i) for i in range(len(lat))}
        return cls(G, frozenset(adm))

    @classmethod
    def trivial(cls, G: FiniteGroup) -> "IndexingSystem":
        return cls(G, frozenset((i, i) for i in range(len(G.lattice))))

    @classmethod
    def complete(cls, G: FiniteGroup) -> "IndexingSystem":
        _, _, below = _tables(G)
        return cls(G, frozenset((i, j) for i in range(len(below)) for j in below[i]))

    def admits(self, H: Subgroup, K: Subgroup) -> bool:
        lat = self.group.lattice
        return (lat.index_of(H), lat.index_of(K)) in self.admissible

    def nontrivial(self) -> list[tuple[int, int]]:
        return sorted((h, k) for h, k in self.admissible if h != k)

    def generators(self) -> list[tuple[int, int]]:
        """Nontrivial pairs, one per conjugacy class of pairs."""
        conj, _, _ = _tables(self.group)
        seen: set[tuple[int, int]] = set()
        out = []
        for h, k in self.nontrivial():
            if (h, k) in seen:
                continue
            out.append((h, k))
            seen.update((c[h], c[k]) for c in conj)
        return out

    def describe(self) -> str:
        from .gsets import subgroup_name

        subs = self.group.lattice.subgroups
        gens = self.generators()
        if not gens:
            return "trivial"
        return ", ".join(f"{subgroup_name(subs[h])}/{subgroup_name(subs[k])}" for h, k in gens)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    axiom: str | None = None
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return f"violates {self.axiom}: {self.witness}"


def validate(I: IndexingSystem) -> ValidationReport:
    """Check the four axioms in order; report the first violation with a witness."""
    G = I.group
    lat = G.lattice
    subs = lat.subgroups
    conj, inter, below = _tables(G)
    adm = I.admissible
    for h, k in sorted(adm):
        if (k, h) not in lat.order_relation:
            return ValidationReport(False, "containment", (subs[h].elements, subs[k].elements))
    for i in range(len(subs)):
        if (i, i) not in adm:
            return ValidationReport(False, "trivial", (subs[i].elements,))
    for h, k in sorted(adm):
        for g in G.elements:
            if (conj[g][h], conj[g][k]) not in adm:
                return ValidationReport(False, "conjugation", (subs[h].elements, subs[k].elements, g))
    for h, k in sorted(adm):
        for j in below[h]:
            for x in subs[h].elements:
                kk = conj[x][k]
                if (j, inter[j][kk]) not in adm:
                    return ValidationReport(
                        False, "restriction", (subs[h].elements, subs[k].elements, subs[j].elements)
                    )
    for h, k in sorted(adm):
        for k2, l in sorted(adm):
            if k2 == k and (h, l) not in adm:
                return ValidationReport(
                    False, "transitivity", (subs[h].elements, subs[k].elements, subs[l].elements)
                )
    return ValidationReport(True)


def close(G: FiniteGroup, pairs: Iterable[tuple[int, int]]) -> IndexingSystem:
    """Smallest indexing system containing the given pairs (lattice indices)."""
    conj, inter, below = _tables(G)
    n = len(below)
    adm = {(i, i) for i in range(n)} | set(pairs)
    changed = True
    while changed:
        changed = False
        new = set()
        for h, k in adm:
            for c in conj:
                new.add((c[h], c[k]))
            hk_elems = G.lattice.subgroups[h].elements
            for j in below[h]:
                for x in hk_elems:
                    new.add((j, inter[j][conj[x][k]]))
        by_top: dict[int, list[int]] = {}
        for h, k in adm:
            by_top.setdefault(h, []).append(k)
        for h, ks in by_top.items():
            for k in ks:
                for l in by_top.get(k, ()):
                    new.add((h, l))
        if not new <= adm:
            adm |= new
            changed = True
    return IndexingSystem(G, frozenset(adm))


@dataclass(frozen=True)
class IndexingPoset:
    group: FiniteGroup
    systems: tuple[IndexingSystem, ...]
    covers: tuple[tuple[int, int], ...]  # (i, j): systems[i] covered by systems[j]

    def __len__(self) -> int:
        return len(self.systems)


def _sort_key(I: IndexingSystem):
    return (len(I.admissible), sorted(I.admissible))


def _hasse(systems: list[IndexingSystem]) -> tuple[tuple[int, int], ...]:
    covers = []
    for i, a in enumerate(systems):
        for j, b in enumerate(systems):
            if a < b and not any(a < c < b for c in systems):
                covers.append((i, j))
    return tuple(covers)


def enumerate_systems(G: FiniteGroup, bound: int = DEFAULT_ORDER_BOUND) -> IndexingPoset:
    """All indexing systems by generate-and-close from single added pairs."""
    if G.order > bound:
        raise ResourceBoundError(f"|G| = {G.order} exceeds enumeration bound {bound}")
    _, _, below = _tables(G)
    all_pairs = [(h, k) for h in range(len(below)) for k in below[h] if h != k]
    start = IndexingSystem.trivial(G)
    found = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for I in frontier:
            for p in all_pairs:
                if p in I.admissible:
                    continue
                J = close(G, I.admissible | {p})
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    systems = sorted(found, key=_sort_key)
    return IndexingPoset(G, tuple(systems), _hasse(systems))


def enumerate_brute_force(G: FiniteGroup, pair_limit: int = ORACLE_PAIR_LIMIT) -> list[IndexingSystem]:
    """Independent oracle: filter every subset of nontrivial pairs through ``validate``."""
    _, _, below = _tables(G)
    n = len(below)
    pairs = [(h, k) for h in range(n) for k in below[h] if h != k]
    if len(pairs) > pair_limit:
        raise ResourceBoundError(f"{len(pairs)} nontrivial pairs exceed the oracle limit {pair_limit}")
    trivial = frozenset((i, i) for i in range(n))
    out = []
    for mask in range(1 << len(pairs)):
        chosen = trivial | {pairs[i] for i in range(len(pairs)) if mask >> i & 1}
        I = IndexingSystem(G, chosen)
        if I.admissible != chosen:
            continue  # not conjugation closed as given
        if validate(I):
            out.append(I)
    return sorted(out, key=_sort_key)


# -- maps in Set^G_O ------------------------------------------------------------


def map_violation(I: IndexingSystem, f: GMap) -> tuple[int, Subgroup, Subgroup] | None:
    """First point s whose orbit under G_{f(s)} is not admissible: (s, G_f(s), G_s)."""
    lat = I.group.lattice
    S, T = f.source, f.target
    for orb in S.orbits:
        s = orb[0]
        H = T.stabilizer(f.fn[s])
        K = S.stabilizer(s)
        if (lat.index[H.elements], lat.index[K.elements]) not in I.admissible:
            return s, H, K
    return None


def map_in_category(I: IndexingSystem, f: GMap) -> bool:
    return map_violation(I, f) is None


def restrict_indexing(I: IndexingSystem, H: Subgroup) -> IndexingSystem:
    """i_H^* I on ``H.as_group``: pairs (J, L) of I with J inside H."""
    G = I.group
    lat = G.lattice
    Hg = H.as_group
    hlat = Hg.lattice
    pairs = set()
    for j, l in I.admissible:
        J = lat.subgroups[j]
        if J <= H:
            L = lat.subgroups[l]
            pairs.add((hlat.index_of(H.to_local(J)), hlat.index_of(H.to_local(L))))
    return IndexingSystem(Hg, frozenset(pairs))


# -- exponent predicates -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExponentPredicate:
    group: FiniteGroup
    test: Callable[[GMap], bool] = field(repr=False)
    provenance: str
    indexing: IndexingSystem | None = None
    bound: int | None = None

    def __contains__(self, f: GMap) -> bool:
        return self.test(f)

    def contains(self, f: GMap) -> bool:
        return self.test(f)


def from_indexing(I: IndexingSystem) -> ExponentPredicate:
    return ExponentPredicate(I.group, lambda f: map_in_category(I, f), "from-indexing", I)


def builtin(G: FiniteGroup, kind: str) -> ExponentPredicate:
    tests = {
        "iso": GMap.is_iso,
        "mono": GMap.is_injective,
        "epi": GMap.is_surjective,
        "all": lambda f: True,
    }
    if kind not in tests:
        raise ValueError(f"unknown builtin predicate {kind!r}")
    return ExponentPredicate(G, tests[kind], f"builtin-{kind}")


def from_table(G: FiniteGroup, maps: Iterable[GMap], bound: int) -> ExponentPredicate:
    """A user-given class of maps, closed under isomorphism of arrows; certified up to ``bound`` points."""
    keys = frozenset(arrow_key(f) for f in maps)

    def test(f: GMap) -> bool:
        if f.source.size > bound or f.target.size > bound:
            return False
        return arrow_key(f) in keys

    return ExponentPredicate(G, test, "user table", None, bound)


@dataclass
class PropertyReport:
    bound: int
    pullback_source_bound: int
    composition_bound: int
    wide: bool = True
    composition_closed: bool = True
    pullback_stable: bool = True
    symmetric_monoidal: bool = True
    has_initial_map: bool = True
    has_fold: bool = True
    monos_included: bool | None = None
    witnesses: dict[str, object] = field(default_factory=dict)

    @property
    def coproduct_complete(self) -> bool:
        return self.wide and self.symmetric_monoidal and self.has_initial_map and self.has_fold

    @property
    def classifiable(self) -> bool:
        return self.wide and self.pullback_stable and self.composition_closed and self.coproduct_complete

    def lines(self) -> list[str]:
        out = [
            f"wide: {self.wide}",
            f"closed under composition: {self.composition_closed}",
            f"pullback stable: {self.pullback_stable}",
            f"symmetric monoidal: {self.symmetric_monoidal}",
            f"contains empty -> *: {self.has_initial_map}",
            f"contains * + * -> *: {self.has_fold}",
            f"finite coproduct complete: {self.coproduct_complete}",
        ]
        if self.monos_included is not None:
            out.append(f"all monomorphisms included: {self.monos_included}")
        for k, v in self.witnesses.items():
            out.append(f"witness[{k}]: {v}")
        out.append(
            f"certified for objects with <= {self.bound} points "
            f"(pullbacks along sources <= {self.pullback_source_bound}, composites <= {self.composition_bound})"
        )
        return out


def subcategory_properties(
    D: ExponentPredicate,
    bound: int = 4,
    pullback_source_bound: int | None = None,
    composition_bound: int | None = None,
) -> PropertyReport:
    """Exhaustive property scan over arrows whose objects have at most ``bound`` points."""
    G = D.group
    pb = min(bound, 4) if pullback_source_bound is None else pullback_source_bound
    cb = min(bound, 4) if composition_bound is None else composition_bound
    rep = PropertyReport(bound, pb, cb)
    objects = enumerate_gsets(G, bound)
    for X in objects:
        if identity(X) not in D:
            rep.wide = False
            rep.witnesses.setdefault("wide", f"identity of {X}")
            break
    arrows = enumerate_arrows(G, bound, bound)
    members = [f for f in arrows if f in D]
    small = [V for V in objects if V.size <= pb]
    for f in members:
        if not rep.pullback_stable:
            break
        for V in small:
            for v in maps_between(V, f.target):
                P, _, proj = pullback(f, v)
                if proj not in D:
                    rep.pullback_stable = False
                    rep.witnesses["pullback"] = f"{f} pulled back along {v}"
                    break
            if not rep.pullback_stable:
                break
    comp_objects = [U for U in objects if U.size <= cb]
    for f in members:
        if f.target.size > cb or not rep.composition_closed:
            continue
        for U in comp_objects:
            for g in maps_between(f.target, U):
                if g in D and f.then(g) not in D:
                    rep.composition_closed = False
                    rep.witnesses["composition"] = f"{f} then {g}"
                    break
            if not rep.composition_closed:
                break
    for a, b in itertools.combinations_with_replacement(members, 2):
        if a.source.size + b.source.size > bound or a.target.size + b.target.size > bound:
            continue
        if coproduct_map([a, b]) not in D:
            rep.symmetric_monoidal = False
            rep.witnesses["monoidal"] = f"{a} + {b}"
            break
    pt = point(G)
    if from_empty(pt) not in D:
        rep.has_initial_map = False
        rep.witnesses["initial"] = "empty -> * is missing"
    if fold(pt) not in D:
        rep.has_fold = False
        rep.witnesses["fold"] = "* + * -> * is missing"
    if rep.has_initial_map and rep.has_fold:
        rep.monos_included = True
        for S in objects:
            for C in objects:
                if S.size + C.size > bound:
                    continue
                Z, (i1, _) = coproduct(S, C)
                if i1 not in D:
                    rep.monos_included = False
                    rep.witnesses["mono"] = f"{S} -> {Z}"
                    break
            if not rep.monos_included:
                break
    return rep


def indexing_from_subcategory(D: ExponentPredicate, bound: int = 4, check: bool = True) -> IndexingSystem:
    """(H, K) is admissible iff the projection G/K -> G/H lies in D."""
    G = D.group
    if check:
        rep = subcategory_properties(D, bound)
        if not rep.classifiable:
            raise InvalidSubcategoryError(
                "predicate is not a wide, pullback stable, finite coproduct complete subcategory",
                rep.witnesses,
            )
    lat = G.lattice
    subs = lat.subgroups
    adm = set()
    for h, H in enumerate(subs):
        for k, K in enumerate(subs):
            if K <= H and orbit_inclusion(K, H) in D:
                adm.add((h, k))
    return IndexingSystem(G, frozenset(adm))


@dataclass
class RoundTripReport:
    group: FiniteGroup
    count: int
    oracle_count: int | None
    oracle_agrees: bool | None
    round_trip_failures: list[IndexingSystem] = field(default_factory=list)
    order_failures: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.oracle_agrees is not False and not self.round_trip_failures and not self.order_failures


def round_trip_check(G: FiniteGroup, bound: int = 3, use_oracle: bool = True) -> RoundTripReport:
    poset = enumerate_systems(G)
    systems = list(poset.systems)
    oracle = None
    if use_oracle:
        try:
            oracle = enumerate_brute_force(G)
        except ResourceBoundError:
            oracle = None
    rep = RoundTripReport(
        G,
        len(systems),
        None if oracle is None else len(oracle),
        None if oracle is None else oracle == systems,
    )
    preds = [from_indexing(I) for I in systems]
    for I, D in zip(systems, preds):
        if indexing_from_subcategory(D, bound) != I:
            rep.round_trip_failures.append(I)
    subs = G.lattice.subgroups
    arrows = enumerate_arrows(G, bound, bound) + [
        orbit_inclusion(subs[k], subs[h]) for h in range(len(subs)) for k in range(len(subs)) if subs[k] <= subs[h]
    ]
    memb = [frozenset(i for i, f in enumerate(arrows) if f in D) for D in preds]
    for a, b in itertools.permutations(range(len(systems)), 2):
        if (systems[a] <= systems[b]) != (memb[a] <= memb[b]):
            rep.order_failures.append((a, b))
    return rep


@dataclass
class MonoReport:
    applicable: bool
    checked: int
    witness: GMap | None = None

    @property
    def ok(self) -> bool:
        return self.witness is None


def initial_implies_mono(D: ExponentPredicate, bound: int = 8) -> MonoReport:
    """If D holds empty -> * and * + * -> *, every injection with target <= ``bound`` points is in D.

    Injections are coproduct inclusions S -> S + C up to isomorphism, so those are what we scan.
    """
    G = D.group
    pt = point(G)
    if from_empty(pt) not in D or fold(pt) not in D:
        return MonoReport(False, 0)
    objects = enumerate_gsets(G, bound)
    checked = 0
    for S in objects:
        for C in objects:
            if S.size + C.size > bound:
                continue
            _, (i1, _) = coproduct(S, C)
            checked += 1
            if i1 not in D:
                return MonoReport(True, checked, i1)
    return MonoReport(True, checked)
