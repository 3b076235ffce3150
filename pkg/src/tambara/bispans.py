"""Bispans X <- S -> T -> Y, their composition, isomorphism classes and hom arithmetic.

A bispan (f, g, h) stands for T_h N_g R_f.  Composition follows the generator
calculus: pull back, then distribute the norm over the transfer with an
exponential diagram, then pull back once more.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import EndpointMismatchError, ExponentEscapeError, ResourceBoundError, ShapeError
from .groups import FiniteGroup, Subgroup, subgroup_classes_within
from .gsets import (
    ExponentialDiagram,
    GMap,
    GSet,
    coproduct,
    dependent_product,
    empty,
    fold,
    from_empty,
    identity,
    induce,
    maps_between,
    orbit_map,
    pullback,
    restrict,
    sets_over,
    sieve_factorization,
    span_from_key,
    span_key,
)
from .indexing import ExponentPredicate

MAX_HOM_CLASSES = 200_000


@dataclass(frozen=True, eq=False)
class Bispan:
    f: GMap  # S -> X
    g: GMap  # S -> T
    h: GMap  # T -> Y

    def __post_init__(self) -> None:
        if self.f.source != self.g.source or self.g.target != self.h.source:
            raise ShapeError("bispan maps do not compose as X <- S -> T -> Y")
        if self.f.source.group != self.h.target.group or self.f.target.group != self.f.source.group:
            raise ShapeError("bispan objects live over different groups")

    @property
    def group(self) -> FiniteGroup:
        return self.S.group

    @property
    def X(self) -> GSet:
        return self.f.target

    @property
    def S(self) -> GSet:
        return self.f.source

    @property
    def T(self) -> GSet:
        return self.g.target

    @property
    def Y(self) -> GSet:
        return self.h.target

    def __repr__(self) -> str:
        return f"Bispan(|X|={self.X.size}, |S|={self.S.size}, |T|={self.T.size}, |Y|={self.Y.size})"

    def key(self) -> tuple:
        return span_key(self.f, self.g, self.h)

    def hom_class(self) -> "HomClass":
        return HomClass(self.X, self.Y, self.key())

    def validate(self) -> None:
        for m in (self.f, self.g, self.h):
            m.validate()


@dataclass(frozen=True, eq=False)
class HomClass:
    """Isomorphism class of bispans X -> Y, identified by its canonical key.

    The key lists one entry per orbit of T; it is sorted, so the class of a
    disjoint union is the merge of the keys.
    """

    X: GSet
    Y: GSet
    key: tuple

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HomClass) and self.key == other.key and self.X == other.X and self.Y == other.Y

    def __hash__(self) -> int:
        return hash(self.key)

    def __lt__(self, other: "HomClass") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"HomClass({self.key})"

    @classmethod
    def of(cls, b: Bispan) -> "HomClass":
        return b.hom_class()

    @cached_property
    def representative(self) -> Bispan:
        f, g, h = span_from_key(self.X, self.Y, self.key)
        return Bispan(f, g, h)

    @property
    def orbits_of_t(self) -> int:
        return len(self.key)

    def __add__(self, other: "HomClass") -> "HomClass":
        return add(self, other)

    def __mul__(self, other: "HomClass") -> "HomClass":
        return multiply(self, other)


def as_bispan(p: "Bispan | HomClass") -> Bispan:
    return p.representative if isinstance(p, HomClass) else p


def as_class(p: "Bispan | HomClass") -> HomClass:
    return p if isinstance(p, HomClass) else p.hom_class()


# -- generators ---------------------------------------------------------------


def basic(kind: str, m: GMap) -> Bispan:
    """R_m : B -> A, N_m : A -> B, T_m : A -> B for m: A -> B."""
    A, B = m.source, m.target
    if kind == "R":
        return Bispan(m, identity(A), identity(A))
    if kind == "N":
        return Bispan(identity(A), m, identity(B))
    if kind == "T":
        return Bispan(identity(A), identity(A), m)
    raise ValueError(f"unknown generator kind {kind!r}")


def restriction(m: GMap) -> Bispan:
    return basic("R", m)


def norm(m: GMap) -> Bispan:
    return basic("N", m)


def transfer(m: GMap) -> Bispan:
    return basic("T", m)


def identity_bispan(X: GSet) -> Bispan:
    return basic("R", identity(X))


# -- composition ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CompositionTrace:
    """Intermediate objects of one composite, kept for diagnostics."""

    first_pullback: GSet  # T1 x_Y S2
    second_pullback: GSet  # S1 x_T1 (T1 x_Y S2)
    exponential: ExponentialDiagram
    final_pullback: GSet


def _check_in(D: ExponentPredicate | None, m: GMap) -> bool:
    return D is None or m in D


def compose_raw(p: Bispan, q: Bispan, D: ExponentPredicate | None = None) -> tuple[Bispan, CompositionTrace]:
    """q after p, not canonicalized, with its trace."""
    if p.Y != q.X:
        raise EndpointMismatchError(
            f"target of the first bispan ({p.Y.size} points) is not the source of the second ({q.X.size} points)"
        )
    if not _check_in(D, p.g):
        raise ExponentEscapeError("exponent of the first bispan is not in the predicate", p.g)
    if not _check_in(D, q.g):
        raise ExponentEscapeError("exponent of the second bispan is not in the predicate", q.g)
    # R_{f2} T_{h1} = T_{a'} R_{h1'}
    P, a, h1p = pullback(p.h, q.f)
    # R_{h1'-part} N_{g1} = N_{g1''} R_{f''}
    Q, q_s1, q_p = pullback(p.g, a)
    # N_{g2} T_{h1'} via the exponential diagram
    ed = dependent_product(h1p, q.g)
    # R_{eval} N_{q_p} = N_{...} R_{...}
    F, f_q, f_e = pullback(q_p, ed.f_prime)
    f = f_q.then(q_s1).then(p.f)
    g = f_e.then(ed.g_prime)
    h = ed.h_prime.then(q.h)
    trace = CompositionTrace(P, Q, ed, F)
    if not _check_in(D, g):
        raise ExponentEscapeError(
            "rewritten exponent left the predicate: the pullback of "
            f"{p.g} along the exponential diagram of {q.g} is not admissible",
            trace,
        )
    return Bispan(f, g, h), trace


def compose(p: "Bispan | HomClass", q: "Bispan | HomClass", D: ExponentPredicate | None = None, canonical: bool = True):
    """q after p, for p: X -> Y and q: Y -> Z.  Canonical representative unless asked otherwise."""
    b, _ = compose_raw(as_bispan(p), as_bispan(q), D)
    if canonical:
        return b.hom_class().representative
    return b


def compose_class(p: "Bispan | HomClass", q: "Bispan | HomClass", D: ExponentPredicate | None = None) -> HomClass:
    b, _ = compose_raw(as_bispan(p), as_bispan(q), D)
    return b.hom_class()


def compose_chain(items: Sequence["Bispan | HomClass"], D: ExponentPredicate | None = None) -> HomClass:
    """items[-1] after ... after items[0]."""
    acc = as_bispan(items[0])
    for q in items[1:]:
        acc, _ = compose_raw(acc, as_bispan(q), D)
    return acc.hom_class()


def in_predicate(p: "Bispan | HomClass", D: ExponentPredicate | None) -> bool:
    return _check_in(D, as_bispan(p).g)


# -- hom-monoid arithmetic ------------------------------------------------------


def _sum_bispans(parts: Sequence[Bispan], X: GSet, Y: GSet) -> Bispan:
    parts = [b for b in parts if b.T.size or b.S.size]
    if not parts:
        return zero_bispan(X, Y)
    S, _ = coproduct(*[b.S for b in parts])
    T, _ = coproduct(*[b.T for b in parts])
    f = GMap(S, X, tuple(x for b in parts for x in b.f.fn))
    gfn: list[int] = []
    off = 0
    for b in parts:
        gfn.extend(t + off for t in b.g.fn)
        off += b.T.size
    h = GMap(T, Y, tuple(y for b in parts for y in b.h.fn))
    return Bispan(f, GMap(S, T, tuple(gfn)), h)


def zero_bispan(X: GSet, Y: GSet) -> Bispan:
    E = empty(X.group)
    return Bispan(from_empty(X), identity(E), from_empty(Y))


def zero(X: GSet, Y: GSet) -> HomClass:
    return HomClass(X, Y, ())


def unit_bispan(X: GSet, Y: GSet) -> Bispan:
    """S empty, T = Y, h the identity: the multiplicative unit."""
    return Bispan(from_empty(X), from_empty(Y), identity(Y))


def unit(X: GSet, Y: GSet) -> HomClass:
    return unit_bispan(X, Y).hom_class()


def _check_same_hom(p: HomClass, q: HomClass) -> None:
    if p.X != q.X or p.Y != q.Y:
        raise EndpointMismatchError("classes live in different hom sets")


def add(p: "Bispan | HomClass", q: "Bispan | HomClass") -> HomClass:
    p, q = as_class(p), as_class(q)
    _check_same_hom(p, q)
    return HomClass(p.X, p.Y, tuple(sorted(p.key + q.key)))


def add_bispans(p: Bispan, q: Bispan) -> Bispan:
    """Disjoint union at the level of representatives."""
    if p.X != q.X or p.Y != q.Y:
        raise EndpointMismatchError("bispans live in different hom sets")
    return _sum_bispans([p, q], p.X, p.Y)


def pairing(p: Bispan, q: Bispan) -> Bispan:
    """<p, q>: X -> Y + Y."""
    if p.X != q.X or p.Y != q.Y:
        raise EndpointMismatchError("bispans live in different hom sets")
    YY, _ = coproduct(p.Y, q.Y)
    b = _sum_bispans([p, q], p.X, p.Y)
    n = p.Y.size
    fn = tuple(list(p.h.fn) + [y + n for y in q.h.fn])
    return Bispan(b.f, b.g, GMap(b.T, YY, fn))


def multiply(p: "Bispan | HomClass", q: "Bispan | HomClass", D: ExponentPredicate | None = None) -> HomClass:
    """N along the fold map after the pairing."""
    p, q = as_bispan(p), as_bispan(q)
    return compose_class(pairing(p, q), norm(fold(p.Y)), D)


def power(p: "Bispan | HomClass", n: int, D: ExponentPredicate | None = None) -> HomClass:
    p = as_class(p)
    acc = unit(p.X, p.Y)
    for _ in range(n):
        acc = multiply(acc, p, D)
    return acc


def scale(p: "Bispan | HomClass", n: int) -> HomClass:
    p = as_class(p)
    return HomClass(p.X, p.Y, tuple(sorted(p.key * n)))


def post_transfer(p: "Bispan | HomClass", m: GMap, D: ExponentPredicate | None = None) -> HomClass:
    return compose_class(p, transfer(m), D)


def post_norm(p: "Bispan | HomClass", m: GMap, D: ExponentPredicate | None = None) -> HomClass:
    return compose_class(p, norm(m), D)


def post_restrict(p: "Bispan | HomClass", m: GMap, D: ExponentPredicate | None = None) -> HomClass:
    return compose_class(p, restriction(m), D)


# -- decomposition and group completion ------------------------------------------


def decompose(p: "Bispan | HomClass") -> list[HomClass]:
    """Indecomposable summands, one per orbit of T."""
    p = as_class(p)
    return [HomClass(p.X, p.Y, (entry,)) for entry in p.key]


def decompose_bispan(b: Bispan) -> list[Bispan]:
    """Split a representative along the orbits of T (no canonicalization)."""
    from .gsets import restrict_to

    out = []
    for orb in b.T.orbits:
        T0, incT = restrict_to(b.T, orb)
        tset = set(orb)
        spts = [s for s in b.S.points if b.g.fn[s] in tset]
        S0, incS = restrict_to(b.S, spts)
        tindex = {t: i for i, t in enumerate(orb)}
        out.append(
            Bispan(
                incS.then(b.f),
                GMap(S0, T0, tuple(tindex[b.g.fn[s]] for s in spts)),
                incT.then(b.h),
            )
        )
    return out


@dataclass(frozen=True, eq=False)
class VirtualHom:
    """Formal difference of bispan classes, as signed counts of indecomposables."""

    X: GSet
    Y: GSet
    counts: tuple[tuple[tuple, int], ...]

    @classmethod
    def build(cls, X: GSet, Y: GSet, counter: "Counter | dict") -> "VirtualHom":
        return cls(X, Y, tuple(sorted((k, v) for k, v in counter.items() if v)))

    @classmethod
    def of(cls, p: "Bispan | HomClass", sign: int = 1) -> "VirtualHom":
        p = as_class(p)
        c = Counter()
        for entry in p.key:
            c[entry] += sign
        return cls.build(p.X, p.Y, c)

    @classmethod
    def zero(cls, X: GSet, Y: GSet) -> "VirtualHom":
        return cls(X, Y, ())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VirtualHom) and self.counts == other.counts and self.X == other.X and self.Y == other.Y

    def __hash__(self) -> int:
        return hash(self.counts)

    def _combine(self, other: "VirtualHom", sign: int) -> "VirtualHom":
        if self.X != other.X or self.Y != other.Y:
            raise EndpointMismatchError("virtual classes live in different hom sets")
        c = Counter(dict(self.counts))
        for k, v in other.counts:
            c[k] += sign * v
        return VirtualHom.build(self.X, self.Y, c)

    def __add__(self, other: "VirtualHom") -> "VirtualHom":
        return self._combine(other, 1)

    def __sub__(self, other: "VirtualHom") -> "VirtualHom":
        return self._combine(other, -1)

    def __neg__(self) -> "VirtualHom":
        return VirtualHom(self.X, self.Y, tuple((k, -v) for k, v in self.counts))

    def is_zero(self) -> bool:
        return not self.counts

    def parts(self) -> tuple[HomClass, HomClass]:
        """(positive part, negative part) as honest classes."""
        pos = tuple(sorted(k for k, v in self.counts if v > 0 for _ in range(v)))
        neg = tuple(sorted(k for k, v in self.counts if v < 0 for _ in range(-v)))
        return HomClass(self.X, self.Y, pos), HomClass(self.X, self.Y, neg)


def group_complete(terms: Iterable[tuple[int, "Bispan | HomClass"]], X: GSet, Y: GSet) -> VirtualHom:
    """Sum of signed classes, e.g. [(1, p), (-1, q)]."""
    acc = VirtualHom.zero(X, Y)
    for sign, p in terms:
        acc = acc + VirtualHom.of(p, sign)
    return acc


def unique_decomposition_check(classes: Iterable[HomClass]) -> tuple[bool, object]:
    """The hom monoid is free on the T-orbit indecomposables.

    For each class: each summand has a single orbit in T, the summands add back
    to the class, and the representative of each summand re-keys to itself.
    """
    for p in classes:
        pieces = decompose(p)
        acc = zero(p.X, p.Y)
        for piece in pieces:
            rep = piece.representative
            if rep.T.orbits and len(rep.T.orbits) != 1:
                return False, piece
            if rep.hom_class() != piece:
                return False, piece
            acc = add(acc, piece)
        if acc != p:
            return False, p
        split = decompose_bispan(p.representative)
        merged = _sum_bispans(split, p.X, p.Y).hom_class() if split else zero(p.X, p.Y)
        if merged != p:
            return False, p
    return True, None


# -- bounded enumeration -----------------------------------------------------------


def indecomposables(
    X: GSet, Y: GSet, D: ExponentPredicate | None, s_bound: int, t_bound: int
) -> list[tuple[HomClass, int, int]]:
    """Classes with T a single orbit within the bounds, with (|S|, |T|)."""
    G = X.group
    seen: dict[tuple, tuple[HomClass, int, int]] = {}
    for orb in Y.orbits:
        y0 = orb[0]
        stab = Y.stabilizer(y0)
        for cls in subgroup_classes_within(stab):
            K = cls[0]
            if G.order // K.order > t_bound:
                continue
            h = orbit_map(K, Y, y0)
            T = h.source
            for g in sets_over(T, s_bound):
                if not _check_in(D, g):
                    continue
                for f in maps_between(g.source, X):
                    b = Bispan(f, g, h)
                    k = b.key()
                    if k not in seen:
                        seen[k] = (HomClass(X, Y, k), g.source.size, T.size)
    return sorted(seen.values(), key=lambda e: e[0].key)


def _per_orbit(D: ExponentPredicate | None) -> bool:
    return D is None or D.indexing is not None or D.provenance.startswith("builtin")


def enumerate_hom(
    X: GSet,
    Y: GSet,
    D: ExponentPredicate | None = None,
    s_bound: int = 6,
    t_bound: int = 6,
    limit: int = MAX_HOM_CLASSES,
) -> list[HomClass]:
    """All classes X <- S -> T -> Y with exponent in D, |S| <= s_bound, |T| <= t_bound."""
    pieces = indecomposables(X, Y, D, s_bound, t_bound)
    out: list[HomClass] = []

    def rec(i: int, s_left: int, t_left: int, chosen: list[tuple]) -> None:
        if len(out) > limit:
            raise ResourceBoundError(f"more than {limit} hom classes within the bounds")
        if i == len(pieces):
            out.append(HomClass(X, Y, tuple(sorted(chosen))))
            return
        cls, s, t = pieces[i]
        m = 0
        while m * s <= s_left and m * t <= t_left:
            rec(i + 1, s_left - m * s, t_left - m * t, chosen + [cls.key[0]] * m)
            if s == 0 and t == 0:
                break
            m += 1

    rec(0, s_bound, t_bound, [])
    if not _per_orbit(D):
        out = [p for p in out if p.representative.g in D]
    out.sort(key=lambda p: (len(p.key), p.key))
    return out


# -- transport along induction ---------------------------------------------------


def transport(H: Subgroup, X: GSet, b: Bispan) -> Bispan:
    """H-bispan i*X <- A -> B -> Y  to  G-bispan X <- G x_H A -> G x_H B -> G x_H Y."""
    if b.X != restrict(H, X):
        raise ShapeError("source of the H-bispan must be the restriction of X")
    indA = induce(H, b.S)
    indB = induce(H, b.T)
    indY = induce(H, b.Y)
    f = indA.adjunct(b.f, X)
    g = indA.induce_map(b.g, indB)
    h = indB.induce_map(b.h, indY)
    return Bispan(f, g, h)


def transport_inverse(H: Subgroup, X: GSet, Y: GSet, b: Bispan) -> Bispan:
    """G-bispan X <- S -> T -> G x_H Y back to the H-bispan i*X <- A -> B -> Y."""
    if b.X != X:
        raise ShapeError("bispan does not start at X")
    indY = induce(H, Y)
    if b.Y != indY.gset:
        raise ShapeError("target of the G-bispan is not the induced set G x_H Y")
    sfT = sieve_factorization(indY, b.h)
    indB = sfT.induced
    g_into = b.g.then(sfT.iso_inverse)
    sfS = sieve_factorization(indB, g_into)
    A = sfS.base
    to_s = sfS.induced.unit()
    resX = restrict(H, X)
    f = GMap(A, resX, tuple(b.f.fn[sfS.iso.fn[to_s.fn[a]]] for a in A.points))
    return Bispan(f, sfS.to_base, sfT.to_base)


@dataclass
class TransportReport:
    h_classes: int
    g_classes: int
    forward_injective: bool
    round_trip_h: bool
    round_trip_g: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.forward_injective
            and self.round_trip_h
            and self.round_trip_g
            and self.h_classes == self.g_classes
            and not self.failures
        )


def transport_check(
    H: Subgroup,
    X: GSet,
    Y: GSet,
    h_bounds: tuple[int, int] = (2, 2),
    D_G: ExponentPredicate | None = None,
    D_H: ExponentPredicate | None = None,
) -> TransportReport:
    """Elementwise bijection between bounded hom(i*X, Y) over H and hom(X, G x_H Y) over G.

    Induction multiplies sizes by the index, so G-side bounds are scaled accordingly.
    """
    idx = H.group.order // H.order
    resX = restrict(H, X)
    indY = induce(H, Y).gset
    hs = enumerate_hom(resX, Y, D_H, *h_bounds)
    gs = enumerate_hom(X, indY, D_G, h_bounds[0] * idx, h_bounds[1] * idx)
    fwd = {}
    failures = []
    for p in hs:
        q = transport(H, X, p.representative).hom_class()
        fwd[p] = q
        back = transport_inverse(H, X, Y, q.representative).hom_class()
        if back != p:
            failures.append(("H", p))
    round_h = not any(k == "H" for k, _ in failures)
    round_g = True
    for q in gs:
        p = transport_inverse(H, X, Y, q.representative).hom_class()
        if transport(H, X, p.representative).hom_class() != q:
            round_g = False
            failures.append(("G", q))
    injective = len(set(fwd.values())) == len(fwd)
    if set(fwd.values()) != set(gs):
        failures.append(("image", None))
    return TransportReport(len(hs), len(gs), injective, round_h, round_g, failures)


def product_check(
    X: GSet, Y1: GSet, Y2: GSet, D: ExponentPredicate | None = None, bounds: tuple[int, int] = (2, 2)
) -> tuple[bool, object]:
    """hom(X, Y1 + Y2) -> hom(X, Y1) x hom(X, Y2) by restriction along the injections is bijective."""
    Z, (i1, i2) = coproduct(Y1, Y2)
    s_b, t_b = bounds
    src = enumerate_hom(X, Z, D, s_b, t_b)
    images = {}
    for p in src:
        a = compose_class(p, restriction(i1))
        b = compose_class(p, restriction(i2))
        if (a, b) in images:
            return False, ("not injective", p, images[(a, b)])
        images[(a, b)] = p
    left = enumerate_hom(X, Y1, D, s_b, t_b)
    right = enumerate_hom(X, Y2, D, s_b, t_b)
    expected = set()
    for a in left:
        sa, ta = _sizes(a)
        for b in right:
            sb, tb = _sizes(b)
            if sa + sb <= s_b and ta + tb <= t_b:
                expected.add((a, b))
    if expected != set(images):
        return False, ("image mismatch", len(expected), len(images))
    return True, None


def _sizes(p: HomClass) -> tuple[int, int]:
    r = p.representative
    return r.S.size, r.T.size
