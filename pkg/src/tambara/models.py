"""Evaluable Tambara functors: fixed points of a G-ring, Burnside rings, and change-of-group wrappers."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .bispans import Bispan, HomClass, as_bispan
from .errors import NormUnavailableError, ResourceBoundError, ShapeError
from .groups import FiniteGroup, Subgroup, cyclic, subgroup_classes_within, trivial_group
from .gsets import (
    GMap,
    GSet,
    counit,
    induce,
    orbit,
    orbit_map,
    product,
    restrict,
    restrict_map,
    subgroup_name,
)
from .indexing import IndexingSystem, map_violation, restrict_indexing

MAX_RING = 256
MAX_VALUES = 1_000_000

Value = tuple


# -- G-rings -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GRing:
    """Finite commutative ring on 0..n-1 with G acting by automorphisms ``act[g]``."""

    group: FiniteGroup
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    act: tuple[tuple[int, ...], ...]
    zero: int = 0
    one: int = 1
    name: str = ""

    @property
    def size(self) -> int:
        return len(self.add)

    @property
    def neg(self) -> tuple[int, ...]:
        return tuple(next(b for b in range(self.size) if self.add[a][b] == self.zero) for a in range(self.size))

    def validate(self) -> None:
        n = self.size
        if n > MAX_RING:
            raise ResourceBoundError(f"ring of order {n} exceeds {MAX_RING}")
        A = np.array(self.add, dtype=np.int64)
        M = np.array(self.mul, dtype=np.int64)
        if A.shape != (n, n) or M.shape != (n, n) or A.min() < 0 or A.max() >= n or M.min() < 0 or M.max() >= n:
            raise ShapeError("ring tables must be n x n with entries in 0..n-1")
        idx = np.arange(n)
        if not (A == A.T).all() or not (M == M.T).all():
            raise ShapeError("ring is not commutative")
        for T, what in ((A, "addition"), (M, "multiplication")):
            if not (T[T[:, :, None], idx[None, None, :]] == T[idx[:, None, None], T[None, :, :]]).all():
                raise ShapeError(f"{what} is not associative")
        if not (A[self.zero] == idx).all() or not (M[self.one] == idx).all():
            raise ShapeError("zero or one is not neutral")
        if not all(self.zero in A[a] for a in range(n)):
            raise ShapeError("addition has no inverses")
        left = M[idx[:, None, None], A[None, :, :]]
        right = A[M[:, :, None], M[:, None, :]]
        if not (left == right).all():
            raise ShapeError("multiplication does not distribute over addition")
        G = self.group
        if len(self.act) != G.order:
            raise ShapeError("need one automorphism per group element")
        for g, perm in enumerate(self.act):
            P = np.array(perm)
            if sorted(perm) != list(range(n)):
                raise ShapeError(f"action of element {g} is not a bijection")
            if not (P[A] == A[P[:, None], P[None, :]]).all() or not (P[M] == M[P[:, None], P[None, :]]).all():
                raise ShapeError(f"action of element {g} is not a ring automorphism")
        if tuple(self.act[G.identity]) != tuple(range(n)):
            raise ShapeError("identity does not act trivially")
        for g in G.elements:
            for h in G.elements:
                gh = G.mul[g][h]
                if any(self.act[g][self.act[h][r]] != self.act[gh][r] for r in range(n)):
                    raise ShapeError(f"action is not a homomorphism at ({g}, {h})")

    def fixed(self, K: Iterable[int]) -> list[int]:
        K = tuple(K)
        return [r for r in range(self.size) if all(self.act[k][r] == r for k in K)]


def make_ring(group: FiniteGroup, add, mul, act, name: str = "", zero: int = 0, one: int = 1) -> GRing:
    R = GRing(group, tuple(map(tuple, add)), tuple(map(tuple, mul)), tuple(map(tuple, act)), zero, one, name)
    R.validate()
    return R


def zmod(n: int, group: FiniteGroup | None = None) -> GRing:
    """Z/n with trivial action."""
    G = group or trivial_group()
    add = [[(a + b) % n for b in range(n)] for a in range(n)]
    mul = [[(a * b) % n for b in range(n)] for a in range(n)]
    return make_ring(G, add, mul, [list(range(n))] * G.order, name=f"Z/{n}")


def swap_square(n: int) -> GRing:
    """Z/n x Z/n with C2 swapping the factors; (a, b) is index a*n + b."""
    G = cyclic(2)
    pairs = [(a, b) for a in range(n) for b in range(n)]
    ix = {p: i for i, p in enumerate(pairs)}
    add = [[ix[((a + c) % n, (b + d) % n)] for c, d in pairs] for a, b in pairs]
    mul = [[ix[((a * c) % n, (b * d) % n)] for c, d in pairs] for a, b in pairs]
    swap = [ix[(b, a)] for a, b in pairs]
    return make_ring(G, add, mul, [list(range(n * n)), swap], f"(Z/{n})^2 swap", 0, n + 1)


# -- models ----------------------------------------------------------------------


class TambaraModel:
    """Common interface; subclasses give values and the three generator actions."""

    group: FiniteGroup
    indexing: IndexingSystem | None  # None means every norm is available
    finite: bool = True

    def elements(self, X: GSet) -> list[Value]:
        raise NotImplementedError

    def sample_elements(self, X: GSet) -> list[Value]:
        return self.elements(X)

    def random_element(self, X: GSet, rng: random.Random) -> Value:
        return rng.choice(self.sample_elements(X))

    def zero(self, X: GSet) -> Value:
        raise NotImplementedError

    def one(self, X: GSet) -> Value:
        raise NotImplementedError

    def add(self, X: GSet, a: Value, b: Value) -> Value:
        raise NotImplementedError

    def mul(self, X: GSet, a: Value, b: Value) -> Value:
        raise NotImplementedError

    def restrict(self, f: GMap, a: Value) -> Value:
        raise NotImplementedError

    def transfer(self, f: GMap, a: Value) -> Value:
        raise NotImplementedError

    def norm(self, f: GMap, a: Value) -> Value:
        raise NotImplementedError

    def contains(self, X: GSet, a: Value) -> bool:
        return a in set(self.elements(X))

    def check_norm(self, f: GMap) -> None:
        if self.indexing is None:
            return
        bad = map_violation(self.indexing, f)
        if bad is not None:
            _, H, K = bad
            raise NormUnavailableError(
                f"norm along a map with non-admissible orbit {subgroup_name(H)}/{subgroup_name(K)}",
                (H.elements, K.elements),
            )

    def describe(self, X: GSet, a: Value) -> str:
        return str(a)


def eval_bispan(M: TambaraModel, b: "Bispan | HomClass", x: Value) -> Value:
    """T_h(N_g(R_f(x)))."""
    b = as_bispan(b)
    M.check_norm(b.g)
    return M.transfer(b.h, M.norm(b.g, M.restrict(b.f, x)))


@lru_cache(maxsize=4096)
def _orbit_layout(X: GSet) -> list[tuple[int, list[tuple[int, int]]]]:
    """Per orbit: (least point, [(point, g) with g * least = point])."""
    out = []
    for o in X.orbits:
        x0 = o[0]
        seen = {}
        for g in X.group.elements:
            y = X.act[g][x0]
            if y not in seen:
                seen[y] = g
        out.append((x0, sorted(seen.items())))
    return out


class FixedPointModel(TambaraModel):
    """value(X) = equivariant maps X -> R, stored as a tuple over points."""

    def __init__(self, ring: GRing, indexing: IndexingSystem | None = None):
        self.ring = ring
        self.group = ring.group
        self.indexing = indexing
        if indexing is not None and indexing.group != ring.group:
            raise ShapeError("indexing system and ring live over different groups")

    def __repr__(self) -> str:
        return f"FixedPointModel({self.ring.name or self.ring.size})"

    def elements(self, X: GSet) -> list[Value]:
        R = self.ring
        layout = _orbit_layout(X)
        choices = [R.fixed(X.stabilizer(x0).elements) for x0, _ in layout]
        total = 1
        for c in choices:
            total *= len(c)
        if total > MAX_VALUES:
            raise ResourceBoundError(f"value set of size {total} is too large to enumerate")
        out = []
        for pick in itertools.product(*choices):
            v = [0] * X.size
            for (x0, pts), r in zip(layout, pick):
                for y, g in pts:
                    v[y] = R.act[g][r]
            out.append(tuple(v))
        return out

    def contains(self, X: GSet, a: Value) -> bool:
        R = self.ring
        return len(a) == X.size and all(
            a[X.act[g][x]] == R.act[g][a[x]] for g in X.group.elements for x in X.points
        )

    def zero(self, X: GSet) -> Value:
        return (self.ring.zero,) * X.size

    def one(self, X: GSet) -> Value:
        return (self.ring.one,) * X.size

    def add(self, X: GSet, a: Value, b: Value) -> Value:
        A = self.ring.add
        return tuple(A[u][v] for u, v in zip(a, b))

    def mul(self, X: GSet, a: Value, b: Value) -> Value:
        M = self.ring.mul
        return tuple(M[u][v] for u, v in zip(a, b))

    def restrict(self, f: GMap, a: Value) -> Value:
        return tuple(a[t] for t in f.fn)

    def transfer(self, f: GMap, a: Value) -> Value:
        A = self.ring.add
        out = [self.ring.zero] * f.target.size
        for s, t in enumerate(f.fn):
            out[t] = A[out[t]][a[s]]
        return tuple(out)

    def norm(self, f: GMap, a: Value) -> Value:
        M = self.ring.mul
        out = [self.ring.one] * f.target.size
        for s, t in enumerate(f.fn):
            out[t] = M[out[t]][a[s]]
        return tuple(out)


# -- Burnside rings via marks ----------------------------------------------------


@lru_cache(maxsize=None)
def _subs_of(K: Subgroup) -> tuple[Subgroup, ...]:
    return tuple(K.group.lattice.subgroups_of(K))


@lru_cache(maxsize=None)
def _mark_table(K: Subgroup):
    """Classes of subgroups of K (least member) and |(K/L)^M| for every M <= K."""
    G = K.group
    classes = [c[0] for c in subgroup_classes_within(K)]
    subs = _subs_of(K)
    cos = {}
    for L in classes:
        cosets = []
        seen = set()
        for k in K.elements:
            if k in seen:
                continue
            c = frozenset(G.mul[k][l] for l in L.elements)
            seen |= c
            cosets.append(k)
        cos[L] = cosets
    table = []
    for L in classes:
        row = []
        for Msub in subs:
            n = 0
            for k in cos[L]:
                kinv = G.inv[k]
                if all(G.mul[G.mul[kinv][m]][k] in L for m in Msub.elements):
                    n += 1
            row.append(n)
        table.append(tuple(row))
    return tuple(classes), subs, tuple(table)


@lru_cache(maxsize=None)
def _positions(K: Subgroup) -> dict[tuple[int, ...], int]:
    return {M.elements: m for m, M in enumerate(_subs_of(K))}


class BurnsideModel(TambaraModel):
    """Burnside Tambara functor A(X) = virtual G-sets over X.

    Values are stored as marks: for each point x and each subgroup L of G_x, the
    number of L-fixed points in the fiber over x.  With ``modulus`` n the values
    are basis coefficients mod n, and operations lift to 0..n-1 first.
    """

    def __init__(self, group: FiniteGroup, indexing: IndexingSystem | None = None, modulus: int | None = None):
        self.group = group
        self.indexing = indexing
        self.modulus = modulus
        self.finite = modulus is not None

    def __repr__(self) -> str:
        tail = f" mod {self.modulus}" if self.modulus else ""
        return f"BurnsideModel({self.group.name}{tail})"

    # basis bookkeeping
    def basis(self, X: GSet) -> list[tuple[int, Subgroup]]:
        """(orbit least point, L) for each basis element G/L -> X, eL -> point."""
        out = []
        for o in X.orbits:
            K = X.stabilizer(o[0])
            classes, _, _ = _mark_table(K)
            out.extend((o[0], L) for L in classes)
        return out

    def basis_to_marks(self, X: GSet, coeffs: Sequence[int]) -> Value:
        G = self.group
        marks: list[tuple[int, ...] | None] = [None] * X.size
        i = 0
        for x0, pts in _orbit_layout(X):
            K = X.stabilizer(x0)
            classes, subs, table = _mark_table(K)
            c = coeffs[i : i + len(classes)]
            i += len(classes)
            base = tuple(sum(cj * table[j][m] for j, cj in enumerate(c)) for m in range(len(subs)))
            where = _positions(K)
            for y, g in pts:
                Ky = X.stabilizer(y)
                ginv = G.inv[g]
                marks[y] = tuple(base[where[M.conjugate(ginv).elements]] for M in _subs_of(Ky))
        return tuple(marks)

    def marks_to_basis(self, X: GSet, marks: Value) -> tuple[int, ...]:
        out = []
        for o in X.orbits:
            x0 = o[0]
            K = X.stabilizer(x0)
            classes, subs, table = _mark_table(K)
            where = _positions(K)
            order = sorted(range(len(classes)), key=lambda j: -classes[j].order)
            c = [0] * len(classes)
            for j in order:
                col = where[classes[j].elements]
                rest = marks[x0][col] - sum(c[i] * table[i][col] for i in order if c[i] and i != j)
                q, r = divmod(rest, table[j][col])
                if r:
                    raise ValueError("mark vector is not in the Burnside ring")
                c[j] = q
            out.extend(c)
        return tuple(out)

    def _lift(self, X: GSet, a: Value) -> Value:
        return self.basis_to_marks(X, a) if self.modulus else a

    def _drop(self, X: GSet, m: Value) -> Value:
        if not self.modulus:
            return m
        return tuple(c % self.modulus for c in self.marks_to_basis(X, m))

    def from_basis(self, X: GSet, coeffs: Sequence[int]) -> Value:
        if self.modulus:
            return tuple(c % self.modulus for c in coeffs)
        return self.basis_to_marks(X, coeffs)

    def to_basis(self, X: GSet, a: Value) -> tuple[int, ...]:
        return tuple(a) if self.modulus else self.marks_to_basis(X, a)

    def class_of(self, p: GMap) -> Value:
        """The element [A -> X] of a G-set over X."""
        X = p.target
        marks = []
        for x in X.points:
            fib = [a for a in p.source.points if p.fn[a] == x]
            marks.append(
                tuple(sum(all(p.source.act[l][a] == a for l in L.elements) for a in fib) for L in _subs_of(X.stabilizer(x)))
            )
        return self._drop(X, tuple(marks))

    def elements(self, X: GSet) -> list[Value]:
        if not self.modulus:
            raise ResourceBoundError("the exact Burnside model has infinite value sets")
        dim = len(self.basis(X))
        if self.modulus ** dim > MAX_VALUES:
            raise ResourceBoundError(f"value set of size {self.modulus ** dim} is too large")
        return [tuple(c) for c in itertools.product(range(self.modulus), repeat=dim)]

    def sample_elements(self, X: GSet, coefficients: Sequence[int] = (0, 1)) -> list[Value]:
        dim = len(self.basis(X))
        if len(coefficients) ** dim > MAX_VALUES:
            raise ResourceBoundError("sample set too large")
        return [self.from_basis(X, c) for c in itertools.product(coefficients, repeat=dim)]

    def random_element(self, X: GSet, rng: random.Random) -> Value:
        dim = len(self.basis(X))
        hi = (self.modulus or 4) - 1
        lo = 0 if self.modulus else -2
        return self.from_basis(X, [rng.randint(lo, hi) for _ in range(dim)])

    def contains(self, X: GSet, a: Value) -> bool:
        if self.modulus:
            return len(a) == len(self.basis(X)) and all(0 <= c < self.modulus for c in a)
        try:
            return self.basis_to_marks(X, self.marks_to_basis(X, a)) == a
        except (ValueError, KeyError, IndexError):
            return False

    def zero(self, X: GSet) -> Value:
        return self._drop(X, tuple(tuple(0 for _ in _subs_of(X.stabilizer(x))) for x in X.points))

    def one(self, X: GSet) -> Value:
        return self._drop(X, tuple(tuple(1 for _ in _subs_of(X.stabilizer(x))) for x in X.points))

    def add(self, X: GSet, a: Value, b: Value) -> Value:
        if self.modulus:
            return tuple((u + v) % self.modulus for u, v in zip(a, b))
        return tuple(tuple(u + v for u, v in zip(p, q)) for p, q in zip(a, b))

    def neg(self, X: GSet, a: Value) -> Value:
        if self.modulus:
            return tuple(-u % self.modulus for u in a)
        return tuple(tuple(-u for u in p) for p in a)

    def mul(self, X: GSet, a: Value, b: Value) -> Value:
        a, b = self._lift(X, a), self._lift(X, b)
        return self._drop(X, tuple(tuple(u * v for u, v in zip(p, q)) for p, q in zip(a, b)))

    def restrict(self, f: GMap, a: Value) -> Value:
        A, B = f.source, f.target
        m = self._lift(B, a)
        out = []
        for s in A.points:
            t = f.fn[s]
            where = _positions(B.stabilizer(t))
            out.append(tuple(m[t][where[L.elements]] for L in _subs_of(A.stabilizer(s))))
        return self._drop(A, tuple(out))

    def transfer(self, f: GMap, a: Value) -> Value:
        A, B = f.source, f.target
        m = self._lift(A, a)
        fib = f.fibers
        out = []
        for t in B.points:
            row = []
            for L in _subs_of(B.stabilizer(t)):
                tot = 0
                for s in fib[t]:
                    if all(A.act[l][s] == s for l in L.elements):
                        tot += m[s][_positions(A.stabilizer(s))[L.elements]]
                row.append(tot)
            out.append(tuple(row))
        return self._drop(B, tuple(out))

    def norm(self, f: GMap, a: Value) -> Value:
        A, B = f.source, f.target
        m = self._lift(A, a)
        fib = f.fibers
        out = []
        for t in B.points:
            row = []
            for L in _subs_of(B.stabilizer(t)):
                prod = 1
                left = set(fib[t])
                while left:
                    s = min(left)
                    left -= {A.act[l][s] for l in L.elements}
                    Ls = L.intersection(A.stabilizer(s))
                    prod *= m[s][_positions(A.stabilizer(s))[Ls.elements]]
                row.append(prod)
            out.append(tuple(row))
        return self._drop(B, tuple(out))

    def describe(self, X: GSet, a: Value) -> str:
        coeffs = self.to_basis(X, a)
        terms = []
        for c, (x0, L) in zip(coeffs, self.basis(X)):
            if c:
                name = f"[G/{subgroup_name(L)}]" if X.size == 1 else f"[G/{subgroup_name(L)}@{x0}]"
                terms.append(f"{c}{name}" if c != 1 else name)
        return " + ".join(terms) if terms else "0"


# -- change of groups --------------------------------------------------------------


class RestrictedModel(TambaraModel):
    """i_H^* M over ``H.as_group``: value(U) = M(G x_H U)."""

    def __init__(self, M: TambaraModel, H: Subgroup):
        self.base = M
        self.subgroup = H
        self.group = H.as_group
        self.indexing = None if M.indexing is None else restrict_indexing(M.indexing, H)
        self.finite = M.finite

    def _up(self, U: GSet) -> GSet:
        return induce(self.subgroup, U).gset

    def _upmap(self, f: GMap) -> GMap:
        return induce(self.subgroup, f.source).induce_map(f, induce(self.subgroup, f.target))

    def elements(self, U):
        return self.base.elements(self._up(U))

    def sample_elements(self, U):
        return self.base.sample_elements(self._up(U))

    def random_element(self, U, rng):
        return self.base.random_element(self._up(U), rng)

    def contains(self, U, a):
        return self.base.contains(self._up(U), a)

    def zero(self, U):
        return self.base.zero(self._up(U))

    def one(self, U):
        return self.base.one(self._up(U))

    def add(self, U, a, b):
        return self.base.add(self._up(U), a, b)

    def mul(self, U, a, b):
        return self.base.mul(self._up(U), a, b)

    def restrict(self, f, a):
        return self.base.restrict(self._upmap(f), a)

    def transfer(self, f, a):
        return self.base.transfer(self._upmap(f), a)

    def norm(self, f, a):
        return self.base.norm(self._upmap(f), a)


class CoinducedModel(TambaraModel):
    """CoInd_H^G M for M over ``H.as_group``: value(T) = M(i_H^* T)."""

    def __init__(self, M: TambaraModel, H: Subgroup, indexing: IndexingSystem | None = None):
        if M.group != H.as_group:
            raise ShapeError("coinduction needs a model over the subgroup")
        if indexing is not None and M.indexing is not None and not restrict_indexing(indexing, H) <= M.indexing:
            raise ShapeError("the restricted indexing system must be admissible for the base model")
        self.base = M
        self.subgroup = H
        self.group = H.group
        self.indexing = indexing
        self.finite = M.finite

    def _down(self, T: GSet) -> GSet:
        return restrict(self.subgroup, T)

    def elements(self, T):
        return self.base.elements(self._down(T))

    def sample_elements(self, T):
        return self.base.sample_elements(self._down(T))

    def random_element(self, T, rng):
        return self.base.random_element(self._down(T), rng)

    def contains(self, T, a):
        return self.base.contains(self._down(T), a)

    def zero(self, T):
        return self.base.zero(self._down(T))

    def one(self, T):
        return self.base.one(self._down(T))

    def add(self, T, a, b):
        return self.base.add(self._down(T), a, b)

    def mul(self, T, a, b):
        return self.base.mul(self._down(T), a, b)

    def restrict(self, f, a):
        return self.base.restrict(restrict_map(self.subgroup, f), a)

    def transfer(self, f, a):
        return self.base.transfer(restrict_map(self.subgroup, f), a)

    def norm(self, f, a):
        return self.base.norm(restrict_map(self.subgroup, f), a)


class ShiftedModel(TambaraModel):
    """m_T(M): value(X) = M(T x X)."""

    def __init__(self, M: TambaraModel, T: GSet):
        self.base = M
        self.shift = T
        self.group = M.group
        self.indexing = M.indexing
        self.finite = M.finite

    def _up(self, X: GSet) -> GSet:
        return product(self.shift, X)[0]

    def _upmap(self, f: GMap) -> GMap:
        T = self.shift
        n, m = f.source.size, f.target.size
        return GMap(self._up(f.source), self._up(f.target), tuple(t * m + f.fn[a] for t in T.points for a in range(n)))

    def elements(self, X):
        return self.base.elements(self._up(X))

    def sample_elements(self, X):
        return self.base.sample_elements(self._up(X))

    def random_element(self, X, rng):
        return self.base.random_element(self._up(X), rng)

    def contains(self, X, a):
        return self.base.contains(self._up(X), a)

    def zero(self, X):
        return self.base.zero(self._up(X))

    def one(self, X):
        return self.base.one(self._up(X))

    def add(self, X, a, b):
        return self.base.add(self._up(X), a, b)

    def mul(self, X, a, b):
        return self.base.mul(self._up(X), a, b)

    def restrict(self, f, a):
        return self.base.restrict(self._upmap(f), a)

    def transfer(self, f, a):
        return self.base.transfer(self._upmap(f), a)

    def norm(self, f, a):
        return self.base.norm(self._upmap(f), a)


def change_functors(M: TambaraModel, H: Subgroup) -> RestrictedModel:
    return RestrictedModel(M, H)


def fixed_point_model(R: GRing, I: IndexingSystem | None = None) -> FixedPointModel:
    return FixedPointModel(R, I)


def burnside_model(G: FiniteGroup, I: IndexingSystem | None = None, modulus: int | None = None) -> BurnsideModel:
    return BurnsideModel(G, I, modulus)


# -- structural checks ---------------------------------------------------------------


def product_preservation(M: TambaraModel, X: GSet, Y: GSet) -> bool:
    """value(X + Y) -> value(X) x value(Y) by restriction is a bijection."""
    from .gsets import coproduct

    Z, (i1, i2) = coproduct(X, Y)
    pairs = {(M.restrict(i1, z), M.restrict(i2, z)) for z in M.elements(Z)}
    return len(pairs) == len(M.elements(Z)) and pairs == {(a, b) for a in M.elements(X) for b in M.elements(Y)}


def orbit_values(M: TambaraModel, H: Subgroup) -> list[Value]:
    return M.elements(orbit(H))


def point_of(M: TambaraModel, X: GSet, x: int, a: Value) -> Value:
    """Restriction of a to the orbit through x (as G/G_x)."""
    return M.restrict(orbit_map(X.stabilizer(x), X, x), a)


@dataclass
class TriangleReport:
    checked: int = 0
    failures: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def adjunction_triangles(
    N: TambaraModel,
    M: TambaraModel,
    H: Subgroup,
    h_sets: Iterable[GSet],
    g_sets: Iterable[GSet],
) -> TriangleReport:
    """Triangle identities for restriction i_H^* left adjoint to CoInd_H^G, on values.

    N is a model over G and M one over H.  For an H-set U the composite
    i^*N(U) -> i^*CoInd i^*N(U) -> i^*N(U) must be the identity; for a G-set T
    so must CoInd M(T) -> CoInd i^*CoInd M(T) -> CoInd M(T).
    """
    rep = TriangleReport()
    for U in h_sets:
        ind = induce(H, U)
        ind2, eps = counit(H, ind.gset)
        up = ind.induce_map(ind.unit(), ind2)
        for a in N.sample_elements(ind.gset):
            rep.checked += 1
            if N.restrict(up, N.restrict(eps, a)) != a:
                rep.failures.append(("restriction side", U, a))
    for T in g_sets:
        ind, eps = counit(H, T)
        eps_h = restrict_map(H, eps)
        unit = ind.unit()
        for a in M.sample_elements(restrict(H, T)):
            rep.checked += 1
            if M.restrict(unit, M.restrict(eps_h, a)) != a:
                rep.failures.append(("coinduction side", T, a))
    return rep
