"""Finite groups as explicit multiplication tables, with subgroup combinatorics.

Elements are the integers ``0..order-1`` and element 0 is always the identity.
Everything downstream quantifies over elements directly, so the tables are the
whole story: no presentations, no permutation-group algorithms.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import GroupValidationError, ResourceBoundError

DEFAULT_ORDER_BOUND = 64

Table = tuple[tuple[int, ...], ...]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    mul: Table
    identity: int = 0
    inv: tuple[int, ...] = ()
    name: str = field(default="", compare=False)
    generators: tuple[int, ...] = field(default=(), compare=False)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, FiniteGroup) and self.mul == other.mul

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash(self.mul)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    @property
    def elements(self) -> range:
        return range(self.order)

    def m(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return self.mul[self.mul[g][x]][self.inv[g]]

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.mul[y][x]
            k += 1
        return k

    def is_abelian(self) -> bool:
        return all(self.mul[a][b] == self.mul[b][a] for a in self.elements for b in range(a))

    def generate(self, gens: Iterable[int]) -> tuple[int, ...]:
        """Sorted elements of the subgroup generated by ``gens``."""
        gens = tuple(set(gens))
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.mul[x][g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return tuple(sorted(seen))

    def subgroup(self, elements: Iterable[int]) -> "Subgroup":
        elems = tuple(sorted(set(elements)))
        sub = Subgroup(self, elems)
        sub.check()
        return sub

    def generated(self, gens: Iterable[int]) -> "Subgroup":
        return Subgroup(self, self.generate(gens))

    @property
    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (self.identity,))

    @property
    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(self.elements))

    @cached_property
    def lattice(self) -> "SubgroupLattice":
        return subgroup_lattice(self)


@dataclass(frozen=True)
class Subgroup:
    group: FiniteGroup = field(repr=False)
    elements: tuple[int, ...]

    def __repr__(self) -> str:
        return f"Subgroup({list(self.elements)})"

    def check(self) -> None:
        G = self.group
        s = set(self.elements)
        if G.identity not in s:
            raise GroupValidationError(f"subgroup {list(self.elements)} lacks the identity")
        for a in self.elements:
            if G.inv[a] not in s:
                raise GroupValidationError(f"subgroup not closed under inverse at {a}", (a,))
            for b in self.elements:
                if G.mul[a][b] not in s:
                    raise GroupValidationError(f"subgroup not closed under product {a}*{b}", (a, b))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self._set

    def __le__(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def __lt__(self, other: "Subgroup") -> bool:
        return self._set < other._set

    def index_in(self, other: "Subgroup | None" = None) -> int:
        big = self.group.order if other is None else other.order
        return big // self.order

    def conjugate(self, g: int) -> "Subgroup":
        G = self.group
        return Subgroup(G, tuple(sorted(G.conj(g, x) for x in self.elements)))

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.group, tuple(sorted(self._set & other._set)))

    def conjugates_by(self, conjugators: Iterable[int]) -> set[tuple[int, ...]]:
        return {self.conjugate(g).elements for g in conjugators}

    def normalizer(self) -> "Subgroup":
        G = self.group
        return Subgroup(G, tuple(g for g in G.elements if self.conjugate(g) == self))

    @cached_property
    def local_index(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.elements)}

    @cached_property
    def as_group(self) -> FiniteGroup:
        """The subgroup as a standalone group on ``0..|H|-1`` (sorted element order)."""
        G = self.group
        idx = self.local_index
        rows = tuple(tuple(idx[G.mul[a][b]] for b in self.elements) for a in self.elements)
        return _finish(rows, name=f"{G.name or 'G'}|{list(self.elements)}")

    def to_local(self, sub: "Subgroup") -> "Subgroup":
        """Re-express a subgroup of G contained in self as a subgroup of ``as_group``."""
        idx = self.local_index
        return Subgroup(self.as_group, tuple(sorted(idx[x] for x in sub.elements)))

    def to_global(self, sub: "Subgroup") -> "Subgroup":
        return Subgroup(self.group, tuple(sorted(self.elements[i] for i in sub.elements)))


@dataclass(frozen=True)
class SubgroupLattice:
    group: FiniteGroup = field(repr=False)
    subgroups: tuple[Subgroup, ...]
    conj_classes: tuple[tuple[int, ...], ...]
    order_relation: frozenset[tuple[int, int]]

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {s.elements: i for i, s in enumerate(self.subgroups)}

    @cached_property
    def class_of(self) -> tuple[int, ...]:
        out = [0] * len(self.subgroups)
        for c, members in enumerate(self.conj_classes):
            for i in members:
                out[i] = c
        return tuple(out)

    def __len__(self) -> int:
        return len(self.subgroups)

    def index_of(self, H: Subgroup) -> int:
        return self.index[H.elements]

    def label(self, H: Subgroup) -> int:
        """Conjugacy-class label; classes are numbered by (order, least member)."""
        return self.class_of[self.index[H.elements]]

    def representative(self, H: Subgroup) -> Subgroup:
        return self.subgroups[self.conj_classes[self.label(H)][0]]

    def class_representatives(self) -> list[Subgroup]:
        return [self.subgroups[c[0]] for c in self.conj_classes]

    def contains(self, i: int, j: int) -> bool:
        """Whether subgroup i is contained in subgroup j."""
        return (i, j) in self.order_relation

    def subgroups_of(self, H: Subgroup) -> list[Subgroup]:
        j = self.index_of(H)
        return [self.subgroups[i] for i in range(len(self.subgroups)) if (i, j) in self.order_relation]


# -- construction -----------------------------------------------------------


def _inverses(rows: Table, identity: int) -> tuple[int, ...]:
    n = len(rows)
    inv = []
    for a in range(n):
        for b in range(n):
            if rows[a][b] == identity and rows[b][a] == identity:
                inv.append(b)
                break
        else:
            raise GroupValidationError(f"element {a} has no two-sided inverse", (a,))
    return tuple(inv)


def validate_table(rows: Sequence[Sequence[int]]) -> None:
    """Raise GroupValidationError naming the first failing element or triple."""
    n = len(rows)
    if n == 0:
        raise GroupValidationError("a group needs at least one element")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise GroupValidationError(f"row {i} has {len(row)} entries, expected {n}", (i,))
        for x in row:
            if not (isinstance(x, int) and 0 <= x < n):
                raise GroupValidationError(f"row {i} has out-of-range entry {x!r}", (i,))
    for a in range(n):
        if rows[0][a] != a or rows[a][0] != a:
            raise GroupValidationError(f"element 0 is not a two-sided identity (fails at {a})", (0, a))
    _inverses(tuple(map(tuple, rows)), 0)
    for a in range(n):
        ra = rows[a]
        for b in range(n):
            rab = rows[ra[b]]
            for c in range(n):
                if rab[c] != ra[rows[b][c]]:
                    raise GroupValidationError(f"not associative at ({a}, {b}, {c})", (a, b, c))


def _finish(
    rows: Table, name: str = "", generators: tuple[int, ...] | None = None, bound: int = DEFAULT_ORDER_BOUND
) -> FiniteGroup:
    if len(rows) > bound:
        raise ResourceBoundError(f"group order {len(rows)} exceeds bound {bound}")
    inv = _inverses(rows, 0)
    G = FiniteGroup(len(rows), rows, 0, inv, name, ())
    gens = generators if generators is not None else _greedy_generators(G)
    object.__setattr__(G, "generators", gens)
    return G


def _greedy_generators(G: FiniteGroup) -> tuple[int, ...]:
    gens: list[int] = []
    span = {G.identity}
    for x in G.elements:
        if x not in span:
            gens.append(x)
            span = set(G.generate(gens))
    return tuple(gens)


def from_table(rows: Sequence[Sequence[int]], name: str = "", bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
    if len(rows) > bound:
        raise ResourceBoundError(f"group order {len(rows)} exceeds bound {bound}")
    validate_table(rows)
    return _finish(tuple(tuple(r) for r in rows), name or f"table{len(rows)}", bound=bound)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupValidationError("cyclic(n) needs n >= 1")
    if n > DEFAULT_ORDER_BOUND:
        raise ResourceBoundError(f"group order {n} exceeds bound {DEFAULT_ORDER_BOUND}")
    rows = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    return _finish(rows, f"cyclic:{n}", (1,) if n > 1 else ())


def trivial_group() -> FiniteGroup:
    return cyclic(1)


def direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    """Pairs (a, b) are indexed as ``a * |B| + b``."""
    nb = B.order
    n = A.order * nb
    if n > DEFAULT_ORDER_BOUND:
        raise ResourceBoundError(f"group order {n} exceeds bound {DEFAULT_ORDER_BOUND}")
    rows = tuple(
        tuple(A.mul[x // nb][y // nb] * nb + B.mul[x % nb][y % nb] for y in range(n)) for x in range(n)
    )
    gens = tuple(a * nb for a in A.generators) + tuple(b for b in B.generators)
    return _finish(rows, f"product({A.name},{B.name})", gens)


def klein4() -> FiniteGroup:
    G = direct_product(cyclic(2), cyclic(2))
    object.__setattr__(G, "name", "klein4")
    return G


def symmetric(n: int) -> FiniteGroup:
    """Permutations of ``range(n)`` in lexicographic order; (p*q)(i) = p(q(i))."""
    if not 1 <= n <= 4:
        raise GroupValidationError("symmetric(n) is limited to 1 <= n <= 4")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    rows = tuple(tuple(index[tuple(p[q[i]] for i in range(n))] for q in perms) for p in perms)
    gens: list[int] = []
    if n >= 2:
        swap = list(range(n))
        swap[0], swap[1] = 1, 0
        gens.append(index[tuple(swap)])
    if n >= 3:
        gens.append(index[tuple((i + 1) % n for i in range(n))])
    return _finish(rows, f"sym:{n}", tuple(gens))


def permutation_of(G: FiniteGroup, x: int) -> tuple[int, ...] | None:
    """Underlying permutation for elements of a ``symmetric`` group, else None."""
    if not G.name.startswith("sym:"):
        return None
    n = int(G.name.split(":")[1])
    return list(itertools.permutations(range(n)))[x]


def make_group(spec: "str | FiniteGroup | Sequence[Sequence[int]]") -> FiniteGroup:
    """Build a validated group from a reference string, a table, or pass one through.

    Reference strings: ``cyclic:<n>``, ``klein4``, ``sym:<n>``, ``product:<a>x<b>``
    (``a``, ``b`` are cyclic orders or bracketed references such as
    ``product:[sym:3]x2``), and ``trivial``.
    """
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        return parse_group_ref(spec)
    return from_table(spec)


def parse_group_ref(ref: str) -> FiniteGroup:
    ref = ref.strip()
    if ref in ("trivial", "e", "cyclic:1"):
        return trivial_group()
    if ref == "klein4":
        return klein4()
    kind, _, arg = ref.partition(":")
    try:
        if kind == "cyclic":
            return cyclic(int(arg))
        if kind == "sym":
            return symmetric(int(arg))
        if kind == "product":
            left, right = _split_product(arg)
            G = direct_product(_factor(left), _factor(right))
            object.__setattr__(G, "name", ref)
            return G
    except ValueError as exc:
        if isinstance(exc, GroupValidationError):
            raise
        raise GroupValidationError(f"bad group reference {ref!r}: {exc}") from exc
    raise GroupValidationError(f"unknown group reference {ref!r}")


def _split_product(arg: str) -> tuple[str, str]:
    depth = 0
    for i, ch in enumerate(arg):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "x" and depth == 0:
            return arg[:i], arg[i + 1 :]
    raise ValueError("product needs the form <a>x<b>")


def _factor(s: str) -> FiniteGroup:
    if s.startswith("[") and s.endswith("]"):
        return parse_group_ref(s[1:-1])
    return cyclic(int(s))


# -- subgroup lattice -------------------------------------------------------


def subgroup_lattice(G: FiniteGroup, bound: int = DEFAULT_ORDER_BOUND) -> SubgroupLattice:
    if G.order > bound:
        raise ResourceBoundError(f"subgroup lattice: |G| = {G.order} exceeds bound {bound}")
    cyclic_subs: dict[tuple[int, ...], tuple[int, ...]] = {}
    for x in G.elements:
        cyclic_subs.setdefault(G.generate([x]), (x,))
    found: dict[tuple[int, ...], tuple[int, ...]] = dict(cyclic_subs)
    queue = deque(found)
    while queue:
        elems = queue.popleft()
        gens = found[elems]
        members = set(elems)
        for c_elems, (c,) in cyclic_subs.items():
            if c in members:
                continue
            joined = G.generate(gens + (c,))
            if joined not in found:
                found[joined] = gens + (c,)
                queue.append(joined)
    keys = sorted(found, key=lambda e: (len(e), e))
    subs = tuple(Subgroup(G, e) for e in keys)
    index = {e: i for i, e in enumerate(keys)}

    seen: set[int] = set()
    classes = []
    for i, s in enumerate(subs):
        if i in seen:
            continue
        members = sorted(index[c] for c in s.conjugates_by(G.elements))
        seen.update(members)
        classes.append(tuple(members))
    # subs are already sorted by (order, elements), so classes come out ordered by least member
    sets = [frozenset(e) for e in keys]
    relation = frozenset(
        (i, j) for i in range(len(subs)) for j in range(len(subs)) if len(keys[i]) <= len(keys[j]) and sets[i] <= sets[j]
    )
    return SubgroupLattice(G, subs, tuple(classes), relation)


def is_subconjugate(K: Subgroup, H: Subgroup) -> bool:
    """True iff some conjugate of K lies inside H."""
    if H.order % K.order:
        return False
    G = K.group
    return any(K.conjugate(g) <= H for g in G.elements)


def double_cosets(H: Subgroup, K: Subgroup) -> list[int]:
    """Least representative of each double coset H g K, in increasing order."""
    G = H.group
    covered: set[int] = set()
    reps = []
    for g in G.elements:
        if g in covered:
            continue
        reps.append(g)
        covered.update(G.mul[G.mul[h][g]][k] for h in H.elements for k in K.elements)
    return reps


def double_coset(H: Subgroup, g: int, K: Subgroup) -> frozenset[int]:
    G = H.group
    return frozenset(G.mul[G.mul[h][g]][k] for h in H.elements for k in K.elements)


def left_cosets(H: Subgroup) -> list[tuple[int, ...]]:
    """Left cosets gH as sorted tuples, ordered by least element (H itself first)."""
    G = H.group
    seen: set[int] = set()
    out = []
    for g in G.elements:
        if g in seen:
            continue
        coset = tuple(sorted(G.mul[g][h] for h in H.elements))
        seen.update(coset)
        out.append(coset)
    return out


def right_cosets(H: Subgroup) -> list[tuple[int, ...]]:
    G = H.group
    seen: set[int] = set()
    out = []
    for g in G.elements:
        if g in seen:
            continue
        coset = tuple(sorted(G.mul[h][g] for h in H.elements))
        seen.update(coset)
        out.append(coset)
    return out


@lru_cache(maxsize=None)
def subgroup_classes_within(K: Subgroup) -> tuple[tuple[Subgroup, ...], ...]:
    """Subgroups of K grouped into K-conjugacy classes; each class starts with its least member.

    Classes are ordered by (order, least member).
    """
    lat = K.group.lattice
    inside = [s for s in lat.subgroups_of(K)]
    seen: set[tuple[int, ...]] = set()
    classes = []
    for s in inside:
        if s.elements in seen:
            continue
        members = sorted(s.conjugates_by(K.elements))
        seen.update(members)
        classes.append(tuple(Subgroup(K.group, m) for m in members))
    return tuple(classes)


def canonical_conjugate(L: Subgroup, within: Subgroup) -> Subgroup:
    """Least K-conjugate of L (K = ``within``), compared as sorted element tuples."""
    return Subgroup(L.group, min(L.conjugates_by(within.elements)))
