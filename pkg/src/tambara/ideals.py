"""O-ideals of finite Tambara models: sub-Mackey functors absorbing products and admissible surjective norms."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .groups import FiniteGroup, Subgroup
from .gsets import GMap, GSet, enumerate_arrows, maps_between, orbit, orbit_map, subgroup_name
from .indexing import IndexingSystem, map_in_category
from .models import BurnsideModel, TambaraModel, Value

MEMBER_CAP = 1024
SAMPLE_SIZE = 256


@dataclass(frozen=True)
class SubMackeyData:
    """J(G/H) for one subgroup per conjugacy class; other sets are determined by restriction."""

    group: FiniteGroup
    parts: tuple[tuple[Subgroup, frozenset], ...]

    def at_orbit(self, H: Subgroup) -> frozenset:
        for K, vals in self.parts:
            if K == H:
                return vals
        raise KeyError(f"no data for the orbit G/{subgroup_name(H)}")

    def _assemble(self, M: TambaraModel, X: GSet, charts, pick) -> Value:
        acc = M.zero(X)
        for (_, m), v in zip(charts, pick):
            acc = M.add(X, acc, M.transfer(m, v))
        return acc

    def members(self, M: TambaraModel, X: GSet, limit: int | None = None) -> list[Value] | None:
        """J(X), assembled orbitwise as sums of transfers; None if larger than ``limit``."""
        charts = self._orbit_charts(X)
        total = 1
        for K, _ in charts:
            total *= len(self.at_orbit(K))
        if limit is not None and total > limit:
            return None
        return [
            self._assemble(M, X, charts, pick)
            for pick in itertools.product(*(sorted(self.at_orbit(K)) for K, _ in charts))
        ]

    def random_member(self, M: TambaraModel, X: GSet, rng: random.Random) -> Value:
        charts = self._orbit_charts(X)
        return self._assemble(M, X, charts, [rng.choice(sorted(self.at_orbit(K))) for K, _ in charts])

    def _orbit_charts(self, X: GSet) -> list[tuple[Subgroup, GMap]]:
        """For each orbit of X: the class representative K and an iso G/K -> orbit."""
        lat = self.group.lattice
        out = []
        for o in X.orbits:
            x0 = o[0]
            K = X.stabilizer(x0)
            rep = lat.representative(K)
            g = next(g for g in self.group.elements if K.conjugate(g) == rep)
            out.append((rep, orbit_map(rep, X, X.act[g][x0])))
        return out

    def contains(self, M: TambaraModel, X: GSet, a: Value) -> bool:
        """Whether the restriction of a to every orbit lies in J."""
        return all(M.restrict(m, a) in self.at_orbit(K) for K, m in self._orbit_charts(X))


def zero_ideal(M: TambaraModel) -> SubMackeyData:
    G = M.group
    return SubMackeyData(G, tuple((H, frozenset([M.zero(orbit(H))])) for H in G.lattice.class_representatives()))


def whole_ideal(M: TambaraModel) -> SubMackeyData:
    G = M.group
    return SubMackeyData(G, tuple((H, frozenset(M.elements(orbit(H)))) for H in G.lattice.class_representatives()))


def family_ideal(M: BurnsideModel, family: list[Subgroup]) -> SubMackeyData:
    """J(G/H) spanned by G-sets over G/H whose stabilizers lie in the family (closed under subconjugacy)."""
    G = M.group
    lat = G.lattice
    fam = {lat.label(L) for L in family}
    parts = []
    for H in lat.class_representatives():
        X = orbit(H)
        basis = M.basis(X)
        allowed = [i for i, (_, L) in enumerate(basis) if lat.label(L) in fam]
        vals = set()
        for a in M.elements(X):
            coeffs = M.to_basis(X, a)
            if all(c == 0 for i, c in enumerate(coeffs) if i not in allowed):
                vals.add(a)
        parts.append((H, frozenset(vals)))
    return SubMackeyData(G, tuple(parts))


@dataclass
class IdealReport:
    ok: bool
    condition: str | None = None
    witness: object = None
    bound: int = 0
    checked: dict[str, int] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return f"ideal (all orbit norms; surjective arrows with <= {self.bound} points: {self.checked})"
        return f"not an ideal: {self.condition} fails at {self.witness}"


def is_O_ideal(M: TambaraModel, J: SubMackeyData, I: IndexingSystem | None = None, bound: int = 4) -> IdealReport:
    """Sub-Mackey closure, absorption of products, and closure under admissible surjective norms."""
    G = M.group
    I = I if I is not None else M.indexing
    reps = G.lattice.class_representatives()
    rep = IdealReport(True, bound=bound)
    for H in reps:
        X = orbit(H)
        vals = J.at_orbit(H)
        if M.zero(X) not in vals:
            return IdealReport(False, "contains zero", (subgroup_name(H),), bound)
        for a, b in itertools.product(vals, vals):
            if M.add(X, a, b) not in vals:
                return IdealReport(False, "additive closure", (subgroup_name(H), a, b), bound)
    for H, K in itertools.product(reps, reps):
        for m in maps_between(orbit(H), orbit(K)):
            for a in J.at_orbit(K):
                r = M.restrict(m, a)
                if r not in J.at_orbit(H):
                    return IdealReport(False, "restriction", (m, a, r), bound)
            for a in J.at_orbit(H):
                t = M.transfer(m, a)
                if t not in J.at_orbit(K):
                    return IdealReport(False, "transfer", (m, a, t), bound)
    for H in reps:
        X = orbit(H)
        for a in M.elements(X):
            for j in J.at_orbit(H):
                if M.mul(X, a, j) not in J.at_orbit(H):
                    return IdealReport(False, "absorption", (subgroup_name(H), a, j), bound)
    # orbit-to-orbit norms decide the question (a norm from a coproduct is a product of norms)
    for H, K in itertools.product(reps, reps):
        for f in maps_between(orbit(H), orbit(K)):
            if I is not None and not map_in_category(I, f):
                continue
            for a in sorted(J.at_orbit(H)):
                n = M.norm(f, a)
                if n not in J.at_orbit(K):
                    return IdealReport(False, "norm", (f, M.describe(f.source, a), M.describe(f.target, n)), bound)
    rng = random.Random(0)
    exhaustive = sampled = 0
    for f in enumerate_arrows(G, bound, bound):
        if not f.is_surjective() or (I is not None and not map_in_category(I, f)):
            continue
        members = J.members(M, f.source, limit=MEMBER_CAP)
        if members is None:
            sampled += 1
            members = [J.random_member(M, f.source, rng) for _ in range(SAMPLE_SIZE)]
        else:
            exhaustive += 1
        for a in members:
            n = M.norm(f, a)
            if not J.contains(M, f.target, n):
                return IdealReport(False, "norm", (f, M.describe(f.source, a), M.describe(f.target, n)), bound)
    rep.checked["surjective arrows checked exhaustively"] = exhaustive
    rep.checked["surjective arrows checked on samples"] = sampled
    return rep
