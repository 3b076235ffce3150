"""Tambara reciprocity: norms of sums and of transfers as sums of T N R terms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .bispans import HomClass, compose_raw, decompose, norm, transfer
from .errors import NormUnavailableError, ShapeError
from .groups import Subgroup
from .gsets import GMap, GSet, coproduct, fold, induce, is_isomorphic, orbit, orbit_inclusion
from .indexing import IndexingSystem
from .models import TambaraModel, Value, eval_bispan


@dataclass
class ReciprocityFormula:
    kind: str
    source: GSet
    target: GSet
    total: HomClass
    summands: list[HomClass]
    pi_set: GSet
    explicit_set: GSet
    explicit_agrees: bool

    def __len__(self) -> int:
        return len(self.summands)


def _require(I: IndexingSystem | None, top: Subgroup, bottom: Subgroup) -> None:
    if not bottom <= top:
        raise ShapeError("need nested subgroups")
    if I is not None and not I.admits(top, bottom):
        raise NormUnavailableError(f"norm from {bottom.elements} to {top.elements} is not admissible", (top.elements, bottom.elements))


def _two_valued_functions(H: Subgroup, K: Subgroup) -> GSet:
    """G x_K Map(K/H, {0, 1}) with (k f)(x) = f(k^-1 x)."""
    Kg = K.as_group
    Hl = K.to_local(H)
    KH = orbit(Hl)
    funcs = list(itertools.product((0, 1), repeat=KH.size))
    index = {f: i for i, f in enumerate(funcs)}
    rows = []
    for k in Kg.elements:
        kinv = Kg.inv[k]
        rows.append(tuple(index[tuple(f[KH.act[kinv][x]] for x in KH.points)] for f in funcs))
    return induce(K, GSet(Kg, tuple(rows))).gset


def _sections_of_cosets(H: Subgroup, K: Subgroup) -> GSet:
    """Map_K(G, K/H): sigma(g k) = k^-1 sigma(g), with (x sigma)(g) = sigma(x^-1 g)."""
    G = K.group
    Kg = K.as_group
    Hl = K.to_local(H)
    KH = orbit(Hl)
    local = K.local_index
    reps = []
    where = {}
    for g in G.elements:
        if g in where:
            continue
        i = len(reps)
        reps.append(g)
        for k in K.elements:
            where[G.mul[g][k]] = (i, k)
    sigmas = list(itertools.product(range(KH.size), repeat=len(reps)))
    index = {s: i for i, s in enumerate(sigmas)}

    def value(s, g):
        i, k = where[g]
        return KH.act[Kg.inv[local[k]]][s[i]]

    rows = []
    for x in G.elements:
        xinv = G.inv[x]
        rows.append(tuple(index[tuple(value(s, G.mul[xinv][r]) for r in reps)] for s in sigmas))
    return GSet(G, tuple(rows))


def reciprocity_sum(H: Subgroup, K: Subgroup, I: IndexingSystem | None = None) -> ReciprocityFormula:
    """N_H^K(a + b) for a, b in M(G/H), as summands from G/H + G/H to G/K."""
    _require(I, K, H)
    X = orbit(H)
    pi = orbit_inclusion(H, K)
    nabla = fold(X)
    b, trace = compose_raw(transfer(nabla), norm(pi))
    total = b.hom_class()
    pi_set = trace.exponential.pi_set
    explicit = _two_valued_functions(H, K)
    ok, _ = is_isomorphic(pi_set, explicit)
    return ReciprocityFormula("sum", nabla.source, pi.target, total, decompose(total), pi_set, explicit, ok)


def reciprocity_transfer(H: Subgroup, K: Subgroup, I: IndexingSystem | None = None) -> ReciprocityFormula:
    """N_K^G(tr_H^K a) for a in M(G/H), as summands from G/H to G/G."""
    G = K.group
    _require(I, G.whole, K)
    p = orbit_inclusion(H, K)
    q = orbit_inclusion(K, G.whole)
    b, trace = compose_raw(transfer(p), norm(q))
    total = b.hom_class()
    pi_set = trace.exponential.pi_set
    explicit = _sections_of_cosets(H, K)
    ok, _ = is_isomorphic(pi_set, explicit)
    return ReciprocityFormula("transfer", p.source, q.target, total, decompose(total), pi_set, explicit, ok)


@dataclass
class ReciprocityReport:
    kind: str
    cases: int
    failures: list[tuple] = field(default_factory=list)
    summands: int = 0
    explicit_agrees: bool = True

    @property
    def ok(self) -> bool:
        return not self.failures and self.explicit_agrees

    def __str__(self) -> str:
        if self.ok:
            return f"OK ({self.cases} cases)"
        return f"FAIL ({len(self.failures)} of {self.cases} cases); first witness {self.failures[0] if self.failures else None}"


def _glue(M: TambaraModel, injections: list[GMap], parts: list[Value]) -> Value:
    """The element of M(X1 + X2 + ...) restricting to the given parts: a sum of transfers."""
    Z = injections[0].target
    acc = M.zero(Z)
    for inc, v in zip(injections, parts):
        acc = M.add(Z, acc, M.transfer(inc, v))
    return acc


def _evaluate_sum(M: TambaraModel, summands: list[HomClass], target: GSet, x: Value) -> Value:
    acc = M.zero(target)
    for s in summands:
        acc = M.add(target, acc, eval_bispan(M, s, x))
    return acc


def verify_reciprocity(
    M: TambaraModel,
    H: Subgroup,
    K: Subgroup,
    kind: str = "sum",
) -> ReciprocityReport:
    """Both sides of the reciprocity formula on every (sampled) value, exactly."""
    if kind == "sum":
        formula = reciprocity_sum(H, K, M.indexing)
        X = orbit(H)
        pi = orbit_inclusion(H, K)
        _, incs = coproduct(X, X)
        vals = M.sample_elements(X)
        rep = ReciprocityReport("sum", 0, summands=len(formula), explicit_agrees=formula.explicit_agrees)
        for a, b in itertools.product(vals, vals):
            rep.cases += 1
            lhs = M.norm(pi, M.add(X, a, b))
            rhs = _evaluate_sum(M, formula.summands, formula.target, _glue(M, incs, [a, b]))
            if lhs != rhs:
                rep.failures.append((a, b, lhs, rhs))
        return rep
    if kind == "transfer":
        formula = reciprocity_transfer(H, K, M.indexing)
        p = orbit_inclusion(H, K)
        q = orbit_inclusion(K, K.group.whole)
        rep = ReciprocityReport("transfer", 0, summands=len(formula), explicit_agrees=formula.explicit_agrees)
        for a in M.sample_elements(p.source):
            rep.cases += 1
            lhs = M.norm(q, M.transfer(p, a))
            rhs = _evaluate_sum(M, formula.summands, formula.target, a)
            if lhs != rhs:
                rep.failures.append((a, lhs, rhs))
        return rep
    raise ValueError(f"unknown reciprocity kind {kind!r}")
