"""The acceptance suite as plain functions, shared by the test suite and the CLI."""

from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

from .bispans import (
    Bispan,
    add,
    compose_class,
    compose_raw,
    identity_bispan,
    in_predicate,
    multiply,
    norm,
    power,
    product_check,
    restriction,
    transport_check,
)
from .errors import ExponentEscapeError
from .groups import FiniteGroup, cyclic, klein4, symmetric
from .gsets import (
    dependent_product,
    enumerate_gsets,
    fold,
    from_empty,
    orbit,
    orbit_inclusion,
    orbit_type,
    point,
    restrict,
)
from .ideals import family_ideal, is_O_ideal
from .indexing import (
    IndexingSystem,
    builtin,
    enumerate_systems,
    from_indexing,
    initial_implies_mono,
    round_trip_check,
)
from .models import (
    BurnsideModel,
    CoinducedModel,
    FixedPointModel,
    TambaraModel,
    adjunction_triangles,
    eval_bispan,
    swap_square,
    zmod,
)
from .reciprocity import reciprocity_sum, verify_reciprocity
from .sampling import random_admissible_map, random_composable


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return f"[{verdict}] {self.number}. {self.name} ({self.seconds:.1f}s): {self.detail}"

    def record(self) -> dict:
        return {
            "criterion": self.number,
            "name": self.name,
            "ok": self.ok,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


def _sub(G: FiniteGroup, order: int):
    return next(H for H in G.lattice.subgroups if H.order == order)


def classification() -> tuple[bool, str]:
    expected = {"C2": 2, "C3": 2, "C4": 5, "C8": 14}
    groups = [("C2", cyclic(2)), ("C3", cyclic(3)), ("C4", cyclic(4)), ("C2xC2", klein4()), ("C8", cyclic(8)), ("S3", symmetric(3))]
    ok = True
    parts = []
    for label, G in groups:
        r = round_trip_check(G, bound=3)
        good = r.ok and r.oracle_agrees is True and expected.get(label, r.count) == r.count
        ok &= good
        parts.append(f"{label}:{r.count}{'' if good else '!'}")
    return ok, " ".join(parts)


def category_closure(per_system: int = 1000, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    violations = 0
    total = 0
    for G in (cyclic(4), symmetric(3)):
        for I in enumerate_systems(G).systems:
            D = from_indexing(I)
            for _ in range(per_system):
                p, q = random_composable(rng, G, I, max_points=4)
                total += 1
                try:
                    b, _ = compose_raw(p, q, D)
                except ExponentEscapeError:
                    violations += 1
                    continue
                if not in_predicate(b, D):
                    violations += 1
    return violations == 0, f"{total} composites, {violations} violations"


def _functoriality_batch(M: TambaraModel, G: FiniteGroup, pairs: int, rng: random.Random, values: int = 4) -> tuple[int, int]:
    checked = failures = 0
    for _ in range(pairs):
        p, q = random_composable(rng, G, None, max_points=4)
        pq = compose_class(p, q)
        xs = M.sample_elements(p.X)
        if len(xs) > values:
            xs = rng.sample(xs, values)
        for x in xs:
            checked += 1
            if eval_bispan(M, pq, x) != eval_bispan(M, q, eval_bispan(M, p, x)):
                failures += 1
    return checked, failures


def functoriality(pairs: int = 1000, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    C2, C4, S3 = cyclic(2), cyclic(4), symmetric(3)
    runs = [
        ("C2 Z/6", FixedPointModel(zmod(6, C2)), C2),
        ("C2 swap", FixedPointModel(swap_square(3)), C2),
        ("C4 Z/6", FixedPointModel(zmod(6, C4)), C4),
        ("S3 Z/6", FixedPointModel(zmod(6, S3)), S3),
        # trivial-action Z/6 cannot see much of the equivariance; Burnside can
        ("C2 Burnside", BurnsideModel(C2), C2),
        ("C4 Burnside", BurnsideModel(C4), C4),
        ("S3 Burnside", BurnsideModel(S3), S3),
    ]
    bad = 0
    parts = []
    for label, M, G in runs:
        c, f = _functoriality_batch(M, G, pairs, rng)
        bad += f
        parts.append(f"{label} {pairs} pairs/{c} values/{f} failures")
    return bad == 0, "; ".join(parts)


def reciprocity() -> tuple[bool, str]:
    C2, C4 = cyclic(2), cyclic(4)
    e2, e4 = C2.trivial_subgroup, C4.trivial_subgroup
    n2 = len(reciprocity_sum(e2, C2.whole))
    n4 = len(reciprocity_sum(e4, C4.whole))
    fixed = verify_reciprocity(FixedPointModel(zmod(6, C2)), e2, C2.whole, "sum")
    burn = verify_reciprocity(BurnsideModel(C2), e2, C2.whole, "sum")
    mid = _sub(C4, 2)
    tr_burn = verify_reciprocity(BurnsideModel(C4), e4, mid, "transfer")
    tr_fixed = verify_reciprocity(FixedPointModel(zmod(6, C4)), e4, mid, "transfer")
    ok = n2 == 3 and n4 == 6 and fixed.ok and fixed.cases == 36 and burn.ok and tr_burn.ok and tr_fixed.ok
    detail = (
        f"summands e<C2: {n2}, e<C4: {n4}; Z/6 sum {fixed}; Burnside C2 sum {burn}; "
        f"transfer e<C2<C4: Burnside {tr_burn}, Z/6 {tr_fixed}"
    )
    return ok, detail


def projective_identities() -> tuple[bool, str]:
    G = cyclic(2)
    pt = point(G)
    pi = orbit_inclusion(G.trivial_subgroup, G.whole)
    x = identity_bispan(pt).hom_class()
    nx = compose_class(restriction(pi), norm(pi))
    t = Bispan(from_empty(pt), from_empty(pi.source), pi).hom_class()
    a = multiply(t, t) == add(t, t)
    b = multiply(t, nx) == multiply(t, power(x, 2))
    c = compose_class(nx, restriction(pi)) == multiply(restriction(pi), restriction(pi))
    return a and b and c, f"t*t = t+t: {a}; t*nx = t*x^2: {b}; R(nx) = x*x: {c}"


def adjunction() -> tuple[bool, str]:
    C2, C4 = cyclic(2), cyclic(4)
    cases = [(C2, C2.trivial_subgroup), (C4, _sub(C4, 2))]
    ok = True
    parts = []
    for G, H in cases:
        r = transport_check(H, point(G), point(H.as_group), (2, 2))
        ok &= r.ok
        parts.append(f"|G|={G.order},|H|={H.order}: {r.h_classes}<->{r.g_classes} {'bijective' if r.ok else 'FAILED'}")
        M = FixedPointModel(zmod(4, H.as_group))
        CI = CoinducedModel(M, H)
        sets = enumerate_gsets(G, 4)
        pointwise = all(CI.elements(T) == M.elements(restrict(H, T)) for T in sets)
        tri = adjunction_triangles(BurnsideModel(G), M, H, enumerate_gsets(H.as_group, 2), sets)
        ok &= pointwise and tri.ok
        parts.append(f"CoInd pointwise on {len(sets)} sets: {pointwise}; triangles {tri.checked} values ok: {tri.ok}")
    return ok, "; ".join(parts)


def norm_of_two() -> tuple[bool, str]:
    G = cyclic(2)
    free = orbit(G.trivial_subgroup)
    pi = orbit_inclusion(G.trivial_subgroup, G.whole)
    M = BurnsideModel(G)
    two = M.from_basis(free, (2,))
    coeffs = M.to_basis(point(G), M.norm(pi, two))
    words = M.describe(point(G), M.norm(pi, two))
    ed = dependent_product(fold(free), pi)
    kinds = orbit_type(ed.pi_set)
    fixed_pts = sum(1 for o in ed.pi_set.orbits if len(o) == 1)
    free_orbits = sum(1 for o in ed.pi_set.orbits if len(o) == 2)
    ok = coeffs == (1, 2) and fixed_pts == 2 and free_orbits == 1
    return ok, f"N(2) = {words}; dependent product orbits {kinds}"


def structural(cases: int = 500, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    C2, C4, S3 = cyclic(2), cyclic(4), symmetric(3)
    mono_bad = mono_checked = 0
    for G in (C2, C4, S3):
        preds = [from_indexing(I) for I in enumerate_systems(G).systems] + [builtin(G, "all"), builtin(G, "mono")]
        for D in preds:
            r = initial_implies_mono(D, 8)
            mono_checked += r.checked
            mono_bad += not r.ok
    prod_ok = True
    for G in (C2, C4):
        pt = point(G)
        free = orbit(G.trivial_subgroup)
        for D in (None, from_indexing(IndexingSystem.trivial(G))):
            ok, _ = product_check(pt, pt, free, D, (2, 2))
            prod_ok &= ok
    models = [
        (C2, FixedPointModel(zmod(6, C2))),
        (C2, FixedPointModel(swap_square(3))),
        (C4, FixedPointModel(zmod(6, C4))),
        (S3, FixedPointModel(zmod(6, S3))),
        (C2, BurnsideModel(C2)),
        (C4, BurnsideModel(C4)),
    ]
    frob_bad = mult_bad = 0
    for i in range(cases):
        G, M = models[i % len(models)]
        f = random_admissible_map(rng, G, None, max_points=4)
        S, T = f.source, f.target
        a = M.random_element(T, rng)
        b = M.random_element(S, rng)
        b2 = M.random_element(S, rng)
        if M.mul(T, a, M.transfer(f, b)) != M.transfer(f, M.mul(S, M.restrict(f, a), b)):
            frob_bad += 1
        if M.norm(f, M.mul(S, b, b2)) != M.mul(T, M.norm(f, b), M.norm(f, b2)) or M.norm(f, M.one(S)) != M.one(T):
            mult_bad += 1
    ok = mono_bad == 0 and prod_ok and frob_bad == 0 and mult_bad == 0
    detail = (
        f"monos: {mono_checked} inclusions, {mono_bad} failing predicates; products at (2,2): {prod_ok}; "
        f"Frobenius {cases} cases/{frob_bad} failures; norm multiplicative {cases} cases/{mult_bad} failures"
    )
    return ok, detail


def ideal_discrimination() -> tuple[bool, str]:
    G = cyclic(2)
    systems = enumerate_systems(G).systems
    trivial, complete = systems[0], systems[-1]
    out = []
    for I in (trivial, complete):
        M = BurnsideModel(G, I, modulus=8)
        out.append(is_O_ideal(M, family_ideal(M, [G.trivial_subgroup]), I))
    ok = out[0].ok and not out[1].ok and out[1].witness is not None
    return ok, f"trivial system: {out[0].ok}; complete system: {out[1]}"


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]]]] = [
    (1, "classification of indexing systems", classification),
    (2, "admissible bispans closed under composition", category_closure),
    (3, "functoriality of evaluation", functoriality),
    (4, "Tambara reciprocity", reciprocity),
    (5, "projective identities over C2", projective_identities),
    (6, "adjunction transport and coinduction", adjunction),
    (7, "norm of two in the Burnside ring", norm_of_two),
    (8, "structural predicates", structural),
    (9, "ideal discrimination", ideal_discrimination),
]


def run_criterion(number: int) -> CriterionResult:
    for n, name, fn in CRITERIA:
        if n == number:
            start = time.perf_counter()
            try:
                ok, detail = fn()
            except Exception as exc:  # report, do not abort the suite
                ok, detail = False, f"raised {type(exc).__name__}: {exc}"
            return CriterionResult(n, name, ok, detail, time.perf_counter() - start)
    raise ValueError(f"no acceptance criterion {number}")


def run_all(only: list[int] | None = None, threads: int = 1) -> list[CriterionResult]:
    numbers = [n for n, _, _ in CRITERIA if only is None or n in only]
    if threads <= 1:
        return [run_criterion(n) for n in numbers]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run_criterion, numbers))
