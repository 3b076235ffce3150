"""Plain-text formats for groups, G-sets, maps, bispans, indexing systems and rings; DOT and JSON output."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterator

from .bispans import Bispan, HomClass
from .errors import GroupValidationError, GSetValidationError, ParseError, ResourceBoundError, ShapeError, TambaraError
from .groups import FiniteGroup, Subgroup, from_table, parse_group_ref
from .gsets import GMap, GSet, empty, from_generators, subgroup_name
from .indexing import IndexingPoset, IndexingSystem
from .models import GRing, make_ring


@dataclass
class _Lines:
    items: list[tuple[int, list[str]]]
    source: str | None
    pos: int = 0

    @classmethod
    def of(cls, text: str, source: str | None = None) -> "_Lines":
        items = []
        for n, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                items.append((n, line.split()))
        return cls(items, source)

    def done(self) -> bool:
        return self.pos >= len(self.items)

    def peek(self) -> tuple[int, list[str]]:
        if self.done():
            raise ParseError("unexpected end of input", None, self.source)
        return self.items[self.pos]

    def take(self) -> tuple[int, list[str]]:
        item = self.peek()
        self.pos += 1
        return item

    def error(self, msg: str, line: int | None = None) -> ParseError:
        if line is None and not self.done():
            line = self.items[self.pos][0]
        return ParseError(msg, line, self.source)

    def ints(self, count: int | None = None, what: str = "row") -> tuple[int, list[int]]:
        n, toks = self.take()
        try:
            vals = [int(t) for t in toks]
        except ValueError:
            raise ParseError(f"expected integers in {what}", n, self.source) from None
        if count is not None and len(vals) != count:
            raise ParseError(f"{what} has {len(vals)} entries, expected {count}", n, self.source)
        return n, vals


def read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


# -- groups -----------------------------------------------------------------------


def parse_group(text: str, source: str | None = None) -> FiniteGroup:
    L = _Lines.of(text, source)
    n0, head = L.take()
    if len(head) != 2 or head[0] != "group":
        raise ParseError("expected header 'group <n>'", n0, source)
    try:
        n = int(head[1])
    except ValueError:
        raise ParseError("group order must be an integer", n0, source) from None
    if n < 1:
        raise ParseError("group order must be positive", n0, source)
    rows = [L.ints(n, "multiplication row")[1] for _ in range(n)]
    if not L.done():
        raise L.error("trailing lines after the multiplication table")
    try:
        return from_table(rows, name=os.path.basename(source) if source else "")
    except GroupValidationError as e:
        raise ParseError(str(e), None, source) from e


def emit_group(G: FiniteGroup) -> str:
    lines = [f"group {G.order}"]
    lines.extend(" ".join(map(str, row)) for row in G.mul)
    return "\n".join(lines) + "\n"


def load_group(ref: str) -> FiniteGroup:
    """A builder reference (cyclic:4, klein4, sym:3, product:2x2) or a path to a group file."""
    if os.path.exists(ref):
        return parse_group(read_text(ref), ref)
    try:
        return parse_group_ref(ref)
    except ResourceBoundError:
        raise
    except (ValueError, TambaraError) as e:
        raise ParseError(str(e) if str(e) else f"unknown group reference {ref!r}") from e


def group_ref(G: FiniteGroup) -> str:
    return G.name or f"table{G.order}"


# -- G-sets and maps ---------------------------------------------------------------


def _resolve(ref: str, group: FiniteGroup | None, L: _Lines, line: int) -> FiniteGroup:
    if group is not None:
        return group
    try:
        return load_group(ref)
    except ParseError as e:
        raise ParseError(str(e), line, L.source) from None


def _gset_block(L: _Lines, group: FiniteGroup | None) -> GSet:
    n0, head = L.take()
    if len(head) != 3 or head[0] != "gset":
        raise ParseError("expected header 'gset <group-ref> <n>'", n0, L.source)
    G = _resolve(head[1], group, L, n0)
    try:
        n = int(head[2])
    except ValueError:
        raise ParseError("point count must be an integer", n0, L.source) from None
    if n == 0:  # action rows of an empty set are blank
        return empty(G)
    rows = []
    while not L.done() and L.peek()[1][0].lstrip("-").isdigit():
        rows.append(L.ints(n, "action row"))
    gens = G.generators or ()
    try:
        if len(rows) == G.order:
            act = tuple(tuple(r) for _, r in rows)
            X = GSet(G, act)
            X.validate()
        elif len(rows) == len(gens):
            X = from_generators(G, gens, [r for _, r in rows], n)
        else:
            raise ParseError(
                f"expected {G.order} action rows or {len(gens)} generator rows, found {len(rows)}", n0, L.source
            )
    except (GSetValidationError, ShapeError) as e:
        raise ParseError(str(e), n0, L.source) from e
    if X.size != n:
        raise ParseError(f"declared {n} points but the action has {X.size}", n0, L.source)
    return X


def _gmap_block(L: _Lines, source: GSet, target: GSet) -> GMap:
    n0, head = L.take()
    if len(head) != 3 or head[0] != "gmap":
        raise ParseError("expected header 'gmap <src> <tgt>'", n0, L.source)
    try:
        a, b = int(head[1]), int(head[2])
    except ValueError:
        raise ParseError("gmap sizes must be integers", n0, L.source) from None
    if a != source.size or b != target.size:
        raise ParseError(f"gmap declares {a} -> {b} but objects have {source.size} -> {target.size} points", n0, L.source)
    vals: list[int] = []
    if a:  # an empty source has no values line
        _, vals = L.ints(a, "map values")
    f = GMap(source, target, tuple(vals))
    try:
        f.validate()
    except (GSetValidationError, ShapeError) as e:
        raise ParseError(str(e), n0, L.source) from e
    return f


def parse_gset(text: str, group: FiniteGroup | None = None, source: str | None = None) -> GSet:
    L = _Lines.of(text, source)
    X = _gset_block(L, group)
    if not L.done():
        raise L.error("trailing lines after the G-set")
    return X


def emit_gset(X: GSet, generators_only: bool = True) -> str:
    G = X.group
    lines = [f"gset {group_ref(G)} {X.size}"]
    gens = G.generators if generators_only and G.generators is not None and G.name else None
    rows = [X.act[g] for g in gens] if gens is not None else list(X.act)
    lines.extend(" ".join(map(str, r)) for r in rows)
    return "\n".join(lines) + "\n"


def emit_gmap(f: GMap) -> str:
    return f"gmap {f.source.size} {f.target.size}\n" + " ".join(map(str, f.fn)) + "\n"


def parse_gmap(text: str, source_set: GSet, target_set: GSet, source: str | None = None) -> GMap:
    L = _Lines.of(text, source)
    f = _gmap_block(L, source_set, target_set)
    if not L.done():
        raise L.error("trailing lines after the map")
    return f


# -- bispans -------------------------------------------------------------------------


def parse_bispan(text: str, group: FiniteGroup | None = None, source: str | None = None) -> Bispan:
    L = _Lines.of(text, source)
    n0, head = L.take()
    if head != ["bispan"]:
        raise ParseError("expected header 'bispan'", n0, source)
    X = _gset_block(L, group)
    G = X.group
    S = _gset_block(L, G)
    T = _gset_block(L, G)
    Y = _gset_block(L, G)
    f = _gmap_block(L, S, X)
    g = _gmap_block(L, S, T)
    h = _gmap_block(L, T, Y)
    if not L.done():
        raise L.error("trailing lines after the bispan")
    return Bispan(f, g, h)


def emit_bispan(b: "Bispan | HomClass") -> str:
    if isinstance(b, HomClass):
        b = b.representative
    parts = ["bispan\n"]
    parts += [emit_gset(Z) for Z in (b.X, b.S, b.T, b.Y)]
    parts += [emit_gmap(m) for m in (b.f, b.g, b.h)]
    return "".join(parts)


def bispan_record(b: "Bispan | HomClass") -> dict:
    if isinstance(b, HomClass):
        b = b.representative
    return {
        "X": list(map(list, b.X.act)),
        "S": list(map(list, b.S.act)),
        "T": list(map(list, b.T.act)),
        "Y": list(map(list, b.Y.act)),
        "f": list(b.f.fn),
        "g": list(b.g.fn),
        "h": list(b.h.fn),
    }


# -- indexing systems -----------------------------------------------------------------


def _parse_subgroup(tok: str, G: FiniteGroup, L: _Lines, line: int) -> Subgroup:
    try:
        return parse_subgroup(tok, G)
    except ValueError as e:
        raise ParseError(str(e), line, L.source) from None


def parse_subgroup(tok: str, G: FiniteGroup) -> Subgroup:
    """``e``, ``G``, ``C<n>`` (the unique subgroup of order n) or a comma-separated element list."""
    if tok == "e":
        return G.trivial_subgroup
    if tok == "G":
        return G.whole
    if tok.startswith("C") and tok[1:].isdigit():
        n = int(tok[1:])
        cands = [H for H in G.lattice.subgroups if H.order == n]
        if len(cands) != 1:
            raise ValueError(f"{tok} names {len(cands)} subgroups; list the elements instead")
        return cands[0]
    try:
        elems = sorted({int(t) for t in tok.split(",") if t})
    except ValueError:
        raise ValueError(f"cannot read subgroup {tok!r}") from None
    if any(not 0 <= x < G.order for x in elems):
        raise ValueError(f"subgroup {tok!r} names elements outside the group")
    if tuple(elems) != G.generate(elems):
        raise ValueError(f"{tok!r} is not a subgroup")
    return G.subgroup(elems)


def format_subgroup(H: Subgroup) -> str:
    return ",".join(map(str, H.elements))


def parse_indexing(text: str, group: FiniteGroup | None = None, source: str | None = None) -> IndexingSystem:
    L = _Lines.of(text, source)
    n0, head = L.take()
    if len(head) != 2 or head[0] != "indexing":
        raise ParseError("expected header 'indexing <group-ref>'", n0, source)
    G = _resolve(head[1], group, L, n0)
    pairs = []
    while not L.done():
        n, toks = L.take()
        if len(toks) != 3 or toks[0] != "adm":
            raise ParseError("expected 'adm <H-elements> <K-elements>'", n, source)
        H = _parse_subgroup(toks[1], G, L, n)
        K = _parse_subgroup(toks[2], G, L, n)
        if not K <= H:
            raise ParseError("admissible pair needs K inside H", n, source)
        pairs.append((H, K))
    return IndexingSystem.from_subgroups(G, pairs, with_trivial=False)


def emit_indexing(I: IndexingSystem) -> str:
    subs = I.group.lattice.subgroups
    lines = [f"indexing {group_ref(I.group)}"]
    for h, k in sorted(I.admissible):
        lines.append(f"adm {format_subgroup(subs[h])} {format_subgroup(subs[k])}")
    return "\n".join(lines) + "\n"


def indexing_record(I: IndexingSystem, index: int | None = None) -> dict:
    subs = I.group.lattice.subgroups
    rec = {
        "group": group_ref(I.group),
        "generators": [[list(subs[h].elements), list(subs[k].elements)] for h, k in I.generators()],
        "pairs": len(I.admissible),
        "label": I.describe(),
    }
    if index is not None:
        rec = {"index": index, **rec}
    return rec


def poset_to_dot(P: IndexingPoset) -> str:
    lines = [f'digraph "indexing systems of {group_ref(P.group)}" {{', "  rankdir=BT;", "  node [shape=box];"]
    for i, I in enumerate(P.systems):
        lines.append(f'  n{i} [label="{i}: {I.describe()}"];')
    for a, b in P.covers:
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def poset_json_lines(P: IndexingPoset) -> Iterator[str]:
    for i, I in enumerate(P.systems):
        rec = indexing_record(I, i)
        rec["covers"] = [b for a, b in P.covers if a == i]
        yield json.dumps(rec, sort_keys=True)


def lattice_to_dot(G: FiniteGroup) -> str:
    lat = G.lattice
    lines = [f'digraph "subgroups of {group_ref(G)}" {{', "  rankdir=BT;"]
    for i, H in enumerate(lat.subgroups):
        lines.append(f'  s{i} [label="{subgroup_name(H)} {{{format_subgroup(H)}}}"];')
    n = len(lat)
    for i in range(n):
        for j in range(n):
            if i != j and (i, j) in lat.order_relation and not any(
                k not in (i, j) and (i, k) in lat.order_relation and (k, j) in lat.order_relation for k in range(n)
            ):
                lines.append(f"  s{i} -> s{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- rings ------------------------------------------------------------------------------


def parse_ring(text: str, group: FiniteGroup, source: str | None = None) -> GRing:
    """``ring <n>``, n addition rows, n multiplication rows, then one automorphism per element or per generator."""
    L = _Lines.of(text, source)
    n0, head = L.take()
    if len(head) != 2 or head[0] != "ring":
        raise ParseError("expected header 'ring <n>'", n0, source)
    try:
        n = int(head[1])
    except ValueError:
        raise ParseError("ring order must be an integer", n0, source) from None
    add = [L.ints(n, "addition row")[1] for _ in range(n)]
    mul = [L.ints(n, "multiplication row")[1] for _ in range(n)]
    autos = []
    while not L.done():
        autos.append(L.ints(n, "automorphism"))
    G = group
    gens = G.generators or ()
    if len(autos) == G.order:
        act = [r for _, r in autos]
    elif len(autos) == len(gens):
        act = _extend_action(G, gens, [r for _, r in autos], n)
        if act is None:
            raise ParseError("generator automorphisms do not define an action", n0, source)
    else:
        raise ParseError(f"expected {G.order} or {len(gens)} automorphism lines, found {len(autos)}", n0, source)
    zero = next((z for z in range(n) if add[z] == list(range(n))), None)
    one = next((u for u in range(n) if mul[u] == list(range(n))), None)
    if zero is None or one is None:
        raise ParseError("ring has no additive or multiplicative identity", n0, source)
    try:
        return make_ring(G, add, mul, act, os.path.basename(source) if source else "", zero, one)
    except (ShapeError, TambaraError) as e:
        raise ParseError(str(e), n0, source) from e


def _extend_action(G: FiniteGroup, gens, perms, n: int):
    act: dict[int, tuple[int, ...]] = {G.identity: tuple(range(n))}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s, p in zip(gens, perms):
                sg = G.mul[s][g]
                val = tuple(p[act[g][r]] for r in range(n))
                if sg in act:
                    if act[sg] != val:
                        return None
                else:
                    act[sg] = val
                    nxt.append(sg)
        frontier = nxt
    if len(act) != G.order:
        return None
    return [act[g] for g in G.elements]


def emit_ring(R: GRing) -> str:
    lines = [f"ring {R.size}"]
    lines += [" ".join(map(str, r)) for r in R.add]
    lines += [" ".join(map(str, r)) for r in R.mul]
    lines += [" ".join(map(str, r)) for r in R.act]
    return "\n".join(lines) + "\n"
