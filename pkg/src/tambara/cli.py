"""Command-line interface: ``tambara <verb> <subcommand> ...``.

Exit codes: 0 success or verified, 1 verified false (with a witness), 2 usage or
input error, 3 a resource bound was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable, Sequence

from . import textio
from .bispans import HomClass, compose_raw, enumerate_hom
from .errors import (
    ExponentEscapeError,
    InvalidSubcategoryError,
    NormUnavailableError,
    ParseError,
    ResourceBoundError,
    ShapeError,
    TambaraError,
)
from .groups import FiniteGroup
from .gsets import GSet, coproduct, empty, orbit, orbit_type, point, subgroup_name
from .ideals import family_ideal, is_O_ideal
from .indexing import (
    IndexingSystem,
    builtin,
    enumerate_brute_force,
    enumerate_systems,
    from_indexing,
    map_violation,
    round_trip_check,
    subcategory_properties,
    validate,
)
from .models import BurnsideModel, FixedPointModel, TambaraModel, eval_bispan, zmod
from .reciprocity import reciprocity_sum, reciprocity_transfer, verify_reciprocity

OK, FALSE, USAGE, RESOURCE = 0, 1, 2, 3


class Output:
    """Collects human lines or JSON records; both carry the same verdicts."""

    def __init__(self, as_json: bool, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout

    def text(self, line: str) -> None:
        if not self.as_json:
            print(line, file=self.stream)

    def record(self, rec: dict) -> None:
        if self.as_json:
            print(json.dumps(rec, sort_keys=True), file=self.stream)

    def both(self, line: str, rec: dict) -> None:
        self.text(line)
        self.record(rec)

    def raw(self, blob: str) -> None:
        self.stream.write(blob)


# -- input helpers --------------------------------------------------------------------


def _group(ref: str) -> FiniteGroup:
    return textio.load_group(ref)


def _gset_arg(arg: str, G: FiniteGroup) -> GSet:
    """A gset file, ``empty``, ``pt``, or orbits joined by '+', e.g. ``e+G`` for G/e + G/G."""
    if os.path.exists(arg):
        return textio.parse_gset(textio.read_text(arg), G, arg)
    if arg == "empty":
        return empty(G)
    if arg == "pt":
        return point(G)
    try:
        orbs = [orbit(textio.parse_subgroup(tok, G)) for tok in arg.split("+")]
    except ValueError as e:
        raise ParseError(f"cannot read G-set {arg!r}: {e}") from None
    return coproduct(*orbs)[0] if len(orbs) > 1 else orbs[0]


def _indexing_arg(arg: str | None, G: FiniteGroup) -> IndexingSystem | None:
    if arg is None:
        return None
    if arg == "complete":
        return IndexingSystem.complete(G)
    if arg == "trivial":
        return IndexingSystem.trivial(G)
    I = textio.parse_indexing(textio.read_text(arg), G, arg)
    rep = validate(I)
    if not rep:
        raise ParseError(f"not an indexing system: {rep}", None, arg)
    return I


def _bispan(path: str, G: FiniteGroup | None = None):
    return textio.parse_bispan(textio.read_text(path), G, path)


def _model(args, G: FiniteGroup, I: IndexingSystem | None) -> TambaraModel:
    if args.model == "burnside":
        return BurnsideModel(G, I, args.modulus)
    if args.ring:
        R = textio.parse_ring(textio.read_text(args.ring), G, args.ring)
    else:
        R = zmod(args.zmod, G)
    return FixedPointModel(R, I)


def _class_summary(p: HomClass) -> str:
    r = p.representative
    return f"S {orbit_type(r.S)} -> T {orbit_type(r.T)}"


# -- group ------------------------------------------------------------------------------


def cmd_group_show(args, out: Output) -> int:
    G = _group(args.group)
    lat = G.lattice
    classes = [
        {"name": subgroup_name(lat.subgroups[c[0]]), "elements": list(lat.subgroups[c[0]].elements), "conjugates": len(c)}
        for c in lat.conj_classes
    ]
    out.text(f"group {textio.group_ref(G)}: order {G.order}, {'abelian' if G.is_abelian() else 'nonabelian'}")
    out.text(f"{len(lat)} subgroups in {len(classes)} conjugacy classes")
    for c in classes:
        out.text(f"  {c['name']}: {{{','.join(map(str, c['elements']))}}} x{c['conjugates']}")
    out.record({"group": textio.group_ref(G), "order": G.order, "abelian": G.is_abelian(), "subgroups": len(lat), "classes": classes})
    return OK


def cmd_group_lattice(args, out: Output) -> int:
    out.raw(textio.lattice_to_dot(_group(args.group)))
    return OK


def cmd_group_emit(args, out: Output) -> int:
    out.raw(textio.emit_group(_group(args.group)))
    return OK


# -- indexing ------------------------------------------------------------------------------


def cmd_indexing_enumerate(args, out: Output) -> int:
    G = _group(args.group)
    poset = enumerate_systems(G)
    if args.oracle:
        oracle = enumerate_brute_force(G)
        if oracle != list(poset.systems):
            out.both("oracle disagrees with the enumerator", {"oracle_agrees": False, "count": len(poset)})
            return FALSE
    if args.count:
        out.both(str(len(poset)), {"group": textio.group_ref(G), "count": len(poset)})
    elif args.dot:
        out.raw(textio.poset_to_dot(poset))
    elif out.as_json:
        for line in textio.poset_json_lines(poset):
            out.raw(line + "\n")
    else:
        for i, I in enumerate(poset.systems):
            up = [b for a, b in poset.covers if a == i]
            out.text(f"{i}: {I.describe()}  covered by {up}")
    return OK


def cmd_indexing_validate(args, out: Output) -> int:
    text = textio.read_text(args.file)
    I = textio.parse_indexing(text, None, args.file)
    rep = validate(I)
    out.both(
        str(rep),
        {"ok": rep.ok, "axiom": rep.axiom, "witness": None if rep.witness is None else [list(w) if isinstance(w, tuple) else w for w in rep.witness]},
    )
    return OK if rep else FALSE


def cmd_indexing_classify(args, out: Output) -> int:
    G = _group(args.group)
    r = round_trip_check(G, bound=args.bound)
    out.both(
        f"{r.count} systems; oracle agrees: {r.oracle_agrees}; round trip failures: {len(r.round_trip_failures)}; "
        f"order failures: {r.order_failures}",
        {
            "group": textio.group_ref(G),
            "count": r.count,
            "oracle_agrees": r.oracle_agrees,
            "round_trip_failures": [textio.indexing_record(I) for I in r.round_trip_failures],
            "order_failures": r.order_failures,
            "ok": r.ok,
        },
    )
    return OK if r.ok else FALSE


def cmd_indexing_properties(args, out: Output) -> int:
    G = _group(args.group)
    if args.predicate in ("iso", "mono", "epi", "all"):
        D = builtin(G, args.predicate)
    else:
        I = _indexing_arg(args.predicate, G)
        D = from_indexing(I)
    rep = subcategory_properties(D, args.bound)
    for line in rep.lines():
        out.text(line)
    out.record(
        {
            "wide": rep.wide,
            "composition_closed": rep.composition_closed,
            "pullback_stable": rep.pullback_stable,
            "symmetric_monoidal": rep.symmetric_monoidal,
            "coproduct_complete": rep.coproduct_complete,
            "classifiable": rep.classifiable,
            "monos_included": rep.monos_included,
            "bound": rep.bound,
            "witnesses": {k: str(v) for k, v in rep.witnesses.items()},
        }
    )
    return OK if rep.classifiable else FALSE


# -- bispan ------------------------------------------------------------------------------


def cmd_bispan_compose(args, out: Output) -> int:
    p = _bispan(args.first)
    q = _bispan(args.second, p.group)
    D = None
    if args.indexing:
        D = from_indexing(_indexing_arg(args.indexing, p.group))
    try:
        b, _ = compose_raw(p, q, D)
    except ExponentEscapeError as e:
        out.both(f"exponent escaped the indexing system: {e}", {"ok": False, "error": str(e)})
        return FALSE
    c = b.hom_class()
    if out.as_json:
        out.record({"ok": True, "bispan": textio.bispan_record(c), "summands": len(c.key)})
    else:
        out.raw(textio.emit_bispan(c))
    return OK


def cmd_bispan_canon(args, out: Output) -> int:
    c = _bispan(args.file).hom_class()
    if out.as_json:
        out.record({"bispan": textio.bispan_record(c), "summands": len(c.key)})
    else:
        out.raw(textio.emit_bispan(c))
    return OK


def cmd_bispan_homcount(args, out: Output) -> int:
    G = _group(args.group)
    X = _gset_arg(args.source, G)
    Y = _gset_arg(args.target, G)
    I = _indexing_arg(args.indexing, G)
    D = None if I is None else from_indexing(I)
    hom = enumerate_hom(X, Y, D, args.sbound, args.tbound)
    out.both(
        str(len(hom)),
        {"group": textio.group_ref(G), "count": len(hom), "sbound": args.sbound, "tbound": args.tbound},
    )
    return OK


def cmd_bispan_check_exponent(args, out: Output) -> int:
    b = _bispan(args.file)
    I = _indexing_arg(args.indexing, b.group)
    bad = map_violation(I, b.g)
    if bad is None:
        out.both("exponent admissible", {"ok": True})
        return OK
    s, H, K = bad
    msg = f"exponent not admissible: point {s} has orbit {subgroup_name(H)}/{subgroup_name(K)}"
    out.both(msg, {"ok": False, "point": s, "H": list(H.elements), "K": list(K.elements)})
    return FALSE


# -- tambara ------------------------------------------------------------------------------


def _read_value(M: TambaraModel, X: GSet, arg: str):
    try:
        nums = tuple(int(t) for t in arg.split(",") if t != "")
    except ValueError:
        raise ParseError(f"cannot read value {arg!r}") from None
    if isinstance(M, BurnsideModel):
        if len(nums) != len(M.basis(X)):
            raise ShapeError(f"need {len(M.basis(X))} basis coefficients")
        return M.from_basis(X, nums)
    if not M.contains(X, nums):
        raise ShapeError(f"{arg!r} is not a value of the model on this G-set")
    return nums


def _show_value(M: TambaraModel, X: GSet, a) -> tuple[str, list]:
    if isinstance(M, BurnsideModel):
        return M.describe(X, a), list(M.to_basis(X, a))
    return str(list(a)), list(a)


def cmd_tambara_eval(args, out: Output) -> int:
    b = _bispan(args.file)
    G = b.group
    I = _indexing_arg(args.indexing, G)
    M = _model(args, G, I)
    x = _read_value(M, b.X, args.value)
    y = eval_bispan(M, b, x)
    words, coords = _show_value(M, b.Y, y)
    out.both(words, {"value": coords})
    return OK


def _subgroup_pair(G: FiniteGroup, h: str, k: str):
    try:
        return textio.parse_subgroup(h, G), textio.parse_subgroup(k, G)
    except ValueError as e:
        raise ParseError(str(e)) from None


def cmd_tambara_reciprocity(args, out: Output) -> int:
    ref = args.group or args.group_pos
    if ref is None:
        raise ParseError("a group is required (positional or --group)")
    G = _group(ref)
    H, K = _subgroup_pair(G, args.H, args.K)
    I = _indexing_arg(args.indexing, G)
    formula = reciprocity_sum(H, K, I) if args.kind == "sum" else reciprocity_transfer(H, K, I)
    out.text(f"{len(formula)} summands; exponential set matches the explicit formula: {formula.explicit_agrees}")
    for i, s in enumerate(formula.summands):
        out.text(f"  {i}: {_class_summary(s)}")
    out.record(
        {
            "kind": args.kind,
            "summands": [textio.bispan_record(s) for s in formula.summands],
            "count": len(formula),
            "explicit_agrees": formula.explicit_agrees,
        }
    )
    return OK if formula.explicit_agrees else FALSE


def cmd_tambara_verify(args, out: Output) -> int:
    G = _group(args.group)
    I = _indexing_arg(args.indexing, G)
    M = _model(args, G, I)
    H, K = _subgroup_pair(G, *args.pair)
    rep = verify_reciprocity(M, H, K, args.kind)
    out.both(
        str(rep),
        {
            "ok": rep.ok,
            "cases": rep.cases,
            "summands": rep.summands,
            "failures": [[str(v) for v in f] for f in rep.failures[:5]],
        },
    )
    return OK if rep.ok else FALSE


def cmd_tambara_ideal(args, out: Output) -> int:
    G = _group(args.group)
    I = _indexing_arg(args.indexing, G) or IndexingSystem.trivial(G)
    M = BurnsideModel(G, I, args.modulus)
    fam = [textio.parse_subgroup(t, G) for t in args.family.split("+")]
    rep = is_O_ideal(M, family_ideal(M, fam), I, args.bound)
    out.both(
        str(rep),
        {"ok": rep.ok, "condition": rep.condition, "witness": None if rep.witness is None else [str(w) for w in rep.witness], "bound": rep.bound},
    )
    return OK if rep.ok else FALSE


# -- selftest ------------------------------------------------------------------------------


def cmd_selftest(args, out: Output) -> int:
    from .selftest import run_all

    only = None if not args.only else [int(t) for t in args.only.split(",")]
    results = run_all(only, args.threads)
    for r in results:
        out.both(r.line(), r.record())
    return OK if all(r.ok for r in results) else FALSE


# -- parser ------------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", help="emit JSON lines instead of text")
    p.add_argument("--threads", type=int, default=1, help="worker threads (output order is fixed)")
    return p


def _model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=["burnside", "fixed"], default="burnside")
    p.add_argument("--modulus", type=int, default=None, help="Burnside coefficients mod n")
    p.add_argument("--ring", help="G-ring file for the fixed-point model")
    p.add_argument("--zmod", type=int, default=6, help="trivial-action Z/n when no ring file is given")
    p.add_argument("--indexing", help="indexing file, or 'complete' / 'trivial'")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    top = argparse.ArgumentParser(prog="tambara", description="Incomplete Tambara functors over finite groups.")
    verbs = top.add_subparsers(dest="verb", required=True)

    def sub(parent, name: str, fn: Callable, help_: str):
        p = parent.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    grp = verbs.add_parser("group", help="finite groups").add_subparsers(dest="sub", required=True)
    p = sub(grp, "show", cmd_group_show, "order and subgroup classes")
    p.add_argument("group")
    p = sub(grp, "lattice", cmd_group_lattice, "subgroup lattice as DOT")
    p.add_argument("group")
    p = sub(grp, "emit", cmd_group_emit, "multiplication table in the group file format")
    p.add_argument("group")

    idx = verbs.add_parser("indexing", help="indexing systems").add_subparsers(dest="sub", required=True)
    p = sub(idx, "enumerate", cmd_indexing_enumerate, "all indexing systems and their poset")
    p.add_argument("group")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--count", action="store_true")
    fmt.add_argument("--dot", action="store_true")
    p.add_argument("--oracle", action="store_true", help="cross-check with the brute-force subset search")
    p = sub(idx, "validate", cmd_indexing_validate, "check the axioms on an indexing file")
    p.add_argument("file")
    p = sub(idx, "classify", cmd_indexing_classify, "round trip through the associated subcategories")
    p.add_argument("group")
    p.add_argument("--bound", type=int, default=3)
    p = sub(idx, "properties", cmd_indexing_properties, "bounded property scan of an exponent predicate")
    p.add_argument("group")
    p.add_argument("predicate", help="iso, mono, epi, all, complete, trivial or an indexing file")
    p.add_argument("--bound", type=int, default=4)

    bsp = verbs.add_parser("bispan", help="bispans").add_subparsers(dest="sub", required=True)
    p = sub(bsp, "compose", cmd_bispan_compose, "second after first, in canonical form")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--indexing")
    p = sub(bsp, "canon", cmd_bispan_canon, "canonical representative")
    p.add_argument("file")
    p = sub(bsp, "homcount", cmd_bispan_homcount, "size of a bounded hom set")
    p.add_argument("--group", required=True)
    p.add_argument("--source", default="pt", help="G-set file or orbits like e+G")
    p.add_argument("--target", default="pt")
    p.add_argument("--sbound", type=int, default=2)
    p.add_argument("--tbound", type=int, default=2)
    p.add_argument("--indexing")
    p = sub(bsp, "check-exponent", cmd_bispan_check_exponent, "is the exponent admissible")
    p.add_argument("file")
    p.add_argument("--indexing", required=True)

    tam = verbs.add_parser("tambara", help="Tambara functor models").add_subparsers(dest="sub", required=True)
    p = sub(tam, "eval", cmd_tambara_eval, "evaluate a bispan on a value")
    p.add_argument("file")
    p.add_argument("--value", required=True, help="comma separated: basis coefficients or ring elements per point")
    _model_flags(p)
    p = sub(tam, "reciprocity", cmd_tambara_reciprocity, "reciprocity summands for a norm")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--sum", dest="kind", action="store_const", const="sum")
    kind.add_argument("--transfer", dest="kind", action="store_const", const="transfer")
    p.add_argument("H")
    p.add_argument("K")
    p.add_argument("group_pos", nargs="?", metavar="G")
    p.add_argument("--group")
    p.add_argument("--indexing")
    p = sub(tam, "verify-reciprocity", cmd_tambara_verify, "check reciprocity on every value")
    p.add_argument("--group", required=True)
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--sum", dest="pair", nargs=2, metavar=("H", "K"))
    kind.add_argument("--transfer", dest="tpair", nargs=2, metavar=("H", "K"))
    _model_flags(p)
    p = sub(tam, "ideal-check", cmd_tambara_ideal, "is a family ideal of the finite Burnside model an ideal")
    p.add_argument("--group", required=True)
    p.add_argument("--family", default="e", help="subgroups joined by '+'")
    p.add_argument("--modulus", type=int, default=8)
    p.add_argument("--indexing", help="indexing file, or 'complete' / 'trivial' (default)")
    p.add_argument("--bound", type=int, default=4)

    p = verbs.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.add_argument("--only", help="comma separated criterion numbers")
    p.set_defaults(fn=cmd_selftest)
    return top


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "tpair", None):
        args.pair, args.kind = args.tpair, "transfer"
    elif getattr(args, "pair", None):
        args.kind = "sum"
    out = Output(args.json)
    try:
        return args.fn(args, out)
    except ResourceBoundError as e:
        print(f"resource bound: {e}", file=sys.stderr)
        return RESOURCE
    except (ParseError, ShapeError, NormUnavailableError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except InvalidSubcategoryError as e:
        out.both(f"invalid subcategory: {e}; witness {e.witness}", {"ok": False, "witness": str(e.witness)})
        return FALSE
    except TambaraError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
