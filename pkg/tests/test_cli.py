import json

import pytest

from tambara.bispans import identity_bispan, norm, restriction
from tambara.cli import main
from tambara.groups import cyclic
from tambara.gsets import orbit, orbit_inclusion, point
from tambara.indexing import IndexingSystem
from tambara.textio import emit_bispan, emit_indexing

C2 = cyclic(2)
PI = orbit_inclusion(C2.trivial_subgroup, C2.whole)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_enumerate_count(capsys):
    code, out, _ = run(capsys, "indexing", "enumerate", "cyclic:4", "--count")
    assert (code, out) == (0, "5\n")


def test_enumerate_with_oracle_and_dot(capsys):
    code, out, _ = run(capsys, "indexing", "enumerate", "sym:3", "--dot", "--oracle")
    assert code == 0 and out.startswith("digraph")


def test_verify_reciprocity_burnside(capsys):
    code, out, _ = run(capsys, "tambara", "verify-reciprocity", "--group", "cyclic:2", "--model", "burnside", "--sum", "e", "C2")
    assert (code, out.strip()) == (0, "OK (4 cases)")


def test_verify_reciprocity_transfer_fixed(capsys):
    code, out, _ = run(capsys, "tambara", "verify-reciprocity", "--group", "cyclic:4", "--model", "fixed", "--transfer", "e", "C2")
    assert code == 0 and out.startswith("OK")


def test_compose_mismatched_endpoints(capsys, tmp_path):
    a = _write(tmp_path, "a.bsp", emit_bispan(identity_bispan(point(C2))))
    b = _write(tmp_path, "b.bsp", emit_bispan(identity_bispan(orbit(C2.trivial_subgroup))))
    code, out, err = run(capsys, "bispan", "compose", a, b)
    assert code == 2 and out == ""
    assert "error" in err


def test_compose_and_canon_round_trip(capsys, tmp_path):
    a = _write(tmp_path, "r.bsp", emit_bispan(restriction(PI)))
    b = _write(tmp_path, "n.bsp", emit_bispan(norm(PI)))
    code, out, _ = run(capsys, "bispan", "compose", a, b)
    assert code == 0
    c = _write(tmp_path, "c.bsp", out)
    code, again, _ = run(capsys, "bispan", "canon", c)
    assert code == 0 and again == out


def test_exponent_escape_during_compose(capsys, tmp_path):
    a = _write(tmp_path, "n.bsp", emit_bispan(norm(PI)))
    b = _write(tmp_path, "i.bsp", emit_bispan(identity_bispan(point(C2))))
    code, out, _ = run(capsys, "bispan", "compose", a, b, "--indexing", "trivial")
    assert code == 1 and "escaped" in out


def test_check_exponent(capsys, tmp_path):
    n = _write(tmp_path, "n.bsp", emit_bispan(norm(PI)))
    assert run(capsys, "bispan", "check-exponent", n, "--indexing", "complete")[0] == 0
    code, out, _ = run(capsys, "bispan", "check-exponent", n, "--indexing", "trivial", "--json")
    rec = json.loads(out)
    assert code == 1 and rec["ok"] is False and rec["K"] == [0]


def test_homcount(capsys):
    assert run(capsys, "bispan", "homcount", "--group", "cyclic:2")[1] == "12\n"
    assert run(capsys, "bispan", "homcount", "--group", "cyclic:2", "--indexing", "trivial")[1] == "10\n"


def test_eval_norm_of_two(capsys, tmp_path):
    n = _write(tmp_path, "n.bsp", emit_bispan(norm(PI)))
    code, out, _ = run(capsys, "tambara", "eval", n, "--value", "2")
    assert (code, out.strip()) == (0, "[G/e] + 2[G/G]")
    code, out, _ = run(capsys, "tambara", "eval", n, "--value", "2", "--json")
    assert json.loads(out) == {"value": [1, 2]}


def test_eval_refuses_inadmissible_norm(capsys, tmp_path):
    n = _write(tmp_path, "n.bsp", emit_bispan(norm(PI)))
    code, _, err = run(capsys, "tambara", "eval", n, "--value", "2", "--indexing", "trivial")
    assert code == 2 and "norm" in err


def test_reciprocity_summands(capsys):
    code, out, _ = run(capsys, "tambara", "reciprocity", "--sum", "e", "G", "cyclic:4")
    assert code == 0 and out.startswith("6 summands")


def test_ideal_check_verdicts(capsys):
    assert run(capsys, "tambara", "ideal-check", "--group", "cyclic:2")[0] == 0
    code, out, _ = run(capsys, "tambara", "ideal-check", "--group", "cyclic:2", "--indexing", "complete", "--json")
    rec = json.loads(out)
    assert code == 1 and rec["condition"] == "norm" and rec["witness"]


@pytest.mark.parametrize(
    "argv",
    [
        ["indexing", "enumerate", "cyclic:6", "--count"],
        ["tambara", "verify-reciprocity", "--group", "cyclic:2", "--model", "fixed", "--sum", "e", "C2"],
        ["tambara", "ideal-check", "--group", "cyclic:2", "--indexing", "complete"],
        ["indexing", "properties", "cyclic:4", "epi", "--bound", "3"],
        ["group", "show", "sym:3"],
    ],
)
def test_json_and_text_agree_on_the_verdict(capsys, argv):
    code_text, text, _ = run(capsys, *argv)
    code_json, blob, _ = run(capsys, *argv, "--json")
    assert code_text == code_json
    assert text.strip() and all(json.loads(line) is not None for line in blob.splitlines())


def test_validate_file(capsys, tmp_path):
    good = _write(tmp_path, "good.idx", emit_indexing(IndexingSystem.complete(cyclic(4))))
    assert run(capsys, "indexing", "validate", good)[0] == 0
    bad = _write(tmp_path, "bad.idx", "indexing cyclic:4\nadm e e\nadm C2 C2\nadm G G\nadm G e\n")
    code, out, _ = run(capsys, "indexing", "validate", bad)
    assert code == 1 and "restriction" in out


def test_parse_error_names_the_line(capsys, tmp_path):
    bad = _write(tmp_path, "bad.idx", "indexing cyclic:4\nadm G G\nadm G e\nadm q e\n")
    code, _, err = run(capsys, "indexing", "validate", bad)
    assert code == 2 and "line 4" in err


def test_classify(capsys):
    code, out, _ = run(capsys, "indexing", "classify", "cyclic:4")
    assert code == 0 and out.startswith("5 systems; oracle agrees: True")


def test_resource_bound_exit(capsys):
    code, _, err = run(capsys, "group", "show", "cyclic:65")
    assert code == 3 and "resource bound" in err


def test_usage_errors(capsys):
    assert run(capsys, "group", "show", "dihedral:3")[0] == 2
    assert run(capsys, "indexing", "frobnicate")[0] == 2
    assert run(capsys, "indexing", "validate", "/nonexistent/file")[0] == 2


def test_group_emit_reparses(capsys, tmp_path):
    code, out, _ = run(capsys, "group", "emit", "klein4")
    path = _write(tmp_path, "k.grp", out)
    code, shown, _ = run(capsys, "group", "show", path)
    assert code == 0 and "order 4" in shown and "5 subgroups" in shown


def test_thread_count_does_not_change_output(capsys):
    def strip(blob):
        recs = [json.loads(line) for line in blob.splitlines()]
        for r in recs:
            r.pop("seconds")
        return recs

    _, one, _ = run(capsys, "selftest", "--only", "5,6,7", "--json")
    _, four, _ = run(capsys, "selftest", "--only", "5,6,7", "--json", "--threads", "4")
    assert strip(one) == strip(four)
    assert [r["criterion"] for r in strip(one)] == [5, 6, 7]
