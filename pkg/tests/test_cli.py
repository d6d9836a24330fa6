import json

import pytest

from m11pi.cli import main
from m11pi.manifest import ManifestError, load_manifest, parse_manifest_text, run_manifest


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_examples(capsys):
    code, out, _ = run(capsys, "check", "[x,y,[z,t],u]", "--field=q", "--unital")
    assert code == 0 and ": identity" in out
    code, out, _ = run(capsys, "check", "[x,y,z^(3),t]", "--field=fp", "--p=3", "--expect", "identity")
    assert code == 0
    code, out, _ = run(capsys, "check", "[x,y]", "--field=q")
    assert code == 0 and "non-identity" in out and "witness:" in out


def test_check_expect_mismatch(capsys):
    assert run(capsys, "check", "[x,y]", "--expect", "identity")[0] == 1


def test_usage_errors(capsys):
    assert run(capsys, "check", "[x,y")[0] == 2
    assert run(capsys, "check", "[x,y]", "--field=fp", "--p=2")[0] == 2
    assert run(capsys, "check", "[x,y]", "--field=fp")[0] == 2
    assert run(capsys, "kernel")[0] == 2
    assert run(capsys, "bogus")[0] == 2


def test_caveat(capsys):
    code, out, _ = run(capsys, "check", "[x,y] + [x,y,y]", "--field=fp", "--p=3", "--unital")
    assert "caveat" in out


def test_witness_replay(tmp_path, capsys):
    rep = tmp_path / "r.json"
    run(capsys, "check", "[x,y,z]", "--json", str(rep))
    code, out, _ = run(capsys, "check", "[x,y,z]", "--witness", str(rep), "--expect", "non-identity")
    assert code == 0 and "nonzero" in out


def test_kernel_equal_consequences(capsys, tmp_path):
    code, out, _ = run(capsys, "kernel", "--multilinear", "5", "--field=q", "--unital", "--limit", "2")
    assert code == 0 and "dimension 15" in out
    code, out, _ = run(capsys, "equal", "kernel", "consequences(cm)", "--multilinear", "5")
    assert code == 0 and "=" in out
    code, out, _ = run(capsys, "consequences", "cm", "--multilinear", "4")
    assert code == 0 and "dimension 0" in out
    gens = tmp_path / "g.txt"
    gens.write_text("cm: [x,y,[u,v],z] = 0\n")
    code, out, _ = run(capsys, "consequences", str(gens), "--multilinear", "5", "--json", "-")
    assert code == 0 and json.loads(out)["checks"][0]["dimensions"]["dimension"] == 15


def test_manifest_parsing():
    text = 'a: identity poly=cm field=q claim=t anchor="x" expect=identity\n# comment\n\nb: identity poly=cm claim=t anchor="x" expect: identity\n'
    checks = parse_manifest_text(text)
    assert [c.name for c in checks] == ["a", "b"] and checks[1].expect == "identity"
    for bad in [
        'a: identity poly=cm claim=t anchor="x" expect=maybe',
        'a: identity poly=cm expect=identity',
        'a: frobnicate claim=t anchor=x expect=identity',
        'a: identity claim=t anchor=x expect=identity\nb: identity claim=t anchor=y expect=identity',
        'a: identity claim=t anchor=x expect=identity\na: identity claim=t anchor=x expect=identity',
    ]:
        with pytest.raises(ManifestError):
            parse_manifest_text(bad)


def test_claims_have_single_anchor():
    anchors = {}
    for c in load_manifest():
        assert anchors.setdefault(c.claim, c.anchor) == c.anchor


def test_corrupted_manifest_fails(tmp_path, capsys):
    m = tmp_path / "m.txt"
    m.write_text(
        'good: identity poly=cm field=q claim=t anchor=x expect=identity\n'
        'bad: identity poly="[x,y]" field=q claim=t anchor=x expect=identity\n'
    )
    out_json = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify-paper", str(m), "--json", str(out_json))
    assert code == 1
    assert "FAIL bad" in out and "PASS good" in out and f"replay: m11pi verify-paper {m} --only bad" in out
    rep = json.loads(out_json.read_text())
    assert [r["passed"] for r in rep["checks"]] == [True, False]
    # the refuting witness replays through check
    bad = rep["checks"][1]
    code, _, _ = run(capsys, "check", "[x,y]", "--witness", str(out_json), "--from-check", "bad", "--expect", "non-identity")
    assert code == 0


def test_empty_manifest(tmp_path, capsys):
    m = tmp_path / "empty.txt"
    m.write_text("# nothing\n")
    code, out, err = run(capsys, "verify-paper", str(m))
    assert code == 0 and "warning" in err and "0/0" in out


def test_report_schema_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        run(capsys, "verify-paper", "--only", "cnz.m1", "--only", "cp.gf3.unital", "--only", "low.ml4.unital", "--no-timing", "--json", str(p))
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["schema_version"] == 1
    for r in rep["checks"]:
        for key in ("check", "claim_anchor", "inputs", "result", "expected", "millis"):
            assert key in r
        assert r["millis"] == 0
