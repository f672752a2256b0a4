import json
import subprocess
import sys

import pytest
from hypothesis import given, settings

from possibilistic.cli import main
from possibilistic.io import (
    FIXTURES,
    effect_from_dict,
    effect_to_dict,
    emit_dot,
    fixture_path,
    parse_space_text,
    serialize_space,
)
from possibilistic.effects import build_effects
from possibilistic.space import ParseError
from strategies import intersection_families


@pytest.mark.parametrize("name", [n for n in FIXTURES if n != "q4_rays"])
def test_fixture_files_round_trip_byte_identically(name):
    text = fixture_path(name).read_text(encoding="utf-8")
    space, star = parse_space_text(text)
    assert serialize_space(space, star) == text


@settings(max_examples=60, deadline=None)
@given(intersection_families())
def test_random_space_round_trip(sp):
    text = serialize_space(sp)
    back, star = parse_space_text(text)
    assert star is None
    assert back.labels == sp.labels
    assert all(back.leq(x, y) == sp.leq(x, y) for x in sp for y in sp)
    assert emit_dot(back) == emit_dot(sp)


def test_dot_is_stable(fx):
    dot = emit_dot(fx["f2"][0])
    assert dot == (
        'digraph "F2" {\n  rankdir=BT;\n  "bot";\n  "a";\n  "b";\n'
        '  "bot" -> "a";\n  "bot" -> "b";\n}\n'
    )


def test_effect_json_round_trip(fx):
    s4 = fx["s4"][0]
    for e in build_effects(s4):
        assert effect_from_dict(s4, json.loads(json.dumps(effect_to_dict(s4, e)))) == e


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("{", "line 1 column 2"),
        ('{"elements": ["bot"], "covers": [["bot"]]}', "covers[0]"),
        ('{"elements": ["bot"], "covers": [["bot", "x"]]}', "unknown element"),
        ('{"elements": ["bot"], "colour": 1}', "unknown fields"),
        ('{"elements": ["bot", "a"], "covers": [["bot", "a"]], "star": {"a": "zz"}}', "star"),
    ],
)
def test_parse_errors_name_their_location(text, fragment):
    with pytest.raises(ParseError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
        parse_space_text(text)


def test_structural_errors_keep_their_type():
    from possibilistic.space import CycleDetected, NoBottom

    with pytest.raises(NoBottom):
        parse_space_text('{"elements": ["a", "b"]}')
    with pytest.raises(CycleDetected):
        parse_space_text('{"elements": ["b", "x", "y"], "covers": [["b", "x"], ["x", "y"], ["y", "x"]]}')


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_exit_codes(capsys):
    code, out, _ = run(["check", str(fixture_path("f2")), "--json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["distributive"] is True
    assert data["star"]["orthogonal"] is True
    code, out, _ = run(["check", str(fixture_path("c3"))], capsys)
    assert code == 1
    assert "A5: fail (witness x)" in out


def test_usage_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"elements": ["bot", "x"], "covers": [["bot", "y"]]}')
    code, _, err = run(["check", str(bad)], capsys)
    assert code == 2 and "covers[0]" in err
    code, _, _ = run(["check", str(tmp_path / "missing.json")], capsys)
    assert code == 2
    code, _, _ = run(["no-such-verb"], capsys)
    assert code == 2
    f2 = str(fixture_path("f2"))
    code, _, err = run(["order", f2, f2, "--left", "[[\"a\", \"q\"]]", "--right", "[[\"a\", \"a\"]]"], capsys)
    assert code == 2 and "unknown label" in err


def test_corrupted_fixture_directory(tmp_path, capsys):
    for name in ("f2", "f3", "s4"):
        (tmp_path / f"{name}.json").write_text(fixture_path(name).read_text())
    (tmp_path / "s4.json").write_text('{"elements": ["bot", "a1"], "covers": [["a1", "a1"]]}')
    code, _, _ = run(["counterexamples", "--fixtures", str(tmp_path)], capsys)
    assert code == 2


def test_effects_and_basis(capsys):
    code, out, _ = run(["effects", str(fixture_path("f2")), "--json"], capsys)
    assert code == 0 and len(json.loads(out)["effects"]) == 9
    code, out, _ = run(["basis", str(fixture_path("s4"))], capsys)
    assert code == 0 and out.split() == ["a1", "a1s"]
    code, out, _ = run(["basis", str(fixture_path("f3"))], capsys)
    assert code == 1


def test_symmetry_verb(tmp_path, capsys):
    f2 = str(fixture_path("f2"))
    good = tmp_path / "swap.json"
    good.write_text(json.dumps({"map": {"bot": "bot", "a": "b", "b": "a"}}))
    code, out, _ = run(["symmetry", f2, f2, "--map", str(good), "--json"], capsys)
    assert code == 0 and json.loads(out)["bijective"] is True
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"map": {"bot": "a", "a": "a", "b": "b"}}))
    code, _, _ = run(["symmetry", f2, f2, "--map", str(bad)], capsys)
    assert code == 1


def test_tensor_verbs(tmp_path, capsys):
    f2 = str(fixture_path("f2"))
    out_file = tmp_path / "f2f2.json"
    code, out, _ = run(["tensor", "--kind", "basic", f2, f2, "--enumerate", "--out", str(out_file), "--json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["size"] == 15 and all(data["axioms"].values())
    assert parse_space_text(out_file.read_text())[0].n == 15
    code, out, _ = run(["tensor", "--kind", "star", f2, str(fixture_path("s4")), "--json"], capsys)
    assert code == 0 and json.loads(out)["star"]["orthocomplemented"] is True
    code, _, _ = run(["tensor", "--kind", "star", f2, str(fixture_path("f3"))], capsys)
    assert code == 2


def test_order_verb(capsys):
    f3 = str(fixture_path("f3"))
    diag = json.dumps([["s1", "s1"], ["s2", "s2"], ["s3", "s3"]])
    target = json.dumps([["bot", "bot"]])
    code, out, _ = run(["order", f3, f3, "--left", diag, "--right", target], capsys)
    assert (code, out.strip()) == (0, "leq: true")
    code, out, _ = run(["order", "--kind", "canonical", f3, f3, "--left", diag, "--right", target], capsys)
    assert (code, out.strip()) == (0, "leq: false")


def test_quantum_verb(capsys):
    rays = json.dumps([["1", "0"], ["0", "1"], ["1", "1"], ["1", "-1"]])
    code, out, _ = run(["quantum", "--dim", "2", "--rays", rays, "--names", "e1,e2,p,m", "--name", "Q4"], capsys)
    assert code == 0
    space, star = parse_space_text(out)
    assert space.n == 5 and star is not None
    code, _, _ = run(["quantum", "--dim", "3", "--rays", rays], capsys)
    assert code == 2


def test_counterexamples_are_byte_stable(capsys):
    code, first, _ = run(["counterexamples", "--json"], capsys)
    assert code == 0
    code, second, _ = run(["counterexamples", "--json"], capsys)
    assert first == second
    assert [c["name"] for c in json.loads(first)] == ["f3", "s4_basic", "s4_star"]
    code, _, _ = run(["counterexamples", "--only", "nope"], capsys)
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "possibilistic", "dot", str(fixture_path("f2"))],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith('digraph "F2"')
