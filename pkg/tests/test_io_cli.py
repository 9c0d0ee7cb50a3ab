import json
import random
import shutil
import subprocess
import sys

import pytest

from germoid import io
from germoid.cli import main
from germoid.errors import ParseError, SchemaError
from germoid.germ import universal_groupoid
from germoid.instances import pair_groupoid, random_action, random_inverse_semigroup, symmetric_inverse_monoid
from germoid.morphism import identity_morphism


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_fixtures_load():
    names = io.fixture_names()
    for must in ("chain1", "chain5", "orth1", "orth5", "e3", "i2", "pair2", "z2"):
        assert must in names
    for n in names:
        io.load(n)


def test_round_trips():
    rng = random.Random(1)
    for _ in range(10):
        S = random_inverse_semigroup(rng)
        assert io.semigroup_from_json(io.semigroup_to_json(S)) == S
        A = random_action(rng)
        assert io.action_from_json(json.loads(io.dumps(io.action_to_json(A)))) == A
    G = universal_groupoid(symmetric_inverse_monoid(2)).groupoid
    assert io.groupoid_from_json(io.groupoid_to_json(G)) == G
    m = identity_morphism(pair_groupoid(2))
    assert io.morphism_from_json(io.morphism_to_json(m)) == m


def test_indices_accepted_in_tables():
    doc = {"kind": "semigroup", "mul": [[0, 0, 0], [0, 1, 1], [0, 1, 2]]}
    S = io.semigroup_from_json(doc)
    assert len(S) == 3 and S.unit == 2


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "semigroup",\n "mul": [1,}')
    with pytest.raises(ParseError) as exc:
        io.load(str(bad))
    assert exc.value.witness[1] == (2, 12)
    with pytest.raises(SchemaError):
        io.load("no-such-fixture")
    with pytest.raises(SchemaError):
        io.load({"kind": "semigroup"})
    with pytest.raises(SchemaError):
        io.load({"kind": "semigroup", "labels": ["a"], "mul": [["b"]]})
    with pytest.raises(SchemaError):
        io.load({"kind": "potato"})


def test_dot_export():
    dot = io.groupoid_to_dot(pair_groupoid(2), bisections=True)
    assert dot.startswith("digraph G {") and dot.count("->") == 2
    assert "color=" in dot


def test_cli_charspace_chain3(capsys):
    code, rep, _ = run(capsys, "charspace", "chain3")
    assert code == 0
    assert rep["n_characters"] == 4 and rep["n_opens"] == 5
    assert rep["semilattice_isomorphic_to_opens"]


def test_cli_universal_i2(capsys, tmp_path):
    dot = tmp_path / "out.dot"
    code, rep, _ = run(capsys, "universal", "i2", "--dot", str(dot))
    assert code == 0
    assert rep["objects"] == 3 and rep["arrows"] == 6
    assert rep["embedding_injective"]
    assert dot.read_text().startswith("digraph")


def test_cli_reconstruct_pair2(capsys):
    code, rep, _ = run(capsys, "reconstruct", "pair2")
    assert code == 0 and rep["isomorphic"]
    assert len(rep["arrow_map"]) == 4


def test_cli_other_commands(capsys):
    code, rep, _ = run(capsys, "validate", "i2")
    assert code == 0 and rep["size"] == 7
    code, rep, _ = run(capsys, "terminal", "e3-on-sierpinski")
    assert code == 0 and rep["unique"] and rep["terminal_map"] == {"bot": "phi[1]", "top": "phi[e]"}
    code, rep, _ = run(capsys, "bisections", "pair2")
    assert code == 0 and rep["count"] == 7
    code, rep, _ = run(capsys, "adjunction", "e3", "sierpinski")
    assert code == 0 and rep["homomorphisms"] == rep["morphisms"] == 3 and rep["bijective"]
    code, rep, _ = run(capsys, "compose", "z2-identity", "z2-trivial")
    assert code == 0
    assert io.morphism_from_json(rep["composite"]) == io.morphism_from_json("z2-trivial")


def test_cli_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, rep, _ = run(capsys, "validate", str(bad))
    assert code == 2 and rep["error"] == "ParseError"
    nonassoc = tmp_path / "nonassoc.json"
    nonassoc.write_text(json.dumps({"kind": "semigroup", "mul": [[1, 1], [0, 1]]}))
    code, rep, _ = run(capsys, "validate", str(nonassoc))
    assert code == 1 and rep["error"] == "NotAssociative"
    indiscrete = tmp_path / "indiscrete.json"
    indiscrete.write_text(json.dumps({
        "kind": "groupoid", "objects": ["a", "b"],
        "arrows": [{"name": "1a", "src": "a", "rng": "a"}, {"name": "1b", "src": "b", "rng": "b"}],
        "comp": [["1a", "1a", "1a"], ["1b", "1b", "1b"]], "opens": [["1a", "1b"]]}))
    code, rep, _ = run(capsys, "reconstruct", str(indiscrete))
    assert code == 1 and rep["error"] == "NotSober"


def test_cli_output_is_deterministic(capsys):
    _, _, first = run(capsys, "universal", "i2")
    _, _, second = run(capsys, "universal", "i2", "--pretty")
    assert json.loads(first) == json.loads(second)
    _, _, third = run(capsys, "universal", "i2")
    assert first == third


def test_check_all_passes(capsys):
    code, rep, _ = run(capsys, "check-all", "--seed", "3")
    assert code == 0 and rep["passed"]


def test_fixture_dir_override(tmp_path, monkeypatch, capsys):
    shutil.copy(io.fixture_dir() / "e3.json", tmp_path / "mine.json")
    monkeypatch.setenv("GERMOID_FIXTURES", str(tmp_path))
    assert io.fixture_names() == ["mine"]
    code, rep, _ = run(capsys, "check-all")
    assert code == 0 and list(rep["fixtures"]) == ["mine", "random"]


def test_console_script_module():
    out = subprocess.run([sys.executable, "-m", "germoid.cli", "charspace", "e3"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["n_characters"] == 2
