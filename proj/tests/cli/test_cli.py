import json
import os
import subprocess
from pathlib import Path

import pytest

BIN = os.environ.get("PDL_BIN", str(Path(__file__).resolve().parents[2] / "build" / "pdl"))
FIX = Path(os.environ.get("PDL_FIXTURES", Path(__file__).resolve().parents[2] / "fixtures"))


def pdl(*args):
    return subprocess.run([BIN, *map(str, args)], capture_output=True, text=True, timeout=120)


def test_parse_roundtrip():
    r = pdl("parse", "[a*]p -> [a*;a*]p")
    assert r.returncode == 0
    assert r.stdout.strip() == "[a*]p -> [a*;a*]p"


def test_parse_error():
    r = pdl("parse", "[a")
    assert r.returncode == 2
    assert "expected" in r.stderr


@pytest.mark.parametrize("name", ["fig2.proof.json", "fig3.proof.json"])
def test_check_valid(name):
    r = pdl("check", FIX / name)
    assert r.returncode == 0
    assert "valid cyclic proof" in r.stdout


def test_check_invalid_preproof():
    r = pdl("check", FIX / "invalid_preproof.json")
    assert r.returncode == 1
    assert "GTC violated" in r.stdout
    assert "loop:" in r.stdout


def test_check_missing_file(tmp_path):
    assert pdl("check", tmp_path / "nope.json").returncode == 2


def test_prove_writes_checkable_proof(tmp_path):
    out = tmp_path / "p.json"
    r = pdl("prove", "[a*]p -> [a*;a*]p", "--emit-proof", out)
    assert r.returncode == 0
    assert pdl("check", out).returncode == 0


def test_prove_countermodel_falsifies(tmp_path):
    out = tmp_path / "m.json"
    r = pdl("prove", "p -> [a]p", "--emit-model", out)
    assert r.returncode == 1
    doc = json.loads(out.read_text())
    x = doc["valuation"]["x"]
    r = pdl("modelcheck", out, "--sequent", "|- x: p -> [a]p", "--val", f"x={x}")
    assert r.returncode == 1
    assert "falsified" in r.stdout


def test_prove_rejects_tests():
    r = pdl("prove", "[q?]p")
    assert r.returncode == 2
    assert "test programs unsupported by search" in r.stderr


def write_model(tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({
        "schema": "g3pdl-model/1",
        "states": ["s1", "s2"],
        "props": {"p": ["s2"]},
        "progs": {"a": [["s1", "s2"]]},
    }))
    return m


def test_modelcheck(tmp_path):
    m = write_model(tmp_path)
    assert pdl("modelcheck", m, "--sequent", "|- x: [a]p", "--val", "x=s1").returncode == 0
    r = pdl("modelcheck", m, "--sequent", "|- x: false", "--val", "x=s1")
    assert r.returncode == 1
    assert pdl("modelcheck", m, "--sequent", "|- z: p", "--val", "x=s1").returncode == 2
    assert pdl("modelcheck", m, "--sequent", "|- x: p", "--val", "x=s9").returncode == 2


def test_axioms_emit_all(tmp_path):
    r = pdl("axioms", "--emit", tmp_path)
    assert r.returncode == 0
    files = sorted(tmp_path.glob("*.proof.json"))
    assert len(files) == 6
    for f in files:
        assert pdl("check", f).returncode == 0, f.name


def test_axioms_single_instance(tmp_path):
    r = pdl("axioms", "--emit", tmp_path, "--axiom", 6, "--alpha", "a+b", "--phi", "p")
    assert r.returncode == 0
    (f,) = tmp_path.glob("*.proof.json")
    assert f.name.startswith("axiom6-")
    assert pdl("check", f).returncode == 0


def test_axioms_bad_id():
    assert pdl("axioms", "--axiom", 9).returncode == 2


def test_json_output():
    r = pdl("--json", "check", FIX / "invalid_preproof.json")
    doc = json.loads(r.stdout)
    assert doc["verdict"] == "gtc-violated"
    assert doc["exit"] == r.returncode == 1
    r = pdl("--json", "parse", "[a")
    assert json.loads(r.stdout)["exit"] == 2


def test_usage_error():
    assert pdl("frobnicate").returncode == 2
    assert pdl("--help").returncode == 0
