from __future__ import annotations

import json
import os
import random
import subprocess
import sys
from pathlib import Path

import pytest

from gva.cli import execute, normalize_argv

ROOT = Path(__file__).resolve().parent.parent
SPECS = ROOT / "specs"
GOLDEN = Path(__file__).resolve().parent / "golden"
UPDATE = os.environ.get("GVA_UPDATE_GOLDEN") == "1"

# per-algebra operands chosen in the right exponent cosets
PARAMS = {
    "fermion": {"n": "-1", "N": "-1", "N-1": "-2", "mode_n": "0", "jn": "0",
                "mm": "-3/2", "mn": "-1", "mk": "-1/2", "tm": "-3/2", "tn": "-1", "tk": "-1/2"},
    "half": {"n": "-1/2", "N": "-1/2", "N-1": "-3/2", "mode_n": "-1/2", "jn": "-1/2",
             "mm": "-5/4", "mn": "-1/2", "mk": "-3/4", "tm": "-5/4", "tn": "-1", "tk": "-3/4"},
    "even": {"n": "-1", "N": "-2", "N-1": "-3", "mode_n": "1", "jn": "0",
             "mm": "-2", "mn": "-1", "mk": "-1", "tm": "-2", "tn": "-1", "tk": "-1"},
}


def cases(p: dict) -> list[tuple[str, list[str]]]:
    abc = ["--a", "e(1)", "--b", "e(1)", "--c", "e(1)"]
    mod = ["--a", "e(1)", "--b", "e(-1)", "--c", "e(1/2)"]
    return [
        ("mode", ["mode", "--a", "e(1)", "--n", p["mode_n"], "--c", "e(-1)"]),
        ("mode-json", ["mode", "--a", "a[-1] e(1)", "--n", p["n"], "--c", "e(1)", "--format", "json"]),
        ("apply", ["apply", "--a", "e(1)", "--c", "e(-1)", "--window", "3"]),
        ("apply-json", ["apply", "--a", "e(1)", "--c", "a[-1] e(1)", "--window", "2", "--format", "json"]),
        ("locality-order", ["locality-order", "--a", "e(1)", "--b", "e(1)"]),
        ("check-locality", ["check", "locality", "--a", "e(1)", "--b", "e(1)", "--c", "e(0)", "--n", p["N"]]),
        ("check-locality-below", ["check", "locality", "--a", "e(1)", "--b", "e(1)", "--c", "e(0)",
                                  "--n", p["N-1"], "--format", "json"]),
        ("check-skew", ["check", "skew", "--a", "e(1)", "--b", "a[-1] e(-1)", "--window", "4"]),
        ("check-borcherds", ["check", "borcherds", *abc, "--m", p["n"], "--n", p["n"], "--k", p["n"],
                             "--format", "json"]),
        ("check-jacobi", ["check", "jacobi", "--a", "e(1)", "--b", "e(-1)", "--c", "e(1)", "--n", p["jn"],
                          "--window", "3"]),
        ("check-assoc", ["check", "assoc", "--a", "e(1)", "--b", "e(-1)", "--c", "e(1)", "--window", "2"]),
        ("check-translation", ["check", "translation", "--a", "a[-1] e(1)", "--c", "e(-1)", "--c", "e(0)"]),
        ("cocycle-construct", ["cocycle", "construct"]),
        ("cocycle-verify", ["cocycle", "verify", "--triples", "20"]),
        ("cocycle-invariant", ["cocycle", "invariant", "--format", "json"]),
        ("cocycle-extend", ["cocycle", "extend"]),
        ("dual-group", ["dual-group"]),
        ("twist", ["twist", "--format", "json"]),
        ("module-mode", ["module", "mode", "--a", "e(1)", "--n", p["mm"], "--c", "e(1/2)"]),
        ("module-check", ["module", "check", *mod, "--m", p["mm"], "--n", p["mn"], "--k", p["mk"]]),
        ("twisted-check", ["twisted", "check", *mod, "--m", p["tm"], "--n", p["tn"], "--k", p["tk"]]),
        ("bad-state", ["mode", "--a", "e(1", "--n", "0", "--c", "e(0)"]),
        ("bad-coset", ["check", "borcherds", *abc, "--m", "1/3", "--n", "0", "--k", "0"]),
    ]


def run(spec: str, argv: list[str]) -> dict:
    code, out, err = execute(["--spec", str(SPECS / f"{spec}.json")] + argv)
    if out.startswith("{"):
        doc = json.loads(out)
        doc.pop("elapsed_ms", None)
        out = json.dumps(doc, sort_keys=True) + "\n"
    return {"exit": code, "stdout": out, "stderr": err.replace(str(SPECS), "<specs>")}


def all_cases():
    return [(spec, name, argv) for spec in PARAMS for name, argv in cases(PARAMS[spec])]


@pytest.mark.parametrize("spec,name,argv", all_cases(), ids=[f"{s}-{n}" for s, n, _ in all_cases()])
def test_golden(spec, name, argv):
    got = run(spec, argv)
    path = GOLDEN / f"{spec}__{name}.json"
    if UPDATE or not path.exists():
        path.write_text(json.dumps(got, indent=1, sort_keys=True) + "\n")
    assert got == json.loads(path.read_text())
    # errors write nothing to stdout and successes nothing to stderr
    if got["exit"] == 2:
        assert got["stdout"] == "" and got["stderr"].startswith("error:")
    else:
        assert got["stderr"] == ""


def test_documented_examples():
    r = run("half", ["check", "borcherds", "--a", "e(1)", "--b", "e(1)", "--c", "e(1)",
                     "--m", "-1/2", "--n", "-1/2", "--k", "-1/2"])
    assert r["exit"] == 0 and r["stdout"].startswith("holds")
    r = run("fermion", ["mode", "--a", "e(1)", "--n", "0", "--c", "e(-1)"])
    assert r == {"exit": 0, "stdout": "e(0)\n", "stderr": ""}
    r = run("fermion", ["check", "locality", "--a", "e(1)", "--b", "e(1)", "--c", "e(0)", "--n", "-2",
                        "--format", "json"])
    doc = json.loads(r["stdout"])
    assert r["exit"] == 1 and doc["status"] == "violated" and doc["witness"]["difference"] != "0"


def test_i2_cocycle_commands():
    assert run("i2", ["cocycle", "invariant", "--alpha", "1,0", "--beta", "0,1"])["stdout"] == "-1\n"
    assert run("i2", ["twist"])["stdout"] == "1 -1\n1 1\n"
    assert run("i2", ["cocycle", "verify"])["exit"] == 0


def test_json_report_schema():
    code, out, _ = execute(["--spec", str(SPECS / "half.json"), "check", "skew", "--a", "e(1)",
                            "--b", "e(1)", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "holds"
    assert isinstance(doc["elapsed_ms"], int)
    assert doc["operands"] == {"a": "e(1)", "b": "e(1)"}


def test_negative_values_glued():
    assert normalize_argv(["--n", "-1/2", "--a", "e(1)"]) == ["--n=-1/2", "--a", "e(1)"]
    assert normalize_argv(["--a", "-e(1)", "--format", "json"]) == ["--a=-e(1)", "--format", "json"]


@pytest.mark.parametrize("argv", [
    ["mode"],
    ["--spec", str(SPECS / "half.json")],
    ["--spec", "/nonexistent.json", "dual-group"],
    ["--spec", str(SPECS / "half.json"), "check"],
    ["--spec", str(SPECS / "half.json"), "mode", "--a", "e(1)", "--n", "x", "--c", "e(0)"],
    ["--spec", str(SPECS / "half.json"), "check", "skew", "--a", "e(0) + e(1)", "--b", "e(1)"],
    ["--spec", str(SPECS / "half.json"), "check", "skew", "--a", "q[-1] e(1)", "--b", "e(1)"],
])
def test_input_errors(argv):
    code, out, err = execute(argv)
    assert code == 2 and out == "" and err.startswith("error:")


def test_suite(tmp_path):
    reqs = [
        {"command": "check borcherds",
         "args": {"a": "e(1)", "b": "e(1)", "c": "e(1)", "m": "-1/2", "n": "-1/2", "k": "-1/2"}},
        {"command": "mode", "args": {"a": "e(1)", "n": "-3/2", "c": "e(1)"}},
    ]
    p = tmp_path / "suite.json"
    p.write_text(json.dumps(reqs))
    spec = str(SPECS / "half.json")
    code, out, err = execute(["--spec", spec, "--suite", str(p), "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and [r["status"] for r in doc["results"]] == ["holds", "computed"]
    assert doc["results"][1]["result"] == "e(2)"
    reqs.append({"command": "check locality", "args": {"a": "e(1)", "b": "e(1)", "c": "e(0)", "n": "-3/2"}})
    reqs.append({"command": "mode", "args": {"a": "e(1"}})
    p.write_text(json.dumps(reqs))
    code, out, err = execute(["--spec", spec, "--suite", str(p)])
    assert code == 1
    assert out.splitlines() == ["[0] holds", "[1] computed", "[2] violated", "[3] error"]
    p.write_text(json.dumps(reqs[:2] + reqs[3:]))
    assert execute(["--spec", spec, "--suite", str(p)])[0] == 2


def test_round_trip_generated_expressions():
    from gva.parse import format_state, parse_state

    from .test_parse import NAMES, random_expression

    rng = random.Random(2024)
    for _ in range(200):
        text = format_state(random_expression(rng), NAMES)
        assert format_state(parse_state(text, NAMES), NAMES) == text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gva", "--spec", str(SPECS / "fermion.json"), "mode",
                           "--a", "e(1)", "--n", "-1", "--c", "e(-1)"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "a[-1] e(0)\n"
