import io
import json
import sys

import pytest

from cliffmat.cli import main, parse_document, parse_limit_document
from cliffmat.errors import ParseError
from helpers import INPUTS


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out.read_text()


def report(argv, tmp_path):
    code, text = run(argv, tmp_path)
    return code, json.loads(text)


@pytest.mark.parametrize("name, expected", [
    ("diagonal_gf3.json", 0),
    ("gl2_f2_with_zero.json", 0),
    ("rank_one_units_gf3.json", 0),
    ("right_zero_pair.json", 1),
    ("nilpotent_gf2.json", 1),
    ("rational_doubling.json", 2),
])
def test_analyze_exit_codes(name, expected, tmp_path):
    code, rep = report(["analyze", str(INPUTS / name)], tmp_path)
    assert code == expected
    assert rep["tool"] == "cliffmat" and rep["input_digest"].startswith("sha256:")
    if expected == 2:
        assert rep["error"]["type"] == "SizeCapExceeded"
    else:
        assert rep["verdict"]["is_clifford"] == (expected == 0)


def test_analyze_report_contents(tmp_path):
    code, rep = report(["analyze", str(INPUTS / "right_zero_pair.json")], tmp_path)
    assert rep["enumeration"]["elements"] == 2
    assert rep["green"]["L"] == 2
    kinds = [w["kind"] for w in rep["verdict"]["witnesses"]]
    assert "idempotents_not_commuting" in kinds
    assert "wall_time_s" not in rep["enumeration"]


def test_decompose_diagonal(tmp_path):
    code, rep = report(["decompose", str(INPUTS / "diagonal_gf3.json")], tmp_path)
    assert code == 0
    d = rep["decomposition"]
    assert d["block_sizes"] == [1, 1]
    assert [c["kind"] for c in d["components"]] == ["zero_group", "zero_group"]
    assert d["certificate"]["passed"]
    assert rep["corollaries"]["violations"] == []


def test_decompose_refuses_non_clifford(tmp_path):
    code, rep = report(["decompose", str(INPUTS / "nilpotent_gf2.json")], tmp_path)
    assert code == 1 and rep["error"]["type"] == "NotClifford"
    assert "decomposition" not in rep


@pytest.mark.parametrize("doc, position", [
    ("{", "line 1"),
    ('{"field": {"kind": "prime", "p": 4}, "order": 1, "generators": [[["1"]]]}', "$.field"),
    ('{"field": {"kind": "prime", "p": 3}, "order": 2, "generators": [[["1", "0"]]]}', "$.generators[0]"),
    ('{"field": {"kind": "prime", "p": 3}, "order": 1, "generators": [[["x"]]]}', "$.generators[0][0][0]"),
    ('{"field": {"kind": "prime", "p": 3}, "order": 1, "generators": []}', "$.generators"),
])
def test_parse_errors(doc, position):
    with pytest.raises(ParseError) as info:
        parse_document(doc)
    assert info.value.position.startswith(position)


def test_limit_parse_error_bad_tail():
    doc = '{"field": {"kind": "prime", "p": 3}, "generators": [{"level": 1, "tail": "two", "entries": [["1"]]}]}'
    with pytest.raises(ParseError) as info:
        parse_limit_document(doc)
    assert "generators[0]" in info.value.position


def test_parse_error_exit(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"field": {"kind": "prime", "p": 3}, "order": 1, "generators": [[[0.5]]]}')
    code, rep = report(["analyze", str(bad)], tmp_path)
    assert code == 2 and rep["error"]["type"] == "ParseError"


def test_missing_file(tmp_path):
    code, rep = report(["analyze", str(tmp_path / "nope.json")], tmp_path)
    assert code == 2


def test_stdin(tmp_path, monkeypatch):
    raw = (INPUTS / "gl2_f2_with_zero.json").read_bytes()
    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(raw)))
    code, rep = report(["analyze", "-"], tmp_path)
    assert code == 0 and rep["enumeration"]["elements"] == 7


def test_text_format(tmp_path):
    code, text = run(["decompose", str(INPUTS / "diagonal_gf3.json"), "--format", "text"], tmp_path)
    assert code == 0
    assert "clifford: True" in text and "certificate: pass" in text


def test_replay_witnesses(tmp_path):
    code, rep = report(["analyze", str(INPUTS / "right_zero_pair.json"), "--replay-witnesses"], tmp_path)
    assert code == 1
    assert rep["replay"] and all(r["confirmed"] for r in rep["replay"])


def test_timings_flag(tmp_path):
    code, rep = report(["analyze", str(INPUTS / "diagonal_gf3.json"), "--timings"], tmp_path)
    assert rep["enumeration"]["wall_time_s"] >= 0


def test_deterministic_reports(tmp_path):
    argv = ["decompose", str(INPUTS / "gl2_f2_with_zero.json")]
    _, a = run(argv, tmp_path, "a.json")
    _, b = run(argv, tmp_path, "b.json")
    assert a == b


def test_limit_command(tmp_path):
    code, rep = report(["limit", str(INPUTS / "limit_mixed_gf3.json")], tmp_path)
    assert code == 0
    assert rep["tail_factor"]["regime"] == "mixed"
    assert rep["split"]["verified"] and rep["split"]["rank"] == 1
    code, rep = report(["limit", str(INPUTS / "limit_gl2_f2.json")], tmp_path)
    assert code == 0 and rep["tail_factor"]["regime"] == "direct_limit"


def test_maximality_small(tmp_path):
    code, rep = report(["maximality", "-n", "2", "-p", "2"], tmp_path)
    m = rep["maximality"]
    assert code == 0 and m["method"] == "enumerate"
    assert m["excluded"] == m["broken"] == 9 and m["survivors"] == []


def test_maximality_vacuous(tmp_path):
    # every 1x1 matrix over a field is already in GL_1 or is zero
    code, rep = report(["maximality", "-n", "1", "-p", "5"], tmp_path)
    assert code == 0 and rep["maximality"]["excluded"] == 0


def test_maximality_too_large(tmp_path):
    code, rep = report(["maximality", "-n", "3", "-p", "5"], tmp_path)
    assert code == 2 and rep["error"]["type"] == "SweepTooLarge"


def test_fuzz_zero_count(tmp_path):
    code, rep = report(["fuzz", "--count", "0"], tmp_path)
    assert code == 0 and rep["fuzz"]["instances"] == []


def test_fuzz_round_trips(tmp_path):
    code, rep = report(["fuzz", "--count", "30", "--seed", "42"], tmp_path)
    assert code == 0 and rep["fuzz"]["failed"] == 0
    _, again = report(["fuzz", "--count", "30", "--seed", "42"], tmp_path)
    assert again == rep


def test_fuzz_mutants_detected(tmp_path):
    code, rep = report(["fuzz", "--count", "30", "--seed", "7", "--mutant"], tmp_path)
    assert code == 0 and rep["fuzz"]["detection_rate"] == 1.0
