import json
import subprocess
import sys

import pytest

from sphmod.cli import main
from sphmod.coeff import CaseConfig
from sphmod.straighten import normal_form
from sphmod.typmon import Element, dumps_element, element_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_malformed_json_is_a_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["straighten", "--case", "uH", "--in", str(bad)]) == 2
    bad.write_text(json.dumps({"case": "uH", "r": 1}))
    assert main(["straighten", "--case", "uH", "--in", str(bad)]) == 2
    assert main(["straighten", "--case", "uH", "--in", str(tmp_path / "missing.json")]) == 2


def test_straighten(tmp_path, capsys):
    cfg = CaseConfig("S", -1)
    x = Element.word([(0, 1), (2, 1)]) + Element.word([(1, -1), (3, 1)])
    src, dst = tmp_path / "elem.json", tmp_path / "nf.json"
    src.write_text(dumps_element(x, cfg))
    assert main(["straighten", "--case", "S", "--epsilon", "-1", "--in", str(src), "--out", str(dst)]) == 0
    obj = json.loads(dst.read_text())
    y, cfg2 = element_from_json(obj)
    assert cfg2 == cfg and y == normal_form(x, cfg)
    assert obj["orbits"]
    # a flag that contradicts the file is refused
    assert main(["straighten", "--case", "S", "--epsilon", "+1", "--in", str(src)]) == 2
    assert main(["straighten", "--case", "A", "--in", str(src)]) == 2


def test_confluence_names_the_six_overlap_families(capsys):
    code, out = run(capsys, "confluence", "--case", "S", "--epsilon", "+1", "--window", "0:4")
    assert code == 0
    rep = json.loads(out)
    assert rep["confluent"] and len(rep["named_overlaps"]) == 6
    assert all(o["status"] == "ok" for fam in rep["named_overlaps"] for o in fam["overlaps"])
    assert run(capsys, "confluence", "--case", "uH", "--window", "4:0")[0] == 2


def test_hecke(capsys):
    orbit = json.dumps({"e0": {"1": 1, "0": 1}})
    code, out = run(capsys, "hecke", "--case", "A", "--r", "2", "--k", "1", "--orbit", orbit, "--method", "both")
    assert code == 0
    rep = json.loads(out)
    assert rep["agree"] and rep["direct"] == rep["delta"]
    assert {t["coeff"] for t in rep["direct"]} == {"1 + u^2", "u^4 + u^6"}
    assert run(capsys, "hecke", "--case", "A", "--r", "3", "--k", "1", "--orbit", orbit)[0] == 2
    assert run(capsys, "hecke", "--case", "A", "--k", "9", "--orbit", orbit)[0] == 2
    assert run(capsys, "hecke", "--case", "A", "--k", "1", "--orbit", "{oops")[0] == 2
    signed = json.dumps({"e0": {"0": 1}, "chi0": {"0": "-"}})
    assert run(capsys, "hecke", "--case", "uH", "--k", "1", "--orbit", signed)[0] == 2


def test_qcount(capsys):
    code, out = run(capsys, "qcount", "--case", "S", "--epsilon", "-1", "--kind", "S", "--b", "1", "--r", "2", "--chi", "-1", "--q", "3")
    assert code == 0
    rep = json.loads(out)
    assert rep["symbolic"] == "2" and rep["value"] == "2"
    code, out = run(capsys, "qcount", "--case", "uH", "--kind", "H", "--r", "1", "--q", "2")
    assert json.loads(out)["value"] == "3"
    code, out = run(capsys, "qcount", "--case", "A", "--kind", "Q", "--r", "2", "--n", "0", "--m", "1")
    assert code == 0 and json.loads(out)["params"]["l"] == 1
    assert run(capsys, "qcount", "--case", "A", "--kind", "Q", "--r", "1", "--n", "1", "--m", "1")[0] == 2
    assert run(capsys, "qcount", "--case", "uH", "--epsilon", "-1", "--kind", "H", "--r", "1")[0] == 2


def test_basis_and_expand(tmp_path, capsys):
    code, out = run(capsys, "basis", "--case", "S", "--r", "2", "--epsilon", "-1")
    assert code == 0 and json.loads(out)["size"] == 16
    cfg = CaseConfig("S", 1)
    src = tmp_path / "elem.json"
    src.write_text(dumps_element(Element.word([(5, 1), (2, 1)]), cfg))
    code, out = run(capsys, "expand", "--in", str(src))
    assert code == 0
    cert = json.loads(out)
    assert cert["verified"] and cert["expansion"]


def test_transforms(capsys):
    code, out = run(capsys, "transforms", "--case", "uH", "--r", "4")
    assert code == 0 and json.loads(out)["ok"]
    assert run(capsys, "transforms", "--case", "S", "--r", "2")[0] == 2


def test_oracles(capsys):
    code, out = run(capsys, "oracle", "ff", "--case", "S", "--p", "3", "--dim", "2", "--gram", "1,0;0,1")
    assert code == 0
    rep = json.loads(out)
    assert rep["ok"] and rep["brute"]["S"] == {"0": "1"}
    code, out = run(capsys, "oracle", "padic", "--case", "A", "--p", "3", "--N", "8", "--gram", "0,1;-1,0", "--k", "1")
    assert code == 0
    rep = json.loads(out)
    assert rep["ok"] and rep["histograms"]["1"][0]["count"] == 4
    assert run(capsys, "oracle", "ff", "--case", "S", "--p", "4", "--dim", "2")[0] == 2
    assert run(capsys, "oracle", "ff", "--case", "A", "--p", "3", "--dim", "3")[0] == 2
    assert run(capsys, "oracle", "padic", "--case", "S", "--p", "3", "--gram", "1,1;0,1")[0] == 2
    assert run(capsys, "oracle", "padic", "--case", "S", "--p", "3", "--N", "4", "--gram", "1,0;0,27")[0] == 2


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["hecke", "--case", "A"]) == 2
    assert main(["confluence", "--case", "S", "--epsilon", "2"]) == 2
    assert main(["--help"]) == 0


def test_verify_all_quick_is_green_and_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["verify-all", "--quick", "--out", str(a)]) == 0
    assert main(["verify-all", "--quick", "--out", str(b)]) == 0
    capsys.readouterr()
    summary = json.loads((a / "summary.json").read_text())
    assert summary["ok"] and len(summary["suites"]) == 8
    assert all(s["ok"] for s in summary["suites"])
    for name in ("summary.json", "tables.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "sphmod", "basis", "--case", "uH", "--r", "3"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["basis"] == ["(0,+)(0,+)(0,+)"]
