import io
import json
import re

import pytest

from topex.cli import run
from topex.finite_topology import FiniteSpace, random_presentation
from topex.io import presentation_to_dict, space_to_dict, tree_from_dict, tree_to_dict


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_lambda_lists_strings():
    code, out, _ = call("lambda", "--step", "2")
    assert code == 0 and out.split() == ["+++", "++-", "+-+", "+--", "-++", "-+-", "--+", "---"]


def test_lambda_chart_table():
    code, out, _ = call("lambda", "--step", "1", "--chart-table")
    lines = out.splitlines()
    assert lines[0] == "sign_string,k,primed,composition"
    assert lines[1:] == ["++,2,false,φ_2∘φ_1", "+-,2,true,T_2∘φ_2∘φ_1",
                         "-+,3,false,φ_3∘T_1∘φ_1", "--,3,true,T_3∘φ_3∘T_1∘φ_1"]


def test_lambda_cap_is_a_validation_error():
    code, _, err = call("lambda", "--step", "5", "--cap", "3")
    assert code == 1 and "cap" in err


def test_stretch_json(tmp_path):
    code, out, _ = call("stretch", "--base", "0,1", "--eps", "0.5,0.25", "--depth", "1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data["nodes"]) == 6
    node = {n["sign_string"]: (n["lo"], n["hi"]) for n in data["nodes"]}
    assert node["+-"] == ([-0.25], [1.5]) and node["-+"] == ([-0.5], [1.25])


def test_stretch_dot_shape():
    code, out, _ = call("stretch", "--eps", "0.5,0.25", "--depth", "1", "--format", "dot")
    assert code == 0
    edges = re.findall(r"->", out)
    nodes = re.findall(r"^\s+(\S+) \[label=", out, re.M)
    assert len(edges) == 6
    assert len(nodes) == 7  # six sign strings plus the base box at the root


def test_stretch_csv_and_verify():
    code, out, _ = call("stretch", "--base", "0,1;2,3", "--eps", "0.5,0.25", "--depth", "1", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "sign_string,step,lo_0,hi_0,lo_1,hi_1"
    code, out, _ = call("stretch", "--eps", "0.5,0.25", "--depth", "1", "--verify")
    assert code == 0 and out.count("PASS") == 5


def test_stretch_validation_names_field():
    code, _, err = call("stretch", "--eps", "0.5,0.6")
    assert code == 1 and "--eps" in err
    code, _, err = call("stretch", "--eps", "0.5", "--depth", "3")
    assert code == 1 and "--depth" in err
    code, _, err = call("stretch", "--base", "1,0", "--eps", "0.5")
    assert code == 1 and "--base" in err
    code, _, err = call("stretch")
    assert code == 1 and "--eps" in err


def test_unknown_subcommand_and_no_subcommand():
    code, _, err = call("frobnicate")
    assert code == 1 and "usage" in err
    code, _, err = call()
    assert code == 1 and "usage" in err
    code, _, _ = call("--help")
    assert code == 0


def test_output_file(tmp_path):
    path = tmp_path / "tree.json"
    code, out, _ = call("stretch", "--eps", "0.5,0.25", "--depth", "1", "-o", str(path))
    assert code == 0 and out == ""
    assert len(json.loads(path.read_text())["nodes"]) == 6


def test_round_trip_through_dimension_and_topology(tmp_path):
    path = tmp_path / "t.json"
    call("stretch", "--base", "0,1;0,1", "--eps", "0.5,0.25,0.125", "--depth", "2", "-o", str(path))
    data = json.loads(path.read_text())
    assert tree_to_dict(tree_from_dict(data)) == data
    code, out, _ = call("dimension", "--tree", str(path), "--step", "2", "--resolution", "256")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "scale,count" and "slope,r2" in lines
    code, out, _ = call("topology", "verify", "--tree", str(path))
    assert code == 0 and "FAIL" not in out
    path1 = tmp_path / "t1.json"
    call("stretch", "--eps", "0.5,0.25,0.125", "--depth", "2", "-o", str(path1))
    code, out, _ = call("topology", "verify", "--tree", str(path1), "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["passed"] and len(report["reports"]) == 3


def test_topology_verify_broken_family(tmp_path):
    pres = presentation_to_dict(random_presentation(1))
    pres["levels"][1] = dict(list(pres["levels"][1].items())[:1])
    first = next(iter(pres["levels"][1]))
    pres["parent_maps"][0] = {first: pres["parent_maps"][0][first]}
    pres["parent_maps"][1] = {c: first for c in pres["levels"][2]}
    # Drop level 0 down to one constituent as well so that the index sets stop growing somewhere.
    pres["levels"][0] = {pres["parent_maps"][0][first]: pres["levels"][0][pres["parent_maps"][0][first]]}
    pres["levels"][1], pres["levels"][0] = pres["levels"][1], pres["levels"][0]
    path = tmp_path / "broken.json"
    pres["levels"][1][first]["opens"] = pres["levels"][1][first]["opens"][:1]  # not a topology
    path.write_text(json.dumps(pres))
    code, out, _ = call("topology", "verify", "--family", str(path))
    assert code == 2 and "FAIL" in out


def test_topology_verify_good_family(tmp_path):
    path = tmp_path / "good.json"
    path.write_text(json.dumps(presentation_to_dict(random_presentation(4))))
    code, out, _ = call("topology", "verify", "--family", str(path))
    assert code == 0 and out.count("FAIL") == 0 and "expanding" in out


def test_topology_coproduct(tmp_path):
    s = space_to_dict(FiniteSpace("ab", [(), "a", "ab"]))
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"spaces": {"u": s, "v": s}}))
    code, out, _ = call("topology", "coproduct", "--spaces", str(path), "--check")
    data = json.loads(out)
    assert code == 0 and data["open_count"] == 9 and data["characterizations_agree"]


def test_topology_encode(tmp_path):
    path = tmp_path / "t.json"
    call("stretch", "--eps", "0.5,0.25", "--depth", "1", "-o", str(path))
    code, out, _ = call("topology", "encode", "--tree", str(path))
    data = json.loads(out)
    assert code == 0 and [len(l) for l in data["levels"]] == [2, 4]


def test_topology_missing_file():
    code, _, err = call("topology", "verify", "--family", "/nonexistent.json")
    assert code == 1 and "--family" in err


def test_mean_csv():
    code, out, _ = call("mean", "--signs", "++", "--deltas", "0.2,0.1", "--f", "linear", "--xs", "0.5:0.7:0.1",
                        "--intervals", "2000")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,F(x),err_bound" and len(lines) == 4
    x, fx, _ = map(float, lines[1].split(","))
    assert fx == pytest.approx(x + 0.15, abs=1e-10)


def test_mean_json_and_validation():
    code, out, _ = call("mean", "--deltas", "0.1", "--xs", "0.5", "--out", "json", "--intervals", "2000")
    assert code == 0 and json.loads(out)["rows"][0]["x"] == 0.5
    code, _, err = call("mean", "--deltas", "0.1,0.2", "--signs", "++", "--xs", "0.5")
    assert code == 1 and "--deltas" in err
    code, _, err = call("mean", "--deltas", "0.1", "--signs", "++", "--xs", "0.5")
    assert code == 1 and "--signs" in err
    code, _, err = call("mean", "--deltas", "0.1", "--f", "weierstrass:2,13", "--xs", "0.5")
    assert code == 1 and "--f" in err
    code, _, err = call("mean", "--deltas", "0.1", "--intervals", "1002", "--xs", "0.5")
    assert code == 1 and "--intervals" in err


def test_mean_checks():
    code, out, _ = call("mean", "--deltas", "0.1", "--check-derivative", "--samples", "20")
    assert code == 0 and len(out.splitlines()) == 21
    code, out, _ = call("mean", "--deltas", "0.2", "--f", "linear", "--check-l1", "--xs", "0.7")
    rows = [l.split(",") for l in out.splitlines()[1:]]
    assert code == 0 and all(float(e) == pytest.approx(float(d) / 2, abs=1e-8) for _, d, e in rows)


def test_dimension_calibration_shapes():
    code, out, _ = call("dimension", "--shape", "square", "--resolution", "256", "--out", "json")
    assert code == 0 and json.loads(out)["slope"] == pytest.approx(2.0, abs=0.05)
    code, _, err = call("dimension", "--shape", "square", "--resolution", "16")
    assert code == 1 and "--resolution" in err


def test_diagram_charts_labels():
    code, out, _ = call("diagram", "--charts", "--step", "1")
    labels = re.findall(r'"N[+-]" -> "N[+-]{2}" \[label="([^"]+)"', out)
    assert code == 0 and labels == ["φ_2", "T_2∘φ_2", "φ_3", "T_3∘φ_3"]
    assert '"N++" -> "N+-" [label="T_2"' in out


def test_diagram_tree(tmp_path):
    path = tmp_path / "t.json"
    call("stretch", "--eps", "0.5,0.25", "--depth", "1", "-o", str(path))
    code, out, _ = call("diagram", "--tree", str(path))
    assert code == 0 and out.count("->") == 6


def test_emitters_are_deterministic():
    a = call("stretch", "--eps", "0.5,0.25,0.1", "--depth", "2", "--format", "dot")
    b = call("stretch", "--eps", "0.5,0.25,0.1", "--depth", "2", "--format", "dot")
    assert a == b


def test_config_precedence(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"stretch": {"eps": "0.5,0.25,0.125", "depth": 2, "format": "csv"}}))
    code, out, _ = call("stretch", "--config", str(cfg))
    assert code == 0 and len(out.splitlines()) == 1 + 14
    code, out, _ = call("stretch", "--config", str(cfg), "--depth", "0")
    assert code == 0 and len(out.splitlines()) == 1 + 2
    cfg.write_text(json.dumps({"stretch": {"epsilon": "0.5"}}))
    code, _, err = call("stretch", "--config", str(cfg))
    assert code == 1 and "--epsilon" in err


def test_env_cap(monkeypatch):
    monkeypatch.setenv("TOPEX_CAP", "2")
    code, _, _ = call("lambda", "--step", "3")
    assert code == 1
    monkeypatch.setenv("TOPEX_CAP", "bogus=1")
    code, _, err = call("lambda", "--step", "1")
    assert code == 1 and "TOPEX_CAP" in err
