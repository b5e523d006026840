import json
import subprocess
import sys

import pytest

from medex import cli
from medex.cli import main
from medex.formats import graph_from_json, graph_to_json
from medex.symmap import UltrametricCheck


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def c6_graph(tmp_path):
    # hexagon rooted at 0 with leaves a, b on opposite-ish corners
    vertices = [{"id": f"v{i}", "label": "blue"} for i in range(6)]
    vertices[0]["root"] = True
    vertices += [{"id": "a", "leaf": "a"}, {"id": "b", "leaf": "b"}]
    edges = [[f"v{i}", f"v{(i + 1) % 6}"] for i in range(6)] + [["v2", "a"], ["v4", "b"]]
    p = tmp_path / "c6.json"
    p.write_text(json.dumps({"vertices": vertices, "edges": edges}))
    return p


def test_mdt_json(capsys, data_dir):
    code, out, _ = run(capsys, "mdt", data_dir / "delta5.json")
    assert code == 0
    doc = json.loads(out)
    assert doc["label"] == "prime"
    assert [c["set"] for c in doc["children"]] == [["a"], ["b"], ["c", "d", "e"]]


def test_mdt_dot(capsys, data_dir):
    code, out, _ = run(capsys, "mdt", data_dir / "delta5.tsv", "--format", "dot")
    assert code == 0 and out.startswith("graph mdt")


@pytest.mark.parametrize("construction", ["pvr", "halfgrid", "hypercube"])
def test_explain_then_verify(capsys, tmp_path, data_dir, construction):
    out_file = tmp_path / "g.json"
    code, _, err = run(capsys, "explain", data_dir / "delta5.json", "--construction", construction,
                       "--out", out_file)
    assert code == 0 and "wrote" in err
    code, out, _ = run(capsys, "verify", data_dir / "delta5.json", out_file)
    assert code == 0
    assert out.strip() == "explains: yes (10 pairs)"


def test_explain_formats(capsys, tmp_path, data_dir):
    code, out, _ = run(capsys, "explain", data_dir / "delta4.json", "--format", "dot")
    assert code == 0 and out.startswith("graph")
    gml = tmp_path / "g.graphml"
    assert run(capsys, "explain", data_dir / "delta4.json", "--out", gml)[0] == 0
    assert gml.read_text().lstrip().startswith("<?xml")
    assert run(capsys, "verify", data_dir / "delta4.json", gml)[0] == 0


def test_hypercube_cap(capsys, data_dir):
    code, _, err = run(capsys, "explain", data_dir / "delta5.json", "--construction", "hypercube",
                       "--cap-hypercube", "4")
    assert code == 3 and "cap" in err


def test_verify_mismatch(capsys, tmp_path, data_dir):
    g_file = tmp_path / "g.json"
    run(capsys, "explain", data_dir / "delta5.json", "--out", g_file)
    g = graph_from_json(g_file.read_text())
    m = next(v for v, lab in g.labels.items() if lab == "green")
    g.labels[m] = "red"
    g_file.write_text(graph_to_json(g))
    code, out, _ = run(capsys, "verify", data_dir / "delta5.json", g_file)
    assert code == 1
    lines = out.splitlines()
    assert lines[0].startswith("explains: no")
    assert all(len(line.split("\t")) == 4 for line in lines[1:])
    assert any("expected=green\tfound=red" in line for line in lines[1:])


def test_verify_not_median(capsys, tmp_path):
    m = tmp_path / "ab.json"
    m.write_text('{"points": ["a", "b"], "pairs": [["a", "b", "blue"]]}')
    code, out, _ = run(capsys, "verify", m, c6_graph(tmp_path))
    assert code == 5 and out.startswith("not a median graph")


def test_input_errors(capsys, tmp_path, data_dir):
    assert run(capsys, "mdt", data_dir / "missing.json")[0] == 2
    assert run(capsys, "mdt", tmp_path / "nope.json")[0] == 2
    bad = tmp_path / "bad.tsv"
    bad.write_text("\ta\tb\na\t\tx\nb\ty\t\n")
    code, _, err = run(capsys, "check", bad)
    assert code == 2 and "asymmetric" in err
    assert run(capsys, "check")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["explain"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_check(capsys, data_dir):
    code, out, _ = run(capsys, "check", data_dir / "delta5.json")
    assert code == 0
    assert out.strip() == "not symbolic ultrametric; U2 witness (a,b,c); MDT has 1 prime vertex"
    code, out, _ = run(capsys, "check", data_dir / "ultra.json")
    assert code == 0 and out.strip() == "symbolic ultrametric; MDT has 0 prime vertices"


def test_check_sweep(capsys):
    code, out, _ = run(capsys, "check", "--sweep", "n=6", "k=3", "count=50", "--seed", "2")
    assert code == 0
    assert out.startswith("sweep n=6 k=3 count=50 seed=2: 50/50 agree")
    assert run(capsys, "check", "--sweep", "n=6", "k=3", "x=1")[0] == 2


def test_check_disagreement(capsys, monkeypatch, data_dir):
    monkeypatch.setattr(cli, "is_symbolic_ultrametric", lambda d: UltrametricCheck(True, None, None))
    code, _, err = run(capsys, "check", data_dir / "delta5.json")
    assert code == 6 and "disagree" in err


def test_module_entry_point(data_dir):
    proc = subprocess.run([sys.executable, "-m", "medex", "check", str(data_dir / "ultra.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("symbolic ultrametric")
