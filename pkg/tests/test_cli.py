import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from perslap.cli import main

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"
SCHEMA = json.loads(resources.files("perslap").joinpath("output.schema.json").read_text())
UNIT = np.array([[1.0, -1.0], [-1.0, 1.0]])


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    doc = json.loads(out) if out.strip() else None
    if doc is not None:
        jsonschema.validate(doc, SCHEMA)
    return code, doc


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_lap_cycle(capsys):
    code, doc = run_json(capsys, "lap", "-c", DATA / "tri.cplx", "--q", 0)
    assert code == 0
    assert doc["result"]["full"]["rows"] == 3
    assert np.allclose(doc["result"]["spectrum"], [0, 3, 3])
    assert len(doc["inputs"]["complex"][0]["sha256"]) == 64


def test_lap_edge(capsys):
    code, doc = run_json(capsys, "lap", "-c", DATA / "edge.cplx", "--q", 0)
    assert np.allclose(doc["result"]["full"]["data"], UNIT)


def test_lap_errors(capsys, tmp_path):
    assert run(capsys, "lap", "-c", DATA / "edge.cplx", "--q", 5)[0] == 3
    assert run(capsys, "lap", "-c", tmp_path / "missing.cplx")[0] == 2
    bad = write(tmp_path, "bad.cplx", "0 1 ; w=abc\n")
    assert run(capsys, "lap", "-c", bad)[0] == 2


def test_pers_four_point(capsys):
    code, doc = run_json(capsys, "pers", "-c", DATA / "c1_K.cplx", "-c", DATA / "c1_L.cplx",
                         "--q", 0, "--betti", "--spectrum", "--method", "both")
    assert code == 0
    res = doc["result"]
    assert np.allclose(res["full"]["data"], UNIT / 3)
    assert res["betti"] == 1
    assert res["max_discrepancy"] < 1e-10
    assert doc["method"] == "both"


def test_pers_from_filtration(capsys):
    code, doc = run_json(capsys, "pers", "--filtration", DATA / "c1.filt", "--s", 0, "--t", 2, "--q", 0)
    assert code == 0 and np.allclose(doc["result"]["full"]["data"], UNIT / 3)
    code, doc = run_json(capsys, "pers", "--filtration", DATA / "c1.filt", "--s", 2, "--t", 2, "--q", 0)
    lap = json.loads(run(capsys, "lap", "-c", DATA / "c1_L.cplx", "--q", 0)[1])
    assert np.allclose(doc["result"]["full"]["data"], lap["result"]["full"]["data"])


def test_pers_betti_circle_in_disk(capsys, tmp_path):
    circle = write(tmp_path, "circle.cplx", "0 1\n1 2\n0 2\n")
    code, doc = run_json(capsys, "pers", "-c", circle, "-c", DATA / "disk.cplx", "--q", 1, "--betti")
    assert code == 0 and doc["result"]["betti"] == 0


def test_pers_csv(capsys):
    code, out = run(capsys, "pers", "-c", DATA / "c1_K.cplx", "-c", DATA / "c1_L.cplx",
                    "--betti", "--spectrum", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[:2] == ["q,betti", "0,1"]
    assert lines[2] == "k,eigenvalue"
    assert float(lines[4].split(",")[1]) == pytest.approx(2 / 3)


def test_pers_not_a_subcomplex(capsys, tmp_path):
    K = write(tmp_path, "K.cplx", "7 8\n")
    assert run(capsys, "pers", "-c", K, "-c", DATA / "c1_L.cplx")[0] == 3


def test_filt_all_pairs(capsys, tmp_path):
    one = write(tmp_path, "one.filt", "0 ; t=0\n1 ; t=0\n0 1 ; t=0\n2 ; t=1\n1 2 ; t=1\n")
    code, doc = run_json(capsys, "filt", "--filtration", one, "--q", 0, "--t", 1)
    assert code == 0
    mats = {m["s"]: np.array(m["matrix"]["data"]) for m in doc["result"]["matrices"]}
    # vertex 2 is a leaf, so eliminating it leaves the edge 0-1 untouched
    assert np.allclose(mats[0.0], [[1, -1], [-1, 1]])
    assert mats[1.0].shape == (3, 3)
    assert run(capsys, "filt", "--filtration", one, "--t", 0.5)[0] == 3


def test_filt_table(capsys):
    code, doc = run_json(capsys, "filt", "--filtration", DATA / "c1.filt", "--q", 0, "--k", 3)
    rows = {(r["s"], r["t"]): r["value"] for r in doc["result"]["table"]}
    assert rows[(0.0, 2.0)] is None
    assert rows[(2.0, 2.0)] is not None
    code, out = run(capsys, "filt", "--filtration", DATA / "c1.filt", "--k", 2, "--format", "csv")
    assert code == 0 and out.startswith("s,t,k,value")


def test_filt_monotonicity(capsys):
    code, doc = run_json(capsys, "filt", "--check-monotonicity", "--trials", 10, "--seed", 3)
    assert code == 0
    assert doc["result"] == {"checked": 10, "violations": []}
    assert doc["inputs"]["seed"] == 3


def test_resistance_commands(capsys):
    code, doc = run_json(capsys, "resistance", "--graph", DATA / "edge.cplx", "--v", 0, "--w", 1)
    assert code == 0 and doc["result"]["resistance"] == pytest.approx(1)
    code, doc = run_json(capsys, "resistance", "--graph", DATA / "c1_L.cplx", "--v", 1, "--w", 2)
    assert doc["result"]["resistance"] == pytest.approx(3)
    assert run(capsys, "resistance", "--graph", DATA / "disconnected.cplx", "--v", 0, "--w", 3)[0] == 3
    code, doc = run_json(capsys, "resistance", "-c", DATA / "disk.cplx", "--sigma", "0,1,2")
    assert code == 0 and doc["result"]["resistance"] == pytest.approx(1)
    code, doc = run_json(capsys, "resistance", "-c", DATA / "c1_K.cplx", "-c", DATA / "c1_L.cplx",
                         "--sigma", "1,2")
    assert code == 0 and doc["result"]["difference"] < 1e-10


def test_cheeger_command(capsys, tmp_path):
    K = write(tmp_path, "K.cplx", "0\n1\n")
    code, doc = run_json(capsys, "cheeger", "-c", K, "-c", DATA / "edge.cplx")
    assert code == 0
    res = doc["result"]
    assert res["lambda_0_2"] == pytest.approx(2) and res["h"] == 2 and res["inequality_holds"]
    big = write(tmp_path, "big.cplx", "\n".join(f"{a} {b}" for a in range(7) for b in range(a + 1, 7)))
    assert run(capsys, "cheeger", "-c", big)[0] == 3


def test_selftest(capsys):
    code, doc = run_json(capsys, "selftest", "--trials", 20, "--seed", 1)
    assert code == 0 and doc["result"]["ok"]


def test_csv_rejected_for_matrices(capsys):
    assert run(capsys, "resistance", "--graph", DATA / "edge.cplx", "--v", 0, "--w", 1, "--format", "csv")[0] == 3


def test_deterministic(capsys):
    a = run(capsys, "filt", "--check-monotonicity", "--trials", 5)[1]
    b = run(capsys, "filt", "--check-monotonicity", "--trials", 5)[1]
    assert a == b


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "perslap", "lap", "-c", str(DATA / "edge.cplx")],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["command"] == "lap"
