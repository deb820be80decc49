import csv
import io
import json

import numpy as np
import pytest

from openxxz.cli import cluster, main, parse_n
from openxxz.tensor import load_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_single_point_json(capsys):
    code, out, _ = run(capsys, "verify", "--mu", "0.3", "--m", "0.7", "--zeta", "0.2", "--n", "3",
                       "--samples", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] and doc["entries"]
    assert {e["params"]["N"] for e in doc["entries"]} == {3}


def test_verify_markdown_and_checks_filter(capsys):
    code, out, _ = run(capsys, "verify", "--checks", "symmetry", "--n", "2", "--draws", "1",
                       "--samples", "2", "--format", "md")
    assert code == 0
    rows = [l for l in out.splitlines() if l.startswith("| symmetry")]
    assert rows and all("| yes |" in r for r in rows)


def test_verify_singular_zeta_exits_one(capsys):
    code, out, _ = run(capsys, "verify", "--mu", "0.3", "--m", "0.7", "--zeta", "-0.35", "--n", "2",
                       "--samples", "2")
    assert code == 1
    doc = json.loads(out)
    bad = [e for e in doc["entries"] if not e["pass"]]
    assert bad and all(e["check_name"] == "hamiltonian" for e in bad)
    assert "SingularNormalizationError" in bad[0]["message"]


def test_verify_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"checks": "braid", "n": "1-2", "draws": 1, "seed": 5}))
    code, out, _ = run(capsys, "verify", "--config", str(cfg))
    assert code == 0
    doc = json.loads(out)
    assert doc["seed"] == 5 and {e["check_name"] for e in doc["entries"]} == {"braid"}
    cfg.write_text(json.dumps({"colour": "red"}))
    assert run(capsys, "verify", "--config", str(cfg))[0] == 2


@pytest.mark.parametrize("argv", [
    ["verify", "--bogus"],
    ["verify", "--mu", "0.3"],
    ["verify", "--checks", "nonsense"],
    ["verify", "--tol", "-1"],
    ["verify", "--mu", "0", "--m", "0.5", "--zeta", "0.1"],
    ["build", "--object", "x"],
    ["build", "--object", "r", "--lambda", "abc"],
    ["frobnicate"],
])
def test_usage_errors_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_build_hamiltonian_file(tmp_path, capsys):
    out = tmp_path / "h.json"
    code, _, _ = run(capsys, "build", "--object", "hamiltonian", "--n", "2", "--mu", "0.3", "--m", "0.7",
                     "--zeta", "0.2", "--out", str(out))
    assert code == 0
    mat, meta = load_matrix(out)
    assert mat.shape == (4, 4)
    assert meta["object"] == "hamiltonian" and meta["params"] == {"mu": 0.3, "m": 0.7, "zeta": 0.2, "N": 2}


def test_build_evaluated_and_symbolic(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(capsys, "build", "--object", "r", "--lambda", "0.3+0.1j", "--out", str(out))[0] == 0
    mat, meta = load_matrix(out)
    assert meta["lambda"] == [0.3, 0.1]
    from openxxz import lattice as lt
    from openxxz.algebra import make_params
    np.testing.assert_array_equal(mat, lt.r_matrix(make_params(0.3, 0.7, 0.2, 3)).eval(0.3 + 0.1j))
    code, text, _ = run(capsys, "build", "--object", "transfer", "--n", "1", "--case", "II")
    doc = json.loads(text)
    assert code == 0 and doc["metadata"]["case"] == "II"
    assert max(abs(t["degree"]) for t in doc["laurent_terms"]) <= 6
    for obj in ("kright", "kleft", "q1", "q2"):
        assert run(capsys, "build", "--object", obj, "--n", "2")[0] == 0


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "3", "--mu", "0.3", "--m", "0.7", "--zeta", "0.2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 16
    assert {r["operator"] for r in rows} == {"H", "Q1"}


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--mu", "0.3,0.6", "--m", "0.7", "--zeta", "0.1:0.2:2", "--n", "2",
                       "--checks", "hamiltonian", "--samples", "2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 4 and all(r["pass"] == "1" for r in rows)


def test_helpers():
    assert parse_n("1-3") == (1, 2, 3)
    assert parse_n("2,5") == (2, 5)
    assert cluster(np.array([0.0, 1e-10, 1.0, 2.0, 2.0]), 1e-8) == [0, 0, 1, 2, 2]
