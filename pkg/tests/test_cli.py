import io
import json

import pytest

from logvvmf import io as lio
from logvvmf.cli import dispatch
from logvvmf.logq import LogQSeries, eisenstein
from logvvmf.rep import standard_rep


def run(argv, environ=None):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(argv, stdout=out, stderr=err, environ=environ or {})
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def rep_file(tmp_path):
    path = tmp_path / "std.json"
    lio.save_rep(standard_rep(), path)
    return str(path)


def test_decompose():
    code, out, err = run(["decompose", "--matrix", "0,-1,1,0"])
    assert code == 0
    data = json.loads(out)
    assert data["word"] == [0] and data["reconstruction_ok"] and data["length"] == 1
    manifest = json.loads(err)
    assert manifest["command"] == "decompose" and "wall_time" in manifest and "numpy" in manifest["versions"]


def test_usage_errors():
    assert run(["bogus"])[0] == 2
    assert run([])[0] == 2
    assert run(["decompose"])[0] == 2


def test_domain_error():
    code, _, err = run(["decompose", "--matrix", "1,1,1,1"])
    assert code == 1 and "determinant" in err


def test_eval_rep(rep_file):
    code, out, _ = run(["eval-rep", "--rep", rep_file, "--matrix", "2,1,1,1"])
    assert code == 0
    val = lio.decode_matrix(json.loads(out)["value"])
    assert (val == [[1, 1], [1, 2]]).all()


def test_poincare_eval_deterministic(rep_file):
    argv = ["poincare-eval", "--rep", rep_file, "--k", "7", "--N", "30", "--tau", "0.1,1.1"]
    a, b = run(argv), run(argv + ["--threads", "3"])
    assert a[0] == 0 and a[1] == b[1]
    assert json.loads(a[1])["column_mask"] == [1, 1]


def test_verify_modularity(rep_file):
    code, out, _ = run(["verify-modularity", "--rep", rep_file, "--k", "7", "--N", "40",
                        "--tau", "0,1", "--gamma", "1,0,1,1"])
    assert code == 0 and float(json.loads(out)["residual"]) < 1e-5


def test_weight_count_mismatch(rep_file):
    code, _, _ = run(["poincare-eval", "--rep", rep_file, "--k", "7,7,7", "--tau", "0,1"])
    assert code == 2


def test_qexp_csv(rep_file, tmp_path):
    out_file = tmp_path / "q.csv"
    code, _, _ = run(["--format", "csv", "--out", str(out_file), "poincare-qexp", "--rep", rep_file,
                      "--k", "7", "--N", "40", "--Nq", "3"])
    assert code == 0
    text = out_file.read_text()
    assert text.startswith("# entry 0,0\nn,exponent,re_0,im_0\n")


def test_mlde_find(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps([LogQSeries.constant(1, 30).to_json(), LogQSeries.tau(30).to_json()]))
    code, out, _ = run(["mlde-find", "--components", str(path), "--weight", "-1"])
    data = json.loads(out)
    assert code == 0 and data["order"] == 2
    assert data["g"][2]["monomials"] == [{"Q": 1, "R": 0, "coeff": "1/144"}]
    code, _, err = run(["mlde-find", "--components", str(path), "--weight", "-1", "--order", "1"])
    assert code == 1 and "NoSolution" in err


def test_growth_fit(tmp_path):
    path = tmp_path / "e4.json"
    path.write_text(json.dumps([eisenstein("E4", 500).to_json()]))
    code, out, _ = run(["growth-fit", "--series", str(path), "--weight", "4"])
    assert code == 0 and 2.8 <= json.loads(out)["exponent"] <= 3.2


def test_check_inequalities():
    code, out, _ = run(["check-inequalities", "--sweep", "6"])
    assert code == 0 and json.loads(out)["passed"]


def test_config_and_env(rep_file, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"N": 12, "seed": 5}))
    manifest = tmp_path / "m.json"
    code, _, _ = run(["--config", str(cfg), "--manifest", str(manifest), "poincare-eval", "--rep", rep_file,
                      "--k", "7", "--tau", "0,1"], environ={"LOGVVMF_PRECISION": "16"})
    m = json.loads(manifest.read_text())
    assert code == 0 and m["config"]["N"] == 12 and m["config"]["seed"] == 5
    code, _, err = run(["decompose", "--matrix", "1,0,0,1"], environ={"LOGVVMF_PRECISION": "25"})
    assert json.loads(err)["config"]["precision"] == 25
    code, _, err = run(["--precision", "18", "decompose", "--matrix", "1,0,0,1"],
                       environ={"LOGVVMF_PRECISION": "25"})
    assert json.loads(err)["config"]["precision"] == 18


def test_classical_check_e8():
    code, out, _ = run(["classical-check", "--case", "e8"])
    data = json.loads(out)
    assert code == 0 and data["passed"] and float(data["max_relative_error"]) <= 1e-6
