import io
import json
import subprocess
import sys

import pytest

from deltainv.cli import main, to_jsonable


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    text = out.getvalue()
    return code, (json.loads(text) if text.strip() else None), text


F = '{"terms":[{"lambda":[0,0],"coeffs":[[3,0],[2,0]]}]}'
V = json.dumps(
    {
        "generators": [
            {"terms": [{"lambda": [0, 0], "coeffs": [[1, 0]]}]},
            {"terms": [{"lambda": [0, 0], "coeffs": [[0, 0], [0, 0], [1, 0]]}]},
            {"terms": [{"lambda": [1, 0], "coeffs": [[1, 0]]}]},
        ]
    }
)


def test_stirling():
    code, out, text = run("stirling", "--n", "4", "--k", "2")
    assert code == 0 and text.strip() == '{"value":"7"}'


def test_djokovic():
    code, out, text = run("djokovic", "--s", "3")
    assert text.strip() == '{"equal":true,"terms_before_cancel":32}'


def test_montel_example(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(F)
    code, out, text = run("montel", "--m", "2", "--h1", "1", "--h2", "0+1*sqrt2", "--f", str(path))
    assert code == 0
    assert text.strip() == '{"verdict":"POLYNOMIAL","coeffs":[[3,0],[2,0]]}'


def test_malformed_json_position():
    code, out, _ = run("montel", "--m", "2", "--h1", "1", "--h2", "sqrt2", "--f", '{"terms": [}')
    assert code == 1
    assert "line 1 column 12" in out["error"]


def test_bad_step_is_input_error():
    code, out, _ = run("montel", "--m", "2", "--h1", "1", "--h2", "sqrt3", "--f", F)
    assert code == 1


def test_bad_config():
    assert run("stirling", "--n", "3", "--k", "1", "--tol", "-1")[0] == 1
    assert run("stirling", "--n", "3", "--k", "1", "--h-seq", "1e-3,1e-2,1e-4")[0] == 1
    assert run("stirling", "--n", "3", "--k", "1", "--grid", "0,1,1")[0] == 1


def test_missing_argument_exit_code():
    assert run("stirling", "--n", "4")[0] == 1


def test_decompose_and_main2():
    code, out, _ = run("decompose", "--V", V, "--m", "2")
    assert code == 0 and out["dim_P"] == 2 and out["dim_E"] == 1
    code, out, _ = run("main2", "--V", V, "--m", "2")
    assert code == 0 and out["agree"] and out["low_degree_contained"]


def test_closure_box_and_diamond():
    code, out, _ = run("closure", "--V", V, "--m", "2", "--h1", "1")
    assert code == 0 and out["kind"] == "box" and out["dim"] <= 3 * out["dim_V"]
    code, out, _ = run("closure", "--V", V, "--m", "2", "--h1", "1", "--h2", "0.4")
    assert code == 0 and out["kind"] == "diamond"


def test_closure_hypothesis_violation_is_input_error():
    W = json.dumps({"generators": [{"terms": [{"lambda": [0, 0], "coeffs": [[0, 0], [0, 0], [1, 0]]}]}]})
    code, out, _ = run("closure", "--V", W, "--m", "1", "--h1", "1")
    assert code == 1 and out["kind"] == "HypothesisError"


def test_counterexample_csv(tmp_path):
    path = tmp_path / "f2.csv"
    code, out, _ = run("counterexample", "--m", "2", "--p", "2", "--q", "3", "--csv", str(path))
    assert code == 0
    assert out["residual_h1"] <= 1e-9 and out["residual_h2"] <= 1e-9
    assert out["witness"] is not None and out["misfit"] > 1e-2
    lines = path.read_text().splitlines()
    assert lines[0] == "t,value" and len(lines) == 201


def test_recover_json_and_csv(tmp_path):
    fam = '[{"terms":[{"lambda":[1,0],"coeffs":[[1,0]]}]},{"terms":[{"lambda":[2,0],"coeffs":[[1,0]]}]}]'
    code, out, _ = run("recover", "--m", "2", "--family", fam)
    assert code == 0
    mus = sorted(m["mu"][0] for m in out["mu"])
    assert mus == pytest.approx([1, 2], abs=1e-3)
    csv = tmp_path / "e.csv"
    import numpy as np

    ts = np.linspace(0, 8, 4001)
    csv.write_text("t,value\n" + "".join("%.17g,%.17g\n" % (t, np.exp(0.5 * t)) for t in ts))
    code, out, _ = run("recover", "--m", "1", "--csv", str(csv), "--h-seq", "0.2,0.1,0.05")
    assert code == 0


def test_matrix_blocks():
    code, out, _ = run("matrix", "--S", '[{"lambda":[0,0],"mult":3}]', "--h", "1", "--power", "2")
    assert out["blocks"][0]["matrix"][0][2] == [2, 0]


def test_determinism():
    args = ("decompose", "--V", V, "--m", "2", "--seed", "5")
    assert run(*args)[2] == run(*args)[2]


def test_to_jsonable():
    assert to_jsonable({"a": 2.0, "b": 1 + 2j, "c": [0.5]}) == {"a": 2, "b": [1, 2], "c": [0.5]}


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "deltainv", "stirling", "--n", "5", "--k", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout) == {"value": "25"}
