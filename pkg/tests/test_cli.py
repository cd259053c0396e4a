import json
import re
import subprocess
import sys

import jsonschema
import pytest

from closedbch.cli import COMMANDS, load_schema, main, run


def invoke(command, payload, *extra):
    """Run the installed entry point in a fresh process."""
    text = payload if isinstance(payload, str) else json.dumps(payload)
    proc = subprocess.run(
        [sys.executable, "-m", "closedbch.cli", command, *extra],
        input=text, capture_output=True, text=True, check=False,
    )
    return proc


def residuals(diags):
    out = []
    for d in diags:
        m = re.search(r"residual[^:]*: ([0-9.e+-]+)", d)
        if m:
            out.append(float(m.group(1)))
    return out


def test_pair_example():
    code, resp = run("pair", {"u": 0, "v": 0, "c": 1})
    assert code == 0 and resp["status"] == "ok"
    assert resp["result"] == {"x": [1.0, 0.0], "y": [1.0, 0.0], "i": [0.5, 0.0]}


def test_mat2_log_identity():
    code, resp = run("mat2-log", {"matrix": [[1, 0], [0, 1]]})
    assert code == 0
    assert resp["result"]["log"] == [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
    assert any("scale factor" in d or "scalar" in d for d in resp["diagnostics"])


def test_virasoro_verify_residual():
    payload = {"k": 1, "lamMinus": 0.3, "lam0": 0.2, "lamPlus": 0.1}
    code, resp = run("virasoro-triple", payload, verify=True)
    assert code == 0
    res = residuals(resp["diagnostics"])
    assert res and res[0] <= 1e-9


def test_triple_diagnostics_report_root():
    payload = {"structure": {"u": 0.1, "z": 0.1, "n": 0.05, "eXZ": 0.02}}
    code, resp = run("triple", payload, verify=True)
    assert code == 0
    assert any(d.startswith("selected alpha") for d in resp["diagnostics"])
    assert residuals(resp["diagnostics"])[0] <= 1e-9


def test_subalgebra_command():
    payload = {"family": "two-param", "n": 2, "delta": 0.1, "eps": 0.2, "centralCharge": 1}
    code, resp = run("subalgebra", payload, verify=True)
    assert code == 0
    assert residuals(resp["diagnostics"])[0] <= 1e-9


@pytest.mark.parametrize(
    "command,payload",
    [
        ("pair", {"u": [0.1, 0.2], "v": 0.3, "c": 0}),
        ("virasoro-two", {"k": 2, "lamMinus": 0.1, "lamPlus": 0.2, "centralCharge": 26}),
        ("mat2-gl2-log", {"matrix": [[2, 1], [0, 3]]}),
        ("mat2-decompose", {"matrix": [[1, 0.5], [0.2, 1.1]]}),
        ("mat2-fixed-points", {"matrix": [[1, 1], [0, 1]]}),
        ("oracle-check", {"target": "pair", "payload": {"u": 0.1, "v": 0.2, "c": 0.3}, "order": 8}),
    ],
)
def test_outputs_revalidate(command, payload):
    code, resp = run(command, payload, verify=True)
    assert code == 0
    schema = load_schema(command)
    jsonschema.validate(resp["result"], schema["output"])
    jsonschema.validate(resp, load_schema("response"))


def test_every_command_has_schema():
    for command in COMMANDS:
        s = load_schema(command)
        assert "input" in s and "output" in s


def test_exit_codes_subprocess():
    ok = invoke("pair", {"u": 0, "v": 0, "c": 1})
    assert ok.returncode == 0
    assert json.loads(ok.stdout)["status"] == "ok"

    bad_json = invoke("pair", "{not json")
    assert bad_json.returncode == 2
    assert json.loads(bad_json.stdout)["error"]["code"] == "parse_error"

    invalid = invoke("pair", {"u": 0, "v": 0})
    assert invalid.returncode == 3
    assert json.loads(invalid.stdout)["error"]["code"] == "validation_error"

    compute = invoke("mat2-log", {"matrix": [[-1, 1], [0, -1]]})
    assert compute.returncode == 4
    err = json.loads(compute.stdout)["error"]
    assert err["code"] and "bch: error" in compute.stderr


def test_unknown_command_is_parse_error():
    proc = invoke("nope", {})
    assert proc.returncode == 2


def test_diagnostics_mirrored_to_stderr():
    proc = invoke("virasoro-triple", {"k": 1, "lamMinus": 0.3, "lam0": 0.2, "lamPlus": 0.1}, "--verify")
    assert proc.returncode == 0
    assert "bch: oracle residual" in proc.stderr


def test_determinism():
    payload = {"structure": {"u": 0.1, "z": 0.1, "n": 0.05}}
    a = invoke("triple", payload, "--verify")
    b = invoke("triple", payload, "--verify")
    assert a.returncode == 0 and a.stdout == b.stdout


def test_input_file(tmp_path, capsys):
    f = tmp_path / "req.json"
    f.write_text(json.dumps({"matrix": [[2, 0], [0, 0.5]]}))
    assert main(["mat2-log", "--input", str(f)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["result"]["log"][0][0][0] == pytest.approx(0.6931471805599453)


def test_missing_file_is_parse_error(tmp_path, capsys):
    assert main(["pair", "--input", str(tmp_path / "absent.json")]) == 2
    assert json.loads(capsys.readouterr().out)["error"]["code"] == "parse_error"


def test_tol_flag_reaches_solver(tmp_path, capsys):
    f = tmp_path / "req.json"
    f.write_text(json.dumps({"structure": {"u": 0.1, "z": 0.1, "n": 0.05}}))
    assert main(["triple", "--tol", "1e-10", "--input", str(f)]) == 0
