import csv
import io
import json
import subprocess
import sys

import pytest

from wittlab.cli import main, parse_degrees, parse_modulus

F2X2 = json.dumps({"base": {"Fp": 2}, "vars": ["x"], "ideal": ["x^2"]})
ZX2 = json.dumps({"base": "Z", "vars": ["x"], "ideal": ["x^2"]})


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parsers():
    assert parse_modulus("8") == 8 and parse_modulus("3^2") == 9 and parse_modulus(None) is None
    assert parse_degrees("0..3") == [0, 1, 2, 3] and parse_degrees("1,4") == [1, 4]
    for bad in ("0", "x", "6^2"):
        with pytest.raises(Exception):
            parse_modulus(bad)


def test_witt_evaluates(capsys):
    code, out, _ = run(capsys, "witt", "V[2](T(x))", "--ring", F2X2, "--S", "1,2")
    assert code == 0
    data = json.loads(out)
    assert data["S"] == [1, 2] and data["vector"] == "(0, x)"


def test_witt_parse_error(capsys):
    code, _, err = run(capsys, "witt", "T(x) +", "--ring", F2X2)
    assert code == 2 and "parse" in err


def test_witt_semantic_error(capsys):
    code, _, _ = run(capsys, "witt", "F[2](T(x)) + T(x)", "--ring", F2X2, "--S", "1,2")
    assert code == 3


def test_hh_table(capsys):
    code, out, _ = run(capsys, "hh", F2X2, "--degrees", "0..4")
    assert code == 0
    assert [r["dimension"] for r in json.loads(out)["records"]] == [2, 2, 2, 2, 2]


def test_hh_with_finite_coefficients(capsys):
    code, out, _ = run(capsys, "hh", ZX2, "--degrees", "0..2", "--mod", "2^2")
    assert code == 0 and json.loads(out)["modulus"] == 4


def test_hh_preconditions(capsys):
    assert run(capsys, "hh", json.dumps({"base": "Z", "vars": ["x"]}), "--degrees", "1")[0] == 4
    assert run(capsys, "hh", F2X2, "--mod", "4")[0] == 4
    assert run(capsys, "hh", "{not json")[0] == 2


def test_check_exit_codes(capsys, tmp_path):
    assert run(capsys, "check", "pro_hkr_f2x_n1", "--stage-bound", "3", "--internal-bound", "4")[0] == 0
    assert run(capsys, "check", "sanity_constant_system")[0] == 1
    assert run(capsys, "check", "no_such_instance")[0] == 2
    bad = {"theorem": "pro_hkr", "ring": {"base": {"Fp": 2}, "vars": ["x"]}, "ideal": ["x"], "params": {"n": 1, "q": 1}}
    assert run(capsys, "check", json.dumps(bad))[0] == 2
    unflagged = {"theorem": "pro_hkr", "ring": {"base": {"Fp": 2}, "vars": ["x"]}, "ideal": ["x"], "params": {"n": 1}}
    code, _, err = run(capsys, "check", json.dumps(unflagged))
    assert code == 4 and "PreconditionError" in err
    assert run(capsys, "check")[0] == 2
    assert run(capsys, "check", "--jobs", "0", "--all")[0] == 2


def test_check_writes_json_and_csv(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "check", "artin_rees_z_4_mod_8", "--out", str(out), "--no-wall-time")
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["verdict"] == "ProZero" and "wall_time_s" not in rep
    rows = list(csv.DictReader(io.StringIO((tmp_path / "r.csv").read_text())))
    witness = [(r["s"], r["value"]) for r in rows if r["kind"] == "witness"]
    assert witness[0] == ("1", "3")


def test_check_is_deterministic(capsys, tmp_path):
    texts = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        main(["check", "lemma_2_3_f2x4", "--out", str(out), "--no-wall-time"])
        texts.append(out.read_bytes())
    capsys.readouterr()
    assert texts[0] == texts[1]


def test_check_several_instances_in_parallel(capsys, tmp_path):
    code, out, _ = run(capsys, "check", "sanity_constant_system", "artin_rees_z_4_mod_8",
                       "--jobs", "2", "--out", str(tmp_path / "d"))
    assert code == 1
    summary = json.loads(out)["instances"]
    assert [s["exit_code"] for s in summary] == [1, 0]
    assert (tmp_path / "d" / "summary.json").exists()
    assert (tmp_path / "d" / "artin_rees_z_4_mod_8.csv").exists()


def test_list_instances(capsys):
    code, out, _ = run(capsys, "list-instances")
    names = [c["name"] for c in json.loads(out)]
    assert code == 0 and "pro_hkr_f2x_n2" in names


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_console_script_runs():
    res = subprocess.run([sys.executable, "-m", "wittlab.cli", "list-instances"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)


def test_service_endpoints():
    pytest.importorskip("fastapi")
    pytest.importorskip("httpx")
    from fastapi.testclient import TestClient

    from wittlab.service import app

    client = TestClient(app)
    assert client.get("/instances").status_code == 200
    r = client.post("/witt", json={"expr": "T(x) + T(x)", "ring": json.loads(F2X2), "S": [1, 2]})
    # [x] + [x] = (2x, -x^2) = (0, 0) since x^2 = 0
    assert r.status_code == 200 and r.json()["vector"] == "(0, 0)"
    assert client.post("/witt", json={"expr": "T(", "ring": json.loads(F2X2)}).status_code == 400
    assert client.post("/check", json={"name": "sanity_constant_system"}).json()["verdict"] == "NotDecidedBy"
    assert client.post("/check", json={"name": "nope"}).status_code == 404
