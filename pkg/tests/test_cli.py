import io
import json

import pytest

from hecke_so.cli import main


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def lines(text):
    return [json.loads(line) for line in text.splitlines()]


def test_casimir_json():
    code, text = run(["casimir", "--n", "3", "--m", "1", "--zeta", "z0,1"])
    assert code == 0
    (rep,) = lines(text)
    d = rep["details"]
    assert rep["verdict"] == "pass" and d["calibration_scalar"] == "1"
    assert d["a"] and d["g"] == ["2*z0 - 5/6", "2"] and d["C"]


def test_jacobi_pfaffian_fails_with_witness():
    code, text = run(["jacobi", "--n", "6", "--kappa", "pfaffian", "--format", "json"])
    assert code == 1
    (rep,) = lines(text)
    assert rep["verdict"] == "fail" and rep["witnesses"][0] != "0"


def test_jacobi_series_passes():
    code, text = run(["jacobi", "--n", "4", "--kappa", "series", "--jmax", "2"])
    assert code == 0 and lines(text)[0]["verdict"] == "pass"


def test_gamma_table():
    code, text = run(["gamma", "--n", "4", "--jmax", "2", "--form", "orthonormal"])
    table = lines(text)[0]["details"]["table"]
    assert code == 0 and table["0:1,2"] == "a_1_2"


def test_slice_and_poisson_reports():
    code, text = run(["slice", "--n", "3", "--m", "1"])
    rep = lines(text)[0]
    assert code == 0 and rep["details"]["dims"]["centralizer"] == 7
    assert rep["details"]["theta"]["theta"]
    code, text = run(["poisson-center", "--n", "4", "--zeta", "z0,z1"])
    reps = lines(text)
    assert code == 0 and [r["check"] for r in reps] == ["poisson-center", "poisson-c1"]
    assert reps[0]["details"]["negative_t_powers"] == {"t^-2": "z1"}


def test_text_format():
    code, text = run(["pfaffian", "--format", "text"])
    assert code == 0
    assert text.startswith("[PASS] pfaffian-identity")


def test_byte_identical_output():
    argv = ["h-lemma", "--n", "4", "5", "--count", "10"]
    assert run(argv) == run(argv)


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main(["jacobi", "--n", "2"], io.StringIO())
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["casimir", "--n", "3", "--m", "1", "--zeta", "z0"], io.StringIO())
    assert exc.value.code == 2


def test_error_report_exit_code():
    # rank-4 rotations do not exist at N = 3: the check errors, it does not fail
    code, text = run(["h-lemma", "--n", "3"])
    rep = lines(text)[0]
    assert code == 2 and rep["verdict"] == "error" and "UnsupportedError" in rep["details"]["error"]


def test_gamma_cache_hit_and_tamper(tmp_path):
    argv = ["jacobi", "--n", "3", "--jmax", "1", "--cache", str(tmp_path)]
    first = run(argv)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    assert run(argv) == first
    stored = json.loads(files[0].read_text())
    stored["payload"]["gamma"]["0:1,2"] = "0"
    files[0].write_text(json.dumps(stored))
    assert run(argv) == first
    assert json.loads(files[0].read_text())["payload"]["gamma"]["0:1,2"] != "0"


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("HECKE_SO_CACHE", str(tmp_path))
    code, _ = run(["gamma", "--n", "3", "--jmax", "1"])
    assert code == 0 and any(tmp_path.iterdir())


def test_parallel_jobs():
    code, text = run(["pfaffian", "--jobs", "2"])
    assert code == 0 and sorted(r["id"] for r in lines(text)) == ["pfaffian-identity", "pfaffian-pairing-N6"]


def test_reports_match_schema():
    jsonschema = pytest.importorskip("jsonschema")
    from pathlib import Path

    schema = json.loads((Path(__file__).parent.parent / "docs" / "report.schema.json").read_text())
    _, text = run(["pfaffian", "--timing"])
    _, err = run(["h-lemma", "--n", "3"])
    for rep in lines(text) + lines(err):
        jsonschema.validate(rep, schema)
