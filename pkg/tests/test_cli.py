import io
import json

import pytest

from crgnla.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_free_dims_json():
    code, out, _ = run("gnla", "free", "--depth", "10", "--json")
    assert code == 0
    assert json.loads(out)["dims"][-2:] == [56, 99]


def test_catalog_check_and_growth():
    assert run("gnla", "check", "Gou(5)")[0] == 0
    code, out, _ = run("gnla", "growth", "m_HC", "--json")
    assert code == 0 and "2" in out


def test_enumerate_counts():
    code, out, _ = run("extend", "enumerate", "--max-depth", "7", "--json")
    assert code == 0
    assert json.loads(out)["counts"] == {"3": 1, "4": 1, "5": 2, "6": 1, "7": 2}


def test_cocycles_json():
    code, out, _ = run("extend", "cocycles", "Gou(4)", "--json")
    data = json.loads(out)
    assert code == 0 and data["dim_Z"] == 2 and data["degree"] == 5


def test_cocycle_file_round_trip(tmp_path):
    code, out, _ = run("extend", "cocycles", "m_HC", "--json")
    assert code == 0
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"algebra": "m_HC", "degree": 4, "values": [
        {"a": "e1'", "b": "e3'", "value": "1"}, {"a": "e1''", "b": "e3''", "value": "1"}]}))
    code, out, err = run("extend", "classify", str(path), "--json")
    assert code == 0, err
    assert json.loads(out)["type"] == "elliptic"


def test_model_all_on_fixture():
    code, out, _ = run("model", "all", "fixtures/2123.crm")
    assert code == 0 and "dimension 10" in out


def test_model_missing_parameter_is_usage_error():
    code, _, err = run("model", "symbol", "fixtures/2121.crm")
    assert code == 2 and err


def test_model_symbol_with_parameter():
    code, out, _ = run("model", "symbol", "2121", "--param", "a=1", "--json")
    assert code == 0 and "elliptic" in out


def test_deprolong_failure_is_check_failure():
    code, _, err = run("gnla", "deprolong", "m_HC")
    assert code == 1 and "not deprolongable" in err


def test_prolong_su12_text():
    code, out, _ = run("prolong", "run", "heis3")
    assert code == 0 and "total 8" in out


def test_jnorm_keeps_b_for_non_goursat():
    code, out, _ = run("jnorm", "nGou(5)", "--J", "2,3", "--json")
    assert code == 0 and "3" in out


@pytest.mark.parametrize("argv", [["bogus"], ["gnla", "check"], ["gnla", "check", "no-such"],
                                  ["jnorm", "m_HC", "--J", "1,2,3"]])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_depth_limit_env(monkeypatch):
    monkeypatch.setenv("GNLA_MAX_DEPTH", "4")
    assert run("gnla", "free", "--depth", "6")[0] == 2


def test_paper_suite_json_is_stable():
    a = run("paper-suite", "--only", "1", "4", "12", "--json")
    b = run("paper-suite", "--only", "1", "4", "12", "--json")
    assert a[0] == 0 and a[1] == b[1]
    assert [r["id"] for r in json.loads(a[1])["checks"]] == [1, 4, 12]


def test_paper_suite_reports_failures():
    code, out, _ = run("paper-suite", "--only", "9")
    assert code == 1 and "FAIL" in out
