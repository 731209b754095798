import io
import json
import subprocess
import sys

import pytest

from fpoisson.cli import run
from fpoisson.expansions import QExpansion, TaylorSeries, dump_expansion, CExpansion
from fpoisson.measure import FpmParams


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    text = out.getvalue()
    return code, (json.loads(text) if text else None)


def test_document_shape():
    code, doc = call("pmf", "--lambda", "1", "--beta", "0.5", "--k-max", "5")
    assert code == 0
    assert set(doc) >= {"params", "results", "residuals", "status"}
    assert doc["params"] == {"lambda": 1.0, "beta": 0.5}
    assert len(doc["results"]["pmf"]) == 6


def test_verify_measure_poisson():
    code, doc = call("verify", "--suite", "measure", "--lambda", "1", "--beta", "1")
    assert code == 0 and doc["status"] == "pass"
    assert doc["residuals"]["measure.poisson_reduction_pmf"]["value"] < 1e-12


def test_moments_table():
    code, doc = call("moments", "--lambda", "1", "--beta", "1", "--n-max", "4", "--oracle")
    assert code == 0
    assert doc["results"]["closed_form"] == [1, 1, 2, 5, 15]
    assert doc["residuals"]["closed_vs_direct_rel"]["pass"]


def test_pair_matrix():
    code, doc = call("pair", "--lambda", "0.7", "--beta", "0.5", "--n-max", "8")
    assert code == 0
    for r in doc["residuals"].values():
        assert r["value"] < 1e-8


def test_appell_falling_basis_for_charlier():
    # C_2 = (x)_2 + 2 c_1 x + c_2 with c_1 = -lambda, c_2 = lambda^2 - ... at beta = 1
    code, doc = call("appell", "--lambda", "2", "--beta", "1", "--n", "2", "--basis", "falling")
    assert code == 0
    re = [c[0] for c in doc["results"]["coeffs"]]
    assert re == pytest.approx([4, -4, 1], abs=1e-12)


def test_file_commands(tmp_path):
    p = FpmParams(1.0, 0.5)
    qa = tmp_path / "a.json"
    dump_expansion(QExpansion([1, 0.5], p), qa)
    code, doc = call("transform", "--op", "s", "--input", str(qa), "--z", "0.2,0.1")
    assert code == 0 and len(doc["results"]["value"]) == 2
    code, doc = call("wick", "--op", "product", "--a", str(qa), "--b", str(qa))
    assert code == 0
    assert doc["results"]["expansion"]["coeffs"] == [[1, 0], [1, 0], [0.25, 0]]
    code, doc = call("wick", "--op", "power", "--a", str(qa), "--n", "2")
    assert doc["results"]["expansion"]["coeffs"] == [[1, 0], [1, 0], [0.25, 0]]
    code, doc = call("wick", "--op", "inverse", "--a", str(qa), "--terms", "4")
    assert code == 0 and len(doc["results"]["expansion"]["coeffs"]) == 4
    tay = tmp_path / "t.json"
    dump_expansion(TaylorSeries([1, 1, 0.5]), tay)
    code, doc = call("transform", "--op", "s-inverse", "--input", str(tay))
    assert doc["results"]["expansion"]["coeffs"] == [[1, 0], [1, 0], [0, 0]]
    ce = tmp_path / "c.json"
    dump_expansion(CExpansion(p, [1, 0.5, 0.25]), ce)
    code, doc = call("transform", "--op", "c", "--input", str(ce), "--z", "0.5")
    assert code == 0 and doc["residuals"]["closed_vs_direct_rel"]["pass"]
    code, doc = call("norm", "--q", "1", "--kappa", "0.5", "--sign", "test", "--input", str(ce))
    assert code == 0 and doc["results"]["norm"] > 1


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["moments", "--lambda", "1"],
        ["transform", "--op", "s", "--input", "missing.json", "--z", "1"],
        ["transform", "--op", "x", "--input", "f"],
        ["wick", "--op", "exp", "--a", "f.json"],
    ],
)
def test_usage_errors(argv, capsys):
    code, _ = call(*argv)
    assert code == 1
    assert "usage" in capsys.readouterr().err


def test_bad_params_is_numerical_failure():
    code, doc = call("pmf", "--lambda", "-1", "--beta", "0.5")
    assert code == 2 and doc["status"] == "error"
    assert doc["diagnostic"]["type"] == "ValueError"


def test_domain_error_exit_code(tmp_path):
    qz = tmp_path / "z.json"
    dump_expansion(QExpansion([0, 1]), qz)
    code, doc = call("wick", "--op", "log", "--a", str(qz), "--terms", "3")
    assert code == 2 and doc["diagnostic"]["type"] == "WickDomainError"


def test_suite_failure_exit_code(monkeypatch):
    from fpoisson import cli, verification

    def failing(params, rng):
        return [verification.Check("always_red", 1.0, 0.0)]

    monkeypatch.setitem(verification.SUITES, "measure", failing)
    code, doc = call("verify", "--suite", "measure", "--lambda", "1", "--beta", "1")
    assert code == 3 and doc["status"] == "fail" and doc["failed"] == ["measure.always_red"]


def test_verify_is_deterministic():
    a = call("verify", "--suite", "wick", "--lambda", "1", "--beta", "0.5")
    b = call("verify", "--suite", "wick", "--lambda", "1", "--beta", "0.5")
    assert a == b
    c = call("verify", "--suite", "wick", "--lambda", "1", "--beta", "0.5", "--seed", "7")
    assert c[0] == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fpoisson", "moments", "--lambda", "1", "--beta", "1", "--n-max", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["closed_form"] == [1, 1, 2]
