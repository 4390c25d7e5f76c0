"""Command-line surface: option parsing, output formats, exit codes,
and determinism of the emitted tables."""

import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from ctspec import cli
from ctspec.cli import main
from ctspec.laguerre import ell_eval, laguerre_eval


@pytest.fixture()
def runner():
    return CliRunner()


# ---------------------------------------------------------------------------
# gamma


def test_gamma_csv_single_level(runner):
    res = runner.invoke(
        main,
        ["gamma", "--symbol", "oscexp()", "--k", "0", "--xi-min", "0.5", "--xi-max", "2", "--points", "3"],
    )
    assert res.exit_code == 0
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "xi,re,im,abs"
    assert len(lines) == 4
    xi, re, im, mag = (float(p) for p in lines[2].split(","))
    # gamma at xi = 1 for the oscillating exponential at k = 0: (1 + i) / 2
    assert xi == pytest.approx(1.0, rel=1e-12)
    assert re == pytest.approx(0.5, abs=1e-8)
    assert im == pytest.approx(0.5, abs=1e-8)
    assert mag == pytest.approx(math.sqrt(0.5), abs=1e-8)
    assert "sup |gamma|" in res.stderr and "sup |gamma|" not in res.stdout


def test_gamma_k_range_adds_level_column(runner):
    res = runner.invoke(
        main,
        ["gamma", "--symbol", "const(1)", "--k-range", "0..2", "--xi-min", "1", "--xi-max", "4", "--points", "2"],
    )
    assert res.exit_code == 0
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "k,xi,re,im,abs"
    assert len(lines) == 7
    assert [int(row.split(",")[0]) for row in lines[1:]] == [0, 0, 1, 1, 2, 2]
    for row in lines[1:]:
        assert float(row.split(",")[1]) in (1.0, 4.0)
        assert float(row.split(",")[2]) == pytest.approx(1.0, abs=1e-10)


def test_gamma_json_document(runner):
    res = runner.invoke(
        main,
        ["gamma", "--symbol", "vpow(0.5)", "--xi-min", "0.5", "--xi-max", "0.5", "--points", "1",
         "--format", "json"],
    )
    # a one-point grid is rejected: the profile needs a real grid
    assert res.exit_code != 0

    res = runner.invoke(
        main,
        ["gamma", "--symbol", "vpow(0.5)", "--xi-min", "0.25", "--xi-max", "1", "--points", "3",
         "--format", "json"],
    )
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc["k"] == 0
    assert set(doc) >= {"symbol", "sup_estimate", "argmax_xi", "limit_at_zero", "limit_at_infinity", "xi", "re", "im"}
    # gamma for sqrt(v) at xi = 1/2 is Gamma(3/2)
    i = doc["xi"].index(0.5)
    assert doc["re"][i] == pytest.approx(math.gamma(1.5), rel=1e-9)


def test_gamma_out_file_moves_summary_to_stdout(runner, tmp_path):
    path = tmp_path / "profile.csv"
    res = runner.invoke(
        main,
        ["gamma", "--symbol", "const(1)", "--xi-min", "1", "--xi-max", "2", "--points", "2",
         "--out", str(path)],
    )
    assert res.exit_code == 0
    text = path.read_text()
    assert text.startswith("xi,re,im,abs")
    assert "sup |gamma|" in res.stdout


def test_gamma_rejects_conflicting_level_options(runner):
    res = runner.invoke(main, ["gamma", "--symbol", "const(1)", "--k", "1", "--k-range", "0..2"])
    assert res.exit_code == 2
    assert "--k or --k-range" in res.stderr


def test_gamma_rejects_unknown_symbol(runner):
    res = runner.invoke(main, ["gamma", "--symbol", "frobnicate(3)"])
    assert res.exit_code != 0
    assert "frobnicate" in res.stderr


def test_gamma_rejects_bad_grid(runner):
    res = runner.invoke(main, ["gamma", "--symbol", "const(1)", "--xi-min", "2", "--xi-max", "1"])
    assert res.exit_code == 1
    assert "xi" in res.stderr


# ---------------------------------------------------------------------------
# classify


@pytest.mark.parametrize(
    "text, verdict",
    [
        ("vpow(0.5)", "unbounded_all_k"),
        ("sininvpow(alpha=1, beta=0.5)", "bounded_all_k_with_zero_limits"),
        ("const(0)", "bounded_all_k"),
    ],
)
def test_classify_verdicts(runner, text, verdict):
    res = runner.invoke(main, ["classify", "--symbol", text])
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc["verdict"] == verdict
    assert isinstance(doc["evidence"], list) and doc["basis"] is not None


def test_classify_serializes_negativity_evidence(runner):
    res = runner.invoke(
        main,
        ["classify", "--symbol", "sininvpow(alpha=1,beta=0.5)*sininvpow(alpha=2,beta=0.25)"],
    )
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc["verdict"] == "inconclusive"
    neg = [e for e in doc["evidence"] if e["criterion"] == "nonnegativity" and not e["holds"]]
    assert neg and neg[0]["value"]["re"] < 0.0


# ---------------------------------------------------------------------------
# verify


def test_verify_decay_passes(runner):
    res = runner.invoke(main, ["verify", "--suite", "decay", "--k", "0", "--n-list", "4,8"])
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc["suite"] == "decay" and doc["pass"] is True
    assert doc["tests"][0]["slope"] > 0.0


def test_verify_equivalence_single_symbol(runner):
    res = runner.invoke(
        main, ["verify", "--suite", "equivalence", "--symbol", "const(1)", "--k", "0"]
    )
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    (t,) = doc["tests"]
    assert "const(1)" in t["name"] and t["error"] < t["budget"]


def test_verify_reports_budget_violation(runner, monkeypatch):
    def broken(alpha, beta, ks, n_list):
        return {
            "suite": "decay",
            "grid": {},
            "tests": [{"name": "decay k=0", "slope": 0.1, "budget": 0.425, "pass": False}],
            "pass": False,
        }

    monkeypatch.setattr(cli, "decay_report", broken)
    res = runner.invoke(main, ["verify", "--suite", "decay", "--k", "0"])
    assert res.exit_code == 1
    assert "budget exceeded: decay k=0" in res.stderr


def test_verify_rejects_bad_k_range(runner):
    res = runner.invoke(main, ["verify", "--suite", "decay", "--k-range", "two..five"])
    assert res.exit_code == 2
    assert "cannot parse" in res.stderr


# ---------------------------------------------------------------------------
# laguerre and means


def test_laguerre_weighted_matches_library(runner):
    res = runner.invoke(main, ["laguerre", "--k", "3", "--x", "0,1.5,4"])
    assert res.exit_code == 0
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "x,value"
    got = np.array([float(r.split(",")[1]) for r in lines[1:]])
    want = ell_eval(3, np.array([0.0, 1.5, 4.0]))
    assert np.array_equal(got, want)  # 17 significant digits round-trip


def test_laguerre_plain_polynomial(runner):
    res = runner.invoke(main, ["laguerre", "--k", "4", "--x", "0", "--plain"])
    assert res.exit_code == 0
    assert float(res.stdout.strip().splitlines()[1].split(",")[1]) == 1.0
    res = runner.invoke(main, ["laguerre", "--k", "2", "--alpha", "1", "--x", "0"])
    # L_2^(1)(0) = C(3, 2) = 3
    assert float(res.stdout.strip().splitlines()[1].split(",")[1]) == pytest.approx(3.0, rel=1e-14)


def test_laguerre_rejects_negative_degree(runner):
    res = runner.invoke(main, ["laguerre", "--k", "-1", "--x", "1"])
    assert res.exit_code == 1


def test_means_constant_symbol(runner):
    res = runner.invoke(main, ["means", "--symbol", "const(2)", "--points", "5"])
    assert res.exit_code == 0
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "v,re,im"
    # the table lists the repeated primitive: C^(1)(v) = 2v for a = 2
    for row in lines[1:]:
        v, re, im = (float(p) for p in row.split(","))
        assert re == pytest.approx(2.0 * v, rel=1e-12) and im == 0.0


def test_means_rejects_zero_order(runner):
    res = runner.invoke(main, ["means", "--symbol", "const(1)", "--order", "0"])
    assert res.exit_code == 1
    assert "order" in res.stderr


def test_gamma_output_is_deterministic(runner):
    args = ["gamma", "--symbol", "oscexp()", "--xi-min", "0.1", "--xi-max", "10", "--points", "20"]
    a = runner.invoke(main, args)
    b = runner.invoke(main, args)
    assert a.exit_code == b.exit_code == 0
    assert a.stdout == b.stdout
