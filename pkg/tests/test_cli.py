import json
import math

import numpy as np
import pytest

from psiconc.cli import EXIT_DOMINATION, EXIT_INPUT, EXIT_OK, main, read_columns
from psiconc.errors import ParseError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.startswith("{") else out), err


def write_column(path, values, name="x"):
    path.write_text(name + "\n" + "\n".join(repr(float(v)) for v in values) + "\n")
    return path


def strip_time(doc):
    doc["meta"].pop("timestamp")
    return doc


# compare

def test_compare_1000(capsys):
    code, doc, _ = run(capsys, "compare", "1", "1000")
    assert code == EXIT_OK
    rho = doc["results"]["improvement_factor"]
    assert abs(rho - 20915) / 20915 < 0.01
    assert doc["results"]["claimed_improvement"] == 21000
    assert any("21000" in w for w in doc["warnings"])


def test_compare_100_flags_discrepancy(capsys):
    _, doc, _ = run(capsys, "compare", "1", "100")
    assert doc["results"]["improvement_factor"] == pytest.approx(462.15, abs=0.01)
    assert any("144" in w and "DISCREPANCY" in w for w in doc["warnings"])


def test_compare_e_squared_and_small_ratio(capsys):
    _, doc, _ = run(capsys, "compare", "1", repr(math.exp(2)))
    assert doc["results"]["improvement_factor"] == pytest.approx(10.205, abs=1e-3)
    assert any("approximately 1;" in w for w in doc["warnings"])
    _, doc, _ = run(capsys, "compare", "1", "1.0001")
    assert doc["results"]["improvement_factor"] == pytest.approx(1.0001, rel=1e-6)


def test_compare_rejects_bad_interval(capsys):
    code, _, err = run(capsys, "compare", "5", "1")
    assert code == EXIT_INPUT and "0 < a < b" in err


# analyze

def test_analyze_lognormal(tmp_path, capsys):
    f = write_column(tmp_path / "d.csv", np.random.default_rng(0).lognormal(0, 1, 10_000))
    code, doc, _ = run(capsys, "analyze", str(f))
    assert code == EXIT_OK
    r = doc["results"]
    assert abs(r["boxcox_equivalent_lambda"]) <= 0.25
    assert set(r["functional"]) == {"mgf", "range"}
    assert r["recommendation"]["choice"] == "log"


def test_analyze_constant_column(tmp_path, capsys):
    f = write_column(tmp_path / "c.csv", [4.0] * 20)
    code, doc, _ = run(capsys, "analyze", str(f))
    assert code == EXIT_OK
    assert doc["results"]["transform"] == "identity"
    assert doc["results"]["functional"] == {"mgf": 0.0, "range": 0.0}


def test_analyze_parse_error_names_line(tmp_path, capsys):
    f = tmp_path / "bad.csv"
    f.write_text("x,y\n1,2\n3,oops\n")
    code, _, err = run(capsys, "analyze", str(f), "--column", "y")
    assert code == EXIT_INPUT
    assert "line 3" in err


def test_analyze_too_few_rows(tmp_path, capsys):
    code, _, err = run(capsys, "analyze", str(write_column(tmp_path / "s.csv", [1, 2, 3])))
    assert code == EXIT_INPUT and "at least 10" in err


def test_read_columns_rejects_missing_cells(tmp_path):
    f = tmp_path / "m.csv"
    f.write_text("a,b\n1,2\n3,\n")
    assert list(read_columns(f, ["a"])["a"]) == [1.0, 3.0]
    with pytest.raises(ParseError, match="line 3"):
        read_columns(f, ["b"])
    with pytest.raises(ParseError, match="line 1"):
        read_columns(f, ["c"])


# simulate

def test_simulate_pass_and_determinism(capsys, tmp_path):
    argv = ["simulate", "--dist", "uniform", "--params", "1", "1000", "--statistic", "product",
            "--transform", "log", "--reps", "5000", "--t-grid", "0", "10", "40", "--seed", "9"]
    code, doc, _ = run(capsys, *argv)
    assert code == EXIT_OK and doc["results"]["status"] == "PASS"
    row0 = doc["results"]["rows"][0]
    assert row0["t"] == 0 and row0["empirical"] == 1.0 == row0["bound"]
    _, doc2, _ = run(capsys, *argv)
    assert strip_time(doc) == strip_time(doc2)


def test_simulate_failure_exit_code(capsys):
    code, doc, _ = run(capsys, "--reps", "5000", "simulate", "--dist", "pareto", "--params", "1", "1", "1000",
                       "--statistic", "max", "--transform", "log", "--t-grid", "1.0", "--seed", "1")
    assert code == EXIT_DOMINATION
    assert doc["results"]["status"] == "FAIL" and doc["warnings"]


def test_simulate_bad_spec(capsys):
    code, _, _ = run(capsys, "simulate", "--dist", "gamma", "--params", "-1", "1")
    assert code == EXIT_INPUT


# transport

def test_transport_examples(tmp_path, capsys):
    x = np.random.default_rng(1).lognormal(0, 1, 300)
    a = write_column(tmp_path / "a.csv", x)
    b = write_column(tmp_path / "b.csv", x + 1)
    la = write_column(tmp_path / "la.csv", np.log(x))
    lb = write_column(tmp_path / "lb.csv", np.log(x + 1))
    _, doc, _ = run(capsys, "transport", str(a), str(a), "--transform", "log")
    assert doc["results"]["distance"] == 0.0
    _, doc, _ = run(capsys, "transport", str(a), str(b), "--p", "1")
    assert doc["results"]["distance"] == pytest.approx(1.0, rel=1e-12)
    _, doc, _ = run(capsys, "transport", str(a), str(b), "--transform", "log", "--p", "2")
    _, pre, _ = run(capsys, "transport", str(la), str(lb), "--p", "2")
    assert doc["results"]["distance"] == pytest.approx(pre["results"]["distance"], rel=1e-12)
    assert doc["results"]["pushforward_difference"] == 0.0


def test_transport_domain_error(tmp_path, capsys):
    a = write_column(tmp_path / "a.csv", [-1.0, 2.0])
    code, _, _ = run(capsys, "transport", str(a), str(a), "--transform", "log")
    assert code == EXIT_INPUT


# bound and apps

def test_bound_verbs(capsys):
    _, doc, _ = run(capsys, "bound", "--transform", "log", "--a", "1", "--b", "1000", "--n", "50",
                    "--t", "0", "20", "--statistic", "sum")
    assert doc["results"]["hoeffding_constant"] == pytest.approx(math.log(1000) ** 2 / 4)
    assert doc["results"]["rows"][0]["bound"] == 1.0
    _, doc, _ = run(capsys, "bound", "--a", "1", "--b", "2.718281828459045", "--n", "4", "--t", "2",
                    "--statistic", "product")
    assert doc["results"]["rows"][0]["log_bound"] == pytest.approx(2 * math.exp(-2), rel=1e-9)
    _, doc, _ = run(capsys, "bound", "--transform", "log", "--a", "1", "--b", "1000", "--n", "50",
                    "--t", "1", "--statistic", "max")
    row = doc["results"]["rows"][0]
    assert row["published_bound"] < row["bounded_differences_bound"]


def test_apps_portfolio(capsys):
    _, doc, _ = run(capsys, "apps", "portfolio", "--delta", "0.1")
    assert doc["results"]["sigma_cap"] == pytest.approx(0.0123457, abs=5e-8)


def test_apps_regress_covgeo_median(tmp_path, capsys):
    rng = np.random.default_rng(2)
    X = rng.standard_normal((50, 2))
    y = np.exp(0.5 + X @ [1.0, -2.0])
    f = tmp_path / "r.csv"
    np.savetxt(f, np.column_stack([y, X]), delimiter=",", header="y,x1,x2", comments="")
    _, doc, _ = run(capsys, "apps", "regress", str(f), "--response", "y", "--predictors", "x1", "x2", "--intercept")
    beta = doc["results"]["beta_hat"]
    assert beta["intercept"] == pytest.approx(0.5, abs=1e-10)
    assert beta["x2"] == pytest.approx(-2.0, abs=1e-10)

    m = tmp_path / "m.json"
    m.write_text(json.dumps([[[1, 0], [0, 4]], [[4, 0], [0, 1]]]))
    _, doc, _ = run(capsys, "apps", "covgeo", str(m))
    np.testing.assert_allclose(doc["results"]["geometric_mean"], [[2, 0], [0, 2]], atol=1e-10)

    c = write_column(tmp_path / "c.csv", [1.0, 100.0])
    _, doc, _ = run(capsys, "apps", "median", str(c), "--transform", "log")
    assert doc["results"]["psi_median"] == pytest.approx(10.0)
    assert doc["results"]["median_identity"] == 50.5


def test_out_file_and_table_format(tmp_path, capsys):
    out = tmp_path / "o.txt"
    code = main(["compare", "1", "10", "--format", "table", "--out", str(out)])
    printed = capsys.readouterr().out
    assert code == EXIT_OK
    assert out.read_text() == printed
    assert "results.improvement_factor:" in printed


def test_seed_flag_before_or_after_verb(capsys):
    _, a, _ = run(capsys, "--seed", "7", "compare", "1", "10")
    _, b, _ = run(capsys, "compare", "1", "10", "--seed", "7")
    assert a["meta"]["seed"] == b["meta"]["seed"] == 7
    _, c, _ = run(capsys, "compare", "1", "10")
    assert c["meta"]["seed"] == 42
