import csv
from importlib import resources

import numpy as np
import pytest

import lassodf as ld
from lassodf.cli import main

from conftest import random_design


@pytest.fixture()
def small_csv(tmp_path):
    rng = np.random.default_rng(0)
    X = rng.standard_normal((30, 4)) * 2 + 1
    y = X @ np.array([1.5, -1.0, 0.0, 0.5]) + rng.standard_normal(30)
    p = tmp_path / "small.csv"
    with open(p, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["a", "b", "c", "d", "y"])
        for i in range(30):
            w.writerow([repr(float(v)) for v in X[i]] + [repr(float(y[i]))])
    return p


@pytest.fixture(scope="module")
def diabetes_csv():
    with resources.as_file(resources.files("lassodf.fixtures") / "diabetes.csv") as p:
        yield p


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestPathCommand:
    def test_outputs(self, small_csv, tmp_path):
        out = tmp_path / "path.csv"
        assert main(["path", "--input", str(small_csv), "--output", str(out)]) == 0
        assert out.exists()
        assert (tmp_path / "path_coefficients.csv").exists()
        assert (tmp_path / "path.png").exists()

        rows = read_rows(out)
        assert rows[0] == ["m", "lambda", "event_type", "event_index", "active_size"]
        raw = ld.load_csv(small_csv, "y")
        ds = ld.standardize(raw)
        lam0 = float(np.abs(2 * ds.X.T @ ds.y).max())
        assert float(rows[1][1]) == pytest.approx(lam0, rel=1e-12)
        assert rows[1][4] == "0"
        assert float(rows[-1][1]) == 0.0

    def test_coefficient_table_round_trips(self, small_csv, tmp_path):
        out = tmp_path / "path.csv"
        main(["path", "--input", str(small_csv), "--output", str(out)])
        rows = read_rows(tmp_path / "path_coefficients.csv")
        assert rows[0] == ["lambda", "a", "b", "c", "d"]
        ds = ld.standardize(ld.load_csv(small_csv, "y"))
        path = ld.compute_path(ds.X, ds.y)
        for row in rows[1:]:
            lam = float(row[0])
            beta = np.array([float(v) for v in row[1:]])
            np.testing.assert_array_equal(beta, ld.fit_at(path, lam).beta)


class TestSelectCommand:
    def test_diabetes_bic_summary(self, diabetes_csv, tmp_path, capsys):
        out = tmp_path / "sel.csv"
        code = main(
            ["select", "--input", str(diabetes_csv), "--output", str(out), "--criterion", "bic"]
        )
        assert code == 0
        printed = capsys.readouterr().out
        assert "7 nonzero coefficients" in printed
        rows = read_rows(out)
        assert rows[0] == [
            "m", "lambda", "rss", "df_hat", "cp", "aic", "bic",
            "chosen_cp", "chosen_aic", "chosen_bic",
        ]
        assert sum(int(r[9]) for r in rows[1:]) == 1
        assert (tmp_path / "sel.png").exists()

    def test_aic_and_cp_choose_same_lambda(self, small_csv, tmp_path, capsys):
        lams = []
        for crit in ("aic", "cp"):
            out = tmp_path / f"sel_{crit}.csv"
            assert main(
                ["select", "--input", str(small_csv), "--output", str(out), "--criterion", crit]
            ) == 0
            line = [l for l in capsys.readouterr().out.splitlines() if l.startswith("chosen")][0]
            lams.append(line.split()[1])
        assert lams[0] == lams[1]

    def test_invalid_sigma2_exits_2(self, small_csv, tmp_path, capsys):
        out = tmp_path / "sel.csv"
        code = main(
            ["select", "--input", str(small_csv), "--output", str(out), "--sigma2", "0"]
        )
        assert code == 2
        assert "error:" in capsys.readouterr().err


class TestDfCurveCommand:
    def test_explicit_lambda_grid(self, small_csv, tmp_path):
        out = tmp_path / "curve.csv"
        code = main(
            [
                "df-curve", "--input", str(small_csv), "--output", str(out),
                "--lambdas", "0,1.5,0.5",
            ]
        )
        assert code == 0
        rows = read_rows(out)
        assert [float(r[0]) for r in rows[1:]] == [1.5, 0.5, 0.0]
        assert (tmp_path / "curve.png").exists()

    def test_bad_lambda_spec_exits_2(self, small_csv, tmp_path):
        out = tmp_path / "curve.csv"
        assert main(
            ["df-curve", "--input", str(small_csv), "--output", str(out), "--lambdas", "nope"]
        ) == 2


class TestVerifyDfCommand:
    def test_deterministic_bytes(self, small_csv, tmp_path):
        out1 = tmp_path / "v1.csv"
        out2 = tmp_path / "v2.csv"
        args = ["verify-df", "--input", str(small_csv), "--replications", "60", "--seed", "7"]
        assert main(args + ["--output", str(out1)]) == 0
        assert main(args + ["--output", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        rows = read_rows(out1)
        assert rows[0] == ["lambda", "df_mc", "e_active", "bias", "se", "ci_lo", "ci_hi"]

    def test_seed_changes_output(self, small_csv, tmp_path):
        out1 = tmp_path / "v1.csv"
        out2 = tmp_path / "v2.csv"
        base = ["verify-df", "--input", str(small_csv), "--replications", "60"]
        assert main(base + ["--seed", "7", "--output", str(out1)]) == 0
        assert main(base + ["--seed", "8", "--output", str(out2)]) == 0
        assert out1.read_bytes() != out2.read_bytes()


class TestConjectureBiasCommand:
    def test_outputs(self, small_csv, tmp_path):
        out = tmp_path / "conj.csv"
        code = main(
            [
                "conjecture-bias", "--input", str(small_csv), "--output", str(out),
                "--replications", "60", "--seed", "3",
            ]
        )
        assert code == 0
        rows = read_rows(out)
        assert rows[0] == ["k", "df_mc", "bias", "se", "n_valid_replications"]
        assert [int(r[0]) for r in rows[1:]] == [0, 1, 2, 3, 4]
        assert (tmp_path / "conj.png").exists()


class TestExitCodes:
    def test_missing_file_exits_2(self, tmp_path):
        assert main(
            ["path", "--input", str(tmp_path / "nope.csv"), "--output", str(tmp_path / "o.csv")]
        ) == 2

    def test_collinear_design_exits_2(self, tmp_path):
        p = tmp_path / "dup.csv"
        with open(p, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["a", "b", "y"])
            rng = np.random.default_rng(1)
            for _ in range(10):
                a = rng.standard_normal()
                w.writerow([repr(a), repr(2 * a), repr(rng.standard_normal())])
        assert main(["path", "--input", str(p), "--output", str(tmp_path / "o.csv")]) == 2

    def test_tied_entry_exits_3(self, tmp_path):
        # Orthogonal predictors with bitwise-equal top correlations: full rank
        # but a degenerate first transition.
        r = 1.0 / np.sqrt(2)
        x1 = np.array([r, -r, 0.0, 0.0])
        x2 = np.array([0.0, 0.0, r, -r])
        y = x1 + x2
        p = tmp_path / "tie.csv"
        with open(p, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["a", "b", "y"])
            for i in range(4):
                w.writerow([repr(float(x1[i])), repr(float(x2[i])), repr(float(y[i]))])
        assert main(["path", "--input", str(p), "--output", str(tmp_path / "o.csv")]) == 3

    def test_max_steps_exhaustion_exits_4(self, small_csv, tmp_path):
        assert main(
            [
                "path", "--input", str(small_csv), "--output", str(tmp_path / "o.csv"),
                "--max-steps", "1",
            ]
        ) == 4
