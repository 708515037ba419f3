import io
import math
import subprocess
import sys

import numpy as np
import pytest

import liftkit.cli as cli
from liftkit import DegenerateLift, make_2x2
from liftkit.experiments import CSV_COLUMNS
from liftkit.mmio import read_csv, read_matrix, write_matrix

MU0 = repr(math.pi / 2)


def run(*argv):
    out = io.StringIO()
    code = cli.main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def parse(text):
    """``name value...`` lines to a dict of value strings."""
    return {k: v for k, _, v in (line.partition(" ") for line in text.splitlines())}


@pytest.fixture
def m0_file(tmp_path):
    p = tmp_path / "m0.mtx"
    write_matrix(make_2x2(0.0).m, p)
    return p


class TestLift:
    def test_pass(self, tmp_path, m0_file):
        out_file = tmp_path / "x.mtx"
        code, text = run("lift", "--matrix", m0_file, "--mu", MU0, "--out", out_file)
        assert code == 0
        vals = parse(text)
        assert vals["status"] == "pass"
        assert vals["n"] == "2"
        for key in ("lambda0", "xi", "zeta", "alpha", "s0"):
            assert key in vals
        assert abs(complex(*map(float, vals["lambda0"].split()))) <= 1e-13
        checks = [line for line in text.splitlines() if line.startswith("check ")]
        assert len(checks) == 4 and all(line.endswith(" ok") for line in checks)
        x = read_matrix(out_file)[:, 0]
        assert abs(x[1] / x[0] + math.pi / 2) <= 1e-12

    def test_complex_shift(self, tmp_path):
        fam = make_2x2(1e-2)
        p = tmp_path / "m.mtx"
        write_matrix(fam.m, p)
        mu = f"{fam.mu_plus.real!r},{fam.mu_plus.imag!r}"
        code, _ = run("lift", "--matrix", p, "--mu", mu, "--beta", "2", "--gamma", "0.5",
                      "--seed", "3", "--out", tmp_path / "x.mtx")
        assert code == 0
        x = read_matrix(tmp_path / "x.mtx")[:, 0]
        assert abs(x[1] / x[0] - fam.ratio_plus) <= 1e-10

    def test_pathological_vectors(self, tmp_path, m0_file, rng):
        phi = make_2x2(0.0).right_nullvector().real
        w = rng.uniform(-1, 1, 2)
        cols = np.column_stack([np.append(phi, -1.0), np.append(w, w @ phi)])
        vec = tmp_path / "vw.mtx"
        write_matrix(cols, vec)
        code, text = run("lift", "--matrix", m0_file, "--mu", MU0, "--vectors", vec,
                         "--out", tmp_path / "x.mtx")
        assert code == 2
        assert any(line.startswith("check lifted_inner") and line.endswith("FAILED")
                   for line in text.splitlines())
        assert "status conditions_failed" in text

    def test_degenerate(self, tmp_path, m0_file, monkeypatch):
        def boom(sys_):
            raise DegenerateLift("xi vanished", 0.0, 1.0)

        monkeypatch.setattr(cli, "solve_nullpair", boom)
        code, text = run("lift", "--matrix", m0_file, "--mu", MU0, "--out", tmp_path / "x.mtx")
        assert code == 3
        assert "status degenerate" in text

    def test_vectors_wrong_shape(self, tmp_path, m0_file):
        vec = tmp_path / "vw.mtx"
        write_matrix(np.ones((2, 2)), vec)
        code, _ = run("lift", "--matrix", m0_file, "--mu", MU0, "--vectors", vec)
        assert code == 74

    def test_missing_matrix(self, tmp_path):
        assert run("lift", "--matrix", tmp_path / "none.mtx", "--mu", "1")[0] == 74

    def test_malformed_matrix(self, tmp_path, capsys):
        p = tmp_path / "bad.mtx"
        p.write_text("%%MatrixMarket matrix array real general\n2 2\n1\n")
        assert run("lift", "--matrix", p, "--mu", "1")[0] == 74
        assert "line 4" in capsys.readouterr().err

    def test_nonsquare(self, tmp_path):
        p = tmp_path / "r.mtx"
        write_matrix(np.ones((2, 3)), p)
        assert run("lift", "--matrix", p, "--mu", "1")[0] == 64


class TestUsage:
    @pytest.mark.parametrize("argv", [
        [],
        ["frobnicate"],
        ["lift", "--mu", "1"],
        ["lift", "--matrix", "m.mtx", "--mu", "1,2,3"],
        ["lift", "--matrix", "m.mtx", "--mu", "x"],
        ["lift", "--matrix", "m.mtx", "--mu", "1", "--seed", "1", "--vectors", "v.mtx"],
        ["demo2x2"],
        ["demo2x2", "--epsilon", "0", "--trials", "0"],
        ["sweep", "--epsilons", "1e-8", "--betas", "a,b", "--out", "x.csv"],
        ["sweep", "--epsilons", "", "--betas", "1", "--out", "x.csv"],
        ["gen", "--family", "nope", "--out", "x.mtx"],
    ])
    def test_exit_64(self, argv, capsys):
        assert run(*argv)[0] == 64

    def test_gen_large_too_small(self, tmp_path):
        assert run("gen", "--family", "large", "--n", "2", "--out", tmp_path / "x.mtx")[0] == 64

    def test_grid_parsing(self):
        assert cli.parse_grid("1e-3,1,10") == [1e-3, 1.0, 10.0]
        np.testing.assert_allclose(cli.parse_grid("1e-3:1e2:6"), np.logspace(-3, 2, 6))
        assert cli.parse_complex("1.5,-2") == 1.5 - 2j
        assert cli.parse_complex("3") == 3 + 0j


class TestDemos:
    def test_demo2x2_defective(self):
        code, text = run("demo2x2", "--epsilon", "0", "--beta", "1", "--trials", "1000",
                         "--seed", "42")
        assert code == 0
        vals = parse(text)
        assert list(vals) == list(CSV_COLUMNS)
        assert float(vals["mean_error"]) <= 1e-12
        assert vals["n_trials"] == "1000"

    def test_demoN(self):
        code, text = run("demoN", "--n", "30", "--epsilon", "1e-12", "--trials", "5")
        assert code == 0
        vals = parse(text)
        assert float(vals["mean_error"]) < float(vals["baseline_error"])

    def test_sweep_matches_demo(self, tmp_path):
        csv = tmp_path / "s.csv"
        code, text = run("sweep", "--epsilons", "1e-8", "--betas", "0.5", "--trials", "40",
                         "--seed", "7", "--out", csv)
        assert code == 0
        assert "optimal_beta epsilon=1e-08 beta=0.5" in text
        (rec,) = read_csv(csv)
        _, demo = run("demo2x2", "--epsilon", "1e-8", "--beta", "0.5", "--trials", "40",
                      "--seed", "7")
        vals = parse(demo)
        for name in CSV_COLUMNS:
            assert float(vals[name]) == float(getattr(rec, name))

    def test_sweep_large_and_logspace(self, tmp_path):
        csv = tmp_path / "s.csv"
        code, _ = run("sweep", "--problem", "large", "--n", "12", "--epsilons", "1e-12",
                      "--betas", "1e-1:1e1:3", "--trials", "2", "--out", csv)
        assert code == 0
        assert [r.beta for r in read_csv(csv)] == pytest.approx([0.1, 1.0, 10.0])

    def test_sweep_unwritable(self, tmp_path):
        code, _ = run("sweep", "--epsilons", "0", "--betas", "1", "--trials", "1",
                      "--out", tmp_path / "missing" / "s.csv")
        assert code == 74


class TestGen:
    def test_m2x2(self, tmp_path):
        p = tmp_path / "m.mtx"
        code, text = run("gen", "--family", "m2x2", "--epsilon", "0.25", "--out", p)
        assert code == 0
        np.testing.assert_array_equal(read_matrix(p), make_2x2(0.25).m)
        assert parse(text)["mu_plus"].split()[0] == repr(make_2x2(0.25).mu_plus.real)

    def test_large_then_lift(self, tmp_path):
        m, q = tmp_path / "m.mtx", tmp_path / "q.mtx"
        code, text = run("gen", "--family", "large", "--n", "10", "--epsilon", "0",
                         "--seed", "4", "--out", m, "--transform-out", q, "--format",
                         "coordinate")
        assert code == 0
        mu = parse(text)["mu_plus"].replace(" ", ",")
        x_file = tmp_path / "x.mtx"
        assert run("lift", "--matrix", m, "--mu", mu, "--out", x_file)[0] == 0
        u = read_matrix(q) @ read_matrix(x_file)[:, 0]
        assert abs(u[1] / u[0] + math.pi / 2) <= 1e-10
        assert np.linalg.norm(u[2:]) <= 1e-10

    def test_poisson(self, tmp_path):
        p = tmp_path / "p.mtx"
        assert run("gen", "--family", "poisson", "--n", "4", "--out", p)[0] == 0
        assert read_matrix(p)[0, 0] == 4


class TestDeterminism:
    def test_byte_identical(self, tmp_path):
        outs = []
        for k in range(2):
            csv = tmp_path / f"s{k}.csv"
            code, text = run("sweep", "--epsilons", "1e-12,1e-8", "--betas", "0.1,1",
                             "--trials", "20", "--out", csv)
            assert code == 0
            outs.append((text.replace(str(csv), "CSV"), csv.read_bytes()))
        assert outs[0] == outs[1]

    def test_module_entry_point(self, tmp_path):
        cmd = [sys.executable, "-m", "liftkit", "demo2x2", "--epsilon", "1e-10",
               "--trials", "10"]
        a = subprocess.run(cmd, capture_output=True, check=True)
        b = subprocess.run(cmd, capture_output=True, check=True)
        assert a.stdout == b.stdout and a.stdout.startswith(b"epsilon 1e-10")
        bad = subprocess.run([sys.executable, "-m", "liftkit", "nope"], capture_output=True)
        assert bad.returncode == 64
