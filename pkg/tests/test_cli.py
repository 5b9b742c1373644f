import json
import math

import pytest

from ttstar_toda import cli


def run(args):
    return cli.main(args)


class TestMaps:
    def test_trivial(self, capsys):
        assert run(["maps", "--n", "3", "--gamma", "0,0", "--reproducible"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["monodromy"]["m"] == [0.0, 0.0]
        assert doc["monodromy"]["log_e"] == [0.0, 0.0]

    def test_default_rho_is_global(self, capsys):
        assert run(["maps", "--n", "3", "--gamma", "0.3,0.1", "--reproducible"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert max(abs(v) for v in doc["monodromy"]["log_e"]) <= 1e-12
        assert doc["monodromy"]["m"] == [-0.15, -0.05]

    def test_even_branch(self, capsys):
        assert run(["maps", "--n", "2", "--gamma", "0.4", "--reproducible"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert len(doc["asymptotic"]["gamma"]) == 1
        # the full extension carries the forced middle zero
        assert doc["full"]["gamma"] == [0.4, 0.0, -0.4]
        assert doc["full"]["m"] == [-0.2, 0.0, 0.2]

    def test_genericity_exit_2(self, capsys):
        assert run(["maps", "--n", "3", "--gamma", "1.9,0"]) == 2
        assert "gap" in capsys.readouterr().err

    def test_determinism(self, capsys):
        run(["maps", "--n", "3", "--gamma", "0.3,0.1", "--reproducible", "--seed", "7"])
        out1 = capsys.readouterr().out
        run(["maps", "--n", "3", "--gamma", "0.3,0.1", "--reproducible", "--seed", "7"])
        out2 = capsys.readouterr().out
        assert out1 == out2

    def test_seventeen_digit_floats(self, capsys):
        run(["maps", "--n", "1", "--gamma", "0.5", "--reproducible"])
        out = capsys.readouterr().out
        doc = json.loads(out)
        # value survives the round trip bit-for-bit
        from ttstar_toda.data_maps import global_rho
        assert doc["global_rho"][0] == global_rho(1, (0.5,))[0]


class TestSolve:
    def test_trivial(self, tmp_path):
        out = tmp_path / "t.csv"
        rc = run(["solve", "--n", "3", "--gamma", "0,0", "--x0", "0.01",
                  "--x1", "8", "--out", str(out)])
        assert rc == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0].startswith("x,w0,w1")
        for line in lines[1:]:
            vals = [float(v) for v in line.split(",")]
            assert abs(vals[1]) <= 1e-9 and abs(vals[2]) <= 1e-9

    def test_blowup_exit_3(self, tmp_path):
        out = tmp_path / "b.csv"
        rc = run(["solve", "--n", "3", "--gamma", "0.3,0.1", "--rho", "1,1",
                  "--x0", "0.01", "--x1", "6", "--out", str(out)])
        assert rc == 3
        assert out.read_text().strip().split("\n")[-1].startswith("# stopped:")


class TestTau:
    def test_trivial_value(self, capsys):
        rc = run(["tau", "--gamma", "0,0", "--x1", "0.01", "--x2", "5",
                  "--reproducible"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["log_tau"] == pytest.approx(0.01 ** 2 - 25.0, abs=1e-9)


class TestConstant:
    def test_trivial(self, capsys):
        rc = run(["constant", "--gamma", "0,0", "--reproducible"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert abs(doc["c_numeric"]) <= 1e-6
        assert doc["abs_diff"] <= 1e-6
        assert list(doc.keys()) == ["gamma", "c_numeric", "c_closed", "abs_diff",
                                    "x1_grid", "x2_used",
                                    "extrapolation_exponent", "tail_bound"]

    def test_genericity_exit_2(self):
        assert run(["constant", "--gamma", "1.9,0"]) == 2


class TestVerify:
    def test_specfun(self, capsys):
        rc = run(["verify", "--suite", "specfun", "--samples", "20",
                  "--seed", "7", "--reproducible"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["pass"] is True
        assert doc["max_residual"] <= 1e-10

    def test_symplectic(self, capsys):
        rc = run(["verify", "--suite", "symplectic", "--n", "3",
                  "--samples", "10", "--seed", "7", "--reproducible"])
        assert rc == 0
        assert json.loads(capsys.readouterr().out)["max_residual"] <= 1e-7

    def test_genfun(self, capsys):
        rc = run(["verify", "--suite", "genfun", "--n", "5",
                  "--samples", "10", "--seed", "7", "--reproducible"])
        assert rc == 0
        assert json.loads(capsys.readouterr().out)["max_residual"] <= 1e-6

    def test_dynamics(self, capsys):
        rc = run(["verify", "--suite", "dynamics", "--n", "3",
                  "--samples", "20", "--seed", "7", "--reproducible"])
        assert rc == 0

    def test_unknown_suite_exit_2(self):
        assert run(["verify", "--suite", "nope"]) == 2

    def test_verify_determinism(self, capsys):
        args = ["verify", "--suite", "genfun", "--n", "3", "--samples", "5",
                "--seed", "11", "--reproducible"]
        run(args)
        out1 = capsys.readouterr().out
        run(args)
        assert out1 == capsys.readouterr().out


class TestJsonWriter:
    def test_escapes_and_types(self):
        s = cli.dumps17({"a": [1.0 / 3.0, 1, True, None], "b": 'q"uote'})
        doc = json.loads(s)
        assert doc["a"][0] == 1.0 / 3.0
        assert doc["b"] == 'q"uote'

    def test_17g_format(self):
        s = cli.dumps17({"v": math.pi})
        assert "3.1415926535897931" in s
