import json

import pytest

from shrinkdisc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAnalyze:
    def test_geometric_verdicts(self, tmp_path, capsys):
        code, out, _err = run(
            capsys,
            "analyze",
            "--fixture",
            "geometric",
            "--N",
            "10",
            "--K",
            "10",
            "--grid",
            "32,32",
            "--out-dir",
            str(tmp_path),
        )
        assert code == 0
        data = json.loads(out)
        assert data["conditions"]["a"]["holds"] is True
        assert data["conditions"]["b"]["holds"] is True
        assert data["conditions"]["b"]["s"] == "0"
        assert data["conditions"]["c"]["verdict"] == "certified_strong"
        assert data["conditions"]["c"]["C0"] == "1"
        assert data["exponents"]["alpha"] == "1"
        assert data["corollary_gs_extension"] is False
        assert (tmp_path / "analysis.json").exists()

    def test_constant_diagonal_extends(self, tmp_path, capsys):
        code, out, _err = run(
            capsys,
            "analyze",
            "--fixture",
            "constant-diagonal:4",
            "--N",
            "10",
            "--K",
            "10",
            "--grid",
            "32,32",
            "--out-dir",
            str(tmp_path),
        )
        data = json.loads(out)
        assert data["exponents"]["alpha"] == "0"
        assert data["exponents"]["s"] == "1"
        assert data["conditions"]["c"]["C0"] == "2"
        assert data["corollary_gs_extension"] is True

    def test_resonant_toy(self, tmp_path, capsys):
        op = tmp_path / "op.txt"
        op.write_text("z*dz - 5\n")
        code, out, _err = run(
            capsys,
            "analyze",
            "--operator",
            str(op),
            "--grid",
            "16,16",
            "--out-dir",
            str(tmp_path / "out"),
        )
        assert code == 0
        data = json.loads(out)
        assert data["conditions"]["c"]["verdict"] == "resonant"
        assert data["conditions"]["c"]["witness"] == [0, 5]

    def test_s_override_changes_condition_b(self, tmp_path, capsys):
        # derived s = 1 passes; a stricter supplied s demands slope >= 3
        code, out, _err = run(
            capsys,
            "analyze",
            "--fixture",
            "constant-diagonal:4",
            "--s",
            "1/3",
            "--grid",
            "16,16",
            "--out-dir",
            str(tmp_path),
        )
        assert code == 0
        data = json.loads(out)
        assert data["s_derived"] == "1"
        assert data["s_active"] == "1/3"
        assert data["conditions"]["b"]["holds"] is False
        # exponents still come from the operator's own geometry
        assert data["exponents"]["alpha"] == "0"

    def test_operator_file_with_params(self, tmp_path, capsys):
        (tmp_path / "op.txt").write_text("p0*dt + p0*z*dz\n")
        (tmp_path / "params.json").write_text(
            json.dumps({"p0": {"N": 8, "K": 8, "coeffs": [[0, 0, "2"], [1, 0, "1/2"]]}})
        )
        code, out, _err = run(
            capsys,
            "analyze",
            "--operator",
            str(tmp_path / "op.txt"),
            "--params",
            str(tmp_path / "params.json"),
            "--grid",
            "16,16",
            "--out-dir",
            str(tmp_path / "out"),
        )
        assert code == 0
        assert json.loads(out)["m"] == 1


class TestDeterminism:
    def test_byte_identical_reruns(self, tmp_path, capsys):
        for d in ("a", "b"):
            run(
                capsys,
                "analyze",
                "--fixture",
                "geometric",
                "--N",
                "8",
                "--K",
                "8",
                "--grid",
                "16,16",
                "--out-dir",
                str(tmp_path / d),
            )
        assert (tmp_path / "a" / "analysis.json").read_bytes() == (
            tmp_path / "b" / "analysis.json"
        ).read_bytes()

    def test_solve_fit_round_trip_files(self, tmp_path, capsys):
        code, _out, _err = run(
            capsys,
            "solve",
            "--fixture",
            "geometric",
            "--N",
            "12",
            "--K",
            "32",
            "--out-dir",
            str(tmp_path),
        )
        assert code == 0
        sol = tmp_path / "solution.csv"
        assert sol.read_text().splitlines()[0] == "n,k,numerator,denominator"
        code, out, _err = run(
            capsys,
            "fit",
            "--solution",
            str(sol),
            "--s",
            "0",
            "--alpha",
            "1",
            "--out-dir",
            str(tmp_path),
        )
        assert code == 0
        data = json.loads(out)
        assert abs(data["alpha_hat"] - 1) < 0.05
        assert (tmp_path / "radii.csv").read_text().splitlines()[0] == "n,r_hat"
        assert data["bounds"]["B"] is not None


class TestErrors:
    def test_resonance_error_json(self, tmp_path, capsys):
        op = tmp_path / "op.txt"
        op.write_text("z*dz - 5\n")
        code, _out, err = run(
            capsys,
            "solve",
            "--operator",
            str(op),
            "--N",
            "8",
            "--K",
            "8",
            "--out-dir",
            str(tmp_path / "out"),
        )
        assert code == 1
        data = json.loads(err)
        assert data["error"] == "ResonanceError"
        assert data["detail"] == {"n": 0, "k": 5}

    def test_syntax_error_json(self, tmp_path, capsys):
        op = tmp_path / "op.txt"
        op.write_text("dt**t\n")
        code, _out, err = run(
            capsys,
            "analyze",
            "--operator",
            str(op),
            "--out-dir",
            str(tmp_path / "out"),
        )
        assert code == 1
        data = json.loads(err)
        assert data["error"] == "OperatorSyntaxError"
        assert "line 1" in data["message"]

    def test_usage_error_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["analyze", "--badflag"])
        assert exc.value.code == 2
        err = capsys.readouterr().err
        assert json.loads(err)["error"] == "UsageError"

    def test_hypothesis_error(self, tmp_path, capsys):
        op = tmp_path / "op.txt"
        op.write_text("t^2*dt\n")
        code, _out, err = run(
            capsys, "analyze", "--operator", str(op), "--out-dir", str(tmp_path / "o")
        )
        assert code == 1
        assert json.loads(err)["error"] == "HypothesisError"


class TestOtherCommands:
    def test_print_config(self, capsys):
        code, out, _err = run(capsys, "--print-config")
        assert code == 0
        lines = dict(ln.split("=", 1) for ln in out.strip().splitlines())
        assert lines["N"] == "16"
        assert lines["grid_n"] == "256"

    def test_liouville(self, tmp_path, capsys):
        code, out, _err = run(
            capsys,
            "liouville",
            "--terms",
            "3",
            "--grid",
            "2000,2000",
            "--out-dir",
            str(tmp_path),
        )
        assert code == 0
        data = json.loads(out)
        assert data["lambda"] == "110001/1000000"
        assert data["hits"]["2"]["n"] == 1 and data["hits"]["2"]["k"] == 8
        csv = (tmp_path / "liouville.csv").read_text().splitlines()
        assert csv[0] == "n,k,abs_w"
        assert csv[1].startswith("0,0,0.110001")

    def test_sharpness(self, tmp_path, capsys):
        code, out, _err = run(
            capsys,
            "sharpness",
            "--fixture",
            "geometric",
            "--N",
            "8",
            "--K",
            "40",
            "--rows",
            "2,12",
            "--out-dir",
            str(tmp_path),
        )
        assert code == 0
        data = json.loads(out)
        assert all(data["bound_holds"].values())
        assert data["alpha_hat_ge_alpha_minus_tenth"] is True

    def test_demo(self, tmp_path, capsys):
        code, out, _err = run(capsys, "demo", "--out-dir", str(tmp_path))
        assert code == 0
        data = json.loads(out)
        assert data["geometric"]["alpha"] == "1"
        assert data["constant-diagonal"]["corollary_gs_extension"] is True
        assert (tmp_path / "geometric" / "solution.csv").exists()
        assert (tmp_path / "geometric" / "polygon.svg").exists()

    def test_svg_outputs(self, tmp_path, capsys):
        run(
            capsys,
            "analyze",
            "--fixture",
            "geometric",
            "--N",
            "8",
            "--K",
            "8",
            "--grid",
            "16,16",
            "--svg",
            "--out-dir",
            str(tmp_path),
        )
        assert (tmp_path / "polygon.svg").read_text().startswith("<svg")
