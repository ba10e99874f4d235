import io
import json
import math
import subprocess
import sys

import pytest

from expsmooth.cli import main
from expsmooth.streamio import read_report

LN2 = repr(math.log(2.0))
# 1/ln(11/9), mpmath at 50 digits
TAU_T10_D1 = 4.9832886545639728877


@pytest.fixture
def run(monkeypatch, capsys):
    def _run(argv, stdin="", env=None):
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
        monkeypatch.delenv("EXPSMOOTH_FORMAT", raising=False)
        for key, value in (env or {}).items():
            monkeypatch.setenv(key, value)
        try:
            code = main(argv)
        except SystemExit as exc:
            code = exc.code
        out, err = capsys.readouterr()
        return code, out, err

    return _run


def rows(text):
    lines = text.strip().splitlines()
    return lines[0], [[float(v) for v in line.split(",")] for line in lines[1:]]


class TestSmooth:
    def test_two_step_value(self, run, tmp_path):
        src = tmp_path / "in.csv"
        src.write_text(f"t,x\n0,5\n{LN2},1\n")
        code, out, _ = run(["smooth", "--tau", "1", "--method", "v1", "--input", str(src)])
        assert code == 0
        header, data = rows(out)
        assert header == "t,xhat"
        assert data[0] == [0.0, 5.0]
        assert data[1][1] == pytest.approx(7 / 3, rel=1e-15)

    def test_output_file_and_weights(self, run, tmp_path):
        dst = tmp_path / "out.csv"
        code, out, _ = run(["smooth", "--tau", "1", "--output", str(dst), "--include-weight"], stdin="t,x\n2,9\n")
        assert code == 0 and out == ""
        assert dst.read_text() == "t,xhat,weight\n2,9,1\n"

    @pytest.mark.parametrize("method", ["v1", "v2", "v2c"])
    def test_single_record(self, run, method):
        code, out, _ = run(["smooth", "--tau", "3", "--method", method], stdin="t,x\n1.5,-4.25\n")
        assert code == 0
        assert rows(out)[1] == [[1.5, -4.25]]

    @pytest.mark.parametrize("method", ["v1", "v2", "v2c"])
    def test_output_length_matches_input(self, run, method):
        body = "".join(f"{k * 0.5},{(-1) ** k * k}\n" for k in range(57))
        code, out, _ = run(["smooth", "--half-life", "2", "--method", method], stdin="t,x\n" + body)
        assert code == 0
        assert len(rows(out)[1]) == 57

    def test_window_gap_resolves_exact_tau(self, run, monkeypatch):
        import expsmooth.cli as cli

        seen = {}
        real = cli.smooth_stream

        def spy(obs, tau, method):
            seen["tau"] = tau
            return real(obs, tau, method)

        monkeypatch.setattr(cli, "smooth_stream", spy)
        code, _, _ = run(["smooth", "--window", "10", "--gap", "1"], stdin="t,x\n0,1\n")
        assert code == 0
        assert seen["tau"] == pytest.approx(TAU_T10_D1, rel=1e-14)

    def test_jsonl_via_env(self, run):
        code, out, _ = run(["smooth", "--tau", "1"], stdin='{"t":0,"x":5}\n', env={"EXPSMOOTH_FORMAT": "jsonl"})
        assert code == 0 and json.loads(out) == {"t": 0, "xhat": 5}
        # the flag wins over the environment
        code, out, _ = run(["smooth", "--tau", "1", "--format", "csv"], stdin="t,x\n0,5\n", env={"EXPSMOOTH_FORMAT": "jsonl"})
        assert code == 0 and out == "t,xhat\n0,5\n"

    def test_bad_env_format_is_usage_error(self, run):
        code, _, err = run(["smooth", "--tau", "1"], stdin="t,x\n", env={"EXPSMOOTH_FORMAT": "xml"})
        assert code == 2 and "EXPSMOOTH_FORMAT" in err

    def test_v2_caveat_printed_once(self, run):
        code, _, err = run(["smooth", "--tau", "1", "--method", "v2"], stdin="t,x\n0,1\n1,2\n2,3\n")
        assert code == 0 and err.count("constant sampling interval") == 1
        code, _, err = run(["smooth", "--tau", "1", "--method", "v2c"], stdin="t,x\n0,1\n1,2\n")
        assert err == ""

    def test_out_of_order_names_line(self, run):
        code, _, err = run(["smooth", "--tau", "1"], stdin="t,x\n0,1\n2,1\n1,1\n")
        assert code == 1
        assert "line 4" in err and "non-decreasing" in err

    @pytest.mark.parametrize("method", ["v2", "v2c"])
    def test_v2_duplicate_suggests_v1(self, run, method):
        code, _, err = run(["smooth", "--tau", "1", "--method", method], stdin="t,x\n0,1\n1,1\n1,2\n")
        assert code == 1
        assert "line 4" in err and "strictly increasing" in err and "--method v1" in err
        code, _, err = run(["smooth", "--tau", "1", "--method", method], stdin="t,x\n0,1\n0,2\n")
        assert code == 1 and "line 3" in err

    def test_v1_accepts_duplicates(self, run):
        code, out, _ = run(["smooth", "--tau", "1"], stdin="t,x\n0,1\n0,2\n0,6\n")
        assert code == 0 and rows(out)[1][-1] == [0.0, 3.0]

    def test_parse_error_is_data_error(self, run):
        code, _, err = run(["smooth", "--tau", "1"], stdin="t,x\n0,abc\n")
        assert code == 1 and "line 2" in err

    def test_missing_input_file(self, run, tmp_path):
        code, _, _ = run(["smooth", "--tau", "1", "--input", str(tmp_path / "nope.csv")])
        assert code == 1

    @pytest.mark.parametrize(
        "argv",
        [
            ["smooth"],
            ["smooth", "--tau", "1", "--half-life", "1"],
            ["smooth", "--n", "3"],
            ["smooth", "--tau", "-1"],
            ["smooth", "--n", "1", "--gap", "1"],
            ["smooth", "--tau", "1", "--method", "v9"],
            ["smooth", "--tau", "abc"],
        ],
    )
    def test_usage_errors(self, run, argv):
        code, _, _ = run(argv, stdin="t,x\n0,1\n")
        assert code == 2


class TestCalibrate:
    def test_alpha_half(self, run):
        code, out, _ = run(["calibrate", "--alpha", "0.5", "--gap", "1"])
        assert code == 0
        r = read_report(out)
        assert r["effective_n"] == 3 and r["window"] == 3
        assert r["tau"] == pytest.approx(1 / math.log(2), rel=1e-15)

    def test_single_observation(self, run):
        code, out, _ = run(["calibrate", "--n", "1", "--gap", "5", "--format", "jsonl"])
        assert code == 0
        r = json.loads(out)
        assert r["alpha"] == 0 and r["variance_ratio"] == 1

    def test_window(self, run):
        code, out, _ = run(["calibrate", "--window", "10", "--gap", "1"])
        assert code == 0
        r = read_report(out)
        assert r["alpha"] == pytest.approx(9 / 11, rel=1e-15)
        assert r["tau"] == pytest.approx(TAU_T10_D1, rel=1e-14)

    @pytest.mark.parametrize(
        "argv",
        [
            ["calibrate", "--alpha", "0.5"],
            ["calibrate", "--gap", "1"],
            ["calibrate", "--alpha", "0.5", "--tau", "1", "--gap", "1"],
            ["calibrate", "--alpha", "1.0", "--gap", "1"],
            ["calibrate", "--window", "1", "--gap", "1"],
        ],
    )
    def test_usage_errors(self, run, argv):
        assert run(argv)[0] == 2


class TestSimulate:
    def test_predicted_variance(self, run):
        argv = "simulate --steps 200000 --burn-in 1000 --mu 0 --sigma 1 --gap 1 --tau 9.4912 --seed 42".split()
        code, out, _ = run(argv)
        assert code == 0
        r = read_report(out)
        # alpha = exp(-1/9.4912), evaluated with mpmath
        assert r["alpha"] == pytest.approx(0.89999978438876538461, rel=1e-14)
        assert r["predicted_variance"] == pytest.approx(0.0526, abs=5e-5)
        assert r["samples_used"] == 199000

    def test_zero_sigma(self, run):
        code, out, _ = run("simulate --steps 5000 --sigma 0 --mu 7 --tau 2 --seed 3 --format jsonl".split())
        assert code == 0
        r = json.loads(out)
        assert r["empirical_mean"] == pytest.approx(7, rel=1e-15)
        assert r["empirical_variance"] <= 1e-28

    def test_reproducible_bytes(self, run):
        argv = "simulate --steps 10000 --burn-in 100 --tau 3 --seed 5 --method v2c".split()
        assert run(argv)[1] == run(argv)[1]

    @pytest.mark.parametrize(
        "extra",
        [["--burn-in", "20000"], ["--sigma", "-1"], ["--seed", "-3"], ["--steps", "0"], ["--gap", "0"]],
    )
    def test_usage_errors(self, run, extra):
        argv = ["simulate", "--steps", "1000", "--burn-in", "10", "--tau", "1", "--seed", "1"]
        assert run(argv + extra)[0] == 2

    def test_seed_required(self, run):
        assert run(["simulate", "--steps", "100", "--tau", "1"])[0] == 2


class TestStress:
    def test_benign(self, run):
        code, out, _ = run("stress --alpha 0.5 --steps 1000 --seed 1".split())
        assert code == 0
        r = read_report(out)
        assert max(r["max_rel_error_v1"], r["max_rel_error_v2"], r["max_rel_error_v2c"]) <= 1e-12

    def test_gap_law(self, run):
        code, out, _ = run("stress --gap-law exponential --tau 5 --steps 500 --seed 2 --format jsonl".split())
        assert code == 0
        r = json.loads(out)
        assert r["gap_law"] == "exponential" and r["max_rel_error_v2"] > 0
        assert r["max_rel_error_v1"] <= 1e-9

    def test_reproducible_bytes(self, run):
        argv = "stress --alpha 0.9 --steps 2000 --seed 9".split()
        assert run(argv)[1] == run(argv)[1]

    @pytest.mark.parametrize(
        "argv",
        [
            "stress --steps 10 --seed 1",
            "stress --alpha 1.0 --steps 10 --seed 1",
            "stress --alpha 0.5 --tau 1 --steps 10 --seed 1",
            "stress --gap-law exponential --steps 10 --seed 1",
            "stress --gap-law zipf --tau 1 --steps 10 --seed 1",
        ],
    )
    def test_usage_errors(self, run, argv):
        assert run(argv.split())[0] == 2


def test_module_entry_point(tmp_path):
    src = tmp_path / "in.csv"
    src.write_text("t,x\n0,5\n")
    proc = subprocess.run(
        [sys.executable, "-m", "expsmooth", "smooth", "--tau", "1", "--input", str(src)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "t,xhat\n0,5\n"
    proc = subprocess.run([sys.executable, "-m", "expsmooth", "bogus"], capture_output=True, text=True)
    assert proc.returncode == 2
