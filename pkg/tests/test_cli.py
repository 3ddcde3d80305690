import csv
import io
import json
import subprocess
import sys

import pytest

from thetaxi.cli import format_complex, main, parse_complex


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_complex_round_trip():
    for z in (0.1 + 0.2j, -3e-12 + 1j, 2.0 - 0j, 1 / 3 - 1j / 7):
        assert parse_complex(format_complex(z)) == z
    assert parse_complex("0+1i") == 1j
    assert parse_complex("2i") == 2j


def test_eval_jtheta(capsys):
    code, out, err = run(["eval", "jtheta", "--tau", "0+1i"], capsys)
    assert code == 0
    (row,) = rows(out)
    assert parse_complex(row["value"]) == pytest.approx(4, abs=1e-13)
    assert "elapsed_s" in err


def test_eval_F_prefactor_zero(capsys):
    code, out, _ = run(["eval", "F", "--z", "0.5+2i", "--s", "0"], capsys)
    assert code == 0
    assert rows(out)[0]["value"] == "0+0i"


def test_eval_xi_json(capsys):
    code, out, _ = run(["eval", "xi", "--s", "1", "--json"], capsys)
    assert code == 0
    record = json.loads(out)
    assert parse_complex(record["value"]) == 0.5


@pytest.mark.parametrize("target", ["theta", "lambda", "hz", "xi_theta"])
def test_eval_other_targets(target, capsys):
    code, out, _ = run(["eval", target, "--tau", "0.3+1.1i", "--z", "0.5+2i", "--s", "0.7+1i"], capsys)
    assert code == 0
    assert len(rows(out)) == 1


def test_eval_missing_argument(capsys):
    code, _, err = run(["eval", "F", "--s", "0.3"], capsys)
    assert code == 2
    assert "DomainError" in err


def test_reduce(capsys):
    code, out, _ = run(["reduce", "--z", "2.3+2i"], capsys)
    assert code == 0
    (row,) = rows(out)
    assert parse_complex(row["reduced"]) == pytest.approx(0.3 + 2j)
    assert (row["a"], row["b"], row["c"], row["d"]) == ("1", "-2", "0", "1")


def test_check_functional_default_grid(capsys):
    code, out, err = run(["check-functional"], capsys)
    assert code == 0
    table = rows(out)
    assert table and all(r["pass"] == "true" for r in table)
    assert max(float(r["residual"]) for r in table) <= 1e-6
    assert "max_residual" in err


def test_check_functional_fixed_point(capsys):
    code, out, _ = run(["check-functional", "--z", "0.5+2i", "--s", "0.25"], capsys)
    assert code == 0
    assert float(rows(out)[0]["residual"]) == 0


def test_check_functional_axis_pole(capsys):
    code, out, err = run(["check-functional", "--z", "0+2i", "--z", "0.5+2i", "--s", "0.3"], capsys)
    assert code == 2
    table = rows(out)
    assert table[0]["pass"] == "AxisPole" and table[1]["pass"] == "true"
    assert "AxisPole" in err


def test_converge_flags_failures(capsys):
    code, out, _ = run(["converge", "--x", "0.5", "--s", "0.75", "--y-list", "5,10,20,40"], capsys)
    table = rows(out)
    assert [float(r["y"]) for r in table] == [5, 10, 20, 40]
    assert all(r["monotone"] == "true" for r in table)
    # the final error at y = 40 is about 3.8e-2, above the default 1e-3 threshold
    assert code == 1
    code, _, _ = run(["converge", "--x", "0.5", "--s", "0.75", "--y-list", "5,10,20,40",
                      "--threshold", "0.05"], capsys)
    assert code == 0


def test_converge_unstable_cutoff(capsys):
    code, out, err = run(["converge", "--x", "0.5", "--s", "1.0", "--y-list", "5,10"], capsys)
    assert code == 2
    assert rows(out)[0]["monotone"] == "UnstableCutoff"
    assert "error: UnstableCutoff" in err


def test_tolerance_failure_exit_code(capsys):
    code, _, err = run(["eval", "F", "--z", "0.5+2i", "--s", "0.3", "--abs-tol", "1e-300",
                        "--rel-tol", "1e-300"], capsys)
    assert code == 3
    assert "error: ToleranceNotMet" in err


def test_settings_precedence(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("t0 = 3.0\nabs_tol = 1e-4\n")
    base = ["eval", "xi_theta", "--s", "0.7+1i", "--config", str(cfg)]
    from thetaxi import cli

    seen = []
    real = cli.evaluate_target

    def spy(target, z, s, tau, qcfg):
        seen.append(qcfg)
        return real(target, z, s, tau, qcfg)

    monkeypatch.setattr(cli, "evaluate_target", spy)
    run(base, capsys)
    monkeypatch.setenv("THETAXI_T0", "2.0")
    run(base, capsys)
    run(base + ["--t0", "1.5"], capsys)
    assert [c.t0 for c in seen] == [3.0, 2.0, 1.5]
    assert all(c.abs_tol == 1e-4 for c in seen)


def test_out_file(tmp_path, capsys):
    target = tmp_path / "res.csv"
    code, out, _ = run(["eval", "jtheta", "--tau", "0+1i", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert target.read_text().startswith("target,value,err_estimate\n")


def test_selftest_pass_and_zero_tolerance(capsys):
    code, _, err = run(["selftest", "--seed", "42"], capsys)
    assert code == 0 and err.strip().startswith("PASS")
    code, out, err = run(["selftest", "--tolerance", "0"], capsys)
    assert code == 1
    assert "FAIL" in err and len(rows(out)) == 1


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "thetaxi", *args], capture_output=True)


def test_determinism_subprocess():
    for args in (("selftest", "--seed", "42"), ("check-functional", "--jobs", "2"),
                 ("converge", "--x", "0.25", "--y-list", "5,10")):
        first, second = _cli(*args), _cli(*args)
        assert first.stdout == second.stdout
        assert first.returncode == second.returncode


def test_jobs_do_not_change_output():
    serial = _cli("check-functional")
    parallel = _cli("check-functional", "--jobs", "2")
    assert serial.stdout == parallel.stdout


def test_argument_errors_exit_2():
    assert _cli("eval", "theta", "--tau", "1+").returncode == 2
    assert _cli("eval", "nonsense").returncode == 2
