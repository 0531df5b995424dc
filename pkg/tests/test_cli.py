from pathlib import Path

import pytest

from gkwseries.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, RunConfig, main

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_is_idempotent(capsys, cache_env):
    code, out, _ = run(capsys, "build", "--variant", "mr", "--max-j", "4")
    assert code == EXIT_OK and "files written" in out
    code, out, _ = run(capsys, "build", "--variant", "mr", "--max-j", "4")
    assert code == EXIT_OK and "already cached" in out
    assert (cache_env / "mr" / "psi_4.rf").exists()


def test_build_points(capsys, cache_env):
    code, out, _ = run(capsys, "build", "--variant", "gkw", "--max-j", "3", "--points", "2,3", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[1].startswith("GKW,3,2;3,")
    assert (cache_env / "gkw" / "at_3_8").is_dir()
    code, _, err = run(capsys, "build", "--variant", "mr", "--max-j", "3", "--points", "5/2")
    assert code == EXIT_USAGE and "integer s" in err


@pytest.mark.parametrize("tid", [1, 3, 4, 6])
def test_tables_match_golden_and_check(capsys, cache_env, tid):
    code, out, _ = run(capsys, "table", "--id", str(tid))
    assert code == EXIT_OK
    assert out == (GOLDEN / f"table{tid}.txt").read_text()
    code, out, _ = run(capsys, "table", "--id", str(tid), "--check")
    assert code == EXIT_OK and out.rstrip().endswith("cells match")


def test_table1_rows_after_small_build(capsys, cache_env):
    run(capsys, "build", "--variant", "gkw", "--max-j", "1")
    code, out, _ = run(capsys, "table", "--id", "1", "--rows", "0,1")
    assert code == EXIT_OK
    assert out.splitlines() == (GOLDEN / "table1.txt").read_text().splitlines()[:2]


@pytest.mark.parametrize("tid", [2, 5])
def test_series_tables_golden(capsys, cache_env, tid):
    code, out, _ = run(capsys, "table", "--id", str(tid), "--rows", "5,10")
    assert code == EXIT_OK
    assert out == (GOLDEN / f"table{tid}_rows_5_10.txt").read_text()


def test_check_exit_status_reports_deviations(capsys, cache_env):
    # the s = 5/2 cells of table 5 at N = 5, 10 differ from the printed digits by more than one unit
    code, out, _ = run(capsys, "table", "--id", "5", "--rows", "5", "--check")
    assert code == EXIT_FAIL and "FAIL s=5/2 N=5" in out
    code, out, _ = run(capsys, "table", "--id", "2", "--rows", "5,10", "--check")
    assert code == EXIT_OK and "8/8" in out


def test_table_csv(capsys, cache_env):
    code, out, _ = run(capsys, "table", "--id", "3", "--rows", "0,2", "--format", "csv", "--check")
    assert code == EXIT_OK
    assert out.splitlines() == ["cell,value,ok", "0,6,pass", "2,-11/125,pass"]


def test_eval(capsys, cache_env):
    assert run(capsys, "eval", "--variant", "gkw", "--n", "1", "--max-j", "5")[1] == "1.00000000000000\n"
    code, out, _ = run(capsys, "eval", "--variant", "gkw", "--n", "2", "--max-j", "10", "--digits", "20")
    assert code == EXIT_OK and out.startswith("0.3036622367412") and len(out.strip()) == 22
    code, out, _ = run(capsys, "eval", "--variant", "mr", "--s", "4", "--max-j", "10", "--format", "csv")
    assert out.splitlines() == ["variant,point,N,value", "MR,4,10,0.19945914049410"]


def test_eval_errors(capsys, cache_env):
    code, _, err = run(capsys, "eval", "--variant", "mr", "--s", "1", "--max-j", "5")
    assert code == EXIT_USAGE and "Re s > 1" in err
    code, _, err = run(capsys, "eval", "--variant", "gkw", "--max-j", "5")
    assert code == EXIT_USAGE and "--n" in err
    with pytest.raises(SystemExit):
        main(["eval", "--variant", "xx", "--max-j", "1"])


def test_eval_complex(capsys, cache_env):
    code, out, _ = run(capsys, "eval", "--variant", "mr", "--s", "3+1i", "--max-j", "4", "--digits", "6")
    assert code == EXIT_OK and out.strip().endswith("i")


def test_oracle_raw_and_closedform(capsys, cache_env):
    code, out, _ = run(capsys, "oracle", "raw", "--n", "2", "--max-j", "6", "--format", "csv")
    lines = out.splitlines()
    assert code == EXIT_OK and lines[0] == "quantity,conjecture,oracle,diff,params"
    assert all(line.split(",")[3] == "0" for line in lines[1:])
    code, out, _ = run(capsys, "oracle", "closedform", "--n", "4")
    assert code == EXIT_OK and out.rstrip().endswith("pass (tol 0)")


def test_oracle_tolerance_controls_exit(capsys, cache_env):
    assert run(capsys, "oracle", "trace", "--tol", "1e-8")[0] == EXIT_OK
    # the printed trace has 10 decimals, so a 1e-12 tolerance on it must fail
    assert run(capsys, "oracle", "trace", "--tol", "1e-12")[0] == EXIT_FAIL


def test_oracle_matrix_small(capsys, cache_env):
    code, out, _ = run(capsys, "oracle", "matrix", "--dim", "32", "--count", "3", "--max-j", "15", "--tol", "1e-6")
    assert code == EXIT_OK
    assert "sign(lambda_2)" in out


def test_plotdata(capsys, cache_env, tmp_path):
    target = tmp_path / "lam2.dat"
    code, _, _ = run(capsys, "plotdata", "--func", "lambda_j", "--j", "2", "--range", "1:2.4",
                     "--samples", "200", "--out", str(target))
    assert code == EXIT_OK
    data = target.read_bytes()
    assert data.endswith(b"\n") and data.isascii()
    lines = data.decode().splitlines()
    assert len(lines) == 200
    assert lines[0] == "1.0 0.0"
    code, out, _ = run(capsys, "plotdata", "--func", "lambda_j", "--j", "2", "--range", "1:2.4",
                       "--samples", "200")
    assert out == data.decode()


def test_plotdata_bad_range(capsys, cache_env):
    with pytest.raises(SystemExit):
        main(["plotdata", "--func", "lambda_j", "--j", "2", "--range", "3:1"])


def test_runconfig(tmp_path):
    with pytest.raises(ValueError):
        RunConfig("eval", tmp_path, precision=32)
    cfg = RunConfig("eval", tmp_path / "new" / "dir")
    assert cfg.cache_dir.is_dir()


def test_cache_dir_flag_beats_env(capsys, cache_env, tmp_path):
    other = tmp_path / "elsewhere"
    run(capsys, "build", "--variant", "mr", "--max-j", "1", "--cache-dir", str(other))
    assert (other / "mr").is_dir() and not (cache_env / "mr").exists()
