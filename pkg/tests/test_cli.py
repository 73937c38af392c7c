import json
import subprocess
import sys

import pytest

from pbt_recycling.cli import (
    EXIT_DATA,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFY_FAILED,
    format_value,
    run,
)


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- formatting ----------------------------------------------------------------

def test_format_value():
    assert format_value(0.6597396084411711) == "0.659739608441"
    assert format_value(1.0) == "1"
    assert format_value(0) == "0"
    assert format_value(2e-5) == "2.00000000000e-05"
    assert format_value(-0.5) == "-0.5"
    assert format_value(123456.789012345) == "123456.789012"


# -- partitions ------------------------------------------------------------------

def test_partitions_command(capsys):
    code, out, _ = invoke(capsys, "partitions", "--n", "4", "--max-height", "2")
    assert code == EXIT_OK
    assert out == "4\n3,1\n2,2\n"


# -- frec ---------------------------------------------------------------------------

def test_frec_command(capsys):
    code, out, _ = invoke(capsys, "frec", "--ports", "2", "--dim", "2")
    assert code == EXIT_OK
    assert "F = 0.659739608441" in out
    assert "method=general" in out


def test_frec_single_port(capsys):
    code, out, _ = invoke(capsys, "frec", "--ports", "1", "--dim", "2")
    assert code == EXIT_OK
    assert "F = 0.5 " in out


def test_frec_json(capsys):
    code, out, _ = invoke(capsys, "frec", "--ports", "3", "--dim", "2", "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["method"] == "general"
    assert payload["value"] == pytest.approx(0.7541269644862625)


def test_frec_optimal_qubit_route(capsys):
    code, out, _ = invoke(capsys, "frec", "--ports", "2", "--dim", "2", "--optimal")
    assert code == EXIT_OK
    assert "F = 0.683012701892" in out
    assert "method=optimal_qubit" in out


def test_frec_optimal_needs_vfile_above_qubit(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["frec", "--ports", "3", "--dim", "3", "--optimal"])
    assert exc.value.code == EXIT_USAGE


def test_frec_optimal_with_files(capsys, vcoeff_path, tmp_path):
    f3 = tmp_path / "v3.json"
    f2 = tmp_path / "v2.json"
    f3.write_text(vcoeff_path(3, 3).read_text())
    f2.write_text(vcoeff_path(2, 3).read_text())
    code, out, _ = invoke(
        capsys,
        "frec", "--ports", "3", "--dim", "3", "--optimal",
        "--vfile", str(f3), "--vfile-prev", str(f2),
    )
    assert code == EXIT_OK
    assert "method=optimal_general" in out


def test_frec_bad_vfile_exits_3(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "N": 3, "d": 3,
        "entries": [
            {"partition": [3], "v": 0.5},
            {"partition": [2, 1], "v": 0.5},
            {"partition": [1, 1, 1], "v": 0.5},
        ],
    }))
    code, _, err = invoke(
        capsys,
        "frec", "--ports", "3", "--dim", "3", "--optimal",
        "--vfile", str(bad), "--vfile-prev", str(bad),
    )
    assert code == EXIT_DATA
    assert "not normalized" in err


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        run(["frec", "--ports", "2", "--dim", "2", "--bogus"])
    assert exc.value.code == EXIT_USAGE


# -- sweep ------------------------------------------------------------------------------

def test_sweep_d2(capsys, tmp_path):
    out_path = tmp_path / "sweep.csv"
    code, _, _ = invoke(
        capsys,
        "sweep", "--ports-min", "2", "--ports-max", "40", "--dim", "2",
        "--optimal", "--out", str(out_path),
    )
    assert code == EXIT_OK
    lines = out_path.read_text().splitlines()
    assert lines[0] == "N,d,frec,frec_opt,lower_bound_qubit"
    assert len(lines) == 40  # header + 39 rows
    values = [float(line.split(",")[2]) for line in lines[1:]]
    assert all(b > a for a, b in zip(values, values[1:]))
    # optimal column present and below the plain value from N=4 on
    for line in lines[3:]:
        cols = line.split(",")
        assert float(cols[3]) < float(cols[2])
    # the reference lower-bound column is populated at d=2
    assert lines[1].split(",")[4] != ""


def test_sweep_byte_stable(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, _, _ = invoke(
            capsys,
            "sweep", "--ports-min", "2", "--ports-max", "12", "--dim", "2",
            "--optimal", "--out", str(path),
        )
        assert code == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()


def test_sweep_threads_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    invoke(capsys, "sweep", "--ports-min", "2", "--ports-max", "10", "--dim", "2", "--out", str(a))
    invoke(capsys, "sweep", "--ports-min", "2", "--ports-max", "10", "--dim", "2",
           "--threads", "4", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_sweep_d4_has_no_optimal_column_values(capsys, tmp_path):
    out_path = tmp_path / "sweep4.csv"
    code, _, _ = invoke(
        capsys,
        "sweep", "--ports-min", "2", "--ports-max", "10", "--dim", "4", "--out", str(out_path),
    )
    assert code == EXIT_OK
    lines = out_path.read_text().splitlines()
    assert len(lines) == 10
    for line in lines[1:]:
        cols = line.split(",")
        assert cols[3] == "" and cols[4] == ""


def test_sweep_bad_range(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["sweep", "--ports-min", "5", "--ports-max", "2", "--dim", "2"])
    assert exc.value.code == EXIT_USAGE


# -- bound ---------------------------------------------------------------------------------

def test_bound_vacuous(capsys):
    code, out, _ = invoke(
        capsys, "bound", "--ports", "2", "--dim", "2", "--rounds", "10", "--format", "json"
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    expected = 1 - 20 * (1 - 0.6597396084411711)
    assert payload["lower_bound"] == pytest.approx(expected, abs=1e-9)
    assert payload["lower_bound"] < 0


def test_bound_near_one(capsys):
    code, out, _ = invoke(
        capsys, "bound", "--ports", "100", "--dim", "2", "--rounds", "1", "--format", "json"
    )
    assert code == EXIT_OK
    assert json.loads(out)["lower_bound"] > 0.98


# -- resource fidelity --------------------------------------------------------------------------

def test_resource_fidelity_value(capsys):
    code, out, _ = invoke(capsys, "resource-fidelity", "--ports", "6")
    assert code == EXIT_OK
    assert "F = 0.997746043771" in out


def test_resource_fidelity_angular_matches(capsys):
    code1, out1, _ = invoke(capsys, "resource-fidelity", "--ports", "6", "--format", "json")
    code2, out2, _ = invoke(
        capsys, "resource-fidelity", "--ports", "6", "--method", "angular", "--format", "json"
    )
    assert code1 == code2 == EXIT_OK
    assert json.loads(out1)["value"] == pytest.approx(json.loads(out2)["value"], abs=1e-9)


def test_resource_fidelity_sweep(capsys, tmp_path):
    out_path = tmp_path / "res.csv"
    code, _, _ = invoke(
        capsys,
        "resource-fidelity", "--sweep", "--ports-min", "1", "--ports-max", "20",
        "--out", str(out_path),
    )
    assert code == EXIT_OK
    lines = out_path.read_text().splitlines()
    assert lines[0] == "N,d,resource_fidelity"
    assert len(lines) == 21
    row6 = lines[6].split(",")
    assert row6[0] == "6" and float(row6[2]) == pytest.approx(0.9977, abs=5e-4)


def test_resource_fidelity_vfile(capsys, vcoeff_path, tmp_path):
    f = tmp_path / "v.json"
    f.write_text(vcoeff_path(3, 3).read_text())
    code, out, _ = invoke(capsys, "resource-fidelity", "--vfile", str(f), "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["dim"] == 3


# -- oracle verify -------------------------------------------------------------------------------

@pytest.mark.parametrize("N,d", [(3, 2), (2, 3)])
def test_oracle_verify_passes(capsys, N, d):
    code, out, _ = invoke(
        capsys, "oracle", "verify", "--ports", str(N), "--dim", str(d), "--tol", "1e-9"
    )
    assert code == EXIT_OK
    assert "overall: PASS" in out


def test_oracle_verify_optimal_note(capsys):
    code, out, _ = invoke(
        capsys, "oracle", "verify", "--ports", "2", "--dim", "2", "--optimal"
    )
    assert code == EXIT_OK
    assert "frec_optimal_formula_vs_oracle" in out
    assert "rotated-signal-SRM" in out


def test_oracle_verify_json(capsys):
    code, out, _ = invoke(
        capsys, "oracle", "verify", "--ports", "2", "--dim", "2", "--format", "json"
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["all_passed"] is True


def test_oracle_verify_cap_exceeded(capsys):
    code, _, err = invoke(capsys, "oracle", "verify", "--ports", "20", "--dim", "2")
    assert code == EXIT_USAGE
    assert "exceeds cap" in err


def test_oracle_verify_strict_tol_fails(capsys):
    # an absurd tolerance makes the float-level residuals count as failures
    code, out, _ = invoke(
        capsys, "oracle", "verify", "--ports", "2", "--dim", "2", "--tol", "1e-20"
    )
    assert code == EXIT_VERIFY_FAILED
    assert "overall: FAIL" in out


# -- vcoeffs ----------------------------------------------------------------------------------

def test_vcoeffs_roundtrip(capsys, tmp_path):
    from pbt_recycling.optimal import load_v_coefficients, v_qubit

    path = tmp_path / "v6.json"
    code, _, _ = invoke(capsys, "vcoeffs", "--ports", "6", "--out", str(path))
    assert code == EXIT_OK
    assert load_v_coefficients(path) == v_qubit(6)


def test_vcoeffs_stdout(capsys):
    code, out, _ = invoke(capsys, "vcoeffs", "--ports", "4")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["N"] == 4 and doc["d"] == 2
    assert len(doc["entries"]) == 3


# -- console entry point ------------------------------------------------------------------------

def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pbt_recycling", "frec", "--ports", "2", "--dim", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == EXIT_OK
    assert "0.659739608441" in proc.stdout
