"""Tests for cli module."""

import json

import pytest
from mpmath import mp
from unittest.mock import patch

from jacobi_weierstrass.cli import EXIT_FAILURE, EXIT_OK, EXIT_POLE, build_parser, main
from jacobi_weierstrass.errors import PoleError
from jacobi_weierstrass.mockform import FValue, PoleHit
from jacobi_weierstrass.records import FixtureReport, FixtureResult
from jacobi_weierstrass.symrep import IDENTITY, SymVector

CM = ["--form", "eta3p8", "--digits", "30"]
CM_TAU = "0.5,1.3228756555322955"


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_no_command(capsys):
    """Test running without a command prints help and fails."""
    assert main([]) == EXIT_FAILURE
    assert "usage" in capsys.readouterr().err


def test_parser_commands():
    """Test every command is registered with its required options."""
    required = {
        "eichler": ["--tau", "0,1"],
        "evaluate": ["--tau", "0,1"],
        "shadow": ["--tau", "0,1"],
        "invariance": ["--tau", "0,1", "--gamma", "1,1,0,1"],
        "polescan": ["--region", "0,1,1,2"],
    }
    parser = build_parser()
    for command in ("periods", "eichler", "evaluate", "shadow", "invariance", "polescan", "qexp", "fixtures"):
        args = parser.parse_args([command] + required.get(command, []))
        assert args.command == command


def test_periods(capsys):
    """Test the periods command prints a schema-1 record."""
    assert main(["periods"] + CM) == EXIT_OK
    record = _json(capsys)
    assert record["schema"] == 1
    assert record["command"] == "periods"
    assert record["form"] == "eta3p8"
    assert record["digits"] == 30
    assert len(record["generators"]) == 12


def test_too_few_digits(capsys):
    """Test --digits below 15 exits with 2."""
    assert main(["periods", "--digits", "10"]) == EXIT_FAILURE
    assert capsys.readouterr().out == ""


def test_unknown_form():
    """Test an unknown form exits with 2."""
    assert main(["periods", "--form", "no-such-form", "--digits", "30"]) == EXIT_FAILURE


def test_eichler(capsys):
    """Test the Eichler command includes the printed display order."""
    assert main(["eichler", "--tau", CM_TAU] + CM) == EXIT_OK
    record = _json(capsys)
    assert len(record["components"]) == 3
    assert len(record["display"]) == 3
    assert record["components"][0] == [record["display"][2][0], record["display"][2][1]]


def test_eichler_other_basis(capsys):
    """Test a non-identity basis drops the display vector."""
    assert main(["eichler", "--tau", CM_TAU, "--matrix", "0,-1,1,0"] + CM) == EXIT_OK
    record = _json(capsys)
    assert record["matrix"] == [0, -1, 1, 0]
    assert record["display"] == []


def test_eichler_lower_half_plane():
    """Test points off the upper half-plane exit with 2."""
    assert main(["eichler", "--tau", "0,-1"] + CM) == EXIT_FAILURE


def test_bad_matrix():
    """Test malformed matrices exit with 2."""
    assert main(["eichler", "--tau", CM_TAU, "--matrix", "1,2,3"] + CM) == EXIT_FAILURE
    assert main(["eichler", "--tau", CM_TAU, "--matrix", "1,2,3,4"] + CM) == EXIT_FAILURE


def test_output_file(tmp_path, capsys):
    """Test --output writes the record to a file instead of stdout."""
    target = tmp_path / "e.json"
    assert main(["eichler", "--tau", CM_TAU, "--output", str(target)] + CM) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["command"] == "eichler"


def test_evaluate(capsys):
    """Test a regular evaluation exits with 0."""
    assert main(["evaluate", "--tau", CM_TAU] + CM) == EXIT_OK
    record = _json(capsys)
    assert record["pole_flag"] is False
    assert len(record["value"]) == 3


def test_evaluate_pole(capsys):
    """Test a flagged pole exits with 1 and still prints the record."""
    with mp.workdps(30):
        tau = mp.mpc(0, 1)
        hit = PoleHit(tau, IDENTITY, 0, mp.mpf(0), (1, 0))
        value = FValue(SymVector(4, (0, 0, 0)), tau, IDENTITY, pole_flag=True, poles=(hit,))
    with patch("jacobi_weierstrass.cli.RunConfig.mock_context", return_value=None):
        with patch("jacobi_weierstrass.cli.f_value", return_value=value):
            assert main(["evaluate", "--tau", "0,1"] + CM) == EXIT_POLE
    record = _json(capsys)
    assert record["pole_flag"] is True
    assert record["poles"][0]["lattice_point"] == [1, 0]


def test_pole_error_exit_code():
    """Test a PoleError raised by a command exits with 1."""
    with patch("jacobi_weierstrass.cli.RunConfig.mock_context", return_value=None):
        with patch(
            "jacobi_weierstrass.cli.rho_invariance_check",
            side_effect=PoleError("F has a pole", component=2),
        ):
            code = main(["invariance", "--tau", "0,1", "--gamma", "1,1,0,1"] + CM)
    assert code == EXIT_POLE


def test_invariance(capsys):
    """Test the ρ-action check and its lattice correction."""
    assert main(["invariance", "--tau", CM_TAU, "--gamma", "4,-1,9,-2"] + CM) == EXIT_OK
    record = _json(capsys)
    assert record["passed"] is True
    assert len(record["defect"]) == 3


def test_invariance_outside_group():
    """Test elements outside the form's group exit with 2."""
    assert main(["invariance", "--tau", CM_TAU, "--gamma", "1,0,1,1"] + CM) == EXIT_FAILURE


def test_shadow(capsys):
    """Test the shadow check with an explicit step."""
    assert main(["shadow", "--tau", CM_TAU, "--h", "1e-8"] + CM) == EXIT_OK
    record = _json(capsys)
    assert record["passed"] is True
    assert record["tolerance"] == "1.0e-6"


def test_shadow_tolerance_failure(capsys):
    """Test a coarse step fails a tight tolerance with exit code 2."""
    code = main(["shadow", "--tau", CM_TAU, "--h", "1e-3", "--tol", "1e-12"] + CM)
    assert code == EXIT_FAILURE
    assert _json(capsys)["passed"] is False


def test_polescan(capsys):
    """Test the scan reports hits near the cusp."""
    argv = ["polescan", "--region", "0,0.5,3,4", "--grid", "2,2", "--epsilon", "1e-3"]
    assert main(argv + CM) == EXIT_OK
    record = _json(capsys)
    assert record["resolution"] == [2, 2]
    assert len(record["hits"]) == 4


def test_polescan_bad_region():
    """Test a malformed region exits with 2."""
    assert main(["polescan", "--region", "0,1,2"] + CM) == EXIT_FAILURE


def test_qexp(capsys):
    """Test the q-expansion command with f substituted for z."""
    argv = ["qexp", "--terms", "4", "--scale", "1,0", "--no-divide"]
    assert main(argv + CM) == EXIT_OK
    record = _json(capsys)
    assert record["n_min"] == -1
    assert abs(float(record["coefficients"][0][0]) - 1) < 1e-20
    assert abs(float(record["coefficients"][2][0]) - 21739.040942) < 1e-5


@pytest.mark.parametrize("passed, code", [(True, EXIT_OK), (False, EXIT_FAILURE)])
def test_fixtures_flag(passed, code, capsys):
    """Test --fixtures runs the golden suite and maps its verdict to the exit code."""
    report = FixtureReport(
        digits=30,
        results=[FixtureResult(name="check", expected="1", observed="1", passed=passed)],
    )
    with patch("jacobi_weierstrass.cli.run_fixtures", return_value=report):
        assert main(["--fixtures", "--digits", "30"]) == code
    captured = capsys.readouterr()
    assert "PASS" in captured.err or "FAIL" in captured.err
    assert json.loads(captured.out)["command"] == "fixtures"
