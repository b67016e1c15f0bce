"""
Tests for the auxbound command line: output shapes and exit codes.
"""
import json
from fractions import Fraction
from pathlib import Path

import pytest

from app.cli import EXIT_ERROR, EXIT_FEASIBLE, EXIT_INFEASIBLE, _load_valid, main
from app.core.errors import DomainError
from app.models import OptimizeConfig
from app.services import function_io, optimizer

FUNCTIONS = Path(__file__).resolve().parent.parent / "functions"
PAPER_H = str(FUNCTIONS / "paper_h.json")
CONST_1 = str(FUNCTIONS / "const_1.json")
CONST_8_9 = str(FUNCTIONS / "const_8_9.json")
REFERENCE = str(FUNCTIONS / "reference_tv.json")


def _first_json(text: str) -> dict:
    payload, _ = json.JSONDecoder().raw_decode(text)
    return payload


def test_verify_exact_two_step(capsys):
    """
    TEST 1 - verify --exact prints the certificate and a summary line
    """
    code = main(["verify", PAPER_H, "--exact"])
    out = capsys.readouterr().out

    assert code == EXIT_FEASIBLE
    payload = _first_json(out)
    assert payload["verdict"] == "feasible"
    assert payload["mode"] == "exact"
    assert set(payload["worst_margin"]) == {"numerator", "denominator"}
    assert len(payload["pieces"]) == 4
    assert out.strip().splitlines()[-1].startswith("feasible (exact)")


def test_verify_infeasible_exit_code(capsys):
    """TEST 2 - An infeasible verdict exits with 1 in both modes"""
    assert main(["verify", CONST_1, "--exact"]) == EXIT_INFEASIBLE
    payload = _first_json(capsys.readouterr().out)
    assert payload["witness"] == {"numerator": "1", "denominator": "4"}

    assert main(["verify", CONST_1, "--numeric", "--grid", "1001"]) == EXIT_INFEASIBLE
    payload = _first_json(capsys.readouterr().out)
    assert payload["mode"] == "float"
    assert float(payload["witness"]) == pytest.approx(0.25, abs=1e-6)


def test_verify_exact_reference_is_error(capsys):
    """TEST 3 - Exact mode on the reference h is a mode error"""
    assert main(["verify", REFERENCE, "--exact"]) == EXIT_ERROR
    assert "check_feasible_numeric" in capsys.readouterr().err


def test_certify_two_step(capsys):
    """TEST 4 - certify prints the discriminants and the exact certificate"""
    code = main(["certify", PAPER_H])
    out = capsys.readouterr().out

    assert code == EXIT_FEASIBLE
    discriminants = _first_json(out)
    assert Fraction(int(discriminants["d1"]["numerator"]), int(discriminants["d1"]["denominator"])) < 0
    assert "paper_mode=feasible" in out
    assert out.strip().splitlines()[-1].startswith("feasible (exact)")


def test_certify_constant(capsys):
    """TEST 5 - Non two-step functions skip the discriminants"""
    assert main(["certify", CONST_8_9]) == EXIT_FEASIBLE
    assert "not a rational two-step function" in capsys.readouterr().out


def test_rho_two_step(capsys):
    """
    TEST 6 - rho prints 12 significant digits then the certificate summary
    """
    code = main(["rho", PAPER_H])
    lines = capsys.readouterr().out.strip().splitlines()

    assert code == EXIT_FEASIBLE
    assert float(lines[0]) == pytest.approx(1.527274, abs=1e-5)
    assert len(lines[0].replace(".", "")) == 12
    assert lines[1].startswith("feasible (exact)")


def test_rho_digits_and_infeasible(capsys):
    """TEST 7 - --digits controls output, infeasible h exits with 1"""
    assert main(["--digits", "5", "rho", CONST_8_9]) == EXIT_FEASIBLE
    assert capsys.readouterr().out.splitlines()[0] == "1.5294"

    assert main(["rho", CONST_1]) == EXIT_INFEASIBLE
    assert "witness z=0.25" in capsys.readouterr().out

    assert main(["rho", CONST_1, "--no-require-feasible"]) == EXIT_FEASIBLE
    assert capsys.readouterr().out.splitlines()[0] == "1.5"


def test_plot_published_h(capsys):
    """TEST 8 - Three samples of the two-step h"""
    assert main(["plot", PAPER_H, "--what", "h", "--samples", "3"]) == EXIT_FEASIBLE
    assert capsys.readouterr().out == "sigma,value\n0,0.971239\n0.5,0.873362\n1,0.873362\n"


def test_plot_condition(capsys):
    """TEST 9 - G samples start at 0 and end at −1"""
    assert main(["plot", CONST_8_9, "--what", "G", "--samples", "5"]) == EXIT_FEASIBLE
    lines = capsys.readouterr().out.strip().splitlines()

    assert lines[0] == "z,G"
    assert len(lines) == 6
    assert lines[1] == "0,0"
    assert lines[-1] == "1,-1"


def test_plot_too_few_samples(capsys):
    """TEST 10 - One sample is rejected"""
    assert main(["plot", PAPER_H, "--samples", "1"]) == EXIT_ERROR


def test_solve_two_step(capsys):
    """TEST 11 - The optimum parameters as JSON"""
    assert main(["solve-two-step"]) == EXIT_FEASIBLE
    payload = _first_json(capsys.readouterr().out)

    assert float(payload["alpha"]) == pytest.approx(0.971239, abs=1e-4)
    assert float(payload["x"]) == pytest.approx(0.236901, abs=1e-4)
    assert all(abs(float(r)) <= 1e-12 for r in payload["residuals"])


def test_closed_form(capsys):
    """TEST 12 - Closed forms as JSON, ρ* inside (1.5272, 1.5273)"""
    assert main(["closed-form"]) == EXIT_FEASIBLE
    payload = _first_json(capsys.readouterr().out)

    assert 1.5272 < float(payload["rho"]) < 1.5273
    assert float(payload["alpha"]) == pytest.approx(0.971239, abs=5e-7)


def test_optimize_writes_function(tmp_path, capsys):
    """
    TEST 13 - optimize --out writes a loadable exact function
    """
    out_file = tmp_path / "h1.json"
    assert main(["optimize", "--pieces", "1", "--out", str(out_file)]) == EXIT_FEASIBLE
    lines = capsys.readouterr().out.strip().splitlines()

    h = function_io.load_function(out_file)
    assert abs(h.values[0].exact - Fraction(8, 9)) <= Fraction(1, 10**6)
    assert float(lines[0]) == pytest.approx(1 + 9 / 17, abs=1e-6)
    assert lines[1].startswith("feasible (exact)")


def test_bad_input_files(tmp_path, capsys):
    """
    TEST 14 - Malformed, invalid and missing files exit with 2
    """
    malformed = tmp_path / "broken.json"
    malformed.write_text('{"type": "step",\n "values": [0.5,]}', encoding="utf-8")
    assert main(["verify", str(malformed)]) == EXIT_ERROR
    assert "line 2" in capsys.readouterr().err

    invalid = tmp_path / "invalid.json"
    invalid.write_text('{"type": "step", "breakpoints": ["0.5"], "values": ["1.2", "0.5"]}', encoding="utf-8")
    assert main(["verify", str(invalid)]) == EXIT_ERROR
    assert "value out of [0,1]" in capsys.readouterr().err

    assert main(["verify", str(tmp_path / "missing.json")]) == EXIT_ERROR


def test_usage_errors(capsys):
    """TEST 15 - Unknown subcommands exit with 2, --help with 0"""
    assert main(["frobnicate"]) == EXIT_ERROR
    assert main(["--help"]) == EXIT_FEASIBLE
    capsys.readouterr()


def test_optimize_out_round_trips(tmp_path, capsys):
    """
    TEST 16 - optimize --out re-parses to the identical exact function

    Uniform thirds exercise the "p/q" form for breakpoints.
    """
    out_file = tmp_path / "h3.json"
    assert main(["optimize", "--pieces", "3", "--out", str(out_file)]) == EXIT_FEASIBLE
    capsys.readouterr()

    loaded = function_io.load_function(out_file)
    expected = optimizer.optimize(OptimizeConfig(num_pieces=3)).h

    assert [b.exact for b in loaded.breakpoints] == [Fraction(1, 3), Fraction(2, 3)]
    assert [v.exact for v in loaded.values] == [v.exact for v in expected.values]
    assert '"1/3"' in out_file.read_text(encoding="utf-8")


def test_invalid_function_file_is_domain_error(tmp_path, capsys):
    """TEST 17 - A file that parses but breaks the [0,1] range raises DomainError and exits with 2"""
    invalid = tmp_path / "invalid.json"
    invalid.write_text('{"type": "step", "breakpoints": ["0.5"], "values": ["1.2", "0.5"]}', encoding="utf-8")

    with pytest.raises(DomainError, match="invalid function: value out of"):
        _load_valid(invalid)

    assert main(["rho", str(invalid)]) == EXIT_ERROR
    assert "invalid function: value out of [0,1]" in capsys.readouterr().err
