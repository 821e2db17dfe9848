"""Command-line interface: exit codes, rendering, determinism."""

import json
import subprocess
import sys

import pytest

from contactgeo.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


# --- check -------------------------------------------------------------------


def test_check_pass(capsys):
    code, out, _ = run(capsys, "check", "example2")
    assert code == 0
    assert "summary: PASS" in out
    assert "kenmotsu: PASS" in out
    assert "almost_contact: PASS" in out
    assert "a = -4, b = 0" in out


def test_check_fail(capsys):
    code, out, _ = run(capsys, "check", "example3")
    assert code == 1
    assert "kenmotsu: FAIL" in out
    assert "almost_kenmotsu: PASS" in out
    assert "kappa = -2, mu = -2" in out
    assert "summary: FAIL (kenmotsu, eta_einstein)" in out


def test_check_subset(capsys):
    code, out, _ = run(capsys, "check", "example3",
                       "--checks", "almost_contact,almost_kenmotsu,nullity")
    assert code == 0
    assert "kenmotsu" not in out.replace("almost_kenmotsu", "")


def test_check_unknown_name(capsys):
    code, _, err = run(capsys, "check", "example2", "--checks", "bogus")
    assert code == 2
    assert "unknown check" in err


def test_check_witness_shown(capsys):
    code, out, _ = run(capsys, "check", "example1", "--checks", "almost_contact")
    assert code == 1
    assert "[BAD] metric_compatibility" in out
    assert "witness" in out


def test_check_json_payload(capsys):
    code, out, _ = run(capsys, "check", "example3", "--json",
                       "--seed", "999", "--samples", "20", "--tol", "1e-6")
    assert code == 1
    payload = json.loads(out)
    assert payload["passed"] is False
    assert payload["failing"] == ["kenmotsu", "eta_einstein"]
    assert payload["settings"] == {"seed": 999, "samples": 20, "tol": 1e-6}
    assert payload["manifest"]["name"] == "example3"
    assert payload["checks"]["nullity"]["data"]["kappa"] == "-2"
    assert payload["checks"]["nullity"]["data"]["spectrum"] == ["-1", "0", "1"]


# --- tables ------------------------------------------------------------------


def test_tables_conn_full_grid(capsys):
    code, out, _ = run(capsys, "tables", "example2", "--what", "conn")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 26  # header + the full 5x5 grid
    assert "nabla_e1 e_1 = -e_5" in out
    assert "nabla_e1 e_5 = e_1" in out
    assert "nabla_e5 e_5 = 0" in out


def test_tables_riem(capsys):
    code, out, _ = run(capsys, "tables", "example3", "--what", "riem")
    assert code == 0
    assert "R(e_1,e_3)e_1 = 4 e_3" in out
    assert "R(e_1,e_3)e_3 = -4 e_1" in out


def test_tables_riem_flat_empty(capsys):
    code, out, _ = run(capsys, "tables", "flat", "--what", "riem")
    assert code == 0
    assert "(empty)" in out


def test_tables_ricci(capsys):
    code, out, _ = run(capsys, "tables", "example3", "--what", "ricci")
    assert code == 0
    assert "S(e_1,e_1) = -4" in out
    assert "r = -8" in out
    assert "Q e_1 = -4 e_1" in out


def test_tables_star(capsys):
    code, out, _ = run(capsys, "tables", "example2", "--what", "star")
    assert code == 0
    assert "S*(e_1,e_1) = -1" in out
    assert "r* = -4" in out


def test_tables_h(capsys):
    code, out, _ = run(capsys, "tables", "example3", "--what", "h")
    assert code == 0
    assert "h e_1 = -e_2" in out
    assert "h' e_1 = e_1" in out
    assert "h' spectrum: {-1, 0, 1}" in out


def test_tables_brackets_json(capsys):
    code, out, _ = run(capsys, "tables", "example3", "--what", "brackets",
                       "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["entries"]["[e_1,e_3]"] == "2 e_1"


# --- soliton -----------------------------------------------------------------


def test_soliton_solve(capsys):
    code, out, _ = run(capsys, "soliton", "example2", "--solve")
    assert code == 0
    assert "lambda~ = 0, mu = 0 (exact)" in out
    assert "lambda = p/2 + 1/5" in out
    assert "residual max = 0" in out


def test_soliton_verify_uses_manifest_constants(capsys):
    code, out, _ = run(capsys, "soliton", "example3", "--verify")
    assert code == 1
    assert "lambda~ = -4, mu = 4" in out
    assert "residual(e_1,e_1) = -8" in out
    assert "[not a soliton]" in out


def test_soliton_classify_at_pressure(capsys):
    code, out, _ = run(capsys, "soliton", "example3", "--verify", "--p", "0")
    assert code == 1
    assert "classification at p = 0: shrinking (lambda = -11/3 at p = 0)" in out


def test_soliton_flags_override_manifest(capsys):
    code, out, _ = run(capsys, "soliton", "example3", "--verify",
                       "--lambda-tilde", "-2", "--mu", "2")
    assert code == 1
    assert "lambda~ = -2, mu = 2" in out
    assert "residual max = 4" in out


def test_soliton_no_potential(capsys):
    code, _, err = run(capsys, "soliton", "eta_einstein", "--solve")
    assert code == 2
    assert "declares no potential" in err


def test_soliton_verify_needs_constants(capsys):
    code, _, err = run(capsys, "soliton", "example2", "--verify")
    assert code == 2
    assert "verify mode needs" in err


def test_unknown_manifest(capsys):
    code, _, err = run(capsys, "check", "nosuch")
    assert code == 2
    assert "bundled:" in err


def test_gradient_potential_manifest(capsys, tmp_path):
    data = {
        "coordinates": ["x", "y", "z"],
        "frame": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        "metric_frame": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        "phi_frame": [["0", "1", "0"], ["-1", "0", "0"], ["0", "0", "0"]],
        "xi": 2,
        "potential": {"function": "x^2 + y^2 + z^2"},
    }
    p = tmp_path / "grad.json"
    p.write_text(json.dumps(data))
    code, out, _ = run(capsys, "soliton", str(p), "--verify",
                       "--lambda-tilde", "-2", "--mu", "0")
    # Hess f = 2g on a flat chart, so lambda~ = -2, mu = 0 solves exactly
    assert code == 0
    assert "(gradient form)" in out
    assert "lambda~ = -2, mu = 0 (exact)" in out


# --- determinism -------------------------------------------------------------

COMMANDS = [
    ["check", "example3", "--json"],
    ["check", "example1", "--json", "--checks", "almost_contact,nullity"],
    ["tables", "example2", "--what", "conn", "--json"],
    ["tables", "example3", "--what", "h", "--json"],
    ["soliton", "example2", "--solve", "--json"],
    ["soliton", "example3", "--verify", "--p", "0", "--json"],
]


def test_repeated_runs_identical(capsys):
    def sweep():
        chunks = []
        for argv in COMMANDS:
            main(list(argv))
            chunks.append(capsys.readouterr().out)
        return "".join(chunks)

    assert sweep() == sweep()


def test_subprocess_determinism():
    cmd = [sys.executable, "-m", "contactgeo.cli",
           "check", "example3", "--json", "--checks", "nullity,eta_einstein"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    assert a.returncode == b.returncode == 1
    assert a.stdout == b.stdout
    assert json.loads(a.stdout)["checks"]["nullity"]["passed"] is True
