import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def run(name, *args):
    return subprocess.run(
        [sys.executable, str(SCRIPTS / name), *args], capture_output=True, text=True, timeout=300
    )


def test_worked_examples():
    out = run("worked_examples.py")
    assert out.returncode == 0, out.stdout + out.stderr
    assert "BAD" not in out.stdout


def test_me_vs_spmci_reports_verdict():
    out = run("me_vs_spmci.py")
    assert out.returncode == 0, out.stderr
    line = next(s for s in out.stdout.splitlines() if s.startswith("P(L | N & T)"))
    assert "agree" in line or "disagree" in line
    assert "discrepancy" in line


@pytest.mark.slow
def test_monotonicity_sweep():
    out = run("monotonicity_sweep.py", "--pairs", "20", "--queries", "5", "--seed", "3")
    assert out.returncode == 0, out.stdout
    assert " 0 entailment violations" in out.stdout
