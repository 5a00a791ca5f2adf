"""Acceptance gate: one quantitative end-to-end check per headline claim.

Each test prints a single "PASS <name>" / "FAIL <name>" line (run pytest with
-s or look at captured output).  The minimum-variance check is expected to
fail: its squeezing-scenario target descends from an inconsistent published
effective efficiency; see eightport.verification for the analysis.
"""

import numpy as np
import pytest

import eightport.verification as verification
from eightport.verification import ALL_CHECKS


@pytest.mark.parametrize("check", ALL_CHECKS, ids=lambda c: c.__name__)
def test_acceptance(check, capsys):
    result = check()
    with capsys.disabled():
        print(f"{'PASS' if result.passed else 'FAIL'} {result.name}")
    assert result.passed, result.details


def test_suite_catches_injected_bug(monkeypatch):
    # mutation self-test: break the effective-efficiency formula and the
    # spectral-law check must go red
    monkeypatch.setattr(verification, "effective_efficiency",
                        lambda e13, e24: 2.0 / verification.eta(e13, e24))
    result = verification.check_spectral_law()
    assert not result.passed
    assert result.details["eps_eff_formula"] == pytest.approx(0.828, abs=2e-3)


def test_check_results_carry_details():
    res = verification.check_squeezing_solutions()
    assert res.name == "squeezing_solutions"
    assert set(res.details) >= {"a(0.5,1)", "a(1,0.5)"}
    assert res.details["product"] == pytest.approx(1.0, abs=1e-12)
