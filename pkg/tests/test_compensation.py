"""Beam-splitter and squeezing balancing of unequal pair efficiencies."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eightport import fock
from eightport.compensation import (BalancingError, DetectorQuad,
                                    balanced_pair_efficiency,
                                    beam_splitter_transparency, compensate,
                                    effective_efficiency, eta, gamma_ratio,
                                    series_approx, solve_squeezing,
                                    squeezing_residual, sweep)
from eightport.smearing import GaussianSmear, convolve_state, is_diagonal

eff = st.floats(0.05, 1.0)


def test_beam_splitter_worked_examples():
    assert beam_splitter_transparency(0.9, 0.95, 0.7) == pytest.approx(
        0.6028708133971292, abs=1e-15)
    assert beam_splitter_transparency(1.0, 1.0, 0.5) == pytest.approx(1 / 3)


def test_beam_splitter_refusal_names_other_arm():
    # pair 1-3 already weaker than the target: must refuse, not attenuate
    with pytest.raises(BalancingError) as exc:
        beam_splitter_transparency(0.5, 0.5, 0.9)
    assert exc.value.arm == "24"


@given(eff, eff, eff)
@settings(max_examples=80, deadline=None)
def test_beam_splitter_balances_exactly(e1, e3, frac):
    e13 = 2 * e1 * e3 / (e1 + e3)
    e24 = 0.05 + frac * (e13 * 0.999 - 0.05)
    if e24 <= 0.05:
        return
    t = beam_splitter_transparency(e1, e3, e24)
    assert 0.0 < t <= 1.0
    assert balanced_pair_efficiency(e1, e3, t) == pytest.approx(e24, abs=1e-12)


def test_solve_squeezing_worked_values():
    assert solve_squeezing(0.5, 1.0) == pytest.approx(1 + np.sqrt(2), abs=1e-12)
    assert solve_squeezing(1.0, 0.5) == pytest.approx(np.sqrt(2) - 1, abs=1e-12)
    assert solve_squeezing(0.7, 0.7) == 1.0


@given(eff, eff)
@settings(max_examples=80, deadline=None)
def test_squeezing_solution_properties(e13, e24):
    a = solve_squeezing(e13, e24)
    assert a > 0
    # swapping the pairs inverts the squeezing
    assert a * solve_squeezing(e24, e13) == pytest.approx(1.0, abs=1e-12)
    assert abs(squeezing_residual(e13, e24, a)) < 1e-12


@given(eff, eff)
@settings(max_examples=80, deadline=None)
def test_effective_efficiency_beats_weaker_pair(e13, e24):
    ee = effective_efficiency(e13, e24)
    assert eta(e13, e24) >= 1.0 - 1e-12
    assert eta(e13, e24) == pytest.approx(eta(e24, e13), abs=1e-12)
    assert ee >= min(e13, e24) - 1e-12
    assert 0.0 < ee <= 1.0 + 1e-12
    if abs(e13 - e24) > 1e-3:
        assert ee > min(e13, e24)
    assert gamma_ratio(e13, e24) == pytest.approx(gamma_ratio(e24, e13), abs=1e-12)


def test_effective_efficiency_balanced_point():
    assert effective_efficiency(0.6, 0.6) == pytest.approx(0.6, abs=1e-15)
    assert gamma_ratio(0.6, 0.6) == pytest.approx(1.0, abs=1e-15)


def test_effective_efficiency_extreme_pair():
    # (0.5, 1): eta = 1 + sqrt(2), eps_eff = 2 - sqrt(2), gamma = 2 eps_eff
    assert eta(0.5, 1.0) == pytest.approx(1 + np.sqrt(2), abs=1e-12)
    assert effective_efficiency(0.5, 1.0) == pytest.approx(2 - np.sqrt(2), abs=1e-12)
    assert gamma_ratio(0.5, 1.0) == pytest.approx(2 * (2 - np.sqrt(2)), abs=1e-12)


def test_series_approx_first_order_accuracy():
    em = 0.8
    errs = []
    for d in (0.02, 0.01, 0.005):
        approx = series_approx(em + d, em)
        exact = (solve_squeezing(em + d, em),
                 effective_efficiency(em + d, em),
                 gamma_ratio(em + d, em))
        errs.append([abs(s - x) for s, x in zip(approx, exact)])
    for j in range(3):
        for i in range(2):
            order = np.log2(errs[i][j] / errs[i + 1][j])
            assert 1.8 <= order <= 2.2


def test_sweep_landscape():
    res = sweep(n=100, lo=0.01, hi=1.0)
    assert len(res["rows"]) == 100 * 100
    assert res["max_gamma"] == pytest.approx(1.17157287525381, abs=1e-10)
    locs = sorted((round(a, 6), round(b, 6)) for a, b in res["argmax"])
    assert locs == [(0.5, 1.0), (1.0, 0.5)]


def test_compensate_report_fields():
    quad = DetectorQuad(0.9, 0.7, 0.95, 0.7)
    e13, e24 = quad.pair_efficiencies()
    rep = compensate(e13, e24, quad=quad)
    assert rep.eps_bs == pytest.approx(beam_splitter_transparency(0.9, 0.95, e24))
    assert rep.bs_refusal is None
    assert rep.a == pytest.approx(solve_squeezing(e13, e24))
    assert rep.eps_eff == pytest.approx(effective_efficiency(e13, e24))
    assert abs(rep.residual) < 1e-12
    assert set(rep.as_dict()) == {"eps13", "eps24", "eps_bs", "bs_refusal", "a",
                                  "eta", "eps_eff", "gamma", "residual"}


def test_compensate_without_quad_leaves_bs_open():
    rep = compensate(0.5, 0.9)
    assert rep.eps_bs is None and rep.bs_refusal is None
    rep_eq = compensate(0.7, 0.7)
    assert rep_eq.eps_bs == 1.0


def test_compensate_records_refusal():
    # quad pair 1-3 (0.6) cannot be attenuated down to match a target of 0.7
    quad = DetectorQuad(0.6, 0.6, 0.6, 0.9)
    rep = compensate(0.95, 0.7, quad=quad)
    assert rep.eps_bs is None
    assert rep.bs_refusal is not None
    assert "2-4" in rep.bs_refusal or "24" in rep.bs_refusal


def test_squeezing_restores_diagonality_end_to_end():
    # the defining property: squeezing by the solved a makes the smeared
    # state diagonal again, for unequal pairs
    rng = np.random.default_rng(42)
    for _ in range(4):
        e13 = rng.uniform(0.4, 0.95)
        e24 = rng.uniform(0.4, 0.95)
        if abs(e13 - e24) < 0.1:
            e24 = min(1.0, e24 + 0.2)
        a = solve_squeezing(e13, e24)
        sv = fock.squeezed_vacuum(a, 48)
        out = convolve_state(GaussianSmear.from_efficiencies(e13, e24),
                             sv.projector(), nodes=61)
        assert is_diagonal(out, 1e-8, block=24)
        # without squeezing the same smear is not diagonal
        vac = fock.projector(fock.number_state(0, 48))
        out0 = convolve_state(GaussianSmear.from_efficiencies(e13, e24), vac,
                              nodes=61)
        assert not is_diagonal(out0, 1e-8, block=24)
