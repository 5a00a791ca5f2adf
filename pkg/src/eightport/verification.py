"""Quantitative verification suite.

Each check reproduces one of the headline quantitative claims end to end and
returns a CheckResult; `run_all` drives them in order.  The suite is shared
by the CLI `verify` subcommand and the acceptance tests.

Known discrepancy, kept visible on purpose: the published worked example
quotes an effective efficiency of about 0.828 for pair efficiencies
(0.5, 1.0), but the closed formula 2/(eta+1) and the numerical spectrum of
the convolved state both give 0.5858 (0.828 equals 2/eta, a slip).  The
mid-curve minimum variance 0.89 quoted alongside is reproducible only from
the erroneous 0.828; the faithful value is about 1.135.  Check 7 therefore
reports the squeezing band as failed and carries the analysis in its
details.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import fock
from .compensation import (balanced_pair_efficiency, beam_splitter_transparency,
                           effective_efficiency, eta, gamma_ratio, series_approx,
                           solve_squeezing, sweep)
from .detector_sim import (bin_phases, chi_square_vs_distribution,
                           histogram_min_variance, phase_space_density,
                           sample_events)
from .phase import min_variance, phase_distribution, phase_matrix, smearing_ratio
from .smearing import (DiagonalState, GaussianSmear, convolve_state,
                       diagonal_part, geometric_state, is_diagonal)


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


def check_gamma_landscape() -> CheckResult:
    """Max of the gamma sweep: 1.17 +/- 0.01 at (0.5, 1) and (1, 0.5), < 10 s."""
    t0 = time.time()
    res = sweep(n=100, lo=0.01, hi=1.0)
    elapsed = time.time() - t0
    locs = sorted((round(a, 6), round(b, 6)) for a, b in res["argmax"])
    ok = (abs(res["max_gamma"] - 1.17) <= 0.01
          and locs == [(0.5, 1.0), (1.0, 0.5)]
          and elapsed < 10.0)
    return CheckResult("gamma_landscape", ok,
                       {"max_gamma": res["max_gamma"], "argmax": locs,
                        "seconds": elapsed})


def check_squeezing_solutions() -> CheckResult:
    a1 = solve_squeezing(0.5, 1.0)
    a2 = solve_squeezing(1.0, 0.5)
    ok = (abs(a1 - 2.414214) <= 1e-6 and abs(a2 - 0.414214) <= 1e-6
          and abs(a1 * a2 - 1.0) <= 1e-12)
    return CheckResult("squeezing_solutions", ok,
                       {"a(0.5,1)": a1, "a(1,0.5)": a2, "product": a1 * a2})


def check_spectral_law() -> CheckResult:
    """Eigenvalues of the convolved squeezed state follow the geometric law
    with eps_eff = 2/(eta+1); records the 0.828-vs-0.586 resolution."""
    e13, e24 = 0.5, 1.0
    a = solve_squeezing(e13, e24)
    sv = fock.squeezed_vacuum(a, 64)
    state = convolve_state(GaussianSmear.from_efficiencies(e13, e24),
                           sv.projector(), nodes=81)
    lam, _ = fock.eig_hermitian(state)
    eps_eff = effective_efficiency(e13, e24)
    exact = eps_eff * (1.0 - eps_eff) ** np.arange(16)
    rel = float(np.max(np.abs(lam[:16] - exact) / exact))
    ok = rel <= 1e-5
    return CheckResult("spectral_law", ok, {
        "max_rel_err_n<=15": rel,
        "eps_eff_formula": eps_eff,
        "eps_eff_eig": float(lam[0]),
        "resolution": "numerical spectrum matches 2/(eta+1) = 0.5858; "
                      "the published 0.828 equals 2/eta and is not reproduced",
    })


def check_geometric_law() -> CheckResult:
    worst = 0.0
    vac = fock.projector(fock.number_state(0, 64))
    for eps in (0.3, 0.6, 0.9):
        state = convolve_state(GaussianSmear.from_efficiencies(eps, eps), vac,
                               nodes=81)
        exact = eps * (1.0 - eps) ** np.arange(21)
        err = float(np.max(np.abs(np.real(np.diag(state))[:21] - exact)))
        off = float(np.max(np.abs(state - np.diag(np.diag(state)))))
        worst = max(worst, err, off)
    return CheckResult("geometric_law", worst <= 1e-8, {"max_err": worst})


def check_diagonality_iff() -> CheckResult:
    """Prop. 1 grid plus the composed-measure counterexample."""
    dim, block = 48, 24
    vac = fock.projector(fock.number_state(0, dim))
    grid = [0.3, 0.45, 0.6, 0.75, 0.9]
    ok = True
    wrong = []
    for e13 in grid:
        for e24 in grid:
            st = convolve_state(GaussianSmear.from_efficiencies(e13, e24), vac,
                                nodes=61)
            diag = is_diagonal(st, 1e-8, block=block)
            if diag != (e13 == e24):
                ok = False
                wrong.append((e13, e24))
    rng = np.random.default_rng(2024)
    counter_ok = True
    for _ in range(10):
        e13, e24 = rng.uniform(0.35, 0.95, 2)
        if abs(e13 - e24) < 0.05:
            e24 = min(1.0, e24 + 0.1)
        sd = geometric_state(rng.uniform(0.4, 0.8), dim).matrix()
        inner = convolve_state(GaussianSmear.from_efficiencies(e24, e13), sd,
                               nodes=61)
        if is_diagonal(inner, 1e-8, block=block):
            counter_ok = False  # the intermediate must be non-diagonal
        outer = convolve_state(GaussianSmear.from_efficiencies(e13, e24), inner,
                               nodes=61)
        if not is_diagonal(outer, 1e-8, block=block):
            counter_ok = False
    return CheckResult("diagonality_iff", ok and counter_ok,
                       {"grid_misclassified": wrong, "counterexample_ok": counter_ok})


def check_efficiency_inequality() -> CheckResult:
    rng = np.random.default_rng(7)
    pairs = rng.uniform(0.01, 1.0, size=(10_000, 2))
    worst = 0.0
    for e13, e24 in pairs:
        gap = effective_efficiency(e13, e24) - min(e13, e24)
        worst = min(worst, gap)
    eq_gap = abs(effective_efficiency(0.6, 0.6) - 0.6)
    strict = effective_efficiency(0.6, 0.6001) - 0.6
    ok = worst >= -1e-12 and eq_gap <= 1e-12 and strict > 0
    return CheckResult("efficiency_inequality", ok,
                       {"worst_gap": worst, "equality_gap": eq_gap})


def check_minimum_variances() -> CheckResult:
    """Fig.-5 scenario minimum variances.  The ideal and beam-splitter bands
    reproduce; the squeezing band cannot (see module docstring) and is
    reported honestly as failed."""
    rho = fock.projector(fock.coherent_state(1.0, 64))
    eps_eff = effective_efficiency(0.5, 1.0)
    values = {}
    for label, gen in (("ideal", DiagonalState(lambdas=np.array([1.0]))),
                       ("squeeze", geometric_state(eps_eff, 64)),
                       ("beamsplitter", geometric_state(0.5, 64))):
        dist = phase_distribution(rho, phase_matrix(gen, 32))
        values[label], _ = min_variance(dist)
    bands_ok = {
        "ideal": abs(values["ideal"] - 0.76) <= 0.03,
        "squeeze": abs(values["squeeze"] - 0.89) <= 0.03,
        "beamsplitter": abs(values["beamsplitter"] - 1.24) <= 0.03,
    }
    ordering = values["ideal"] < values["squeeze"] < values["beamsplitter"]
    ok = all(bands_ok.values()) and ordering
    return CheckResult("minimum_variances", ok, {
        "values": values, "bands_ok": bands_ok, "ordering_ok": ordering,
        "note": "squeeze band targets the published 0.89, which descends from "
                "the erroneous eps_eff 0.828; the faithful value is ~1.135",
    })


def check_no_smearing_signature() -> CheckResult:
    ratios = smearing_ratio(DiagonalState(lambdas=np.array([1.0])), 0.8, k=1,
                            m_max=20)
    spread = float(ratios.max() - ratios.min())
    trend = bool(np.all(np.diff(ratios) > 0)) and ratios[-1] > ratios[0]
    ok = spread > 1e-3 and trend
    return CheckResult("no_smearing_signature", ok,
                       {"spread": spread, "first": float(ratios[0]),
                        "last": float(ratios[-1]), "increasing": trend})


def check_beam_splitter_balancing() -> CheckResult:
    rng = np.random.default_rng(11)
    worst = 0.0
    tried = 0
    while tried < 1000:
        e1, e3 = rng.uniform(0.1, 1.0, 2)
        e13 = 2 * e1 * e3 / (e1 + e3)
        e24 = rng.uniform(0.05, e13 * 0.999)
        eps_bs = beam_splitter_transparency(e1, e3, e24)
        worst = max(worst, abs(balanced_pair_efficiency(e1, e3, eps_bs) - e24))
        tried += 1
    return CheckResult("beam_splitter_balancing", worst <= 1e-12,
                       {"worst_residual": worst})


def check_monte_carlo(seed: int = 0, n: int = 100_000) -> CheckResult:
    eps_eff = effective_efficiency(0.5, 1.0)
    a = solve_squeezing(0.5, 1.0)
    sv = fock.squeezed_vacuum(a, 64)
    dens = phase_space_density(None, sv.projector(),
                               GaussianSmear.from_efficiencies(0.5, 1.0),
                               coherent_z=1.0)
    batch = sample_events(dens, n, seed=seed)
    rerun = sample_events(dens, n, seed=seed)
    identical = bool(np.array_equal(batch.events, rerun.events))
    hist = bin_phases(batch, 64)
    rho = fock.projector(fock.coherent_state(1.0, 64))
    dist = phase_distribution(rho, phase_matrix(geometric_state(eps_eff, 64), 32))
    chi2, pval = chi_square_vs_distribution(hist, dist)
    v_emp, _ = histogram_min_variance(hist)
    v_ana, _ = min_variance(dist)
    ok = pval > 0.01 and abs(v_emp - v_ana) <= 0.05 and identical
    return CheckResult("monte_carlo", ok, {
        "chi2": chi2, "p_value": pval, "var_min_empirical": v_emp,
        "var_min_analytic": v_ana, "reruns_identical": identical, "seed": seed})


def check_series_expansions() -> CheckResult:
    em = 0.8
    deltas = [0.02, 0.01, 0.005]
    errs = []
    for d in deltas:
        approx = series_approx(em + d, em)
        exact = (solve_squeezing(em + d, em), effective_efficiency(em + d, em),
                 gamma_ratio(em + d, em))
        errs.append([abs(s - x) for s, x in zip(approx, exact)])
    orders = []
    for j in range(3):
        for i in range(len(deltas) - 1):
            orders.append(np.log2(errs[i][j] / errs[i + 1][j]))
    ok = all(1.8 <= o <= 2.2 for o in orders)
    return CheckResult("series_expansions", ok,
                       {"observed_orders": [float(o) for o in orders]})


ALL_CHECKS = [
    check_gamma_landscape,
    check_squeezing_solutions,
    check_spectral_law,
    check_geometric_law,
    check_diagonality_iff,
    check_efficiency_inequality,
    check_minimum_variances,
    check_no_smearing_signature,
    check_beam_splitter_balancing,
    check_monte_carlo,
    check_series_expansions,
]


def run_all() -> list[CheckResult]:
    return [check() for check in ALL_CHECKS]
