"""Strategies for balancing unequal homodyne-pair efficiencies.

Either attenuate the stronger pair with an extra beam splitter (dropping the
overall efficiency to the weaker pair's value) or squeeze the parameter
field, which restores rotation invariance at a strictly better effective
efficiency whenever the pairs differ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .smearing import check_efficiency, overall_efficiency


class BalancingError(ValueError):
    """Beam-splitter balancing refused; `arm` names the pair to attenuate."""

    def __init__(self, message: str, arm: str):
        super().__init__(message)
        self.arm = arm


def beam_splitter_transparency(eps1: float, eps3: float, eps24: float) -> float:
    """Transparency eps_bs = e1 e24 / (2 e1 e3 - e3 e24) that attenuates
    detector D3 until the 1-3 pair matches the weaker 2-4 pair."""
    check_efficiency(eps1, "eps1")
    check_efficiency(eps3, "eps3")
    check_efficiency(eps24, "eps24")
    eps13 = overall_efficiency(eps1, eps3)
    if eps24 > eps13:
        raise BalancingError(
            f"pair 1-3 (eps13={eps13:.6g}) is already weaker than eps24={eps24:.6g}; "
            "attenuate the 2-4 arm instead", arm="24")
    denom = 2.0 * eps1 * eps3 - eps3 * eps24
    if denom <= 0.0:
        raise BalancingError("balancing denominator nonpositive; attenuate the 2-4 arm",
                             arm="24")
    eps_bs = eps1 * eps24 / denom
    if eps_bs > 1.0 + 1e-12:
        raise BalancingError(
            f"required transparency {eps_bs:.6g} exceeds 1; attenuate the 2-4 arm",
            arm="24")
    return min(eps_bs, 1.0)


def balanced_pair_efficiency(eps1: float, eps3: float, eps_bs: float) -> float:
    """Overall efficiency of the 1-3 pair after inserting the beam splitter."""
    return 2.0 * eps_bs * eps1 * eps3 / (eps1 + eps_bs * eps3)


def solve_squeezing(eps13: float, eps24: float) -> float:
    """Positive squeezing parameter a balancing the two pairs:
    (1-e24)/(2 e24) + a/4 = (1-e13)/(2 e13) + 1/(4a)."""
    check_efficiency(eps13, "eps13")
    check_efficiency(eps24, "eps24")
    b = (eps24 - eps13) / (eps13 * eps24)
    return b + math.sqrt(1.0 + b * b)


def squeezing_residual(eps13: float, eps24: float, a: float) -> float:
    """Residual of the balancing condition at squeezing a."""
    return ((1.0 - eps24) / (2.0 * eps24) + a / 4.0
            - (1.0 - eps13) / (2.0 * eps13) - 1.0 / (4.0 * a))


def eta(eps13: float, eps24: float) -> float:
    """Width parameter of the balanced convoluted state's characteristic
    function e^{-eta (q^2+p^2)/4}; >= 1, symmetric in its arguments."""
    check_efficiency(eps13, "eps13")
    check_efficiency(eps24, "eps24")
    b = (eps24 - eps13) / (eps13 * eps24)
    return ((eps13 - 2.0 * eps13 * eps24 + eps24) / (eps13 * eps24)
            + math.sqrt(1.0 + b * b))


def effective_efficiency(eps13: float, eps24: float) -> float:
    """eps_eff = 2/(eta + 1): the balanced convoluted state is geometric with
    this ratio, as if both pairs shared efficiency eps_eff."""
    return 2.0 / (eta(eps13, eps24) + 1.0)


def gamma_ratio(eps13: float, eps24: float) -> float:
    """Efficiency gain of squeezing over beam-splitter balancing:
    eps_eff / min(e13, e24) >= 1, with equality iff the pairs match."""
    return effective_efficiency(eps13, eps24) / min(eps13, eps24)


def series_approx(eps13: float, eps24: float) -> tuple[float, float, float]:
    """First order in delta = e13 - e24 around the balanced point:
    a ~ 1 - delta/e_m^2, eps_eff ~ e_m + |delta|/2, gamma ~ 1 + |delta|/(2 e_m).

    The sign of the a term follows the exact solution (the closed form fixes
    a < 1 for e13 > e24); the magnitudes match the published expansions.
    """
    delta = eps13 - eps24
    em = min(eps13, eps24)
    return (1.0 - delta / em**2,
            em + 0.5 * abs(delta),
            1.0 + 0.5 * abs(delta) / em)


@dataclass(frozen=True)
class DetectorQuad:
    eps1: float
    eps2: float
    eps3: float
    eps4: float

    def __post_init__(self):
        for name in ("eps1", "eps2", "eps3", "eps4"):
            check_efficiency(getattr(self, name), name)

    def pair_efficiencies(self) -> tuple[float, float]:
        return (overall_efficiency(self.eps1, self.eps3),
                overall_efficiency(self.eps2, self.eps4))


@dataclass(frozen=True)
class CompensationReport:
    """Both balancing strategies for one detector configuration.  eps_bs is
    None when individual detector efficiencies were not supplied (or when
    balancing is refused; see bs_refusal)."""

    eps13: float
    eps24: float
    eps_bs: float | None
    bs_refusal: str | None
    a: float
    eta: float
    eps_eff: float
    gamma: float
    residual: float

    def as_dict(self) -> dict:
        return asdict(self)


def compensate(eps13: float, eps24: float, quad: DetectorQuad | None = None) -> CompensationReport:
    a = solve_squeezing(eps13, eps24)
    eta_val = eta(eps13, eps24)
    eps_bs = None
    refusal = None
    if abs(eps13 - eps24) <= 1e-15:
        eps_bs = 1.0
    elif quad is not None:
        try:
            if eps13 > eps24:
                eps_bs = beam_splitter_transparency(quad.eps1, quad.eps3, eps24)
            else:
                eps_bs = beam_splitter_transparency(quad.eps2, quad.eps4, eps13)
        except BalancingError as exc:
            refusal = str(exc)
    return CompensationReport(
        eps13=eps13, eps24=eps24, eps_bs=eps_bs, bs_refusal=refusal,
        a=a, eta=eta_val, eps_eff=2.0 / (eta_val + 1.0),
        gamma=gamma_ratio(eps13, eps24),
        residual=squeezing_residual(eps13, eps24, a))


def sweep(n: int = 100, lo: float = 0.01, hi: float = 1.0) -> dict:
    """Grid sweep of (e13, e24) -> (a, eps_eff, gamma).

    Returns the row table plus the argmax of gamma; grid ties within 1e-9 of
    the maximum are all reported (the landscape has two symmetric maxima).
    """
    grid = np.linspace(lo, hi, n)
    rows = []
    for e13 in grid:
        for e24 in grid:
            rows.append((e13, e24, solve_squeezing(e13, e24),
                         effective_efficiency(e13, e24), gamma_ratio(e13, e24)))
    gammas = np.array([r[4] for r in rows])
    gmax = float(gammas.max())
    argmax = [(rows[i][0], rows[i][1]) for i in np.flatnonzero(gammas >= gmax - 1e-9)]
    return {"rows": rows, "max_gamma": gmax, "argmax": argmax}
