"""Gaussian inefficiency smearing of phase-space observables.

Detector pair inefficiencies turn the ideal phase-space observable into a
convolution with an anisotropic Gaussian probability measure whose axis
variances are (1-e13)/e13 and (1-e24)/e24.  A unit-efficiency axis is a
degenerate (point-mass) axis, represented exactly by variance 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_hermite

from .fock import check_state, weyl_operator

DIAGONALITY_TOL = 1e-8


def check_efficiency(value: float, name: str = "efficiency") -> float:
    if not (0.0 < value <= 1.0):
        raise ValueError(f"{name} must be in (0, 1], got {value}")
    return float(value)


def overall_efficiency(eps_i: float, eps_j: float) -> float:
    """Combined efficiency 2 e_i e_j / (e_i + e_j) of one balanced homodyne
    pair; always between min and max of the two."""
    check_efficiency(eps_i)
    check_efficiency(eps_j)
    return 2.0 * eps_i * eps_j / (eps_i + eps_j)


@dataclass(frozen=True)
class GaussianSmear:
    """Centered Gaussian probability measure on the (q, p) plane with
    independent axis variances var_q = (1-e13)/e13 and var_p = (1-e24)/e24."""

    var_q: float
    var_p: float

    def __post_init__(self):
        if self.var_q < 0 or self.var_p < 0:
            raise ValueError("axis variances must be nonnegative")

    @classmethod
    def from_efficiencies(cls, eps13: float, eps24: float) -> "GaussianSmear":
        check_efficiency(eps13, "eps13")
        check_efficiency(eps24, "eps24")
        return cls(var_q=(1.0 - eps13) / eps13, var_p=(1.0 - eps24) / eps24)

    @property
    def is_ideal(self) -> bool:
        return self.var_q == 0.0 and self.var_p == 0.0

    def density(self, q, p):
        """Probability density at (q, p).  Degenerate axes carry a point
        mass, so the density only exists when both variances are positive."""
        if self.var_q == 0.0 or self.var_p == 0.0:
            raise ValueError("density undefined on a degenerate axis")
        norm = 1.0 / (2.0 * np.pi * np.sqrt(self.var_q * self.var_p))
        return norm * np.exp(-np.asarray(q) ** 2 / (2 * self.var_q)
                             - np.asarray(p) ** 2 / (2 * self.var_p))

    def characteristic(self, q, p):
        """mu_hat(p, -q) as it enters the state-convolution identity:
        exp{-var_p q^2/2 - var_q p^2/2}.  Note the axis cross."""
        return np.exp(-0.5 * self.var_p * np.asarray(q) ** 2
                      - 0.5 * self.var_q * np.asarray(p) ** 2)


def characteristic(smear: GaussianSmear, q, p):
    return smear.characteristic(q, p)


def compose_measures(s1: GaussianSmear, s2: GaussianSmear) -> GaussianSmear:
    """Convolution of two smearing measures: axis variances add."""
    return GaussianSmear(var_q=s1.var_q + s2.var_q, var_p=s1.var_p + s2.var_p)


@dataclass(frozen=True)
class DiagonalState:
    """Diagonal state by its eigenvalue sequence; truncation deficit is
    reported, never silently renormalized."""

    lambdas: np.ndarray = field(repr=False)

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        object.__setattr__(self, "lambdas", lam)
        if lam.min() < -1e-12:
            raise ValueError("eigenvalues must be nonnegative")
        if not (0.0 < lam.sum() <= 1.0 + 1e-9):
            raise ValueError("eigenvalues must sum to at most 1")

    @property
    def dim(self) -> int:
        return self.lambdas.size

    @property
    def deficit(self) -> float:
        return 1.0 - float(self.lambdas.sum())

    def matrix(self) -> np.ndarray:
        return np.diag(self.lambdas.astype(complex))


def geometric_state(eps: float, dim: int) -> DiagonalState:
    """Truncated geometric law lambda_n = eps (1-eps)^n; the convolved-vacuum
    spectrum at balanced efficiency eps."""
    check_efficiency(eps)
    n = np.arange(dim)
    return DiagonalState(lambdas=eps * (1.0 - eps) ** n)


def _axis_nodes(var: float, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    if var == 0.0:
        return np.zeros(1), np.ones(1)
    x, w = roots_hermite(nodes)
    return x * np.sqrt(2.0 * var), w / np.sqrt(np.pi)


def convolve_state(smear: GaussianSmear, sigma: np.ndarray, nodes: int = 41) -> np.ndarray:
    """Convolved state integral W(q,p) sigma W(q,p)* d mu by tensor
    Gauss-Hermite quadrature matched to each axis variance.

    Satisfies tr[(mu*sigma) W(q,p)] = mu_hat(p,-q) tr[sigma W(q,p)] to 1e-8
    for |(q,p)| <= 3 at the default node count; trustworthy inside the
    cutoff's trust radius only.
    """
    check_state(sigma)
    if smear.is_ideal:
        return sigma.copy()
    dim = sigma.shape[0]
    qs, wq = _axis_nodes(smear.var_q, nodes)
    ps, wp = _axis_nodes(smear.var_p, nodes)
    out = np.zeros_like(sigma, dtype=complex)
    for q, wa in zip(qs, wq):
        for p, wb in zip(ps, wp):
            W = weyl_operator(q, p, dim)
            out += (wa * wb) * (W @ sigma @ W.conj().T)
    return out


def is_diagonal(sigma: np.ndarray, tol: float = DIAGONALITY_TOL,
                block: int | None = None) -> bool:
    """True iff every off-diagonal magnitude is <= tol, optionally restricted
    to the leading `block` x `block` trusted sub-matrix."""
    if block is not None:
        sigma = sigma[:block, :block]
    off = sigma - np.diag(np.diag(sigma))
    return bool(np.max(np.abs(off)) <= tol)


def diagonal_part(sigma: np.ndarray) -> DiagonalState:
    """Diagonal of a numerically diagonal state, clipped at zero."""
    lam = np.clip(np.real(np.diag(sigma)), 0.0, None)
    return DiagonalState(lambdas=lam)
