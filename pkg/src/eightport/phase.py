"""Covariant phase observables built from diagonal generators.

A diagonal generator sigma determines a phase observable whose matrix is

    c_mn = 2 * integral_0^inf r <m| W(r sqrt2, 0) sigma W(r sqrt2, 0)* |n> dr.

The integral is evaluated in the variable t = r^2 with the e^{-t} weight
pulled out of the displacement elements, so generalized Gauss-Laguerre
quadrature is exact for every matrix entry (parity of m+n selects the
plain or the half-integer weight).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import eval_genlaguerre, gammaln, roots_genlaguerre

from .fock import check_state
from .smearing import DiagonalState, GaussianSmear, convolve_state, diagonal_part

MAX_PHASE_MATRIX_SIZE = 32


def _scaled_displacement_rows(t: np.ndarray, size: int, kdim: int) -> np.ndarray:
    """e^{t/2}-scaled real displacement elements D~[j,k](t) for alpha =
    sqrt(t) > 0, shape (len(t), size, kdim)."""
    j = np.arange(size)[:, None]
    k = np.arange(kdim)[None, :]
    lo = np.minimum(j, k)
    d = np.abs(j - k)
    pref = np.exp(0.5 * (gammaln(lo + 1) - gammaln(lo + d + 1)))
    sign = np.where((k > j) & (d % 2 == 1), -1.0, 1.0)
    tt = t[:, None, None]
    lag = eval_genlaguerre(lo[None], d[None], tt)
    return sign * pref * tt ** (d / 2.0) * lag


def phase_matrix(sigma_diag: DiagonalState | np.ndarray, size: int,
                 nodes: int = 160, max_size: int = MAX_PHASE_MATRIX_SIZE) -> np.ndarray:
    """Phase matrix (c_mn), m, n < size, of the phase observable generated by
    a diagonal state.

    The generator eigenvalues are normalized to unit sum before the radial
    integrals, so c_nn = 1 holds exactly.  `size` is capped at `max_size`:
    Gamma-growth of the integrands makes larger blocks untrustworthy at the
    default cutoff.
    """
    lam = sigma_diag.lambdas if isinstance(sigma_diag, DiagonalState) else np.asarray(sigma_diag, float)
    if size > max_size:
        raise ValueError(f"size {size} exceeds the trusted maximum {max_size}")
    lam = lam / lam.sum()
    kdim = lam.size

    t0, w0 = roots_genlaguerre(nodes, 0.0)
    t1, w1 = roots_genlaguerre(nodes, 0.5)
    S0 = _scaled_displacement_rows(t0, size, kdim)
    S1 = _scaled_displacement_rows(t1, size, kdim)
    even = np.einsum("tik,k,tjk,t->ij", S0, lam, S0, w0, optimize=True)
    odd = np.einsum("tik,k,tjk,t->ij", S1, lam, S1, w1 / np.sqrt(t1), optimize=True)

    m = np.arange(size)
    parity = (m[:, None] + m[None, :]) % 2
    c = np.where(parity == 0, even, odd)
    if np.max(np.abs(np.diag(c) - 1.0)) > 1e-10:
        raise RuntimeError("phase-matrix diagonal deviates from 1; raise `nodes`")
    np.fill_diagonal(c, 1.0)
    return c.astype(complex)


def vacuum_phase_matrix(size: int) -> np.ndarray:
    """Closed form Gamma((m+n)/2 + 1)/sqrt(m! n!) for the vacuum generator."""
    m = np.arange(size)
    mm, nn = np.meshgrid(m, m, indexing="ij")
    logc = gammaln((mm + nn) / 2.0 + 1.0) - 0.5 * (gammaln(mm + 1.0) + gammaln(nn + 1.0))
    return np.exp(logc).astype(complex)


@dataclass(frozen=True)
class PhaseDistribution:
    """Phase density w.r.t. d(alpha) on a uniform grid over [0, 2pi);
    the uniform distribution is the constant 1/(2 pi)."""

    grid: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.density.min() < -1e-8:
            raise ValueError("phase density significantly negative")
        object.__setattr__(self, "density", np.clip(self.density, 0.0, None))

    @property
    def step(self) -> float:
        return 2.0 * np.pi / self.grid.size

    def normalization(self) -> float:
        return float(self.density.sum() * self.step)


def phase_distribution(rho: np.ndarray, c: np.ndarray, n_grid: int = 2048) -> PhaseDistribution:
    """Outcome density p(alpha) = (1/2pi) sum_{m,n} c_mn e^{i(m-n)alpha} <n|rho|m>.

    `rho` is truncated to the block covered by the phase matrix; the signal
    state must be supported well inside it.
    """
    check_state(rho)
    size = c.shape[0]
    r = rho[:size, :size]
    grid = np.linspace(0.0, 2.0 * np.pi, n_grid, endpoint=False)
    # Fourier coefficients f_d = sum_m c[m, m-d] rho[m-d, m]; f_{-d} = conj(f_d)
    dens = np.full(n_grid, 0.0)
    f0 = np.real(np.sum(np.diag(c) * np.diag(r)))
    dens += f0
    for d in range(1, size):
        fd = np.sum(np.diagonal(c, -d) * np.diagonal(r, -d).conj())
        dens += 2.0 * np.real(fd * np.exp(1j * d * grid))
    return PhaseDistribution(grid=grid, density=dens / (2.0 * np.pi))


def _wrapped(delta: np.ndarray) -> np.ndarray:
    """Wrap angle differences into (-pi, pi]."""
    return (delta + np.pi) % (2.0 * np.pi) - np.pi


def _windowed_second_moment(dist: PhaseDistribution, ref: float) -> float:
    u = _wrapped(dist.grid - ref)
    return float(np.sum(u**2 * dist.density) * dist.step)


def min_variance(dist: PhaseDistribution) -> tuple[float, float]:
    """Minimum over the reference angle of the windowed second moment;
    returns (variance, attained reference angle).  Uniform density gives
    pi^2/3."""
    coarse = np.array([_windowed_second_moment(dist, phi) for phi in dist.grid])
    k = int(np.argmin(coarse))
    phi0 = dist.grid[k]
    h = dist.step
    res = minimize_scalar(lambda phi: _windowed_second_moment(dist, phi),
                          bounds=(phi0 - 2 * h, phi0 + 2 * h), method="bounded",
                          options={"xatol": 1e-10})
    return float(res.fun), float(res.x % (2.0 * np.pi))


def smeared_generator(sigma_diag: DiagonalState, eps: float, dim: int | None = None,
                      nodes: int = 81) -> DiagonalState:
    """Diagonal generator of the observable measured through balanced
    efficiency eps: the isotropic smear of sigma."""
    if dim is None:
        dim = max(2 * sigma_diag.dim, 64)
    lam = np.zeros(dim)
    lam[:sigma_diag.dim] = sigma_diag.lambdas
    smear = GaussianSmear.from_efficiencies(eps, eps)
    return diagonal_part(convolve_state(smear, np.diag(lam.astype(complex)), nodes=nodes))


def smearing_ratio(sigma_diag: DiagonalState, eps: float, k: int, m_max: int,
                   dim: int | None = None) -> np.ndarray:
    """Entrywise ratio c^{mu_eps * sigma}_{m,m+k} / c^sigma_{m,m+k} for
    m = 0..m_max.  A constant vector would be the Fourier signature of an
    angular smearing; entries with vanishing denominator come back NaN."""
    if not (0.0 < eps < 1.0):
        raise ValueError("smearing_ratio needs a nonideal efficiency in (0, 1)")
    size = m_max + k + 1
    c_plain = phase_matrix(sigma_diag, size)
    c_smeared = phase_matrix(smeared_generator(sigma_diag, eps, dim=dim), size)
    num = np.real(np.diagonal(c_smeared, k))[: m_max + 1]
    den = np.real(np.diagonal(c_plain, k))[: m_max + 1]
    out = np.full(m_max + 1, np.nan)
    ok = np.abs(den) > 1e-12
    out[ok] = num[ok] / den[ok]
    return out


def tail_limit_check(sigma_diag: DiagonalState, k: int, m_max: int) -> np.ndarray:
    """Diagnostic sequence c_{m,m+k}, m = 0..m_max; approaches 1 within the
    trust radius for mixtures of number states."""
    c = phase_matrix(sigma_diag, m_max + k + 1)
    return np.real(np.diagonal(c, k))[: m_max + 1]
