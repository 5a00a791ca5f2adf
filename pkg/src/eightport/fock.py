"""Truncated Fock-space linear algebra for a single bosonic mode.

All operators live on the number basis {|0>, ..., |dim-1>} and are plain
complex numpy arrays.  Displacements use the convention

    W(q, p) = e^{iqp/2} e^{-iqP} e^{ipQ} = D(alpha),   alpha = (q + ip)/sqrt(2),

so a coherent state |z> is W(q_z, p_z)|0> with z = (q_z + i p_z)/sqrt(2).

Truncation policy: default cutoff is ``DEFAULT_DIM``.  Operations that
displace or convolve mix the basis tail; callers should only trust entries
with index below roughly ``dim // 2`` (the "trust radius") when the
displacement scale is of order a few vacuum widths.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import eval_genlaguerre, gammaln, roots_hermite

DEFAULT_DIM = 64
HERMITICITY_TOL = 1e-10
EIGENVALUE_TOL = 1e-9


def trust_radius(dim: int) -> int:
    """Largest basis index with certified sub-1e-8 truncation error for
    moderate (few vacuum widths) displacements at this cutoff."""
    return dim // 2


def weyl_matrix_element(m: int, n: int, q: float, p: float) -> complex:
    """Matrix element <m|W(q,p)|n> via the associated-Laguerre closed form."""
    if m < 0 or n < 0:
        raise ValueError("photon numbers must be nonnegative")
    alpha = (q + 1j * p) / np.sqrt(2.0)
    t = abs(alpha) ** 2
    if m >= n:
        base, lo, d = alpha, n, m - n
    else:
        base, lo, d = -np.conj(alpha), m, n - m
    pref = np.exp(0.5 * (gammaln(lo + 1) - gammaln(lo + d + 1)))
    return complex(pref * base**d * eval_genlaguerre(lo, d, t) * np.exp(-t / 2.0))


def weyl_operator(q: float, p: float, dim: int = DEFAULT_DIM) -> np.ndarray:
    """Truncated dim x dim matrix of W(q,p).

    Built by the stable two-term recurrence
        sqrt(m) D[m,n] = alpha D[m-1,n] + sqrt(n) D[m-1,n-1],
    seeded with D[0,n] = (-conj(alpha))^n / sqrt(n!) e^{-|alpha|^2/2}.
    Unitary only in the low-index block (see `trust_radius`).
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    alpha = (q + 1j * p) / np.sqrt(2.0)
    t = abs(alpha) ** 2
    n = np.arange(dim)
    D = np.empty((dim, dim), dtype=complex)
    logfact = gammaln(n + 1)
    D[0] = (-np.conj(alpha)) ** n * np.exp(-0.5 * logfact - t / 2.0)
    sq = np.sqrt(n)
    for m in range(1, dim):
        prev = D[m - 1]
        D[m, 0] = alpha * prev[0] / sq[m]
        D[m, 1:] = (alpha * prev[1:] + sq[1:] * prev[:-1]) / sq[m]
    return D


def rotate(op: np.ndarray, phi: float) -> np.ndarray:
    """Conjugate by e^{i phi N}: entries pick up e^{i phi (m - n)}."""
    ph = np.exp(1j * phi * np.arange(op.shape[0]))
    return op * np.outer(ph, ph.conj())


def conjugation_map(op: np.ndarray) -> np.ndarray:
    """Entrywise complex conjugation in the number basis (an involution;
    relates the parameter-field state to the generator it induces)."""
    return np.conj(op)


def number_state(n: int, dim: int = DEFAULT_DIM) -> np.ndarray:
    vec = np.zeros(dim, dtype=complex)
    vec[n] = 1.0
    return vec


def coherent_state(z: complex, dim: int = DEFAULT_DIM) -> np.ndarray:
    """Coherent state coefficients <n|z> = z^n/sqrt(n!) e^{-|z|^2/2}."""
    n = np.arange(dim)
    coeffs = np.complex128(z) ** n * np.exp(-0.5 * gammaln(n + 1) - 0.5 * abs(z) ** 2)
    return coeffs


def projector(vec: np.ndarray) -> np.ndarray:
    return np.outer(vec, vec.conj())


def hermite_functions(nmax: int, x: np.ndarray) -> np.ndarray:
    """Normalized Hermite functions h_0..h_{nmax-1} evaluated at x,
    shape (nmax, len(x))."""
    x = np.asarray(x, dtype=float)
    H = np.empty((nmax, x.size))
    H[0] = np.pi**-0.25 * np.exp(-0.5 * x**2)
    if nmax > 1:
        H[1] = np.sqrt(2.0) * x * H[0]
    for n in range(1, nmax - 1):
        H[n + 1] = x * np.sqrt(2.0 / (n + 1)) * H[n] - np.sqrt(n / (n + 1)) * H[n - 1]
    return H


@dataclass(frozen=True)
class SqueezedVacuum:
    """Real squeezed vacuum psi_a(x) = (a/pi)^{1/4} e^{-a x^2/2} on the
    number basis.  a = 1 is the vacuum; coeffs vanish for odd n."""

    a: float
    coeffs: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.coeffs.size

    def projector(self) -> np.ndarray:
        return projector(self.coeffs.astype(complex))

    def norm_deficit(self) -> float:
        return 1.0 - float(np.sum(self.coeffs**2))


def squeezed_vacuum(a: float, dim: int = DEFAULT_DIM, nodes: int | None = None) -> SqueezedVacuum:
    """Number-basis coefficients of psi_a by Gauss-Hermite quadrature.

    Uses >= 4*dim nodes; odd coefficients are exact zeros by parity.
    """
    if a <= 0:
        raise ValueError("squeezing parameter a must be positive")
    if nodes is None:
        nodes = 4 * dim
    x, w = roots_hermite(nodes)
    # total weights for a plain dx integral; log-combine to dodge overflow
    v = np.exp(np.log(w) + x**2)
    psi = (a / np.pi) ** 0.25 * np.exp(-0.5 * a * x**2)
    coeffs = hermite_functions(dim, x) @ (v * psi)
    coeffs[1::2] = 0.0
    return SqueezedVacuum(a=a, coeffs=coeffs)


def is_hermitian(op: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return bool(np.max(np.abs(op - op.conj().T)) <= tol)


def check_state(op: np.ndarray, trace_tol: float = 1e-6) -> None:
    """Raise if `op` is not a state: Hermitian, PSD and unit trace up to
    the truncation deficit."""
    if not is_hermitian(op):
        raise ValueError("state must be Hermitian to 1e-10")
    evals = np.linalg.eigvalsh(op)
    if evals.min() < -EIGENVALUE_TOL:
        raise ValueError(f"state has eigenvalue {evals.min():.3e} < -{EIGENVALUE_TOL}")
    tr = float(np.real(np.trace(op)))
    if not (1.0 - trace_tol <= tr <= 1.0 + trace_tol):
        raise ValueError(f"state trace {tr} outside [1-{trace_tol}, 1+{trace_tol}]")


def eig_hermitian(op: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (real, descending) and matching eigenvector columns of a
    Hermitian operator."""
    if not is_hermitian(op):
        raise ValueError("eig_hermitian requires a Hermitian operator")
    evals, evecs = np.linalg.eigh(op)
    order = np.argsort(evals)[::-1]
    return evals[order], evecs[:, order]
