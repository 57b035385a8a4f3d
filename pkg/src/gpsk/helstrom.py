"""Helstrom bound of N-ary generalized PSK signals.

Symbols are ``|alpha_x, h>`` with ``alpha_x = alpha * exp(2 pi i x / N)``,
x = 1..N, sent with equal priors.  The Gram matrix is circulant, so its
eigenvalues are a DFT of one row; for these states that collapses to

    lambda_p = N * sum_{n = 1 - p (mod N)} p_n,

where ``p_n`` is the photon-number distribution.  The optimal success
probability is ``(1/N^2) (sum_p sqrt(lambda_p))^2``.

Besides this analytic route the module carries an independent numerical one:
the explicit Gram matrix, a Jacobi eigensolver, the square-root measurement
built from the Gram square root, and a direct check of the optimality
conditions for that measurement.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .linalg import hermitian_sqrt
from .states import DEFAULT_TAIL_TOL, CoefficientVector, FamilySpec, coefficient_vector, h_coefficient

# rounding noise allowed below zero before a Gram eigenvalue is an error
NEGATIVE_EIGENVALUE_TOL = 1e-10


@dataclass(frozen=True)
class SignalEnsemble:
    family: FamilySpec
    alpha: float
    n_symbols: int

    def __post_init__(self):
        if int(self.n_symbols) != self.n_symbols or self.n_symbols < 2:
            raise DomainError(f"need an integer number of symbols >= 2, got {self.n_symbols}")
        object.__setattr__(self, "n_symbols", int(self.n_symbols))
        alpha = float(self.alpha)
        if not alpha >= 0:
            raise DomainError(f"alpha must be >= 0, got {self.alpha}")
        object.__setattr__(self, "alpha", alpha)
        self.family.check_u(alpha * alpha)

    @property
    def u(self) -> float:
        return self.alpha * self.alpha

    def amplitudes(self) -> np.ndarray:
        """Complex symbol amplitudes alpha_x, x = 1..N."""
        x = np.arange(1, self.n_symbols + 1)
        return self.alpha * np.exp(2j * np.pi * x / self.n_symbols)

    def coefficients(self, tol: float = DEFAULT_TAIL_TOL) -> CoefficientVector:
        return coefficient_vector(self.family, self.alpha, tol)


@dataclass(frozen=True)
class GramSpectrum:
    """Gram eigenvalues ``eigenvalues[p - 1] = lambda_p``, p = 1..N (DFT order)."""

    eigenvalues: np.ndarray
    trace_defect: float
    min_eigenvalue: float

    @property
    def n_symbols(self) -> int:
        return self.eigenvalues.size

    def sorted(self) -> np.ndarray:
        return np.sort(self.eigenvalues)


@dataclass(frozen=True)
class HelstromResult:
    p_success: float
    p_error: float
    spectrum: GramSpectrum
    oracle_gap: float | None = None
    optimality_residual: float | None = None


@dataclass(frozen=True)
class OptimalityReport:
    """Optimality certificate of the square-root measurement.

    ``min_eigenvalue_gap`` is the smallest eigenvalue of
    ``Gamma - q_x rho_x`` over x, with ``Gamma = sum_z q_z rho_z M_z`` (must
    be >= 0); ``max_pairwise_residual`` the largest Frobenius norm of
    ``M_x (q_x rho_x - q_y rho_y) M_y`` (must vanish); ``gamma_hermiticity``
    the norm of ``Gamma - Gamma^H`` (must vanish).
    """

    min_eigenvalue_gap: float
    max_pairwise_residual: float
    gamma_hermiticity: float

    @property
    def worst_violation(self) -> float:
        return max(0.0, -self.min_eigenvalue_gap, self.max_pairwise_residual, self.gamma_hermiticity)


# ----------------------------------------------------------- analytic route


def _residue_masses(probs: np.ndarray, n_symbols: int) -> np.ndarray:
    """Photon-number mass on each residue class n = 1 - p (mod N), p = 1..N."""
    by_residue = np.bincount(np.arange(probs.size) % n_symbols, weights=probs, minlength=n_symbols)
    p = np.arange(1, n_symbols + 1)
    return by_residue[(1 - p) % n_symbols]


def _spectrum(eigenvalues: np.ndarray) -> GramSpectrum:
    n = eigenvalues.size
    low = float(eigenvalues.min())
    if low < -NEGATIVE_EIGENVALUE_TOL:
        raise DomainError(f"Gram eigenvalue {low:.3e} is negative beyond rounding noise")
    clamped = np.where(eigenvalues < 0, 0.0, eigenvalues)
    clamped.flags.writeable = False
    return GramSpectrum(clamped, abs(float(clamped.sum()) - n), low)


def gram_eigenvalues(ensemble: SignalEnsemble, tol: float = DEFAULT_TAIL_TOL) -> GramSpectrum:
    """Gram spectrum by the residue-class reduction of the DFT formula."""
    probs = ensemble.coefficients(tol).probabilities
    return _spectrum(ensemble.n_symbols * _residue_masses(probs, ensemble.n_symbols))


def gram_eigenvalues_double_sum(ensemble: SignalEnsemble, tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    """lambda_p = sum_{k=0}^{N-1} sum_n p_n cos(2 pi k (n + p - 1) / N), term by term."""
    n_sym = ensemble.n_symbols
    probs = ensemble.coefficients(tol).probabilities
    n = np.arange(probs.size)
    k = np.arange(n_sym)[:, None]
    out = np.empty(n_sym)
    for p in range(1, n_sym + 1):
        out[p - 1] = np.sum(np.cos(2 * np.pi * k * (n + p - 1) / n_sym) * probs)
    return out


def gram_eigenvalues_from_row(ensemble: SignalEnsemble, j: int, tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    """lambda_p = sum_k <psi_j|psi_k> exp(-2 pi i (p-1)(j-k) / N) from row j (1-based).

    Returns the complex values so callers can check the imaginary parts vanish.
    """
    n_sym = ensemble.n_symbols
    if not 1 <= j <= n_sym:
        raise DomainError(f"row index must be in 1..{n_sym}, got {j}")
    row = gram_matrix(ensemble, tol)[j - 1]
    k = np.arange(1, n_sym + 1)
    p = np.arange(1, n_sym + 1)[:, None]
    return (row * np.exp(-2j * np.pi * (p - 1) * (j - k) / n_sym)).sum(axis=1)


def helstrom_bound(ensemble: SignalEnsemble, tol: float = DEFAULT_TAIL_TOL, *, verify: bool = False) -> HelstromResult:
    """Optimal success probability ``(1/N^2) (sum_p sqrt(lambda_p))^2``.

    With ``verify=True`` the square-root-measurement oracle and the
    optimality certificate are evaluated too and summarised in
    ``oracle_gap`` and ``optimality_residual``.
    """
    spectrum = gram_eigenvalues(ensemble, tol)
    n_sym = ensemble.n_symbols
    # (1/N^2)(sum sqrt(lambda))^2 == (1/N)(sum sqrt(lambda/N))^2; the masses
    # lambda/N keep the vacuum case exact (masses (1, 0, ..., 0) -> 1/N)
    root_sum = float(np.sqrt(spectrum.eigenvalues / n_sym).sum())
    p_success = min(1.0, root_sum * root_sum / n_sym)
    gap = residual = None
    if verify:
        gap = abs(srm_success_probability(ensemble, tol) - p_success)
        residual = verify_optimality(ensemble, tol).worst_violation
    return HelstromResult(p_success, 1.0 - p_success, spectrum, gap, residual)


# ---------------------------------------------------------- numeric oracle


def gram_matrix(ensemble: SignalEnsemble, tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    """G[j, k] = <psi_j | psi_k> = sum_n (u e^{2 pi i (k-j)/N})^n h_n(u)^2."""
    n_sym = ensemble.n_symbols
    probs = ensemble.coefficients(tol).probabilities
    n = np.arange(probs.size)
    # first row, indexed by d = k - j mod N; integer phases keep it exact in n
    phases = np.exp(2j * np.pi * np.arange(n_sym) / n_sym)
    row = np.array([np.dot(probs, phases[(n * d) % n_sym]) for d in range(n_sym)])
    idx = (np.arange(n_sym)[None, :] - np.arange(n_sym)[:, None]) % n_sym
    return row[idx]


def srm_success_probability(ensemble: SignalEnsemble, tol: float = DEFAULT_TAIL_TOL) -> float:
    """Success probability of the square-root measurement, ``(1/N) sum_x (G^{1/2})_xx^2``.

    G^{1/2} comes from the Jacobi eigensolver, never from the analytic spectrum.
    """
    root = hermitian_sqrt(gram_matrix(ensemble, tol))
    diag = np.diag(root).real
    return float(np.dot(diag, diag) / ensemble.n_symbols)


def verify_optimality(ensemble: SignalEnsemble, tol: float = DEFAULT_TAIL_TOL) -> OptimalityReport:
    """Check the minimum-error optimality conditions for the SRM.

    Works in the N-dimensional span of the symbols: with ``R = G^{1/2}`` the
    columns of R are coordinates of the symbol states, and the SRM vectors
    are ``pi_x = G^{+1/2} R e_x`` (the projection of e_x onto range G).
    """
    n_sym = ensemble.n_symbols
    root, root_pinv = hermitian_sqrt(gram_matrix(ensemble, tol), pseudo_inverse=True)
    q = 1.0 / n_sym
    psi = root  # column x is |psi_x>
    pi = root_pinv @ root  # column x is |pi_x>
    rho = [np.outer(psi[:, x], psi[:, x].conj()) for x in range(n_sym)]
    meas = [np.outer(pi[:, x], pi[:, x].conj()) for x in range(n_sym)]

    gamma_op = sum(q * rho[z] @ meas[z] for z in range(n_sym))
    herm = float(np.linalg.norm(gamma_op - gamma_op.conj().T))
    gamma_h = 0.5 * (gamma_op + gamma_op.conj().T)

    min_gap = math.inf
    for x in range(n_sym):
        min_gap = min(min_gap, float(np.linalg.eigvalsh(gamma_h - q * rho[x])[0]))

    worst = 0.0
    for x in range(n_sym):
        for y in range(n_sym):
            r = meas[x] @ (q * rho[x] - q * rho[y]) @ meas[y]
            worst = max(worst, float(np.linalg.norm(r)))
    return OptimalityReport(min_gap, worst, herm)


def symmetry_check(ensemble: SignalEnsemble, tol: float = DEFAULT_TAIL_TOL) -> float:
    """Largest deviation from the phase-rotation symmetry of the signal set.

    Applies ``U = exp(2 pi i a^dag a / N)`` (diagonal phases in the Fock
    basis) to each symbol's truncated coefficients and measures the L2
    distance to the next symbol, built independently from its own complex
    amplitude.  Also measures how far ``U^N`` is from the identity on the
    truncated space.  Returns the larger of the two.
    """
    n_sym = ensemble.n_symbols
    n_max = ensemble.coefficients(tol).n_max
    n = np.arange(n_max + 1)
    u_phase = np.exp(2j * np.pi * n / n_sym)

    vectors = []
    for amp in ensemble.amplitudes():
        u_x = abs(amp) ** 2
        h = np.array([h_coefficient(ensemble.family, k, u_x) for k in n])
        vectors.append(amp**n * h)
    worst = 0.0
    for x in range(n_sym):
        moved = u_phase * vectors[x]
        worst = max(worst, float(np.linalg.norm(moved - vectors[(x + 1) % n_sym])))

    power = np.ones(n_max + 1, dtype=complex)
    for _ in range(n_sym):
        power = power * u_phase
    return max(worst, float(np.max(np.abs(power - 1.0))))
