"""Generalized coherent-state families and their photon statistics.

A generalized coherent state is ``|alpha, h> = sum_n alpha^n h_n(|alpha|^2) |n>``.
Everything downstream only needs the real Fock coefficients
``c_n = alpha^n h_n(alpha^2)`` for real ``alpha >= 0``; the photon-number
distribution is ``p_n = c_n^2 = u^n h_n(u)^2`` with ``u = alpha^2``.

Families (wire labels in brackets):

* standard [scs]: ``h_n = e^{-u/2} / sqrt(n!)``, Poissonian.
* optical spin [oscs], parameter n_tilde: binomial, finite support ``n <= n_tilde``.
* Perelomov [pcs], parameter sigma: negative binomial, ``u < 1``.
* Barut-Girardello [bgcs], parameter sigma: ``u^n / (n! Gamma(2 sigma + n))`` weights.
* modified Susskind-Glogower [msgcs]: ``(n + 1) J_{n+1}(2 sqrt u)^2 / u`` weights.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError
from .special import (
    bessel_i,
    bessel_i_scaled,
    bessel_j,
    bessel_j_scaled,
    bessel_j_scaled_orders,
    bessel_j_sequence,
    log_factorial,
    log_factorial_table,
    log_gamma,
)

DEFAULT_TAIL_TOL = 1e-12
MAX_TRUNCATION = 10_000

# Largest amplitude u = alpha^2 admitted for mSG states.  Measured: the closed
# normalization agrees with the direct sum to ~1e-16 all the way to u = 20
# (see tests/test_states.py::test_msg_domain_bound), so the cap is the
# search limit itself.  <n> reaches ~6.0 there, far beyond any scan.
MSG_U_MAX = 20.0

# the scaled ascending series is used below this u (x = 2 sqrt(u) <= 2)
_SERIES_U_MAX = 1.0
_MAX_TAIL_RATIO = 0.999


class Family(str, enum.Enum):
    STANDARD = "scs"
    OPTICAL_SPIN = "oscs"
    PERELOMOV = "pcs"
    BARUT_GIRARDELLO = "bgcs"
    MODIFIED_SUSSKIND_GLOGOWER = "msgcs"


@dataclass(frozen=True)
class FamilySpec:
    """A coherent-state family together with its parameter.

    ``n_tilde`` is used by the optical spin family only, ``sigma`` by the
    Perelomov and Barut-Girardello families.
    """

    kind: Family
    n_tilde: int | None = None
    sigma: float | None = None

    def __post_init__(self):
        kind = Family(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is Family.OPTICAL_SPIN:
            if self.n_tilde is None or int(self.n_tilde) != self.n_tilde or self.n_tilde < 1:
                raise DomainError(f"optical spin family needs integer n_tilde >= 1, got {self.n_tilde}")
            object.__setattr__(self, "n_tilde", int(self.n_tilde))
        elif self.n_tilde is not None:
            raise DomainError(f"n_tilde is not a parameter of {kind.value}")
        if kind in (Family.PERELOMOV, Family.BARUT_GIRARDELLO):
            if self.sigma is None or not self.sigma >= 0.5:
                raise DomainError(f"{kind.value} needs sigma >= 1/2, got {self.sigma}")
            if kind is Family.PERELOMOV and 2 * self.sigma != int(2 * self.sigma):
                raise DomainError(f"Perelomov sigma must be an integer or half-integer, got {self.sigma}")
            object.__setattr__(self, "sigma", float(self.sigma))
        elif self.sigma is not None:
            raise DomainError(f"sigma is not a parameter of {kind.value}")

    @classmethod
    def standard(cls):
        return cls(Family.STANDARD)

    @classmethod
    def optical_spin(cls, n_tilde: int):
        return cls(Family.OPTICAL_SPIN, n_tilde=n_tilde)

    @classmethod
    def perelomov(cls, sigma: float):
        return cls(Family.PERELOMOV, sigma=sigma)

    @classmethod
    def barut_girardello(cls, sigma: float):
        return cls(Family.BARUT_GIRARDELLO, sigma=sigma)

    @classmethod
    def modified_susskind_glogower(cls):
        return cls(Family.MODIFIED_SUSSKIND_GLOGOWER)

    @classmethod
    def from_label(cls, label: str, param: float | None = None) -> "FamilySpec":
        """Build from a wire label (scs, oscs, pcs, bgcs, msgcs) and parameter."""
        try:
            kind = Family(label)
        except ValueError:
            raise DomainError(f"unknown family label {label!r}") from None
        if kind is Family.OPTICAL_SPIN:
            if param is None or float(param) != int(param):
                raise DomainError(f"oscs needs an integer parameter, got {param}")
            return cls(kind, n_tilde=int(param))
        if kind in (Family.PERELOMOV, Family.BARUT_GIRARDELLO):
            if param is None:
                raise DomainError(f"{label} needs a sigma parameter")
            return cls(kind, sigma=float(param))
        return cls(kind)

    @property
    def label(self) -> str:
        return self.kind.value

    @property
    def param(self) -> float | int:
        """The family parameter, 0 for parameter-free families."""
        if self.n_tilde is not None:
            return self.n_tilde
        if self.sigma is not None:
            return self.sigma
        return 0

    @property
    def u_max(self) -> float:
        """Upper end of the admissible u interval (exclusive for Perelomov)."""
        if self.kind is Family.PERELOMOV:
            return 1.0
        if self.kind is Family.MODIFIED_SUSSKIND_GLOGOWER:
            return MSG_U_MAX
        return math.inf

    @property
    def renormalized(self) -> bool:
        return self.kind in (Family.BARUT_GIRARDELLO, Family.MODIFIED_SUSSKIND_GLOGOWER)

    def check_u(self, u: float) -> None:
        if not u >= 0 or math.isinf(u):
            raise DomainError(f"u must be finite and >= 0, got {u}")
        if self.kind is Family.PERELOMOV and u >= 1.0:
            raise DomainError(f"Perelomov states need u < 1, got {u}")
        if self.kind is Family.MODIFIED_SUSSKIND_GLOGOWER and u > MSG_U_MAX:
            raise DomainError(f"mSG states are supported for u <= {MSG_U_MAX}, got {u}")

    def __str__(self):
        if self.n_tilde is not None:
            return f"{self.label}(n_tilde={self.n_tilde})"
        if self.sigma is not None:
            return f"{self.label}(sigma={self.sigma:g})"
        return self.label


@dataclass(frozen=True)
class CoefficientVector:
    """Truncated Fock coefficients ``c_n = alpha^n h_n(alpha^2)``, n = 0..n_max.

    ``tail_mass`` bounds the discarded probability ``sum_{n > n_max} c_n^2``.
    ``normalization_defect`` is the mismatch between the family's closed-form
    normalization and the direct sum before renormalization (BG and mSG
    only; zero otherwise).
    """

    family: FamilySpec
    alpha: float
    u: float
    coefficients: np.ndarray = field(repr=False)
    n_max: int
    tail_mass: float
    normalization_defect: float = 0.0

    @property
    def probabilities(self) -> np.ndarray:
        return self.coefficients * self.coefficients


@dataclass(frozen=True)
class PhotonStats:
    mean_n: float
    variance: float
    mandel_q: float


# ---------------------------------------------------------------- h_n(u)


def _msg_norm(u: float) -> float:
    """Normalization of the mSG family in a form that is entire in u."""
    j0 = _j_scaled(0, u)
    j1 = _j_scaled(1, u)
    return 2 * j0 * j0 - j0 * j1 + 2 * u * j1 * j1


def _j_scaled(m: int, u: float) -> float:
    """J_m(2 sqrt u) / u^(m/2), evaluated without dividing at small u."""
    if u <= _SERIES_U_MAX:
        return bessel_j_scaled(m, u).value
    return bessel_j(m, 2 * math.sqrt(u)) / u ** (0.5 * m)


def msg_bessel_normalization(u: float) -> float:
    """The closed-form mSG normalization ``N(u)`` evaluated from raw Bessel values."""
    if u <= 0:
        raise DomainError("closed form is singular at u = 0")
    x = 2 * math.sqrt(u)
    j0, j1 = bessel_j(0, x), bessel_j(1, x)
    return (2 * u * j0 * j0 - math.sqrt(u) * j0 * j1 + 2 * u * j1 * j1) / u


def h_coefficient(family: FamilySpec, n: int, u: float) -> float:
    """The coefficient function h_n(u) of a family."""
    n = int(n)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    family.check_u(u)
    kind = family.kind
    if kind is Family.STANDARD:
        return math.exp(-0.5 * u - 0.5 * log_factorial(n))
    if kind is Family.OPTICAL_SPIN:
        nt = family.n_tilde
        if n > nt:
            return 0.0
        log_binom = log_factorial(nt) - log_factorial(n) - log_factorial(nt - n)
        return math.exp(0.5 * log_binom - 0.5 * nt * math.log1p(u))
    if kind is Family.PERELOMOV:
        s2 = 2 * family.sigma
        log_c = log_gamma(s2 + n) - log_factorial(n) - log_gamma(s2)
        return math.exp(0.5 * log_c + family.sigma * math.log1p(-u))
    if kind is Family.BARUT_GIRARDELLO:
        s2 = 2 * family.sigma
        norm = bessel_i_scaled(s2 - 1, u).value
        return math.exp(-0.5 * (log_factorial(n) + log_gamma(s2 + n) + math.log(norm)))
    # modified Susskind-Glogower
    return math.sqrt((n + 1) / _msg_norm(u)) * _j_scaled(n + 1, u)


# ------------------------------------------------------ coefficient vectors


@lru_cache(maxsize=256)
def _shifted_log_gamma(a: float, size: int) -> np.ndarray:
    out = np.array([log_gamma(a + k) for k in range(size)])
    out.flags.writeable = False
    return out


def _raw_terms(family: FamilySpec, u: float, size: int) -> tuple[np.ndarray, np.ndarray | None, float]:
    """First ``size`` probabilities p_n = u^n h_n(u)^2, signs of h_n, and the
    closed-form normalization used (1 for exactly normalized families)."""
    n = np.arange(size)
    lf = log_factorial_table(size - 1)
    logu = math.log(u)
    kind = family.kind
    if kind is Family.STANDARD:
        return np.exp(n * logu - lf - u), None, 1.0
    if kind is Family.PERELOMOV:
        s2 = 2 * family.sigma
        lg = _shifted_log_gamma(s2, size)
        return np.exp(lg - lf - lg[0] + n * logu + s2 * math.log1p(-u)), None, 1.0
    if kind is Family.BARUT_GIRARDELLO:
        s2 = 2 * family.sigma
        lg = _shifted_log_gamma(s2, size)
        closed = bessel_i_scaled(s2 - 1, u).value
        return np.exp(n * logu - lf - lg - math.log(closed)), None, closed
    # modified Susskind-Glogower
    closed = _msg_norm(u)
    if u <= _SERIES_U_MAX:
        js = bessel_j_scaled_orders(size, u)[1:]
        return (n + 1) * np.exp(n * logu) * js * js / closed, np.sign(js), closed
    j = bessel_j_sequence(size, 2 * math.sqrt(u))[1:]
    return (n + 1) * j * j / (u * closed), np.sign(j), closed


def _monotone_onset(family: FamilySpec, u: float) -> int:
    """Index beyond which successive term ratios are non-increasing."""
    if family.kind is Family.MODIFIED_SUSSKIND_GLOGOWER:
        return int(math.ceil(2 * math.sqrt(u))) + 2
    return int(math.ceil(u))


def coefficient_vector(family: FamilySpec, alpha: float, tol: float = DEFAULT_TAIL_TOL) -> CoefficientVector:
    """Truncated Fock coefficients of ``|alpha, h>`` for real alpha >= 0.

    The truncation order is the smallest n_max whose discarded tail mass is
    below ``tol``.
    """
    alpha = float(alpha)
    if not alpha >= 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    return _vector(family, alpha, alpha * alpha, tol)


def coefficient_vector_u(family: FamilySpec, u: float, tol: float = DEFAULT_TAIL_TOL) -> CoefficientVector:
    """As :func:`coefficient_vector`, parameterised by u = alpha^2 (kept exact)."""
    family.check_u(u)
    return _vector(family, math.sqrt(u), float(u), tol)


def _vector(family: FamilySpec, alpha: float, u: float, tol: float) -> CoefficientVector:
    if not 0 < tol < 1:
        raise DomainError(f"tol must lie in (0, 1), got {tol}")
    family.check_u(u)

    if family.kind is Family.OPTICAL_SPIN:
        nt = family.n_tilde
        coef = np.array([alpha**k * h_coefficient(family, k, u) for k in range(nt + 1)])
        coef.flags.writeable = False
        return CoefficientVector(family, alpha, u, coef, nt, 0.0)
    if u == 0:
        coef = np.ones(1)
        coef.flags.writeable = False
        return CoefficientVector(family, alpha, u, coef, 0, 0.0)

    onset = _monotone_onset(family, u)
    size = max(32, 2 * onset + 16)
    while True:
        p, sign, _ = _raw_terms(family, u, size)
        r_last = p[-1] / p[-2] if p[-2] > 0 else 0.0
        # ratios are non-increasing past the onset, so any r < 1 dominates
        # the rest geometrically (Perelomov ratios tend to u, possibly > 1/2)
        if size - 2 > onset and r_last < _MAX_TAIL_RATIO and p[-1] < 1e-3 * tol:
            break
        size *= 2
        if size > MAX_TRUNCATION + 2:
            raise ConvergenceError(f"truncation for {family} at u={u} exceeds {MAX_TRUNCATION}")
    end_tail = p[-1] * r_last / (1.0 - r_last)
    # tail_after[k] = sum_{m > k} p_m (+ geometric bound beyond the chunk)
    tail_after = np.cumsum(p[::-1])[::-1]
    tail_after = np.append(tail_after[1:], 0.0) + end_tail
    below = np.nonzero(tail_after < tol)[0]
    # tail_after is non-increasing; the first index below tol is minimal
    if below.size == 0 or below[0] > MAX_TRUNCATION:
        raise ConvergenceError(f"truncation for {family} at u={u} exceeds {MAX_TRUNCATION}")
    n_max = int(below[0])
    tail = float(tail_after[n_max])
    kept = p[: n_max + 1]

    defect = 0.0
    if family.renormalized:
        total = float(p.sum() + end_tail)
        defect = abs(total - 1.0)
        kept = kept / kept.sum()
    coef = np.sqrt(kept)
    if sign is not None:
        coef = coef * np.where(sign[: n_max + 1] < 0, -1.0, 1.0)
    coef.flags.writeable = False
    return CoefficientVector(family, alpha, u, coef, n_max, tail, defect)


# -------------------------------------------------------- photon statistics


def _moment_tol(tol: float, u: float) -> float:
    # moments weight the dropped tail by n or n^2, and Q = (<n(n-1)> - <n>^2)/<n>
    # is O(u) - O(u) at small u: truncate well below the coefficient default
    return max(1e-4 * tol * min(1.0, u) ** 2, 1e-300)


def mean_photon(family: FamilySpec, u: float, tol: float = DEFAULT_TAIL_TOL) -> float:
    """<n> = sum_n n u^n h_n(u)^2 from the truncated distribution."""
    family.check_u(u)
    p = coefficient_vector_u(family, u, _moment_tol(tol, u)).probabilities
    return float(np.dot(np.arange(p.size), p))


def photon_stats(family: FamilySpec, u: float, tol: float = DEFAULT_TAIL_TOL) -> PhotonStats:
    """Mean, variance and Mandel Q of the photon-number distribution."""
    family.check_u(u)
    p = coefficient_vector_u(family, u, _moment_tol(tol, u)).probabilities
    n = np.arange(p.size)
    mean = float(np.dot(n, p))
    var = float(np.dot((n - mean) ** 2, p))
    q = var / mean - 1.0 if mean > 0 else 0.0
    return PhotonStats(mean, var, q)


def mandel_q_closed_form(family: FamilySpec, u: float) -> float | None:
    """Analytic Mandel parameter where one is known, None for mSG."""
    family.check_u(u)
    kind = family.kind
    if u == 0 or kind is Family.STANDARD:
        return 0.0
    if kind is Family.OPTICAL_SPIN:
        return -mean_photon_closed_form(family, u) / family.n_tilde
    if kind is Family.PERELOMOV:
        return mean_photon_closed_form(family, u) / (2 * family.sigma)
    if kind is Family.BARUT_GIRARDELLO:
        a = math.sqrt(u)
        s2 = 2 * family.sigma
        i_lo, i_mid, i_hi = (bessel_i(s2 - 1 + k, 2 * a) for k in range(3))
        return a * (i_hi / i_mid - i_mid / i_lo)
    return None


def mean_photon_closed_form(family: FamilySpec, u: float) -> float | None:
    family.check_u(u)
    kind = family.kind
    if kind is Family.STANDARD:
        return u
    if kind is Family.OPTICAL_SPIN:
        return family.n_tilde * u / (1 + u)
    if kind is Family.PERELOMOV:
        return 2 * family.sigma * u / (1 - u)
    if kind is Family.BARUT_GIRARDELLO:
        if u == 0:
            return 0.0
        a = math.sqrt(u)
        s2 = 2 * family.sigma
        return a * bessel_i(s2, 2 * a) / bessel_i(s2 - 1, 2 * a)
    return None
