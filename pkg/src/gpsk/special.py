"""Special functions used by the coherent-state families.

Everything here is evaluated from scratch in double precision: log-factorial,
Gamma (Lanczos), Bessel J of integer order (ascending series / Miller
backward recurrence) and modified Bessel I of real order (ascending series).

The "scaled" variants drop the leading power of the argument,

    bessel_i_scaled(nu, u) = sum_k u^k / (k! Gamma(nu + k + 1))  = (x/2)^-nu I_nu(x)
    bessel_j_scaled(n, u)  = sum_k (-u)^k / (k! (n + k)!)         = (x/2)^-n  J_n(x)

with ``x = 2 sqrt(u)``.  Both are entire in ``u``, which is how the
coherent-state coefficients avoid 0/0 at the vacuum.
"""
from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "SeriesResult",
    "log_factorial",
    "log_factorial_table",
    "gamma",
    "log_gamma",
    "bessel_i",
    "bessel_i_scaled",
    "bessel_j",
    "bessel_j_scaled",
    "bessel_j_scaled_orders",
    "bessel_j_sequence",
]

SERIES_RTOL = 1e-16
MAX_SERIES_TERMS = 10_000
# bulk tables: exact integer factorials below this, Stirling series above
_EXACT_FACTORIAL_LIMIT = 1000


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    tail_bound: float


def _sum_series(first: float, ratio) -> SeriesResult:
    """Sum ``first * prod(ratio(j) for j < k)`` over k.

    ``ratio(k)`` gives term[k+1] / term[k].  Terms are assumed to be
    eventually decreasing in magnitude with decreasing ratios, which holds
    for every hypergeometric-type series in this module.
    """
    total = first
    term = first
    k = 0
    while True:
        r = ratio(k)
        nxt = term * r
        k += 1
        if k > MAX_SERIES_TERMS:
            raise ConvergenceError("series did not converge")
        a = abs(r)
        if a < 0.5 and abs(nxt) < SERIES_RTOL * abs(total) or nxt == 0.0:
            # geometric domination by the (non-increasing) ratio
            r2 = abs(ratio(k))
            tail = abs(nxt) / (1.0 - min(r2, 0.5))
            return SeriesResult(total + nxt, k + 1, tail)
        total += nxt
        term = nxt


def log_factorial(n: int) -> float:
    """ln(n!), correctly rounded to double precision."""
    n = int(n)
    if n < 0:
        raise DomainError(f"log_factorial needs n >= 0, got {n}")
    if n < 2:
        return 0.0
    return _rounded_log_factorial(n)


_DEC = decimal.Context(prec=34)
_DEC_HALF_LOG_2PI = _DEC.multiply(2, decimal.Decimal("3.141592653589793238462643383279502884")).ln(_DEC) / 2
# B_2k for the Stirling series of ln Gamma
_BERNOULLI = tuple(decimal.Decimal(a) / b for a, b in
                   ((1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66), (-691, 2730), (7, 6), (-3617, 510)))


@lru_cache(maxsize=4096)
def _rounded_log_factorial(n: int) -> float:
    # 34 significant digits, then a single rounding to float
    with decimal.localcontext(_DEC):
        if n < 30:
            return float(decimal.Decimal(math.factorial(n)).ln())
        x = decimal.Decimal(n)
        lx = x.ln()
        s = (x - decimal.Decimal("0.5")) * lx - x + _DEC_HALF_LOG_2PI
        power = x
        for k, b in enumerate(_BERNOULLI, start=1):
            s += b / (2 * k * (2 * k - 1) * power)
            power *= x * x
        return float(s + lx)


def _fast_log_factorial(n: int) -> float:
    """ln(n!) to within a couple of ulp, for bulk tables."""
    if n < 2:
        return 0.0
    if n <= _EXACT_FACTORIAL_LIMIT:
        return math.log(math.factorial(n))
    x = float(n)
    inv = 1.0 / x
    inv2 = inv * inv
    corr = inv * (1 / 12 - inv2 * (1 / 360 - inv2 * (1 / 1260 - inv2 / 1680)))
    return x * math.log(x) - x + 0.5 * math.log(2 * math.pi * x) + corr


@lru_cache(maxsize=64)
def _log_factorial_table(nmax: int) -> np.ndarray:
    out = np.array([_fast_log_factorial(k) for k in range(nmax + 1)])
    out.flags.writeable = False
    return out


def log_factorial_table(nmax: int) -> np.ndarray:
    """Read-only array ``[ln 0!, ln 1!, ..., ln nmax!]``, each within two ulp."""
    # round up so that nearby requests share a cache entry
    size = max(64, 1 << max(0, int(nmax)).bit_length())
    return _log_factorial_table(size)[: nmax + 1]


# Lanczos approximation, g = 7, 9 terms
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def _lanczos_sum(z: float) -> float:
    # z = x - 1
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (z + i)
    return acc


def gamma(x: float) -> float:
    """Gamma function for x > 0."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"gamma needs x > 0, got {x}")
    if x < 0.5:
        return gamma(x + 1.0) / x
    if x == int(x) and x <= 171:
        return float(math.factorial(int(x) - 1))
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t ** (z + 0.5) * math.exp(-t) * _lanczos_sum(z)


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    if x < 0.5:
        return log_gamma(x + 1.0) - math.log(x)
    if x == int(x) and x <= _EXACT_FACTORIAL_LIMIT + 1:
        return log_factorial(int(x) - 1)
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(_lanczos_sum(z))


def bessel_i_scaled(nu: float, u: float) -> SeriesResult:
    """sum_k u^k / (k! Gamma(nu + k + 1)), i.e. (x/2)^-nu I_nu(x) at u = x^2/4."""
    if nu < 0 or u < 0:
        raise DomainError(f"bessel_i_scaled needs nu, u >= 0, got nu={nu}, u={u}")
    first = math.exp(-log_gamma(nu + 1.0))
    if u == 0:
        return SeriesResult(first, 1, 0.0)
    return _sum_series(first, lambda k: u / ((k + 1) * (nu + k + 1)))


def bessel_i(nu: float, x: float) -> float:
    """Modified Bessel function of the first kind, real order nu >= 0."""
    if x < 0 or nu < 0:
        raise DomainError(f"bessel_i needs nu, x >= 0, got nu={nu}, x={x}")
    if x == 0:
        return 1.0 if nu == 0 else 0.0
    half = 0.5 * x
    s = bessel_i_scaled(nu, half * half)
    # prefactor in log space keeps (x/2)^nu / Gamma from overflowing separately
    return s.value * math.exp(nu * math.log(half)) if nu else s.value


def bessel_j_scaled(n: int, u: float) -> SeriesResult:
    """sum_k (-u)^k / (k! (n + k)!), i.e. (x/2)^-n J_n(x) at u = x^2/4."""
    n = int(n)
    if n < 0 or u < 0:
        raise DomainError(f"bessel_j_scaled needs n, u >= 0, got n={n}, u={u}")
    first = math.exp(-log_factorial(n))
    if u == 0:
        return SeriesResult(first, 1, 0.0)
    return _sum_series(first, lambda k: -u / ((k + 1) * (n + k + 1)))


def bessel_j_scaled_orders(m_max: int, u: float) -> np.ndarray:
    """``bessel_j_scaled(m, u)`` for every m = 0..m_max at once, for 0 <= u <= 1.

    All orders share the term count: each term is below u^k / (k!)^2, so 24
    terms put the truncation error under 1e-40 on the whole range.
    """
    if not 0 <= u <= 1:
        raise DomainError(f"bessel_j_scaled_orders needs 0 <= u <= 1, got {u}")
    lf = log_factorial_table(m_max + 24)
    if u == 0:
        return np.exp(-lf[: m_max + 1])
    k = np.arange(24)
    m = np.arange(m_max + 1)[:, None]
    signs = np.where(k % 2 == 0, 1.0, -1.0)
    terms = signs * np.exp(k * math.log(u) - lf[k] - lf[m + k])
    return terms.sum(axis=1)


# below this argument the ascending series loses < 1 digit to cancellation
_J_SERIES_MAX_X = 2.0


def bessel_j(n: int, x: float) -> float:
    """Bessel function of the first kind, integer order n >= 0, x >= 0."""
    n = int(n)
    if n < 0:
        raise DomainError(f"bessel_j needs n >= 0, got {n}")
    if x < 0:
        raise DomainError(f"bessel_j needs x >= 0, got {x}")
    if x == 0:
        return 1.0 if n == 0 else 0.0
    if x <= _J_SERIES_MAX_X:
        half = 0.5 * x
        return bessel_j_scaled(n, half * half).value * half**n
    return float(_miller(n, x)[n])


def bessel_j_sequence(nmax: int, x: float) -> np.ndarray:
    """Array ``[J_0(x), ..., J_nmax(x)]``."""
    if nmax < 0 or x < 0:
        raise DomainError(f"bessel_j_sequence needs nmax, x >= 0, got {nmax}, {x}")
    if x == 0:
        out = np.zeros(nmax + 1)
        out[0] = 1.0
        return out
    if x <= _J_SERIES_MAX_X:
        half = 0.5 * x
        u = half * half
        return np.array([bessel_j_scaled(k, u).value * half**k for k in range(nmax + 1)])
    return _miller(nmax, x)[: nmax + 1]


def _miller(nmax: int, x: float) -> np.ndarray:
    """Miller backward recurrence normalised by J_0 + 2 sum J_2k = 1."""
    top = max(nmax, x)
    start = int(top + 30 + math.sqrt(40 * top))
    start += start % 2
    b = np.zeros(start + 2)
    b[start] = 1e-30
    two_over_x = 2.0 / x
    for k in range(start, 0, -1):
        b[k - 1] = k * two_over_x * b[k] - b[k + 1]
        if abs(b[k - 1]) > 1e250:
            b[k - 1 :] *= 1e-250
    norm = b[0] + 2.0 * b[2:start + 1:2].sum()
    return b[: start + 1] / norm
