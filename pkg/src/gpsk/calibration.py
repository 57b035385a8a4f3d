"""Find the amplitude that gives a family a prescribed mean photon number.

``<n>(u)`` is strictly increasing for every family, so plain bisection on u
is enough and needs nothing beyond monotonicity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import ConvergenceError, DomainError, UnreachableTargetError
from .states import DEFAULT_TAIL_TOL, Family, FamilySpec, mean_photon

DEFAULT_MEAN_TOL = 1e-10
MAX_BISECTION_STEPS = 200


@dataclass(frozen=True)
class CalibrationResult:
    u: float
    alpha: float
    achieved_mean: float
    iterations: int


def mean_photon_supremum(family: FamilySpec) -> float:
    """Least upper bound of <n> over the admissible u range."""
    if family.kind is Family.OPTICAL_SPIN:
        return float(family.n_tilde)
    if family.kind is Family.MODIFIED_SUSSKIND_GLOGOWER:
        return mean_photon(family, family.u_max)
    return math.inf


def u_from_mean_photon(
    family: FamilySpec,
    target: float,
    tol: float = DEFAULT_MEAN_TOL,
    *,
    tail_tol: float = DEFAULT_TAIL_TOL,
    on_step: Callable[[float, float, float, float], None] | None = None,
) -> CalibrationResult:
    """Solve ``mean_photon(family, u) = target`` for u by bisection.

    The bracket starts at [0, 1] and doubles its upper end until it covers the
    target; for Perelomov states it instead creeps towards the pole at u = 1.
    ``on_step(lo, hi, mean_lo, mean_hi)`` is called on every iteration.
    """
    target = float(target)
    if not target >= 0 or math.isinf(target):
        raise DomainError(f"target mean photon number must be finite and >= 0, got {target}")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if target == 0:
        return CalibrationResult(0.0, 0.0, 0.0, 0)
    sup = mean_photon_supremum(family)
    if target >= sup:
        raise UnreachableTargetError(f"{family} cannot reach <n> = {target} (supremum {sup:g})")

    def mean(u):
        return mean_photon(family, u, tail_tol)

    lo, m_lo = 0.0, 0.0
    hi = min(1.0, family.u_max) if family.kind is not Family.PERELOMOV else 0.5
    m_hi = mean(hi)
    steps = 0
    while m_hi < target:
        lo, m_lo = hi, m_hi
        if family.kind is Family.PERELOMOV:
            hi = 1.0 - (1.0 - hi) / 2
        else:
            hi = min(2 * hi, family.u_max)
        m_hi = mean(hi)
        steps += 1
        if steps > MAX_BISECTION_STEPS:
            raise ConvergenceError(f"could not bracket <n> = {target} for {family}")
        if hi == family.u_max and m_hi < target:
            raise UnreachableTargetError(f"{family} cannot reach <n> = {target} within u <= {hi}")

    iterations = 0
    while True:
        if on_step is not None:
            on_step(lo, hi, m_lo, m_hi)
        if abs(m_hi - target) < tol:
            u, m = hi, m_hi
            break
        if abs(m_lo - target) < tol and lo > 0:
            u, m = lo, m_lo
            break
        if iterations >= MAX_BISECTION_STEPS:
            raise ConvergenceError(f"bisection for <n> = {target} did not converge ({family})")
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # bracket exhausted at double precision
            u, m = (lo, m_lo) if target - m_lo < m_hi - target else (hi, m_hi)
            if abs(m - target) >= tol:
                raise ConvergenceError(f"<n> = {target} unresolvable at tol {tol} for {family}")
            break
        m_mid = mean(mid)
        iterations += 1
        if m_mid < target:
            lo, m_lo = mid, m_mid
        else:
            hi, m_hi = mid, m_mid
    # snap u onto alpha^2 so that the ensemble built from alpha sees this u
    alpha = math.sqrt(u)
    if alpha * alpha != u:
        u = alpha * alpha
        m = mean(u)
    return CalibrationResult(u, alpha, m, iterations)
