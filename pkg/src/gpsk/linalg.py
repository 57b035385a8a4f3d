"""Cyclic Jacobi eigensolver for small dense Hermitian matrices.

Serves as the independent oracle for the analytic Gram spectrum, so it is
deliberately self-contained (no LAPACK).
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError, DomainError

HERMITIAN_TOL = 1e-12
OFF_DIAGONAL_TOL = 1e-13
MAX_SWEEPS = 100
_NEGLIGIBLE = 1e-30


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def jacobi_eigen(matrix, *, tol: float = OFF_DIAGONAL_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigen-decomposition ``M = V diag(w) V^H`` of a Hermitian matrix.

    Returns ``(w, V)`` with real eigenvalues in ascending order and the
    eigenvectors as the columns of the unitary ``V``.  Sweeps cyclically over
    all pivots (p, q); each pivot is annihilated by a phase-adjusted real
    Givens rotation.  Stops once the off-diagonal Frobenius norm falls below
    ``tol`` (relative to the matrix norm when that exceeds one).
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    scale = max(1.0, float(np.sqrt(np.sum(np.abs(a) ** 2))))
    if np.max(np.abs(a - a.conj().T), initial=0.0) > HERMITIAN_TOL * scale:
        raise DomainError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)

    threshold = tol * scale
    for _ in range(max_sweeps):
        if _off_norm(a) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                mag = abs(b)
                if mag < _NEGLIGIBLE * scale:
                    # far below what any rotation can resolve; also keeps
                    # subnormal pivots from overflowing the phase
                    a[p, q] = a[q, p] = 0.0
                    continue
                phase = b / mag
                # D = diag(1, conj(phase)) makes the pivot real and positive,
                # then a real rotation [[c, s], [-s, c]] zeroes it
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # column update by rot = [[c, s], [-s conj(phase), c conj(phase)]]
                sp = s * phase.conjugate()
                cp = c * phase.conjugate()
                for m in (a, v):
                    col_p = m[:, p].copy()
                    col_q = m[:, q]
                    m[:, p] = c * col_p - sp * col_q
                    m[:, q] = s * col_p + cp * col_q
                # row update by rot^H
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = c * row_p - sp.conjugate() * row_q
                a[q, :] = s * row_p + cp.conjugate() * row_q
                a[p, q] = a[q, p] = 0.0
    else:
        if _off_norm(a) >= threshold:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def numerical_rank_cutoff(eigenvalues: np.ndarray) -> float:
    """Eigenvalues at or below this are indistinguishable from zero (n * eps * max)."""
    n = eigenvalues.size
    return n * np.finfo(float).eps * float(np.max(np.abs(eigenvalues), initial=0.0))


def hermitian_sqrt(matrix, *, pseudo_inverse: bool = False):
    """Positive square root of a PSD Hermitian matrix via ``jacobi_eigen``.

    Eigenvalues below the numerical-rank cutoff are set to zero first: the
    square root turns rounding noise of size eps into errors of size
    sqrt(eps), which would swamp rank-deficient inputs.  With
    ``pseudo_inverse=True`` also returns the Moore-Penrose inverse of the
    root on the same numerical range.
    """
    w, v = jacobi_eigen(matrix)
    cut = numerical_rank_cutoff(w)
    wc = np.where(w > cut, w, 0.0)
    root = (v * np.sqrt(wc)) @ v.conj().T
    if not pseudo_inverse:
        return root
    inv = np.where(wc > 0, 1.0 / np.sqrt(np.where(wc > 0, wc, 1.0)), 0.0)
    return root, (v * inv) @ v.conj().T
