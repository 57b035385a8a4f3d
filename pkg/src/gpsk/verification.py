"""Grid-wide consistency suites behind the ``verify`` subcommand.

Each suite reduces one family of checks to its worst residual over the grid
and compares it with a fixed threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .calibration import u_from_mean_photon
from .helstrom import (
    SignalEnsemble,
    gram_eigenvalues_double_sum,
    gram_eigenvalues_from_row,
    gram_matrix,
    helstrom_bound,
    symmetry_check,
)
from .linalg import jacobi_eigen
from .states import (
    DEFAULT_TAIL_TOL,
    Family,
    FamilySpec,
    coefficient_vector_u,
    mandel_q_closed_form,
    photon_stats,
)

DEFAULT_N_SYMBOLS = (2, 3, 4, 8)
DEFAULT_MEAN_GRID = tuple(np.linspace(0.0, 1.2, 10))

THRESHOLDS = {
    "normalization": 1e-9,
    "trace": 1e-9,
    "spectrum": 1e-8,
    "row_invariance": 1e-10,
    "srm": 1e-8,
    "optimality": 1e-8,
    "symmetry": 1e-10,
    "mandel": 1e-8,
    "poisson": 1e-10,
    "vacuum": 0.0,
}


def default_families() -> list[FamilySpec]:
    return [
        FamilySpec.standard(),
        *(FamilySpec.optical_spin(n) for n in (3, 5, 7, 11)),
        *(FamilySpec.barut_girardello(s) for s in (0.5, 1.5)),
        *(FamilySpec.perelomov(s) for s in (0.5, 1.5)),
        FamilySpec.modified_susskind_glogower(),
    ]


@dataclass
class SuiteResult:
    name: str
    threshold: float
    worst: float = 0.0
    worst_case: str = ""
    checked: int = 0

    @property
    def passed(self) -> bool:
        return self.worst <= self.threshold

    def record(self, residual: float, case: str) -> None:
        self.checked += 1
        # NaN must fail, so compare the negated form
        if not residual <= self.worst:
            self.worst = residual if not math.isnan(residual) else math.inf
            self.worst_case = case


@dataclass
class VerificationSummary:
    suites: dict[str, SuiteResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites.values())

    @property
    def failing(self) -> list[str]:
        return [name for name, s in self.suites.items() if not s.passed]

    def table(self) -> str:
        lines = [f"{'suite':<15} {'checks':>6} {'worst':>11} {'threshold':>10}  status  worst case"]
        for s in self.suites.values():
            status = "ok" if s.passed else "FAIL"
            lines.append(f"{s.name:<15} {s.checked:>6} {s.worst:>11.3e} {s.threshold:>10.1e}  {status:<6}  {s.worst_case}")
        return "\n".join(lines)


def run_verification(
    families: list[FamilySpec] | None = None,
    n_symbols: tuple[int, ...] = DEFAULT_N_SYMBOLS,
    mean_grid: tuple[float, ...] = DEFAULT_MEAN_GRID,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> VerificationSummary:
    families = default_families() if families is None else families
    summary = VerificationSummary({name: SuiteResult(name, t) for name, t in THRESHOLDS.items()})
    s = summary.suites

    for family in families:
        for mean_n in mean_grid:
            cal = u_from_mean_photon(family, mean_n, tail_tol=tail_tol)
            case = f"{family} <n>={mean_n:.4g}"

            vec = coefficient_vector_u(family, cal.u, tail_tol)
            captured = float(vec.probabilities.sum())
            s["normalization"].record(
                max(abs(captured - 1.0), vec.tail_mass, vec.normalization_defect), case)

            stats = photon_stats(family, cal.u, tail_tol)
            if family.kind is Family.STANDARD:
                s["poisson"].record(abs(stats.mandel_q), case)
            else:
                closed = mandel_q_closed_form(family, cal.u)
                if closed is not None:
                    s["mandel"].record(abs(stats.mandel_q - closed), case)

            for n_sym in n_symbols:
                _check_ensemble(s, SignalEnsemble(family, cal.alpha, n_sym), mean_n, tail_tol, f"{case} N={n_sym}")
    return summary


def _check_ensemble(s: dict[str, SuiteResult], ens: SignalEnsemble, mean_n: float, tol: float, case: str) -> None:
    n_sym = ens.n_symbols
    result = helstrom_bound(ens, tol)
    spectrum = result.spectrum
    s["trace"].record(spectrum.trace_defect, case)

    gram = gram_matrix(ens, tol)
    w, _ = jacobi_eigen(gram)
    analytic = spectrum.sorted()
    spread = max(
        float(np.max(np.abs(analytic - np.sort(w)))),
        float(np.max(np.abs(analytic - np.sort(gram_eigenvalues_double_sum(ens, tol))))),
    )
    s["spectrum"].record(spread, case)

    row1 = gram_eigenvalues_from_row(ens, 1, tol)
    row2 = gram_eigenvalues_from_row(ens, 2, tol)
    s["row_invariance"].record(
        max(float(np.max(np.abs(np.sort(row1.real) - np.sort(row2.real)))),
            float(np.max(np.abs(row1.imag))), float(np.max(np.abs(row2.imag)))),
        case,
    )

    full = helstrom_bound(ens, tol, verify=True)
    s["srm"].record(full.oracle_gap, case)
    s["optimality"].record(full.optimality_residual, case)
    s["symmetry"].record(symmetry_check(ens, tol), case)

    if mean_n == 0:
        s["vacuum"].record(abs(result.p_success - 1.0 / n_sym), case)
