"""Acceptance criteria, one test per criterion.

Each test prints a single ``criterion k: PASS|FAIL`` line (collected into the
terminal summary as well) before asserting.  Run directly with
``python3 tests/test_acceptance.py`` or through pytest.
"""
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from gpsk.calibration import u_from_mean_photon
from gpsk.helstrom import (
    SignalEnsemble,
    gram_matrix,
    helstrom_bound,
    srm_success_probability,
    symmetry_check,
    verify_optimality,
)
from gpsk.linalg import jacobi_eigen
from gpsk.scan import Direction, error_probability, find_crossing
from gpsk.states import Family, FamilySpec, mandel_q_closed_form, photon_stats
from gpsk.verification import DEFAULT_MEAN_GRID, DEFAULT_N_SYMBOLS, default_families

TOL = 0.02
WORSE, BETTER = Direction.ALWAYS_WORSE, Direction.ALWAYS_BETTER


def report(k: int, ok: bool, detail: str) -> None:
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def describe(r) -> str:
    where = f" at {r.crossing_mean_n:.4f}" if r.crossing_mean_n is not None else ""
    return f"{r.family_label}({r.param:g}) N={r.n_symbols} {r.direction.value}{where}"


def check_crossings(cases):
    """cases: (family, N, expected direction, expected crossing or None)."""
    verdicts = []
    for family, n, direction, where in cases:
        r = find_crossing(family, n, 0.05, 1.2)
        ok = r.direction is direction
        if where is not None:
            ok = ok and r.crossing_mean_n is not None and abs(r.crossing_mean_n - where) <= TOL
        verdicts.append((ok, describe(r) + ("" if ok else f" [expected {direction.value}"
                                                          + (f" near {where}]" if where else "]"))))
    return verdicts


@pytest.fixture(scope="module")
def grid():
    """Calibrated ensembles on the verification grid, plus the calibration time."""
    out = []
    for family in default_families():
        for mean_n in DEFAULT_MEAN_GRID:
            cal = u_from_mean_photon(family, mean_n)
            for n in DEFAULT_N_SYMBOLS:
                out.append((family, mean_n, cal, SignalEnsemble(family, cal.alpha, n)))
    return out


def test_criterion_01_optical_spin_thresholds():
    start = time.perf_counter()
    cases = [(FamilySpec.optical_spin(nt), 3, Direction.NS_BECOMES_BETTER, where)
             for nt, where in ((3, 0.45), (5, 0.42), (7, 0.38), (11, 0.37))]
    verdicts = check_crossings(cases)
    elapsed = time.perf_counter() - start
    ok = all(v for v, _ in verdicts) and elapsed < 10
    report(1, ok, "; ".join(d for _, d in verdicts) + f"; {elapsed:.1f} s")


def test_criterion_02_optical_spin_no_enhancement():
    cases = [(FamilySpec.optical_spin(nt), n, WORSE, None) for n in (4, 8) for nt in (3, 5, 7, 11)]
    verdicts = check_crossings(cases)
    bad = [d for v, d in verdicts if not v]
    report(2, not bad, f"{len(verdicts) - len(bad)}/{len(verdicts)} always worse" + (f"; {bad}" if bad else ""))


def test_criterion_03_barut_girardello():
    cases = [(FamilySpec.barut_girardello(1.5), 3, Direction.NS_BECOMES_BETTER, 0.48),
             (FamilySpec.barut_girardello(0.5), 3, WORSE, None)]
    cases += [(FamilySpec.barut_girardello(s), n, WORSE, None) for n in (4, 8) for s in (0.5, 1.5)]
    verdicts = check_crossings(cases)
    report(3, all(v for v, _ in verdicts), "; ".join(d for _, d in verdicts))


def test_criterion_04_modified_susskind_glogower():
    msg = FamilySpec.modified_susskind_glogower()
    verdicts = check_crossings([(msg, n, WORSE, None) for n in (3, 4, 8)])
    lowest = min(error_probability(msg, n, m) for n in (3, 4, 8) for m in np.linspace(0.05, 1.2, 200))
    ok = all(v for v, _ in verdicts) and lowest > 1e-6
    report(4, ok, "; ".join(d for _, d in verdicts) + f"; min p_error {lowest:.3e}")


def test_criterion_05_perelomov():
    cases = [(FamilySpec.perelomov(s), 3, WORSE, None) for s in (0.5, 1.5)]
    cases += [(FamilySpec.perelomov(0.5), 4, Direction.NS_BECOMES_WORSE, 0.585),
              (FamilySpec.perelomov(1.5), 4, Direction.NS_BECOMES_WORSE, 0.786)]
    cases += [(FamilySpec.perelomov(s), 8, BETTER, None) for s in (0.5, 1.5)]
    verdicts = check_crossings(cases)
    report(5, all(v for v, _ in verdicts), "; ".join(d for _, d in verdicts))


def test_criterion_06_oracle_equivalence(grid):
    start = time.perf_counter()
    worst = 0.0
    for _, _, _, ens in grid:
        worst = max(worst, abs(srm_success_probability(ens) - helstrom_bound(ens).p_success))
    elapsed = time.perf_counter() - start
    report(6, worst < 1e-8 and elapsed < 30,
           f"worst |srm - helstrom| {worst:.2e} over {len(grid)} ensembles; {elapsed:.1f} s")


def test_criterion_07_optimality_certificate(grid):
    gap, pair = math.inf, 0.0
    for _, _, _, ens in grid:
        r = verify_optimality(ens)
        gap = min(gap, r.min_eigenvalue_gap)
        pair = max(pair, r.max_pairwise_residual)
    report(7, gap >= -1e-8 and pair <= 1e-8, f"min eigenvalue {gap:.2e}, max pairwise residual {pair:.2e}")


def test_criterion_08_structure(grid):
    sym = trace = spread = 0.0
    for _, _, _, ens in grid:
        sym = max(sym, symmetry_check(ens))
        spectrum = helstrom_bound(ens).spectrum
        trace = max(trace, spectrum.trace_defect)
        w, _ = jacobi_eigen(gram_matrix(ens))
        spread = max(spread, float(np.max(np.abs(spectrum.sorted() - w))))
    ok = sym < 1e-10 and trace < 1e-9 and spread < 1e-8
    report(8, ok, f"symmetry {sym:.2e}, trace defect {trace:.2e}, DFT vs Jacobi {spread:.2e}")


def test_criterion_09_closed_forms(grid):
    s = FamilySpec.standard()
    two = max(abs(helstrom_bound(SignalEnsemble(s, a, 2)).p_error
                  - (1 - math.sqrt(1 - math.exp(-4 * a * a))) / 2) for a in (0.25, 0.5, 1.0, 2.0))
    mandel = 0.0
    for family, _, cal, ens in grid:
        if ens.n_symbols != 2 or family.kind in (Family.STANDARD, Family.MODIFIED_SUSSKIND_GLOGOWER):
            continue
        mandel = max(mandel, abs(photon_stats(family, cal.u).mandel_q - mandel_q_closed_form(family, cal.u)))
    report(9, two < 1e-10 and mandel < 1e-8, f"N=2 closed form {two:.2e}, Mandel Q {mandel:.2e}")


def test_criterion_10_vacuum():
    misses = [(str(f), n) for f in default_families() for n in range(2, 17)
              if helstrom_bound(SignalEnsemble(f, 0.0, n)).p_success != 1 / n]
    report(10, not misses, f"{len(default_families()) * 15 - len(misses)} exact out of {len(default_families()) * 15}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
