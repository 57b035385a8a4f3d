import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from gpsk.calibration import u_from_mean_photon
from gpsk.errors import DomainError
from gpsk.helstrom import (
    SignalEnsemble,
    _spectrum,
    gram_eigenvalues,
    gram_eigenvalues_double_sum,
    gram_eigenvalues_from_row,
    gram_matrix,
    helstrom_bound,
    srm_success_probability,
    symmetry_check,
    verify_optimality,
)
from gpsk.linalg import jacobi_eigen
from gpsk.states import MSG_U_MAX, Family, FamilySpec

S = FamilySpec.standard()
FAMILIES = [
    S, FamilySpec.optical_spin(3), FamilySpec.optical_spin(7),
    FamilySpec.perelomov(0.5), FamilySpec.perelomov(1.5),
    FamilySpec.barut_girardello(0.5), FamilySpec.barut_girardello(1.5),
    FamilySpec.modified_susskind_glogower(),
]
families = st.sampled_from(FAMILIES)
n_symbols = st.integers(2, 12)


def at_mean(family, mean_n, n):
    return SignalEnsemble(family, u_from_mean_photon(family, mean_n).alpha, n)


def ensembles():
    return st.builds(at_mean, families, st.floats(0.0, 1.5), n_symbols)


def two_state_error(alpha):
    return (1 - math.sqrt(1 - math.exp(-4 * alpha * alpha))) / 2


# ---------------------------------------------------------------- ensemble

def test_ensemble_validation():
    with pytest.raises(DomainError):
        SignalEnsemble(S, 1.0, 1)
    with pytest.raises(DomainError):
        SignalEnsemble(S, 1.0, 2.5)
    with pytest.raises(DomainError):
        SignalEnsemble(S, -0.1, 3)
    with pytest.raises(DomainError):
        SignalEnsemble(FamilySpec.perelomov(0.5), 1.0, 3)
    with pytest.raises(DomainError):
        SignalEnsemble(FamilySpec.modified_susskind_glogower(), math.sqrt(MSG_U_MAX) * 1.01, 3)


def test_amplitudes():
    amps = SignalEnsemble(S, 2.0, 4).amplitudes()
    np.testing.assert_allclose(amps, [2j, -2, -2j, 2], atol=1e-15)


# ---------------------------------------------------------------- spectrum

@pytest.mark.parametrize("family", FAMILIES, ids=str)
def test_vacuum_spectrum(family):
    spectrum = gram_eigenvalues(SignalEnsemble(family, 0.0, 4))
    np.testing.assert_array_equal(spectrum.eigenvalues, [4, 0, 0, 0])


def test_standard_two_state_spectrum():
    spectrum = gram_eigenvalues(SignalEnsemble(S, 1.0, 2))
    e = math.exp(-2)
    np.testing.assert_allclose(spectrum.eigenvalues, [1 + e, 1 - e], atol=1e-12)
    np.testing.assert_allclose(spectrum.eigenvalues, [1.1353352832, 0.8646647168], atol=1e-10)


def test_perelomov_spectrum_matches_jacobi():
    ens = SignalEnsemble(FamilySpec.perelomov(0.5), math.sqrt(0.3), 3)
    analytic = np.sort(gram_eigenvalues(ens).eigenvalues)[::-1]
    w, _ = jacobi_eigen(gram_matrix(ens))
    np.testing.assert_allclose(analytic, w[::-1], atol=1e-8)


@given(ensembles())
def test_spectrum_identity(ens):
    analytic = gram_eigenvalues(ens).sorted()
    np.testing.assert_allclose(analytic, np.sort(gram_eigenvalues_double_sum(ens)), atol=1e-8)
    w, _ = jacobi_eigen(gram_matrix(ens))
    np.testing.assert_allclose(analytic, w, atol=1e-8)
    # circulant matrices are diagonalised by the DFT of their first row
    row = gram_matrix(ens)[0]
    np.testing.assert_allclose(analytic, np.sort(np.fft.fft(row).real), atol=1e-8)


@given(ensembles())
def test_trace_and_positivity(ens):
    spectrum = gram_eigenvalues(ens)
    assert spectrum.trace_defect < 1e-9
    assert np.all(spectrum.eigenvalues >= 0)
    assert spectrum.min_eigenvalue >= -1e-10
    assert spectrum.eigenvalues.size == ens.n_symbols


@given(ensembles())
def test_row_invariance(ens):
    r1 = gram_eigenvalues_from_row(ens, 1)
    r2 = gram_eigenvalues_from_row(ens, 2)
    np.testing.assert_allclose(np.sort(r1.real), np.sort(r2.real), atol=1e-10)
    assert np.max(np.abs(r1.imag)) < 1e-10


@given(st.floats(1e-3, 3.0), st.integers(2, 9))
def test_eigenvalues_are_poisson_residue_masses(u, n):
    ens = SignalEnsemble(S, math.sqrt(u), n)
    k = np.arange(400)
    pmf = stats.poisson.pmf(k, u)
    masses = [pmf[(k % n) == (1 - p) % n].sum() for p in range(1, n + 1)]
    np.testing.assert_allclose(gram_eigenvalues(ens).eigenvalues / n, masses, atol=1e-12)


def test_negative_spectrum_rejected():
    with pytest.raises(DomainError):
        _spectrum(np.array([2.0, 1e-9 - 1e-8]))
    clamped = _spectrum(np.array([2.0, -1e-12]))
    assert clamped.eigenvalues[1] == 0.0 and clamped.min_eigenvalue == -1e-12


# ------------------------------------------------------------ Helstrom bound

@given(families, n_symbols)
def test_vacuum_bound_exact(family, n):
    assert helstrom_bound(SignalEnsemble(family, 0.0, n)).p_success == 1 / n


def test_vacuum_three():
    assert helstrom_bound(SignalEnsemble(S, 0.0, 3)).p_success == pytest.approx(0.3333333333, abs=1e-10)


def test_standard_two_state_success():
    r = helstrom_bound(SignalEnsemble(S, 1.0, 2))
    lam = r.spectrum.eigenvalues
    assert r.p_success == pytest.approx((math.sqrt(lam[0]) + math.sqrt(lam[1])) ** 2 / 4, abs=1e-15)
    assert r.p_success == pytest.approx((1 + math.sqrt(1 - math.exp(-4))) / 2, abs=1e-9)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 1.0, 2.0])
def test_two_state_closed_form(alpha):
    assert helstrom_bound(SignalEnsemble(S, alpha, 2)).p_error == pytest.approx(two_state_error(alpha), abs=1e-10)


def test_optical_spin_beats_standard_at_large_mean():
    os3 = FamilySpec.optical_spin(3)
    assert helstrom_bound(at_mean(os3, 0.6, 3)).p_error < helstrom_bound(at_mean(S, 0.6, 3)).p_error


@given(ensembles())
def test_bound_consistency(ens):
    r = helstrom_bound(ens)
    n = ens.n_symbols
    assert 1 / n - 1e-15 <= r.p_success <= 1.0
    assert r.p_success + r.p_error == 1.0
    recomputed = np.sqrt(r.spectrum.eigenvalues).sum() ** 2 / n**2
    assert abs(recomputed - r.p_success) < 1e-12


# ------------------------------------------------------------- Gram matrix

def test_gram_vacuum():
    np.testing.assert_array_equal(gram_matrix(SignalEnsemble(S, 0.0, 3)), np.ones((3, 3)))


def test_gram_standard_two_state():
    g = gram_matrix(SignalEnsemble(S, 1.0, 2))
    assert g[0, 1] == pytest.approx(math.exp(-2), abs=1e-12)
    assert g[0, 1] == pytest.approx(0.1353352832, abs=1e-10)
    assert abs(g[0, 1].imag) < 1e-15


@given(ensembles())
def test_gram_structure(ens):
    g = gram_matrix(ens)
    n = ens.n_symbols
    assert np.max(np.abs(g - g.conj().T)) < 1e-14
    np.testing.assert_allclose(np.diag(g).real, 1.0, atol=1e-11)
    for j in range(n):
        for k in range(n):
            assert g[j, k] == g[0, (k - j) % n]


@given(st.floats(0.0, 2.0), st.integers(2, 8))
def test_gram_matches_coherent_overlap(alpha, n):
    # <beta|gamma> = exp(-|b|^2/2 - |g|^2/2 + conj(b) g) for standard states
    ens = SignalEnsemble(S, alpha, n)
    amps = ens.amplitudes()
    ref = np.exp(-alpha**2 + np.conj(amps)[:, None] * amps[None, :])
    np.testing.assert_allclose(gram_matrix(ens), ref, atol=1e-12)


# ---------------------------------------------------- measurement oracle

def test_srm_examples():
    assert srm_success_probability(SignalEnsemble(S, 0.0, 5)) == pytest.approx(0.2, abs=1e-15)
    ens = SignalEnsemble(S, 1.0, 2)
    assert abs(srm_success_probability(ens) - helstrom_bound(ens).p_success) < 1e-9
    bg = at_mean(FamilySpec.barut_girardello(1.5), 0.8, 4)
    assert abs(srm_success_probability(bg) - helstrom_bound(bg).p_success) < 1e-8


@given(ensembles())
def test_srm_equals_bound(ens):
    r = helstrom_bound(ens, verify=True)
    assert r.oracle_gap < 1e-8
    assert r.optimality_residual < 1e-8


def test_optimality_examples():
    assert verify_optimality(SignalEnsemble(S, 1.0, 2)).min_eigenvalue_gap >= -1e-8
    assert verify_optimality(at_mean(FamilySpec.optical_spin(3), 0.5, 3)).max_pairwise_residual <= 1e-8
    vac = verify_optimality(SignalEnsemble(S, 0.0, 3))
    assert vac.min_eigenvalue_gap >= -1e-12 and vac.worst_violation < 1e-12


def test_optimality_detects_wrong_measurement():
    # a measurement that is not optimal must violate the certificate; here we
    # feed the checker a Gram matrix for unequal states by hand
    from gpsk import helstrom

    ens = SignalEnsemble(S, 0.6, 3)
    good = verify_optimality(ens)
    original = helstrom.gram_matrix
    try:
        helstrom.gram_matrix = lambda e, tol=1e-12: np.array(
            [[1, 0.5, 0.1], [0.5, 1, 0.3], [0.1, 0.3, 1]], dtype=complex)
        bad = verify_optimality(ens)
    finally:
        helstrom.gram_matrix = original
    assert good.worst_violation < 1e-10
    assert bad.worst_violation > 1e-4


# --------------------------------------------------------------- symmetry

@given(families, st.integers(2, 8))
def test_symmetry_vacuum(family, n):
    assert symmetry_check(SignalEnsemble(family, 0.0, n)) < 1e-14


def test_symmetry_examples():
    assert symmetry_check(SignalEnsemble(S, 1.0, 4)) < 1e-10
    assert symmetry_check(at_mean(FamilySpec.modified_susskind_glogower(), 0.5, 3)) < 1e-10


@given(ensembles())
def test_symmetry_everywhere(ens):
    assert symmetry_check(ens) < 1e-10
