"""Helstrom bounds for phase-shift keying with generalized coherent states."""
from .calibration import CalibrationResult, u_from_mean_photon
from .errors import ConvergenceError, DomainError, UnreachableTargetError
from .helstrom import (
    GramSpectrum,
    HelstromResult,
    OptimalityReport,
    SignalEnsemble,
    gram_eigenvalues,
    gram_matrix,
    helstrom_bound,
    srm_success_probability,
    symmetry_check,
    verify_optimality,
)
from .linalg import hermitian_sqrt, jacobi_eigen
from .scan import CrossingReport, Direction, ScanRow, find_crossing, point, scan
from .states import (
    CoefficientVector,
    Family,
    FamilySpec,
    PhotonStats,
    coefficient_vector,
    h_coefficient,
    mandel_q_closed_form,
    mean_photon,
    photon_stats,
)

__all__ = [name for name in dir() if not name.startswith("_")]
