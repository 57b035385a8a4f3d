"""Equal-energy comparisons of a non-standard family against standard PSK.

Every quantity here is parameterised by the mean photon number <n>: each
grid point is calibrated to the amplitude that realises it, so different
families are compared at the same signal energy.
"""
from __future__ import annotations

import csv
import enum
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import partial

import numpy as np

from .calibration import u_from_mean_photon
from .errors import DomainError
from .helstrom import SignalEnsemble, helstrom_bound, symmetry_check, verify_optimality
from .states import DEFAULT_TAIL_TOL, FamilySpec, photon_stats

log = logging.getLogger(__name__)

STANDARD = FamilySpec.standard()
CSV_COLUMNS = ("family", "param", "N", "mean_n", "u", "alpha", "mandel_q", "p_success", "p_error")
CROSSING_GRID_POINTS = 200
CROSSING_RESOLUTION = 1e-5


@dataclass(frozen=True)
class ScanRow:
    family_label: str
    param: float
    n_symbols: int
    mean_n: float
    u: float
    alpha: float
    mandel_q: float
    p_success: float
    p_error: float
    baseline_p_error: float | None = None


class Direction(str, enum.Enum):
    NS_BECOMES_BETTER = "ns_becomes_better"
    NS_BECOMES_WORSE = "ns_becomes_worse"
    ALWAYS_WORSE = "no_crossing_ns_always_worse"
    ALWAYS_BETTER = "no_crossing_ns_always_better"

    @property
    def is_crossing(self) -> bool:
        return self in (Direction.NS_BECOMES_BETTER, Direction.NS_BECOMES_WORSE)


@dataclass(frozen=True)
class CrossingReport:
    family_label: str
    param: float
    n_symbols: int
    crossing_mean_n: float | None
    direction: Direction
    mean_min: float
    mean_max: float
    warning: str | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["direction"] = self.direction.value
        return d


def error_probability(family: FamilySpec, n_symbols: int, mean_n: float, tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """Minimum error probability of N-ary PSK with the given family at <n>."""
    cal = u_from_mean_photon(family, mean_n, tail_tol=tail_tol)
    return helstrom_bound(SignalEnsemble(family, cal.alpha, n_symbols), tail_tol).p_error


def _row(mean_n: float, family: FamilySpec, n_symbols: int, with_baseline: bool, tail_tol: float) -> ScanRow:
    cal = u_from_mean_photon(family, mean_n, tail_tol=tail_tol)
    result = helstrom_bound(SignalEnsemble(family, cal.alpha, n_symbols), tail_tol)
    stats = photon_stats(family, cal.u, tail_tol)
    baseline = error_probability(STANDARD, n_symbols, mean_n, tail_tol) if with_baseline else None
    return ScanRow(
        family.label, family.param, n_symbols, float(mean_n), cal.u, cal.alpha,
        stats.mandel_q, result.p_success, result.p_error, baseline,
    )


def scan(
    family: FamilySpec,
    n_symbols: int,
    mean_min: float = 0.0,
    mean_max: float = 1.2,
    steps: int = 120,
    *,
    with_baseline: bool = False,
    tail_tol: float = DEFAULT_TAIL_TOL,
    workers: int = 1,
) -> list[ScanRow]:
    """Helstrom error probability on a uniform <n> grid, in grid order."""
    if not 0 <= mean_min < mean_max:
        raise DomainError(f"need 0 <= mean_min < mean_max, got {mean_min}, {mean_max}")
    if steps < 2:
        raise DomainError(f"need at least 2 steps, got {steps}")
    grid = np.linspace(mean_min, mean_max, steps)
    fn = partial(_row, family=family, n_symbols=n_symbols, with_baseline=with_baseline, tail_tol=tail_tol)
    if workers > 1:
        # map keeps input order, so the output stays deterministic
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, grid, chunksize=max(1, steps // (4 * workers))))
    return [fn(m) for m in grid]


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def write_csv(rows: list[ScanRow], stream) -> None:
    """Write scan rows with 17 significant digits in a fixed column order."""
    with_baseline = bool(rows) and rows[0].baseline_p_error is not None
    header = CSV_COLUMNS + (("baseline_p_error",) if with_baseline else ())
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        fields = [r.family_label, _fmt(r.param), _fmt(r.n_symbols), _fmt(r.mean_n), _fmt(r.u),
                  _fmt(r.alpha), _fmt(r.mandel_q), _fmt(r.p_success), _fmt(r.p_error)]
        if with_baseline:
            fields.append(_fmt(r.baseline_p_error))
        writer.writerow(fields)


def rows_to_csv(rows: list[ScanRow]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def error_gap(family: FamilySpec, n_symbols: int, mean_n: float, tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """p_error(family) - p_error(standard) at equal <n>; negative means the family wins."""
    return error_probability(family, n_symbols, mean_n, tail_tol) - error_probability(STANDARD, n_symbols, mean_n, tail_tol)


def find_crossing(
    family: FamilySpec,
    n_symbols: int,
    mean_min: float = 0.05,
    mean_max: float = 1.2,
    *,
    grid_points: int = CROSSING_GRID_POINTS,
    resolution: float = CROSSING_RESOLUTION,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> CrossingReport:
    """Locate where the family's error curve crosses the standard one.

    Scans the gap on a uniform grid, then bisects the first sign change down
    to ``resolution`` in <n>.  Further sign changes are reported in
    ``warning``.
    """
    if not 0 <= mean_min < mean_max:
        raise DomainError(f"need 0 <= mean_min < mean_max, got {mean_min}, {mean_max}")
    grid = np.linspace(mean_min, mean_max, grid_points)
    gaps = np.array([error_gap(family, n_symbols, m, tail_tol) for m in grid])
    signs = np.sign(gaps)
    changes = [i for i in range(grid_points - 1) if signs[i] != signs[i + 1] and signs[i] != 0]

    if not changes:
        worse = float(np.median(gaps)) > 0
        if np.any(signs == 0) or np.any(signs != signs[0]):
            log.warning("gap touches zero without changing sign for %s, N=%d", family, n_symbols)
        direction = Direction.ALWAYS_WORSE if worse else Direction.ALWAYS_BETTER
        return CrossingReport(family.label, family.param, n_symbols, None, direction, float(mean_min), float(mean_max))

    i = changes[0]
    lo, hi = grid[i], grid[i + 1]
    g_lo = gaps[i]
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        g_mid = error_gap(family, n_symbols, mid, tail_tol)
        if g_mid == 0:
            lo = hi = mid
            break
        if math.copysign(1.0, g_mid) == math.copysign(1.0, g_lo):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    direction = Direction.NS_BECOMES_BETTER if gaps[i] > 0 else Direction.NS_BECOMES_WORSE
    warning = None
    if len(changes) > 1:
        others = ", ".join(f"{0.5 * (grid[j] + grid[j + 1]):.4f}" for j in changes[1:])
        warning = f"{len(changes)} sign changes; smallest reported, others near <n> = {others}"
    return CrossingReport(family.label, family.param, n_symbols, float(0.5 * (lo + hi)), direction,
                          float(mean_min), float(mean_max), warning)


def point(
    family: FamilySpec,
    n_symbols: int,
    mean_n: float,
    *,
    verify: bool = False,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> dict:
    """All diagnostics for one (family, N, <n>) as a JSON-ready dict."""
    cal = u_from_mean_photon(family, mean_n, tail_tol=tail_tol)
    ensemble = SignalEnsemble(family, cal.alpha, n_symbols)
    result = helstrom_bound(ensemble, tail_tol, verify=verify)
    stats = photon_stats(family, cal.u, tail_tol)
    out = {
        "family": family.label,
        "param": family.param,
        "N": n_symbols,
        "mean_n": mean_n,
        "calibration": asdict(cal),
        "photon_stats": asdict(stats),
        "p_success": result.p_success,
        "p_error": result.p_error,
        "eigenvalues": result.spectrum.eigenvalues.tolist(),
        "trace_defect": result.spectrum.trace_defect,
        "min_eigenvalue": result.spectrum.min_eigenvalue,
        "oracle_gap": result.oracle_gap,
        "optimality_residual": result.optimality_residual,
    }
    if verify:
        report = verify_optimality(ensemble, tail_tol)
        out["optimality"] = asdict(report)
        out["symmetry_deviation"] = symmetry_check(ensemble, tail_tol)
    return out
