import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gpsk.calibration import mean_photon_supremum, u_from_mean_photon
from gpsk.errors import DomainError, UnreachableTargetError
from gpsk.states import Family, FamilySpec, mean_photon

FAMILIES = [
    FamilySpec.standard(),
    *(FamilySpec.optical_spin(n) for n in (3, 5, 7, 11)),
    *(FamilySpec.perelomov(s) for s in (0.5, 1.5)),
    *(FamilySpec.barut_girardello(s) for s in (0.5, 1.5)),
    FamilySpec.modified_susskind_glogower(),
]


@pytest.mark.parametrize("family", FAMILIES, ids=str)
def test_zero_target(family):
    r = u_from_mean_photon(family, 0.0)
    assert r.u == 0.0 and r.alpha == 0.0 and r.achieved_mean == 0.0


def test_examples():
    assert u_from_mean_photon(FamilySpec.standard(), 0.25).u == pytest.approx(0.25, abs=1e-10)
    assert u_from_mean_photon(FamilySpec.optical_spin(3), 1.5).u == pytest.approx(1.0, abs=1e-9)
    assert u_from_mean_photon(FamilySpec.perelomov(0.5), 1.0).u == pytest.approx(0.5, abs=1e-10)


@pytest.mark.parametrize("family", FAMILIES, ids=str)
def test_round_trip(family):
    top = min(3.0, 0.95 * mean_photon_supremum(family))
    for t in np.linspace(0.0, top, 30):
        r = u_from_mean_photon(family, t)
        assert abs(mean_photon(family, r.u) - t) < 1e-9
        assert abs(r.achieved_mean - t) < 1e-10 * max(1.0, t)
        assert r.alpha * r.alpha == r.u


@given(st.sampled_from(FAMILIES), st.floats(1e-6, 2.5))
def test_alpha_squared_exact(family, t):
    if t >= mean_photon_supremum(family):
        return
    r = u_from_mean_photon(family, t)
    assert r.alpha * r.alpha == r.u
    assert abs(r.achieved_mean - t) < 1e-10 * max(1.0, t)


@given(st.sampled_from(FAMILIES), st.floats(1e-3, 2.5))
def test_bracket_invariant(family, t):
    if t >= mean_photon_supremum(family):
        return
    seen = []
    u_from_mean_photon(family, t, on_step=lambda lo, hi, mlo, mhi: seen.append((lo, hi, mlo, mhi)))
    assert seen
    for lo, hi, mlo, mhi in seen:
        assert lo < hi
        assert mlo <= t <= mhi


def test_bracket_shrinks():
    widths = []
    u_from_mean_photon(FamilySpec.barut_girardello(1.5), 2.0, on_step=lambda lo, hi, *_: widths.append(hi - lo))
    assert all(b <= a for a, b in zip(widths, widths[1:]))


def test_perelomov_large_target_stays_below_pole():
    r = u_from_mean_photon(FamilySpec.perelomov(0.5), 50.0)
    assert r.u < 1.0
    assert r.achieved_mean == pytest.approx(50.0, abs=1e-10 * 50)


def test_supremum():
    assert mean_photon_supremum(FamilySpec.optical_spin(3)) == 3.0
    assert math.isinf(mean_photon_supremum(FamilySpec.standard()))
    assert 5.0 < mean_photon_supremum(FamilySpec.modified_susskind_glogower()) < 7.0


@pytest.mark.parametrize("family, target", [
    (FamilySpec.optical_spin(3), 3.0),
    (FamilySpec.optical_spin(3), 4.0),
    (FamilySpec.modified_susskind_glogower(), 10.0),
])
def test_unreachable(family, target):
    with pytest.raises(UnreachableTargetError):
        u_from_mean_photon(family, target)


@pytest.mark.parametrize("target", [-1.0, math.nan, math.inf])
def test_bad_target(target):
    with pytest.raises(DomainError):
        u_from_mean_photon(FamilySpec.standard(), target)
