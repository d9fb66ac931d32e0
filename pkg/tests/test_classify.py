import math
from fractions import Fraction

import pytest

from app.services.classify import (
    IsometryClass,
    classify_trace,
    elliptic_windows,
    goldman_discriminant,
)
from app.services.triangle import TriangleParams, trace_formula


def test_discriminant_exact_values():
    # tau = 3 (identity) and tau = -1 sit on the boundary
    assert goldman_discriminant(3) == 0
    assert goldman_discriminant(-1) == 0
    assert goldman_discriminant(0) == -27
    assert goldman_discriminant(Fraction(-5)) == 2048


def test_discriminant_numeric_matches_exact():
    assert abs(goldman_discriminant(complex(-5, 0)) - 2048) < 1e-20


def test_classify_trace():
    assert classify_trace(-5) == IsometryClass.LOXODROMIC
    assert classify_trace(0) == IsometryClass.REGULAR_ELLIPTIC
    assert classify_trace(3) == IsometryClass.BOUNDARY
    # three distinct cube roots of unity: 1 + w + w^2 = 0 is regular elliptic
    assert classify_trace(complex(0, 0)) == IsometryClass.REGULAR_ELLIPTIC


def test_classify_rejects_nonpositive_tolerance():
    with pytest.raises(ValueError):
        classify_trace(0, tol=0)


def test_mm_infinity_at_alpha_zero_is_boundary():
    for m in range(2, 13):
        tau = trace_formula(TriangleParams.mm_infinity(m, 0.0))
        assert classify_trace(tau) == IsometryClass.BOUNDARY


@pytest.mark.parametrize("m", range(2, 9))
def test_no_windows_for_small_m(m):
    assert elliptic_windows(m, resolution=256) == []


def test_windows_for_m10_are_symmetric(m10_windows):
    assert len(m10_windows) == 2
    first, second = m10_windows
    assert first.lo == pytest.approx(0.342078, abs=1e-4)
    assert first.hi == pytest.approx(0.358952, abs=1e-4)
    assert first.lo + second.hi == pytest.approx(2 * math.pi, abs=1e-5)
    assert first.hi + second.lo == pytest.approx(2 * math.pi, abs=1e-5)


def test_window_interior_is_elliptic_and_exterior_is_not(m10_windows):
    for window in m10_windows:
        for t in (0.1, 0.5, 0.9):
            alpha = window.lo + t * window.width
            tau = trace_formula(TriangleParams.mm_infinity(10, alpha))
            assert goldman_discriminant(tau) < 0
        outside = trace_formula(TriangleParams.mm_infinity(10, window.hi + 0.01))
        assert classify_trace(outside) == IsometryClass.LOXODROMIC


def test_window_endpoints_are_roots(m10_windows):
    # f changes sign within the refinement width
    width = 2 * math.pi / 10**6
    for window in m10_windows:
        inside = goldman_discriminant(trace_formula(TriangleParams.mm_infinity(10, window.lo + width)))
        outside = goldman_discriminant(trace_formula(TriangleParams.mm_infinity(10, window.lo - width)))
        assert inside < 0 < outside


def test_windows_grow_with_m():
    widths = [sum(w.width for w in elliptic_windows(m, resolution=512)) for m in (10, 11, 12)]
    assert widths[0] < widths[1] < widths[2]


def test_windows_validate_arguments():
    with pytest.raises(ValueError):
        elliptic_windows(1)
    with pytest.raises(ValueError):
        elliptic_windows(5, resolution=8)
