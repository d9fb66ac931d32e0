"""Isometry type of the product iota1 iota2 iota3 from its trace."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

import mpmath

from app.core.config import settings
from app.services.triangle import TriangleParams, trace_formula

logger = logging.getLogger(__name__)

TraceValue = Union[int, Fraction, complex, mpmath.mpf, mpmath.mpc]


class IsometryClass(str, Enum):
    REGULAR_ELLIPTIC = "RegularElliptic"
    LOXODROMIC = "Loxodromic"
    # parabolic or special elliptic; the trace alone cannot tell them apart
    BOUNDARY = "Boundary"


def goldman_discriminant(tau: TraceValue) -> Union[Fraction, mpmath.mpf]:
    """f(tau) = |tau|^4 - 8 Re(tau^3) + 18 |tau|^2 - 27.

    Rational input is evaluated exactly.
    """
    if isinstance(tau, (int, Fraction)):
        t = Fraction(tau)
        square = t * t
        return square * square - 8 * t**3 + 18 * square - 27

    t = mpmath.mpc(tau)
    square = abs(t) ** 2
    return square * square - 8 * mpmath.re(t**3) + 18 * square - 27


def classify_trace(tau: TraceValue, tol: float | None = None) -> IsometryClass:
    """Sign of f(tau), with |f| <= tol reported as Boundary."""
    tol = settings.boundary_tol if tol is None else tol
    if tol <= 0:
        raise ValueError("tol must be positive")
    f = goldman_discriminant(tau)
    if abs(f) <= tol:
        return IsometryClass.BOUNDARY
    return IsometryClass.REGULAR_ELLIPTIC if f < 0 else IsometryClass.LOXODROMIC


@dataclass(frozen=True)
class AlphaWindow:
    """A maximal alpha-interval on which the product is regular elliptic."""

    lo: float
    hi: float

    @property
    def midpoint(self) -> float:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def as_pair(self) -> list[float]:
        return [self.lo, self.hi]


def _discriminant_at(m: int, alpha: float | None = None, step: tuple[int, int] | None = None) -> mpmath.mpf:
    if step is not None:
        params = TriangleParams.mm_infinity(m, alpha_exact=step)
    else:
        params = TriangleParams.mm_infinity(m, alpha=alpha)
    return goldman_discriminant(trace_formula(params))


def elliptic_windows(
    m: int,
    resolution: int | None = None,
    tol: float | None = None,
    width: float | None = None,
) -> list[AlphaWindow]:
    """Scan alpha over [0, 2 pi) and return the intervals where f(tau(alpha)) < 0.

    Endpoints are refined by bisection to the configured width. alpha = 0 is
    always on the boundary (tau = -1), so no window wraps around 0.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    resolution = resolution or settings.alpha_steps
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    tol = settings.boundary_tol if tol is None else tol
    width = width or settings.window_tolerance

    def inside(value: mpmath.mpf) -> bool:
        return value < -tol

    def alpha_at(i: int) -> float:
        return 2 * math.pi * i / resolution

    def refine(outside: float, inner: float) -> float:
        while abs(inner - outside) > width:
            mid = (outside + inner) / 2
            if inside(_discriminant_at(m, alpha=mid)):
                inner = mid
            else:
                outside = mid
        return (outside + inner) / 2

    flags = [inside(_discriminant_at(m, step=(resolution, i))) for i in range(resolution)]

    windows: list[AlphaWindow] = []
    i = 0
    while i < resolution:
        if not flags[i]:
            i += 1
            continue
        start = i
        while i < resolution and flags[i]:
            i += 1
        end = i - 1
        lo = 0.0 if start == 0 else refine(alpha_at(start - 1), alpha_at(start))
        hi = 2 * math.pi if end == resolution - 1 else refine(alpha_at(end + 1), alpha_at(end))
        windows.append(AlphaWindow(lo=lo, hi=hi))

    logger.debug("m=%d: %d elliptic window(s) at resolution %d", m, len(windows), resolution)
    return windows
