"""Report assembly shared by the CLI and the HTTP routers."""

import logging
from fractions import Fraction
from typing import List, Optional

import mpmath

from app.core.config import Settings
from app.schemas import (
    Certificate,
    NtFunction,
    NtResult,
    ScanRow,
    SearchSummary,
    WindowModel,
)
from app.services.certify import certify_non_discrete, search_finite_order_traces
from app.services.classify import classify_trace, elliptic_windows, goldman_discriminant
from app.services.exactnum import cyclotomic_polynomial, euler_phi, format_polynomial, moebius
from app.services.triangle import TriangleParams, trace_formula

logger = logging.getLogger(__name__)


def parse_turns(turns: str) -> Fraction:
    """'1/8' or '0.125' as an exact fraction of a full turn."""
    try:
        return Fraction(turns.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid turn value {turns!r}") from exc


def resolve_params(m: int, alpha: Optional[float] = None, alpha_turns: Optional[str] = None) -> TriangleParams:
    """(m,m,inf) parameters from radians or exact rational turns; turns win when both are given."""
    if alpha_turns is not None:
        t = parse_turns(alpha_turns)
        return TriangleParams.mm_infinity(m, alpha_exact=(t.denominator, t.numerator))
    if alpha is None:
        raise ValueError("alpha or alpha_turns is required")
    return TriangleParams.mm_infinity(m, alpha=alpha)


def scan_rows(m: int, alpha_steps: int, config: Settings) -> List[ScanRow]:
    """Trace and class at alpha = 2 pi i / alpha_steps for i in range(alpha_steps)."""
    rows = []
    for i in range(alpha_steps):
        params = TriangleParams.mm_infinity(m, alpha_exact=(alpha_steps, i))
        tau = trace_formula(params, config.precision_bits)
        rows.append(ScanRow(
            alpha=params.alpha,
            tau_re=float(mpmath.re(tau)),
            tau_im=float(mpmath.im(tau)),
            f=float(goldman_discriminant(tau)),
            isometry_class=classify_trace(tau, config.boundary_tol),
        ))
    return rows


def window_report(m: int, alpha_steps: int, config: Settings) -> List[WindowModel]:
    windows = elliptic_windows(m, alpha_steps, config.boundary_tol, config.window_tolerance)
    return [WindowModel(lo=w.lo, hi=w.hi) for w in windows]


def certificate_report(
    m: int,
    alpha: Optional[float],
    alpha_turns: Optional[str],
    n_max: int,
    config: Settings,
) -> Certificate:
    params = resolve_params(m, alpha, alpha_turns)
    return certify_non_discrete(
        params,
        n_max,
        precision_bits=config.precision_bits,
        cap_bits=config.precision_cap_bits,
    )


def search_report(m: int, n_max: int, config: Settings, symmetry_reduced: bool = True) -> SearchSummary:
    result = search_finite_order_traces(
        m,
        n_max,
        symmetry_reduced=symmetry_reduced,
        precision_bits=config.precision_bits,
        cap_bits=config.precision_cap_bits,
    )
    return result.to_summary()


def nt_value(function: NtFunction, x: int) -> NtResult:
    """phi(x), mu(x) or the x-th cyclotomic polynomial."""
    if function == NtFunction.PHI:
        value = euler_phi(x)
    elif function == NtFunction.MOEBIUS:
        value = moebius(x)
    else:
        value = format_polynomial(cyclotomic_polynomial(x))
    return NtResult(function=function, argument=x, value=value)
