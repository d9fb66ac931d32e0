"""Complex hyperbolic (p1,p2,p3)-triangles and their reflection generators.

Coordinates are taken in the basis of normalized polar vectors c1, c2, c3,
so the Hermitian form is the Gram matrix H itself and
<u, v> = v^* H u; in particular <z, c_k> is the k-th entry of H z.
Off-diagonal entries are H[j][k] = <c_k, c_j>.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal, Optional, Union

import mpmath
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from app.core.config import settings
from app.core.errors import SignatureError

logger = logging.getLogger(__name__)

INFINITY = "inf"
PValue = Union[int, Literal["inf"]]

_INFINITY_SPELLINGS = {"inf", "infinity", "oo", "∞"}


class TriangleParams(BaseModel):
    """Angles pi/p_k (p_k may be infinite) and the angular invariant alpha."""

    model_config = ConfigDict(frozen=True)

    p1: PValue
    p2: PValue
    p3: PValue
    alpha: float = 0.0
    # (M, j) means e^{i alpha} = w_M^j exactly
    alpha_exact: Optional[tuple[int, int]] = None

    @field_validator("p1", "p2", "p3", mode="before")
    @classmethod
    def _parse_infinity(cls, value: Any) -> Any:
        if isinstance(value, str) and value.strip().lower() in _INFINITY_SPELLINGS:
            return INFINITY
        if isinstance(value, float) and math.isinf(value) and value > 0:
            return INFINITY
        return value

    @field_validator("p1", "p2", "p3")
    @classmethod
    def _check_order(cls, value: PValue) -> PValue:
        if value != INFINITY and value < 2:
            raise ValueError("each p_k must be an integer >= 2 or 'inf'")
        return value

    @model_validator(mode="before")
    @classmethod
    def _resolve_alpha(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        exact = data.get("alpha_exact")
        if exact is not None:
            M, j = exact
            if M < 1:
                raise ValueError("alpha_exact modulus must be positive")
            data["alpha_exact"] = (M, j % M)
            data["alpha"] = 2 * math.pi * (j % M) / M
        elif "alpha" in data:
            data["alpha"] = float(data["alpha"]) % (2 * math.pi)
        return data

    @classmethod
    def mm_infinity(
        cls,
        m: int,
        alpha: float = 0.0,
        alpha_exact: Optional[tuple[int, int]] = None,
    ) -> "TriangleParams":
        """Parameters of an (m,m,inf)-triangle."""
        if alpha_exact is not None:
            return cls(p1=m, p2=m, p3=INFINITY, alpha_exact=alpha_exact)
        return cls(p1=m, p2=m, p3=INFINITY, alpha=alpha)

    @property
    def orders(self) -> tuple[PValue, PValue, PValue]:
        return self.p1, self.p2, self.p3

    @property
    def is_mm_infinity(self) -> bool:
        return self.p1 == self.p2 and self.p1 != INFINITY and self.p3 == INFINITY

    @property
    def m(self) -> int:
        if not self.is_mm_infinity:
            raise ValueError(f"triangle {self.orders} is not of type (m,m,inf)")
        return int(self.p1)


def _cos_pi_over(p: PValue) -> mpmath.mpf:
    if p == INFINITY:
        return mpmath.mpf(1)
    return mpmath.cospi(mpmath.mpf(1) / p)


def radii(params: TriangleParams) -> tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]:
    """r_k = cos(pi/p_k) at the current working precision."""
    return tuple(_cos_pi_over(p) for p in params.orders)


def _phase(params: TriangleParams, fraction: Fraction = Fraction(1)) -> mpmath.mpc:
    # e^{i * fraction * alpha}
    if params.alpha_exact is not None:
        M, j = params.alpha_exact
        turn = mpmath.mpf(2 * j * fraction.numerator) / (M * fraction.denominator)
        return mpmath.mpc(mpmath.cospi(turn), mpmath.sinpi(turn))
    return mpmath.expj(mpmath.mpf(params.alpha) * fraction.numerator / fraction.denominator)


@dataclass(frozen=True)
class GramTriangle:
    """Gram matrix of the normalized polar vectors of a triangle."""

    params: TriangleParams
    matrix: mpmath.matrix
    eigenvalues: tuple[mpmath.mpf, ...]
    precision_bits: int

    @property
    def signature(self) -> tuple[int, int, int]:
        """(positive, negative, zero) eigenvalue counts."""
        tol = settings.signature_tol
        pos = sum(1 for e in self.eigenvalues if e > tol)
        neg = sum(1 for e in self.eigenvalues if e < -tol)
        return pos, neg, len(self.eigenvalues) - pos - neg


@dataclass(frozen=True)
class ReflectionMatrix:
    """Complex reflection in the side C_k, in polar-vector coordinates."""

    index: int
    matrix: mpmath.matrix


def build_gram(params: TriangleParams, precision_bits: int | None = None) -> GramTriangle:
    """Gram matrix with unit diagonal and every off-diagonal carrying e^{i alpha/3}.

    H12 = r3, H23 = r1, H31 = r2 (times the phase), so H12*H23*H31 = r1 r2 r3 e^{i alpha}.
    """
    bits = precision_bits or settings.precision_bits
    with mpmath.workprec(bits):
        r1, r2, r3 = radii(params)
        phase = _phase(params, Fraction(1, 3))

        H = mpmath.matrix(3, 3)
        for k in range(3):
            H[k, k] = mpmath.mpf(1)
        for (i, j), r in (((0, 1), r3), ((1, 2), r1), ((2, 0), r2)):
            H[i, j] = r * phase
            H[j, i] = mpmath.conj(r * phase)

        spectrum = mpmath.eigh(H, eigvals_only=True)
        eigenvalues = tuple(sorted(mpmath.re(spectrum[i]) for i in range(3)))

    gram = GramTriangle(params=params, matrix=H, eigenvalues=eigenvalues, precision_bits=bits)
    pos, neg, _ = gram.signature
    if pos != 2 or neg > 1:
        raise SignatureError("triangle does not embed in H²_ℂ for these parameters")
    logger.debug("gram signature %s for %s", gram.signature, params.orders)
    return gram


def reflection_matrices(gram: GramTriangle) -> tuple[ReflectionMatrix, ReflectionMatrix, ReflectionMatrix]:
    """R_k = -I + 2 e_k (row k of H)."""
    H = gram.matrix
    out = []
    with mpmath.workprec(gram.precision_bits):
        for k in range(3):
            R = -mpmath.eye(3)
            for col in range(3):
                R[k, col] += 2 * H[k, col]
            out.append(ReflectionMatrix(index=k + 1, matrix=R))
    return tuple(out)


def product_matrix(gram: GramTriangle) -> mpmath.matrix:
    """R1 R2 R3."""
    R1, R2, R3 = (r.matrix for r in reflection_matrices(gram))
    with mpmath.workprec(gram.precision_bits):
        return R1 * R2 * R3


def matrix_trace(M: mpmath.matrix) -> mpmath.mpc:
    return sum((M[i, i] for i in range(M.rows)), mpmath.mpc(0))


def max_abs_entry(M: mpmath.matrix) -> mpmath.mpf:
    return max(abs(M[i, j]) for i in range(M.rows) for j in range(M.cols))


def trace_formula(params: TriangleParams, precision_bits: int | None = None) -> mpmath.mpc:
    """tau = 8 r1 r2 r3 e^{i alpha} - (4 (r1^2 + r2^2 + r3^2) - 3)."""
    bits = precision_bits or settings.precision_bits
    with mpmath.workprec(bits):
        r1, r2, r3 = radii(params)
        return 8 * r1 * r2 * r3 * _phase(params) - (4 * (r1**2 + r2**2 + r3**2) - 3)


def normalized_product(gram: GramTriangle) -> tuple[mpmath.matrix, int]:
    """R1 R2 R3 rescaled by the cube root of unity w_3^j matching trace_formula.

    Scaling by a cube root of unity keeps the determinant, so the result is
    still a lift to SU(2,1). Returns the matrix and j.
    """
    M = product_matrix(gram)
    with mpmath.workprec(gram.precision_bits):
        tau = trace_formula(gram.params, gram.precision_bits)
        trace = matrix_trace(M)
        roots = [mpmath.mpc(mpmath.cospi(mpmath.mpf(2 * j) / 3), mpmath.sinpi(mpmath.mpf(2 * j) / 3)) for j in range(3)]
        best = min(range(3), key=lambda j: abs(roots[j] * trace - tau))
        if best:
            logger.info("normalizing product lift by w_3^%d", best)
            M = M * roots[best]
    return M, best


def product_eigenvalues(gram: GramTriangle) -> list[mpmath.mpc]:
    """Eigenvalues of the normalized product R1 R2 R3."""
    M, _ = normalized_product(gram)
    with mpmath.workprec(gram.precision_bits):
        return list(mpmath.eig(M, left=False, right=False))


def form_defect(gram: GramTriangle, R: mpmath.matrix) -> mpmath.mpf:
    """max |R^* H R - H|."""
    with mpmath.workprec(gram.precision_bits):
        return max_abs_entry(R.H * gram.matrix * R - gram.matrix)


def relation_defects(gram: GramTriangle) -> dict[str, mpmath.mpf]:
    """Defects of iota_k^2 = 1 and (iota_{k-1} iota_{k+1})^{p_k} = 1 (finite p_k only)."""
    reflections = [r.matrix for r in reflection_matrices(gram)]
    defects: dict[str, mpmath.mpf] = {}
    with mpmath.workprec(gram.precision_bits):
        identity = mpmath.eye(3)
        for k in range(3):
            defects[f"iota{k + 1}^2"] = max_abs_entry(reflections[k] ** 2 - identity)
        for k, p in enumerate(gram.params.orders):
            if p == INFINITY:
                continue
            prev, nxt = (k - 1) % 3, (k + 1) % 3
            word = reflections[prev] * reflections[nxt]
            defects[f"(iota{prev + 1} iota{nxt + 1})^{p}"] = max_abs_entry(word**p - identity)
    return defects


def circle_residual_numeric(params: TriangleParams, precision_bits: int | None = None) -> mpmath.mpf:
    """| |tau + 8r^2 + 1| - 8r^2 | for an (m,m,inf)-triangle; vanishes for every alpha."""
    m = params.m
    bits = precision_bits or settings.precision_bits
    with mpmath.workprec(bits):
        a = 8 * mpmath.cospi(mpmath.mpf(1) / m) ** 2
        tau = trace_formula(params, bits)
        return abs(abs(tau + a + 1) - a)


def matrix_to_json(M: mpmath.matrix) -> list[list[dict[str, float]]]:
    """Row-major {re, im} pairs."""
    return [
        [{"re": float(mpmath.re(M[i, j])), "im": float(mpmath.im(M[i, j]))} for j in range(M.cols)]
        for i in range(M.rows)
    ]
