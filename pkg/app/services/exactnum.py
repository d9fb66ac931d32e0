"""Exact arithmetic in cyclotomic fields Q[w_N].

Elements are stored in the power basis {1, w, ..., w^(phi(N)-1)} after
reduction modulo the N-th cyclotomic polynomial, so two elements are equal
exactly when their dataclass fields are equal. Rational coefficients are
``fractions.Fraction``; the inner loops run on integer numerators over a
common denominator.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Union

import mpmath
from sympy import divisors, factorint

from app.core.config import settings
from app.core.errors import DivisibilityError, ModulusMismatchError, NotAUnitError

logger = logging.getLogger(__name__)

Rational = Fraction
RationalLike = Union[int, Fraction]

# Extra bits carried while evaluating roots of unity; the reported radius
# is stated at the requested precision.
_GUARD_BITS = 16


# ---------------------------------------------------------------------------
# Elementary number theory
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _factor(x: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(factorint(x).items()))


def _require_positive(x: int, name: str = "x") -> None:
    if x < 1:
        raise ValueError(f"{name} must be a positive integer, got {x}")


def euler_phi(x: int) -> int:
    """Euler's totient: the number of units modulo x."""
    _require_positive(x)
    result = x
    for p, _ in _factor(x):
        result -= result // p
    return result


def moebius(x: int) -> int:
    """Moebius function; equals the sum of the primitive x-th roots of unity."""
    _require_positive(x)
    factors = _factor(x)
    if any(e > 1 for _, e in factors):
        return 0
    return -1 if len(factors) % 2 else 1


def extend_residue(k: int, n: int, N: int) -> int:
    """Smallest positive k' with k' = k (mod n) and gcd(k', N) = 1.

    Lifts an exponent that is a unit modulo n to one that is a unit modulo N,
    so the corresponding map on Q[w_N] is a field automorphism. Its
    restriction to Q[w_n] is unchanged.
    """
    _require_positive(n, "n")
    _require_positive(N, "N")
    if N % n:
        raise DivisibilityError(f"{n} does not divide {N}")
    if math.gcd(k, n) != 1:
        raise NotAUnitError(f"{k} is not a unit modulo {n}")

    lifted = k % n or n
    while math.gcd(lifted, N) != 1:
        lifted += n
    return lifted


def units(n: int) -> list[int]:
    """Residues 0 <= k < n coprime to n (for n = 1 this is [0])."""
    _require_positive(n, "n")
    return [k for k in range(n) if math.gcd(k, n) == 1]


# ---------------------------------------------------------------------------
# Integer polynomials (coefficient tuples, lowest degree first)
# ---------------------------------------------------------------------------

def _poly_exact_div(num: tuple[int, ...], den: tuple[int, ...]) -> tuple[int, ...]:
    # den is monic
    rem = list(num)
    shift = len(den) - 1
    quotient = [0] * (len(num) - shift)
    for i in range(len(quotient) - 1, -1, -1):
        c = rem[i + shift]
        quotient[i] = c
        if c:
            for j, d in enumerate(den):
                rem[i + j] -= c * d
    if any(rem):
        raise ArithmeticError("polynomial division left a remainder")
    return tuple(quotient)


def poly_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Product of two integer polynomials."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(N: int) -> tuple[int, ...]:
    """Phi_N as integer coefficients, lowest degree first.

    Computed by exact division of x^N - 1 by Phi_d for every proper divisor d.
    """
    _require_positive(N, "N")
    poly = (-1,) + (0,) * (N - 1) + (1,)
    for d in divisors(N)[:-1]:
        poly = _poly_exact_div(poly, cyclotomic_polynomial(d))
    return poly


def format_polynomial(coeffs: tuple[int, ...], var: str = "x") -> str:
    """Render coefficients as e.g. ``x^4 - x^2 + 1``."""
    parts: list[str] = []
    for degree in range(len(coeffs) - 1, -1, -1):
        c = coeffs[degree]
        if not c:
            continue
        magnitude = abs(c)
        if degree == 0:
            body = str(magnitude)
        else:
            prefix = "" if magnitude == 1 else str(magnitude)
            body = f"{prefix}{var}" if degree == 1 else f"{prefix}{var}^{degree}"
        if not parts:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(parts) if parts else "0"


@lru_cache(maxsize=512)
def _power_table(N: int) -> tuple[tuple[int, ...], ...]:
    # Row j holds w_N^j in the reduced power basis.
    phi = cyclotomic_polynomial(N)
    degree = len(phi) - 1
    rows = []
    current = [1] + [0] * (degree - 1)
    for _ in range(N):
        rows.append(tuple(current))
        top = current[-1]
        current = [0] + current[:-1]
        if top:
            for i in range(degree):
                current[i] -= top * phi[i]
    return tuple(rows)


# ---------------------------------------------------------------------------
# Fraction polynomials, only used for inversion
# ---------------------------------------------------------------------------

def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and not p[-1]:
        p.pop()
    return p


def _fpoly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _fpoly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


def _fpoly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    rem = list(a)
    lead = b[-1]
    shift = len(b) - 1
    if len(rem) <= shift:
        return [], _trim(rem)
    quotient = [Fraction(0)] * (len(rem) - shift)
    for i in range(len(quotient) - 1, -1, -1):
        c = rem[i + shift] / lead
        quotient[i] = c
        if c:
            for j, d in enumerate(b):
                rem[i + j] -= c * d
    return _trim(quotient), _trim(rem[:shift])


# ---------------------------------------------------------------------------
# Cyclotomic elements
# ---------------------------------------------------------------------------

def _to_integer(coeffs: Iterable[Fraction]) -> tuple[list[int], int]:
    coeffs = list(coeffs)
    den = 1
    for c in coeffs:
        den = math.lcm(den, c.denominator)
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def _reduce(N: int, terms: dict[int, Fraction]) -> tuple[Fraction, ...]:
    """Reduce a sum of c_e * w_N^e (e taken mod N) to the power basis."""
    table = _power_table(N)
    degree = len(table[0])
    exponents = [e for e, c in terms.items() if c]
    nums, den = _to_integer(terms[e] for e in exponents)
    out = [0] * degree
    for e, value in zip(exponents, nums):
        for i, t in enumerate(table[e % N]):
            if t:
                out[i] += value * t
    return tuple(Fraction(v, den) for v in out)


def _collect(N: int, terms: Iterable[tuple[int, Fraction]]) -> dict[int, Fraction]:
    acc: dict[int, Fraction] = {}
    for e, c in terms:
        if c:
            key = e % N
            acc[key] = acc.get(key, Fraction(0)) + c
    return acc


@dataclass(frozen=True, slots=True)
class CycloElement:
    """An element of Q[w_N] in canonical reduced form."""

    modulus: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        _require_positive(self.modulus, "modulus")
        if len(self.coeffs) != euler_phi(self.modulus):
            raise ValueError(
                f"expected {euler_phi(self.modulus)} coefficients for modulus "
                f"{self.modulus}, got {len(self.coeffs)}"
            )

    # -- construction ------------------------------------------------------

    @classmethod
    def from_terms(cls, N: int, terms: Iterable[tuple[int, RationalLike]]) -> "CycloElement":
        """Build sum(c * w_N^e) from (exponent, coefficient) pairs."""
        _require_positive(N, "N")
        return cls(N, _reduce(N, _collect(N, ((e, Fraction(c)) for e, c in terms))))

    @classmethod
    def from_rational(cls, value: RationalLike, N: int = 1) -> "CycloElement":
        _require_positive(N, "N")
        return cls(N, (Fraction(value),) + (Fraction(0),) * (euler_phi(N) - 1))

    @classmethod
    def zero(cls, N: int = 1) -> "CycloElement":
        return cls.from_rational(0, N)

    @classmethod
    def one(cls, N: int = 1) -> "CycloElement":
        return cls.from_rational(1, N)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0]

    def terms(self) -> list[tuple[int, Fraction]]:
        """Nonzero (exponent, coefficient) pairs of the reduced form."""
        return [(j, c) for j, c in enumerate(self.coeffs) if c]

    # -- field arithmetic --------------------------------------------------

    def _coerce(self, other: Any) -> "CycloElement":
        if isinstance(other, CycloElement):
            if other.modulus != self.modulus:
                raise ModulusMismatchError(
                    f"moduli {self.modulus} and {other.modulus} differ; unify() first"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElement.from_rational(other, self.modulus)
        return NotImplemented

    def _scale(self, q: Fraction) -> "CycloElement":
        return CycloElement(self.modulus, tuple(c * q for c in self.coeffs))

    def __add__(self, other: Any) -> "CycloElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElement(self.modulus, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CycloElement":
        return CycloElement(self.modulus, tuple(-c for c in self.coeffs))

    def __sub__(self, other: Any) -> "CycloElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElement(self.modulus, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other: Any) -> "CycloElement":
        return -self + other

    def __mul__(self, other: Any) -> "CycloElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_rational():
            return self._scale(other.coeffs[0])
        if self.is_rational():
            return other._scale(self.coeffs[0])

        N = self.modulus
        a, da = _to_integer(self.coeffs)
        b, db = _to_integer(other.coeffs)
        acc = [0] * N
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        acc[(i + j) % N] += x * y

        table = _power_table(N)
        out = [0] * len(self.coeffs)
        for e, value in enumerate(acc):
            if value:
                for i, t in enumerate(table[e]):
                    if t:
                        out[i] += value * t
        den = da * db
        return CycloElement(N, tuple(Fraction(v, den) for v in out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "CycloElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycloElement.one(self.modulus)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __truediv__(self, other: Any) -> "CycloElement":
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self._scale(1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def inverse(self) -> "CycloElement":
        """Multiplicative inverse via the extended Euclidean algorithm with Phi_N."""
        if self.is_zero():
            raise ZeroDivisionError("the zero element has no inverse")
        if self.is_rational():
            return CycloElement.from_rational(1 / self.coeffs[0], self.modulus)

        r0 = [Fraction(c) for c in cyclotomic_polynomial(self.modulus)]
        r1 = _trim(list(self.coeffs))
        s0: list[Fraction] = []
        s1: list[Fraction] = [Fraction(1)]
        while r1:
            q, r = _fpoly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _fpoly_sub(s0, _fpoly_mul(q, s1))

        # Phi_N is irreducible, so the gcd r0 is a nonzero constant.
        unit = r0[0]
        return CycloElement.from_terms(self.modulus, ((j, c / unit) for j, c in enumerate(s0)))

    def conj(self) -> "CycloElement":
        """Complex conjugation w_N -> w_N^(N-1)."""
        return CycloElement.from_terms(self.modulus, ((-j, c) for j, c in self.terms()))

    def real_part(self) -> "CycloElement":
        return (self + self.conj()) / 2

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*w^{j}" for j, c in self.terms()) or "0"
        return f"CycloElement(N={self.modulus}: {body})"


def make_root_of_unity(N: int, j: int) -> CycloElement:
    """Canonical form of w_N^(j mod N)."""
    _require_positive(N, "N")
    return CycloElement.from_terms(N, [(j, 1)])


def lift(a: CycloElement, M: int) -> CycloElement:
    """Represent a in Q[w_M]; requires a.modulus | M."""
    _require_positive(M, "M")
    if M % a.modulus:
        raise DivisibilityError(f"cannot lift from modulus {a.modulus} to {M}")
    if M == a.modulus:
        return a
    step = M // a.modulus
    return CycloElement.from_terms(M, ((j * step, c) for j, c in a.terms()))


def unify(*elements: CycloElement) -> tuple[CycloElement, ...]:
    """Lift all elements to the lcm of their moduli."""
    M = math.lcm(*(e.modulus for e in elements))
    return tuple(lift(e, M) for e in elements)


def galois_apply(a: CycloElement, k: int) -> CycloElement:
    """Image of a under the automorphism w_N -> w_N^k."""
    N = a.modulus
    if math.gcd(k, N) != 1:
        raise NotAUnitError(f"{k} is not a unit modulo {N}; w -> w^{k} is not an automorphism")
    return CycloElement.from_terms(N, ((k * j, c) for j, c in a.terms()))


def galois_orbit_sum(a: CycloElement) -> Fraction:
    """Exact sum of all Galois conjugates of a (the field trace)."""
    N = a.modulus
    acc: dict[int, Fraction] = {}
    for k in units(N):
        for j, c in a.terms():
            key = (k * j) % N
            acc[key] = acc.get(key, Fraction(0)) + c
    total = CycloElement(N, _reduce(N, acc))
    return total.rational_value()


def primitive_root_sum(n: int, e: int) -> Fraction:
    """Sum over units k mod n of sigma_k(w_n^e), by the Moebius closed form."""
    _require_positive(n, "n")
    d = n // math.gcd(e, n)
    return Fraction(moebius(d) * euler_phi(n), euler_phi(d))


# ---------------------------------------------------------------------------
# Numeric embedding and the inequality protocol
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexBall:
    """A complex midpoint with a rigorous error radius."""

    center: mpmath.mpc
    radius: mpmath.mpf
    precision_bits: int

    @property
    def real_bounds(self) -> tuple[mpmath.mpf, mpmath.mpf]:
        return self.center.real - self.radius, self.center.real + self.radius

    @property
    def imag_bounds(self) -> tuple[mpmath.mpf, mpmath.mpf]:
        return self.center.imag - self.radius, self.center.imag + self.radius

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        return abs(self.center - mpmath.mpc(z)) <= self.radius + slack


def _exact_at(c: Fraction, bits: int) -> bool:
    den = c.denominator
    return den & (den - 1) == 0 and abs(c.numerator).bit_length() <= bits


def embed_complex(a: CycloElement, precision_bits: int | None = None) -> ComplexBall:
    """Evaluate a at w_N = exp(2 pi i / N) with an error radius."""
    bits = precision_bits or settings.precision_bits
    if bits < 53:
        raise ValueError(f"precision must be at least 53 bits, got {bits}")

    N = a.modulus
    with mpmath.workprec(bits + _GUARD_BITS):
        total = mpmath.mpc(0)
        mass = mpmath.mpf(0)
        for j, c in a.terms():
            value = mpmath.mpf(c.numerator) / c.denominator
            if j == 0:
                total += value
                if not _exact_at(c, bits):
                    mass += abs(value)
                continue
            turn = mpmath.mpf(2 * j) / N
            total += value * mpmath.mpc(mpmath.cospi(turn), mpmath.sinpi(turn))
            mass += abs(value)
        radius = mass * mpmath.ldexp(mpmath.mpf(1), -bits + 2)
    return ComplexBall(center=total, radius=radius, precision_bits=bits)


class RealSign(str, Enum):
    NEGATIVE = "negative"
    ZERO = "zero"
    POSITIVE = "positive"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SignResult:
    sign: RealSign
    precision_bits: int | None  # None when settled exactly


def real_sign(
    a: CycloElement,
    precision_bits: int | None = None,
    cap_bits: int | None = None,
) -> SignResult:
    """Sign of Re(a).

    The exact zero test runs first; otherwise the ball embedding is evaluated
    with doubling precision until it excludes zero or the cap is reached.
    """
    re = a.real_part()
    if re.is_rational():
        q = re.rational_value()
        if q == 0:
            return SignResult(RealSign.ZERO, None)
        return SignResult(RealSign.NEGATIVE if q < 0 else RealSign.POSITIVE, None)

    bits = precision_bits or settings.precision_bits
    cap = max(cap_bits or settings.precision_cap_bits, bits)
    while True:
        lo, hi = embed_complex(re, bits).real_bounds
        if hi < 0:
            return SignResult(RealSign.NEGATIVE, bits)
        if lo > 0:
            return SignResult(RealSign.POSITIVE, bits)
        if bits >= cap:
            logger.warning("sign of %r inconclusive at %d bits", re, bits)
            return SignResult(RealSign.INCONCLUSIVE, bits)
        logger.debug("escalating precision from %d bits", bits)
        bits = min(2 * bits, cap)


def compare_real(
    a: CycloElement,
    bound: RationalLike,
    precision_bits: int | None = None,
    cap_bits: int | None = None,
) -> SignResult:
    """Sign of Re(a) - bound."""
    return real_sign(a - Fraction(bound), precision_bits, cap_bits)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def element_to_json(a: CycloElement) -> dict[str, Any]:
    return {"N": a.modulus, "coeffs": [str(c) for c in a.coeffs]}


def element_from_json(data: dict[str, Any]) -> CycloElement:
    return CycloElement(int(data["N"]), tuple(Fraction(c) for c in data["coeffs"]))
