"""Exact certification that no regular elliptic product has finite order.

A finite-order regular elliptic product has trace w_n^k1 + w_n^k2 + w_n^k3
with k1 + k2 + k3 = 0 (mod n). The search below enumerates such traces up to
a bound on n and pushes them through four exact filters:

  a. regular ellipticity (three distinct eigenvalue exponents),
  b. the phi-bound sum 1/phi(d_i) > 1,
  c. Re(sigma_k(tau)) <= -1 for every Galois conjugate,
  d. the circle equation |tau + 8r^2 + 1| = 8r^2 for r = cos(pi/m).

Filters a-c do not depend on m and are cached per n.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath

from app.core.config import settings
from app.core.errors import DivisibilityError, NotAUnitError
from app.schemas import (
    CandidateModel,
    Certificate,
    CheckOutcome,
    CheckRecord,
    ComplexValue,
    SearchBounds,
    SearchSummary,
    Verdict,
)
from app.services.classify import IsometryClass, classify_trace, goldman_discriminant
from app.services.exactnum import (
    CycloElement,
    RealSign,
    compare_real,
    euler_phi,
    extend_residue,
    galois_apply,
    galois_orbit_sum,
    lift,
    make_root_of_unity,
    moebius,
    primitive_root_sum,
    units,
)
from app.services.triangle import (
    TriangleParams,
    build_gram,
    matrix_trace,
    normalized_product,
    product_eigenvalues,
    relation_defects,
    trace_formula,
)

logger = logging.getLogger(__name__)

THEOREM = (
    "An (m,m,inf)-triangle group is not discrete if the product of the three "
    "generators is regular elliptic."
)
DICHOTOMY = (
    "If the regular elliptic product has finite order the representation is not "
    "injective; if it has infinite order the cyclic group it generates, and hence "
    "the triangle group, is not discrete."
)

REJECT_NOT_REGULAR = "not_regular_elliptic"
REJECT_PHI_BOUND = "phi_bound"
REJECT_GALOIS = "galois_real_part"
REJECT_CIRCLE = "circle_equation"
REJECTION_KEYS = (REJECT_NOT_REGULAR, REJECT_PHI_BOUND, REJECT_GALOIS, REJECT_CIRCLE)

CASE_PHI_ONE_IDENTITY = "phi_one_identity"
CASE_PHI_ONE_HALF = "phi_one_half"
CASE_PHI_TWO_TWO = "phi_two_two"
CASE_KEYS = (CASE_PHI_ONE_IDENTITY, CASE_PHI_ONE_HALF, CASE_PHI_TWO_TWO)


@dataclass(frozen=True, order=True)
class TraceCandidate:
    """A hypothetical finite-order trace w_n^k1 + w_n^k2 + w_n^k3."""

    n: int
    k1: int
    k2: int
    k3: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        for name in ("k1", "k2", "k3"):
            object.__setattr__(self, name, getattr(self, name) % self.n)
        if (self.k1 + self.k2 + self.k3) % self.n:
            raise ValueError(f"exponents {self.exponents} do not sum to 0 mod {self.n}")

    @property
    def exponents(self) -> tuple[int, int, int]:
        return self.k1, self.k2, self.k3

    @property
    def is_minimal(self) -> bool:
        return math.gcd(self.k1, self.k2, self.k3, self.n) == 1

    @property
    def d_values(self) -> tuple[int, int, int]:
        return tuple(self.n // math.gcd(k, self.n) for k in self.exponents)

    @property
    def is_regular_elliptic(self) -> bool:
        # f(tau) < 0 exactly when the three unit eigenvalues are distinct
        return len(set(self.exponents)) == 3

    def normalized(self) -> "TraceCandidate":
        return TraceCandidate(self.n, *sorted(self.exponents))

    def galois_image(self, u: int) -> "TraceCandidate":
        return TraceCandidate(self.n, *(u * k for k in self.exponents))

    def to_model(self) -> CandidateModel:
        return CandidateModel(n=self.n, k1=self.k1, k2=self.k2, k3=self.k3)


# ---------------------------------------------------------------------------
# Exact traces and the circle equation
# ---------------------------------------------------------------------------

def candidate_trace(c: TraceCandidate, N: int | None = None) -> CycloElement:
    """w_n^k1 + w_n^k2 + w_n^k3 in Q[w_N]."""
    N = N or c.n
    if N % c.n:
        raise DivisibilityError(f"{c.n} does not divide {N}")
    step = N // c.n
    return CycloElement.from_terms(N, ((k * step, 1) for k in c.exponents))


def eight_r_squared(m: int, N: int | None = None) -> CycloElement:
    """8 r^2 = 2 (w_2m + w_2m^-1)^2 with r = cos(pi/m), in Q[w_N]."""
    if m < 2:
        raise ValueError("m must be >= 2")
    N = N or 2 * m
    if N % (2 * m):
        raise DivisibilityError(f"{2 * m} does not divide {N}")
    two_r = make_root_of_unity(2 * m, 1) + make_root_of_unity(2 * m, -1)
    return lift(2 * two_r * two_r, N)


def circle_residual(tau: CycloElement, m: int) -> CycloElement:
    """(tau + 8r^2 + 1)(conj(tau) + 8r^2 + 1) - (8r^2)^2, in Q[w_lcm(N, 2m)]."""
    N = math.lcm(tau.modulus, 2 * m)
    tau = lift(tau, N)
    a = eight_r_squared(m, N)
    shifted = tau + a + 1
    return shifted * shifted.conj() - a * a


def circle_residual_exact(c: TraceCandidate, m: int) -> CycloElement:
    """Circle residual of a candidate; zero iff tau = 8r^2 e^{i alpha} - (8r^2 + 1) for a real alpha."""
    return circle_residual(candidate_trace(c), m)


def on_circle_trace(m: int, M: int, j: int) -> CycloElement:
    """The exact trace 8r^2 w_M^j - (8r^2 + 1) in Q[w_lcm(M, 2m)]."""
    N = math.lcm(M, 2 * m)
    a = eight_r_squared(m, N)
    return a * make_root_of_unity(N, j * (N // M)) - a - 1


# ---------------------------------------------------------------------------
# Individual checks
# ---------------------------------------------------------------------------

def check_galois_circle(
    target: Union[TraceCandidate, CycloElement],
    m: int,
    k: int,
    precision_bits: int | None = None,
) -> CheckRecord:
    """Apply sigma_k to the circle equation and test Re(sigma_k(tau)) <= -1.

    k must be a unit modulo the trace's own modulus n; it is lifted to a unit
    modulo N = lcm(n, 2m) before applying the automorphism.
    """
    if isinstance(target, TraceCandidate):
        n = target.n
        tau = candidate_trace(target)
        described = {"candidate": target.to_model().model_dump()}
    else:
        n = target.modulus
        tau = target
        described = {"trace_modulus": n, "trace": [str(c) for c in target.coeffs]}
    if math.gcd(k, n) != 1:
        raise NotAUnitError(f"{k} is not a unit modulo {n}")

    N = math.lcm(n, 2 * m)
    k_lift = extend_residue(k, n, N)
    tau_N = lift(tau, N)
    a = eight_r_squared(m, N)

    residual = circle_residual(tau_N, m)
    image = galois_apply(residual, k_lift)
    sigma_tau = galois_apply(tau_N, k_lift)
    sigma_a = galois_apply(a, k_lift)
    shifted = sigma_tau + sigma_a + 1
    recomputed = shifted * shifted.conj() - sigma_a * sigma_a
    sign = compare_real(sigma_tau, -1, precision_bits)

    real_part_ok = sign.sign in (RealSign.NEGATIVE, RealSign.ZERO)
    details = {
        "N": N,
        "k_lifted": k_lift,
        "residual_zero": residual.is_zero(),
        "image_zero": image.is_zero(),
        "image_equals_recomputed": image == recomputed,
        "sigma_8r2_nonnegative": compare_real(sigma_a, 0, precision_bits).sign != RealSign.NEGATIVE,
        "re_sigma_tau_plus_one": sign.sign.value,
    }

    if sign.sign == RealSign.INCONCLUSIVE:
        outcome = CheckOutcome.INCONCLUSIVE
    elif not residual.is_zero():
        outcome = CheckOutcome.OFF_CIRCLE
    elif image.is_zero() and image == recomputed and real_part_ok:
        outcome = CheckOutcome.PASS
    else:
        outcome = CheckOutcome.FAIL

    return CheckRecord(
        name="galois_circle",
        inputs={**described, "m": m, "k": k},
        outcome=outcome,
        precision_bits=sign.precision_bits,
        details=details,
    )


def _phi_sum(c: TraceCandidate) -> Fraction:
    return sum((Fraction(1, euler_phi(d)) for d in c.d_values), Fraction(0))


def check_phi_bound(c: TraceCandidate) -> CheckRecord:
    """Exact sum of 1/phi(d_i) with d_i = n / gcd(k_i, n); the filter is S > 1."""
    phi_n = euler_phi(c.n)
    terms = []
    for k, d in zip(c.exponents, c.d_values):
        phi_d = euler_phi(d)
        terms.append({
            "k": k,
            "d": d,
            "phi_d": phi_d,
            "orbit_sum": str(Fraction(moebius(d) * phi_n, phi_d)),
            "orbit_bound": str(Fraction(phi_n, phi_d)),
        })
    total = _phi_sum(c)

    return CheckRecord(
        name="phi_bound",
        inputs={"candidate": c.to_model().model_dump()},
        outcome=CheckOutcome.PASS if total > 1 else CheckOutcome.FAIL,
        details={
            "terms": terms,
            "sum": str(total),
            "strict_holds": total > 1,
            "non_strict_holds": total >= 1,
        },
    )


def orbit_sum_identity(c: TraceCandidate) -> tuple[Fraction, Fraction, Fraction]:
    """(direct exact orbit sum of tau, Moebius closed form, bound sum phi(n)/phi(d_i))."""
    direct = galois_orbit_sum(candidate_trace(c))
    closed = sum((primitive_root_sum(c.n, k) for k in c.exponents), Fraction(0))
    bound = sum((Fraction(euler_phi(c.n), euler_phi(d)) for d in c.d_values), Fraction(0))
    return direct, closed, bound


def classify_case(c: TraceCandidate) -> str:
    """Which branch of the closing case analysis a phi-bound survivor falls into."""
    d = c.d_values
    if 1 in d:
        return CASE_PHI_ONE_IDENTITY
    if 2 in d:
        return CASE_PHI_ONE_HALF
    if sum(1 for x in d if euler_phi(x) == 2) >= 2:
        return CASE_PHI_TWO_TWO
    raise ValueError(f"{c} does not satisfy the phi bound")


# ---------------------------------------------------------------------------
# phi-triples
# ---------------------------------------------------------------------------

Pattern = tuple[Union[int, None], Union[int, None], Union[int, None]]


@dataclass(frozen=True)
class PhiTripleFamily:
    """Sorted triples (a, b, c) with 1/a + 1/b + 1/c > 1; None marks a free entry."""

    pattern: Pattern
    realizable: bool
    members: tuple[tuple[int, int, int], ...] = ()


def phi_values(bound: int) -> list[int]:
    """All values phi(x) <= bound, ascending."""
    # phi(x) >= sqrt(x / 2)
    return sorted({v for v in (euler_phi(x) for x in range(1, 2 * bound * bound + 3)) if v <= bound})


def spherical_patterns(values: list[int]) -> list[Pattern]:
    """Patterns of sorted triples from ``values`` whose reciprocal sum exceeds 1."""
    out: list[Pattern] = []
    for a in values:
        if Fraction(3, a) <= 1:
            break
        if Fraction(1, a) >= 1:
            out.append((a, None, None))
            continue
        for b in values:
            if b < a:
                continue
            if Fraction(1, a) + Fraction(2, b) <= 1:
                break
            if Fraction(1, a) + Fraction(1, b) >= 1:
                out.append((a, b, None))
                continue
            for c in values:
                if c < b:
                    continue
                if Fraction(1, a) + Fraction(1, b) + Fraction(1, c) <= 1:
                    break
                out.append((a, b, c))
    return out


def _matches(pattern: Pattern, triple: tuple[int, int, int]) -> bool:
    return all(p is None or p == t for p, t in zip(pattern, triple))


def enumerate_phi_triples(max_value: int = 12) -> list[PhiTripleFamily]:
    """The realizable families of (phi(d1), phi(d2), phi(d3)) with reciprocal sum > 1.

    Members list the concrete sorted triples with entries <= max_value.
    """
    values = phi_values(max_value)
    families = []
    for pattern in spherical_patterns(values):
        members = tuple(
            (a, b, c)
            for a in values
            for b in values
            for c in values
            if a <= b <= c
            and Fraction(1, a) + Fraction(1, b) + Fraction(1, c) > 1
            and _matches(pattern, (a, b, c))
        )
        families.append(PhiTripleFamily(pattern=pattern, realizable=True, members=members))
    return families


def unrealizable_patterns() -> list[PhiTripleFamily]:
    """Integer patterns that no triple of phi-values can fill (they need an odd value > 1)."""
    realizable = set(spherical_patterns(phi_values(12)))
    return [
        PhiTripleFamily(pattern=p, realizable=False)
        for p in spherical_patterns(list(range(1, 64)))
        if p not in realizable
    ]


# ---------------------------------------------------------------------------
# Exhaustive search
# ---------------------------------------------------------------------------

def _canonical(exponents: tuple[int, int, int], n: int, unit_group: list[int]) -> tuple[int, int, int]:
    return min(tuple(sorted((u * k) % n for k in exponents)) for u in unit_group)


def _enumerate_candidates(n: int, symmetry_reduced: bool):
    if symmetry_reduced:
        unit_group = units(n)
        for k1 in range(n):
            for k2 in range(k1, n):
                k3 = (-k1 - k2) % n
                if k3 < k2 or math.gcd(k1, k2, k3, n) != 1:
                    continue
                if _canonical((k1, k2, k3), n, unit_group) == (k1, k2, k3):
                    yield TraceCandidate(n, k1, k2, k3)
    else:
        for k1 in range(n):
            for k2 in range(n):
                k3 = (-k1 - k2) % n
                if math.gcd(k1, k2, k3, n) == 1:
                    yield TraceCandidate(n, k1, k2, k3)


def _galois_real_parts(c: TraceCandidate, precision_bits: int | None, cap_bits: int | None) -> tuple[bool | None, int | None]:
    # True: Re(sigma_k(tau)) <= -1 for all k; False: some conjugate violates it; None: inconclusive
    tau = candidate_trace(c)
    verdict: bool | None = True
    used: int | None = None
    for k in units(c.n):
        result = compare_real(galois_apply(tau, k), -1, precision_bits, cap_bits)
        if result.precision_bits is not None:
            used = max(used or 0, result.precision_bits)
        if result.sign == RealSign.POSITIVE:
            return False, used
        if result.sign == RealSign.INCONCLUSIVE:
            verdict = None
    return verdict, used


@dataclass(frozen=True)
class _Prefiltered:
    examined: int
    rejections: tuple[tuple[str, int], ...]
    cases: tuple[tuple[str, int], ...]
    passed: tuple[TraceCandidate, ...]
    inconclusive: tuple[TraceCandidate, ...]
    max_precision_bits: int | None


@lru_cache(maxsize=256)
def _prefilter(n: int, symmetry_reduced: bool, precision_bits: int | None, cap_bits: int | None) -> _Prefiltered:
    rejections: Counter = Counter()
    cases: Counter = Counter()
    passed, inconclusive = [], []
    examined = 0
    used: int | None = None

    for c in _enumerate_candidates(n, symmetry_reduced):
        examined += 1
        if not c.is_regular_elliptic:
            rejections[REJECT_NOT_REGULAR] += 1
            continue
        if not _phi_sum(c) > 1:
            rejections[REJECT_PHI_BOUND] += 1
            continue
        cases[classify_case(c)] += 1
        verdict, bits = _galois_real_parts(c, precision_bits, cap_bits)
        if bits is not None:
            used = max(used or 0, bits)
        if verdict is False:
            rejections[REJECT_GALOIS] += 1
        elif verdict is None:
            inconclusive.append(c)
        else:
            passed.append(c)

    logger.debug("n=%d: %d examined, %d reach the circle test", n, examined, len(passed))
    return _Prefiltered(
        examined=examined,
        rejections=tuple(rejections.items()),
        cases=tuple(cases.items()),
        passed=tuple(passed),
        inconclusive=tuple(inconclusive),
        max_precision_bits=used,
    )


@lru_cache(maxsize=65536)
def _on_circle(c: TraceCandidate, m: int) -> bool:
    return circle_residual_exact(c, m).is_zero()


@dataclass
class SearchResult:
    m: int
    n_max: int
    symmetry_reduced: bool
    candidates_examined: int = 0
    rejections: dict[str, int] = field(default_factory=lambda: dict.fromkeys(REJECTION_KEYS, 0))
    case_families: dict[str, int] = field(default_factory=lambda: dict.fromkeys(CASE_KEYS, 0))
    inconclusive: int = 0
    survivor_count: int = 0
    survivors: list[TraceCandidate] = field(default_factory=list)
    max_precision_bits: int | None = None

    def to_summary(self) -> SearchSummary:
        return SearchSummary(
            m=self.m,
            n_max=self.n_max,
            symmetry_reduced=self.symmetry_reduced,
            candidates_examined=self.candidates_examined,
            rejections=dict(self.rejections),
            case_families=dict(self.case_families),
            inconclusive=self.inconclusive,
            survivor_count=self.survivor_count,
            survivors=[c.to_model() for c in self.survivors],
            max_precision_bits=self.max_precision_bits,
        )


def search_finite_order_traces(
    m: int,
    n_max: int,
    symmetry_reduced: bool = True,
    precision_bits: int | None = None,
    cap_bits: int | None = None,
) -> SearchResult:
    """Enumerate minimal candidates with n <= n_max and return the circle-consistent regular elliptic ones.

    With symmetry reduction only one representative per orbit of permutations
    and Galois action is examined; the circle test is then run on every Galois
    conjugate of the representative, since the circle for fixed m is not
    Galois-stable. Survivors are sorted, de-duplicated exponent triples.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")

    result = SearchResult(m=m, n_max=n_max, symmetry_reduced=symmetry_reduced)
    survivors: set[TraceCandidate] = set()

    for n in range(1, n_max + 1):
        stage = _prefilter(n, symmetry_reduced, precision_bits, cap_bits)
        result.candidates_examined += stage.examined
        for key, count in stage.rejections:
            result.rejections[key] += count
        for key, count in stage.cases:
            result.case_families[key] += count
        result.inconclusive += len(stage.inconclusive)
        if stage.max_precision_bits is not None:
            result.max_precision_bits = max(result.max_precision_bits or 0, stage.max_precision_bits)

        for c in stage.passed:
            if symmetry_reduced:
                members = {c.galois_image(u).normalized() for u in units(n)}
            else:
                members = {c.normalized()}
            hits = [member for member in members if _on_circle(member, m)]
            if hits:
                result.survivor_count += 1
                survivors.update(hits)
            else:
                result.rejections[REJECT_CIRCLE] += 1

    result.survivors = sorted(survivors)
    if result.survivors:
        logger.warning("m=%d: %d circle-consistent finite-order trace(s) found", m, len(result.survivors))
    logger.info(
        "m=%d n_max=%d: %d examined, %d survivors, %d inconclusive",
        m, n_max, result.candidates_examined, result.survivor_count, result.inconclusive,
    )
    return result


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

def _complex(z: mpmath.mpc) -> ComplexValue:
    return ComplexValue(re=float(mpmath.re(z)), im=float(mpmath.im(z)))


def certify_non_discrete(
    params: TriangleParams,
    n_max: int,
    precision_bits: int | None = None,
    cap_bits: int | None = None,
    symmetry_reduced: bool = True,
) -> Certificate:
    """Classify the product for these parameters and, if regular elliptic, certify it has no finite order <= n_max."""
    m = params.m
    bits = precision_bits or settings.precision_bits
    checks: list[CheckRecord] = []

    tau = trace_formula(params, bits)
    f = goldman_discriminant(tau)
    isometry_class = classify_trace(tau)
    checks.append(CheckRecord(
        name="trace_formula",
        inputs={"m": m, "alpha": params.alpha},
        outcome=CheckOutcome.PASS,
        precision_bits=bits,
        details={"tau": _complex(tau).model_dump()},
    ))

    gram = build_gram(params, bits)
    product, lift_factor = normalized_product(gram)
    gap = abs(matrix_trace(product) - tau)
    checks.append(CheckRecord(
        name="trace_cross_validation",
        inputs={"m": m, "alpha": params.alpha},
        outcome=CheckOutcome.PASS if gap < 1e-9 else CheckOutcome.FAIL,
        precision_bits=bits,
        details={"matrix_vs_formula": float(gap), "lift_factor": lift_factor},
    ))
    defects = {name: float(value) for name, value in relation_defects(gram).items()}
    checks.append(CheckRecord(
        name="relations",
        inputs={"orders": [str(p) for p in params.orders]},
        outcome=CheckOutcome.PASS if max(defects.values()) < 1e-9 else CheckOutcome.FAIL,
        precision_bits=bits,
        details=defects,
    ))
    checks.append(CheckRecord(
        name="classification",
        inputs={"tau": _complex(tau).model_dump(), "tol": settings.boundary_tol},
        outcome=CheckOutcome.PASS,
        precision_bits=bits,
        details={"f": float(f), "class": isometry_class.value},
    ))

    certificate = Certificate(
        params=params,
        tau=_complex(tau),
        isometry_class=isometry_class,
        verdict=Verdict.NOT_APPLICABLE,
        lift_factor=lift_factor,
        checks=checks,
        basis=THEOREM,
    )
    if isometry_class != IsometryClass.REGULAR_ELLIPTIC:
        logger.info("m=%d alpha=%s is %s; nothing to certify", m, params.alpha, isometry_class.value)
        return certificate

    eigenvalues = product_eigenvalues(gram)
    moduli = [float(abs(e)) for e in eigenvalues]
    separation = min(float(abs(eigenvalues[i] - eigenvalues[j])) for i in range(3) for j in range(i + 1, 3))
    unit_ok = all(abs(x - 1) < 1e-6 for x in moduli)
    checks.append(CheckRecord(
        name="eigenvalues",
        inputs={"m": m, "alpha": params.alpha},
        outcome=CheckOutcome.PASS if unit_ok and separation > 1e-6 else CheckOutcome.FAIL,
        precision_bits=bits,
        details={"moduli": moduli, "min_separation": separation},
    ))

    families = enumerate_phi_triples()
    checks.append(CheckRecord(
        name="phi_triple_families",
        inputs={},
        outcome=CheckOutcome.PASS,
        details={
            "realizable": [list(f.pattern) for f in families],
            "unrealizable": [list(f.pattern) for f in unrealizable_patterns()],
        },
    ))

    cube_root = TraceCandidate(3, 1, 1, 1)
    cube_residual = circle_residual_exact(cube_root, m)
    checks.append(CheckRecord(
        name="cube_root_family_exclusion",
        inputs={"candidate": cube_root.to_model().model_dump(), "m": m},
        outcome=CheckOutcome.FAIL if cube_residual.is_zero() else CheckOutcome.PASS,
        details={
            "residual_zero": cube_residual.is_zero(),
            "note": (
                "Both Galois conjugates of 3w_3 have real part -3/2, so the real-part "
                "constraint does not exclude tau = 3w_3^(+-1); the exact circle equation "
                "does (it would need 8r^2 = 7)."
            ),
        },
    ))
    checks.append(CheckRecord(
        name="phi_bound_form",
        inputs={},
        outcome=CheckOutcome.PASS,
        details={
            "filter": "sum 1/phi(d_i) > 1",
            "recorded": "sum 1/phi(d_i) >= 1",
            "note": "the strict form is derived from Re(sigma_k(tau)) < -1 summed over k and is the one used",
        },
    ))

    result = search_finite_order_traces(m, n_max, symmetry_reduced, bits, cap_bits)
    summary = result.to_summary()
    accounted = sum(result.rejections.values()) + result.survivor_count + result.inconclusive
    if result.inconclusive:
        search_outcome = CheckOutcome.INCONCLUSIVE
    elif result.survivors or accounted != result.candidates_examined:
        search_outcome = CheckOutcome.FAIL
    else:
        search_outcome = CheckOutcome.PASS
    checks.append(CheckRecord(
        name="exhaustive_search",
        inputs={"m": m, "n_max": n_max, "symmetry_reduced": symmetry_reduced},
        outcome=search_outcome,
        precision_bits=result.max_precision_bits,
        details={"accounted": accounted},
    ))

    failed = any(c.outcome == CheckOutcome.FAIL for c in checks)
    if search_outcome == CheckOutcome.PASS and not failed:
        verdict = Verdict.NON_DISCRETE_OR_NON_FAITHFUL
    else:
        verdict = Verdict.INCONCLUSIVE
    logger.info("m=%d alpha=%s: verdict %s", m, params.alpha, verdict.value)

    return certificate.model_copy(update={
        "verdict": verdict,
        "n_max": n_max,
        "checks": checks,
        "search": summary,
        "search_bounds": SearchBounds(n_max=n_max, m=m),
    })


def certificate_text(certificate: Certificate) -> str:
    """Human-readable certificate."""
    p = certificate.params
    lines = [
        f"Triangle ({p.p1},{p.p2},{p.p3}), alpha = {p.alpha!r}",
        f"tau = {certificate.tau.re!r} {certificate.tau.im:+.17g}i",
        f"class: {certificate.isometry_class.value}",
        f"verdict: {certificate.verdict.value}",
        f"SU(2,1) lift factor: w_3^{certificate.lift_factor}",
    ]
    if certificate.search is not None:
        s = certificate.search
        lines.append(
            f"search over orders n <= {s.n_max} for m = {s.m}: "
            f"{s.candidates_examined} examined, {s.survivor_count} survivors, {s.inconclusive} inconclusive"
        )
    if certificate.verdict == Verdict.NON_DISCRETE_OR_NON_FAITHFUL:
        lines.append(
            f"The product is regular elliptic and has no finite order whose trace uses roots of "
            f"unity of order <= {certificate.n_max}."
        )
        lines.append(DICHOTOMY)
        lines.append(f"Basis: {certificate.basis}")
    lines.append("checks:")
    for check in certificate.checks:
        bits = "-" if check.precision_bits is None else f"{check.precision_bits} bits"
        lines.append(f"  {check.name}: {check.outcome.value} ({bits})")
    return "\n".join(lines)
