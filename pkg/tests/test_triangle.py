import itertools
import math

import mpmath
import pytest
from pydantic import ValidationError

from app.core.errors import SignatureError
from app.services.triangle import (
    INFINITY,
    TriangleParams,
    build_gram,
    circle_residual_numeric,
    form_defect,
    matrix_trace,
    normalized_product,
    product_eigenvalues,
    product_matrix,
    reflection_matrices,
    relation_defects,
    trace_formula,
)

ALPHAS = [2 * math.pi * i / 100 for i in range(100)]


def test_params_parsing():
    params = TriangleParams(p1=3, p2=3, p3="oo", alpha=7.0)
    assert params.p3 == INFINITY
    assert params.is_mm_infinity
    assert params.m == 3
    assert params.alpha == pytest.approx(7.0 - 2 * math.pi)

    exact = TriangleParams.mm_infinity(5, alpha_exact=(8, 9))
    assert exact.alpha_exact == (8, 1)
    assert exact.alpha == pytest.approx(math.pi / 4)


def test_params_validation():
    with pytest.raises(ValidationError):
        TriangleParams(p1=1, p2=3, p3=INFINITY)
    with pytest.raises(ValueError):
        TriangleParams(p1=3, p2=4, p3=INFINITY).m


@pytest.mark.parametrize("m", range(2, 13))
def test_matrix_trace_matches_formula(m):
    for alpha in ALPHAS:
        params = TriangleParams.mm_infinity(m, alpha)
        gram = build_gram(params)
        product, lift_factor = normalized_product(gram)
        assert lift_factor == 0
        assert abs(matrix_trace(product) - trace_formula(params)) < 1e-9


@pytest.mark.parametrize("m", range(2, 13))
def test_trace_lies_on_circle(m):
    for alpha in ALPHAS:
        assert circle_residual_numeric(TriangleParams.mm_infinity(m, alpha)) < 1e-12


def test_trace_formula_special_values():
    # m = 3, alpha = pi: 8r^2 = 2, so tau = -2 - 3
    tau = trace_formula(TriangleParams.mm_infinity(3, alpha_exact=(2, 1)))
    assert abs(tau - (-5)) < 1e-30
    # m = 2: r = 0, tau = -1 for every alpha
    for alpha in (0.0, 1.0, 4.0):
        assert abs(trace_formula(TriangleParams.mm_infinity(2, alpha)) + 1) < 1e-30


@pytest.mark.parametrize("m,alpha", [(3, 0.5), (7, 2.0), (10, 0.35), (12, 5.0)])
def test_reflection_contracts(m, alpha):
    gram = build_gram(TriangleParams.mm_infinity(m, alpha))
    identity = mpmath.eye(3)
    for reflection in reflection_matrices(gram):
        R = reflection.matrix
        assert mpmath.mnorm(R * R - identity, 1) < 1e-12
        assert form_defect(gram, R) < 1e-12
        assert abs(mpmath.det(R) - 1) < 1e-12
        assert abs(matrix_trace(R) + 1) < 1e-12


def test_gram_structure_and_signature():
    gram = build_gram(TriangleParams.mm_infinity(10, 0.35))
    H = gram.matrix
    for k in range(3):
        assert H[k, k] == 1
    assert mpmath.mnorm(H - H.H, 1) < 1e-30
    assert gram.signature == (2, 1, 0)


def test_degenerate_gram_is_accepted():
    # det H = 2 r^2 (cos alpha - 1) vanishes at alpha = 0
    gram = build_gram(TriangleParams.mm_infinity(5, 0.0))
    assert gram.signature == (2, 0, 1)
    gram = build_gram(TriangleParams.mm_infinity(2, 1.0))
    assert gram.signature[0] == 2


def test_positive_definite_gram_is_rejected():
    with pytest.raises(SignatureError):
        build_gram(TriangleParams(p1=2, p2=2, p3=2))


@pytest.mark.parametrize(
    "params",
    [
        TriangleParams.mm_infinity(4, 1.3),
        TriangleParams.mm_infinity(9, 0.4),
        TriangleParams(p1=3, p2=3, p3=4, alpha=math.pi),
        TriangleParams(p1=4, p2=5, p3=6, alpha=math.pi),
    ],
)
def test_relations_hold(params):
    defects = relation_defects(build_gram(params))
    assert all(value < 1e-9 for value in defects.values())
    expected = 3 + sum(1 for p in params.orders if p != INFINITY)
    assert len(defects) == expected


def test_product_eigenvalues_have_unit_modulus_in_a_window(m10_alpha):
    gram = build_gram(TriangleParams.mm_infinity(10, m10_alpha))
    eigenvalues = product_eigenvalues(gram)
    assert len(eigenvalues) == 3
    for value in eigenvalues:
        assert abs(abs(value) - 1) < 1e-9
    assert abs(mpmath.det(product_matrix(gram)) - 1) < 1e-9
    gaps = [abs(a - b) for a, b in itertools.combinations(eigenvalues, 2)]
    assert min(gaps) > 1e-6
