import math
from fractions import Fraction as F

import numpy as np
import pytest

from umbral.errors import InvalidParameterError
from umbral.orthogonality import (boundary_term, gram_csv, gram_matrix, inner_product, norm_comparison,
                                  norm_oracle, stated_norm, weight_eval, weight_ode_residual)
from umbral.profiles import Basis, make_power_law, make_sinh_profile

GAMMA_QUARTER_OVER_8 = 0.4532012385277385  # mpmath, 30 digits


def test_weight_values():
    assert weight_eval(Basis.bare(3, 1, -1), 0.0) == pytest.approx(2 ** -1.5, rel=1e-14)
    bp = Basis.prefactored(0, -1, make_power_law(2, 0, 0))
    assert weight_eval(bp, 0.0) == pytest.approx(0.5)
    x = np.linspace(0, 3, 7)
    w = weight_eval(Basis.bare(1, 1, -1), x)
    np.testing.assert_allclose(w / w[0], np.exp(-x ** 2 / 2), rtol=1e-14)


def test_needs_negative_k0():
    with pytest.raises(InvalidParameterError):
        inner_product(Basis.bare(3, 1, 1), 0, 0)


def test_inner_product_examples():
    assert inner_product(Basis.bare(3, 1, -1), 0, 0) == pytest.approx(GAMMA_QUARTER_OVER_8, abs=1e-12)
    assert inner_product(Basis.prefactored(0, -1), 0, 0) == pytest.approx(1.0, rel=1e-13)
    assert abs(inner_product(Basis.bare(3, 1, -1), 0, 1)) < 1e-12


def test_gram_prefactored_alpha0_identity():
    np.testing.assert_allclose(gram_matrix(Basis.prefactored(0, -1), 3), np.eye(4), atol=1e-12)


def test_norm_oracle_examples():
    assert norm_oracle(Basis.prefactored(0, -1), 7) == pytest.approx(1.0)
    assert norm_oracle(Basis.prefactored(F(1, 2), -1), 0) == pytest.approx(0.8862269254527580, rel=1e-14)
    assert norm_oracle(Basis.bare(3, 1, -1), 0) == pytest.approx(GAMMA_QUARTER_OVER_8, rel=1e-14)


@pytest.mark.parametrize("spec", [Basis.bare(3, 1, -1), Basis.bare(1, 2, -2),
                                  Basis.prefactored(F(1, 2), -2), Basis.prefactored(F(-1, 2), -1)])
def test_gram_orthogonality_and_diagonal(spec):
    g = gram_matrix(spec, 10)
    assert np.array_equal(g, g.T)
    d = np.sqrt(np.diag(g))
    off = np.abs(g) / np.outer(d, d)
    np.fill_diagonal(off, 0)
    assert off.max() < 1e-8
    oracle = np.array([norm_oracle(spec, n) for n in range(11)])
    np.testing.assert_allclose(np.diag(g), oracle, rtol=1e-8)


@pytest.mark.parametrize("spec", [Basis.bare(3, 1, -1), Basis.prefactored(F(1, 2), -2),
                                  Basis.prefactored(0, -1, make_sinh_profile())])
def test_two_quadrature_routes_agree(spec):
    g = gram_matrix(spec, 3)
    a = gram_matrix(spec, 3, method="adaptive")
    assert np.max(np.abs(a - g)) < 1e-8 * np.max(np.abs(g))


def test_quoted_constants_agree_only_in_special_cases():
    assert stated_norm(Basis.prefactored(0, -1), 0) == pytest.approx(norm_oracle(Basis.prefactored(0, -1), 0))
    spec = Basis.prefactored(F(1, 2), -2)
    rows = norm_comparison(spec, 2)
    assert all(abs(s - o) > 1e-3 for _, s, o, _ in rows)
    assert all(abs(o - q) < 1e-8 * o for _, _, o, q in rows)


def test_boundary_terms_vanish():
    spec = Basis.bare(3, 1, -1)
    for m, n in ((0, 1), (1, 3), (2, 5)):
        near = [abs(boundary_term(spec, m, n, x)) for x in (1e-3, 1e-5, 1e-7)]
        assert near[2] < 1e-5 and near[2] < 1e-3 * near[0]
        assert abs(boundary_term(spec, m, n, 12.0)) < 1e-30


def test_weight_ode():
    for spec in (Basis.bare(3, 1, -1), Basis.prefactored(F(1, 2), -1, make_power_law(1, 2, 0))):
        x = np.linspace(0.5, 2.0, 7)
        assert np.max(np.abs(weight_ode_residual(spec, x))) < 1e-6


def test_gram_csv_format():
    text = gram_csv(np.array([[1.0, 0.0], [0.0, 2.5]]))
    assert text == "i,j,value\n0,0,1\n0,1,0\n1,0,0\n1,1,2.5\n"
