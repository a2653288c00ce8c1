from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from umbral.errors import InvalidParameterError
from umbral.ladder import (LadderState, apply_m, apply_number, apply_p, closed_form_coeffs,
                           monomial)

ALPHAS = [F(-3, 4), F(-1, 2), F(0), F(1, 2), F(2)]
K0S = [F(-1), F(-2)]


def S(alpha, k0, *cs):
    return LadderState(alpha, k0, tuple(cs))


def test_apply_m_seed_gives_first_eigenfunction():
    assert apply_m(S(0, -1, 1)).coeffs == (-1, 1)


def test_apply_m_zero_state():
    assert apply_m(S(F(1, 2), -1)).coeffs == ()


def test_apply_m_two_steps_quartic_family():
    out = apply_m(S(F(-3, 4), -1, -1, 4))
    assert out.coeffs == (1, -8, F(16, 5))


def test_apply_p_kills_seed():
    assert apply_p(S(F(1, 3), -1, 5)).coeffs == ()


def test_apply_p_lowers_u2():
    assert apply_p(S(0, -1, 1, -2, F(1, 2))).coeffs == (-2, 2)


def test_apply_p_on_e1():
    assert apply_p(S(F(-1, 2), -1, 0, 1)).coeffs == (F(1, 2),)


@pytest.mark.parametrize("n, alpha, expected", [
    (0, F(1, 2), (1,)),
    (2, 0, (1, -2, F(1, 2))),
    (1, F(-3, 4), (-1, 4)),
])
def test_monomial_examples(n, alpha, expected):
    assert monomial(n, alpha, -1).coeffs == expected


def test_number_operator_on_u2():
    assert apply_number(monomial(2, 0, -1)).coeffs == (3, -6, F(3, 2))


def test_number_operator_seed_and_zero():
    assert apply_number(monomial(0, F(1, 2), -2)) == monomial(0, F(1, 2), -2)
    assert apply_number(S(0, -1)).coeffs == ()


@pytest.mark.parametrize("n, expected", [(0, (1,)), (1, (-1, 1)), (2, (1, -2, F(1, 2)))])
def test_closed_form_examples(n, expected):
    assert closed_form_coeffs(n, 0, -1).coeffs == expected


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("k0", K0S)
def test_closed_form_equals_ladder_exactly(alpha, k0):
    for n in range(21):
        assert monomial(n, alpha, k0) == closed_form_coeffs(n, alpha, k0)


def test_closed_form_float_mode_relative():
    for n in range(15):
        a = monomial(n, 0.5, -2.0)
        b = closed_form_coeffs(n, 0.5, -2.0)
        assert a.allclose(b, rtol=1e-12)


def test_down_then_up_is_n():
    for alpha in ALPHAS:
        for n in range(1, 12):
            u = monomial(n, alpha, -1)
            assert apply_m(apply_p(u)) == n * u


def test_eigenrelation_exact_n25():
    for alpha in ALPHAS:
        for k0 in K0S:
            for n in range(26):
                u = monomial(n, alpha, k0)
                assert apply_number(u) == (n + 1) * u


rational = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@settings(max_examples=60, deadline=None)
@given(alpha=st.sampled_from(ALPHAS), k0=st.sampled_from(K0S),
       cs=st.lists(rational, min_size=0, max_size=41))
def test_heisenberg_exact(alpha, k0, cs):
    s = LadderState(alpha, k0, tuple(cs))
    assert apply_p(apply_m(s)) - apply_m(apply_p(s)) == s


def test_float_states_stay_float():
    s = apply_m(LadderState(0.5, -1.0, (1.0,)))
    assert not s.exact and all(isinstance(c, float) for c in s.coeffs)


def test_exact_states_reject_float_coefficients():
    with pytest.raises(TypeError):
        LadderState(0, -1, (0.5,))


@pytest.mark.parametrize("alpha, k0", [(-1, -1), (F(-3, 2), -1), (0, 0)])
def test_invalid_parameters(alpha, k0):
    with pytest.raises(InvalidParameterError):
        LadderState(alpha, k0, (1,))


def test_incompatible_states_do_not_add():
    with pytest.raises(InvalidParameterError):
        S(0, -1, 1) + S(0, -2, 1)


def test_csv_rows_exact_and_float():
    assert S(0, -1, 1, F(-1, 3)).csv_rows() == ["0,1,1", "1,-1,3"]
    assert S(0.0, -1.0, 0.25).csv_rows() == ["0,0.25"]


def test_from_dict_and_trim():
    s = LadderState.from_dict(0, -1, {2: F(1, 2), 0: 1})
    assert s.coeffs == (1, 0, F(1, 2))
    assert S(0, -1, 1, 0, 0).degree == 0
