import math

import numpy as np
import pytest

from umbral.beams import (count_zeros, emit_profiles, mode, mode_eval, normalize, overlap, profiles_csv,
                          supergaussian_expand, BeamModeParams)
from umbral.errors import InvalidParameterError

ALPHA0_Q3 = 0.8832465692992040  # (4**(-3/4) Gamma(1/4))**(-1/2), mpmath
ALPHA0_Q1 = 0.8932438417380023  # (pi/2)**(-1/4)


def test_normalization_constants():
    assert normalize(0, 3, 1, -1) == pytest.approx(ALPHA0_Q3, rel=1e-13)
    assert normalize(0, 1, 1, -1) == pytest.approx(ALPHA0_Q1, rel=1e-13)


def test_mode_values():
    m0 = mode(0)
    x = np.linspace(0, 2.5, 11)
    np.testing.assert_allclose(mode_eval(m0, x), ALPHA0_Q3 * np.exp(-x ** 4 / 8), rtol=1e-12)
    assert mode_eval(m0, 0.0) == pytest.approx(m0.alpha_n)
    assert abs(mode_eval(mode(1), 1.0)) < 1e-15


@pytest.mark.parametrize("kw", [{"y": 1.0}, {"y": 0.0}, {"q": -1.0}, {"A": 0.0}])
def test_invalid_parameters(kw):
    with pytest.raises(InvalidParameterError):
        BeamModeParams(0, **kw)


def test_orthonormality():
    modes = [mode(n) for n in range(7)]
    G = np.array([[overlap(a, b) for b in modes] for a in modes])
    assert np.max(np.abs(G - np.eye(7))) < 1e-6


def test_orthonormality_by_adaptive_quadrature():
    from scipy import integrate
    for m, n in ((0, 0), (1, 2), (3, 3)):
        pm, pn = mode(m), mode(n)
        val = integrate.quad(lambda t: mode_eval(pm, t) * mode_eval(pn, t), 0, 12, limit=200)[0]
        assert val == pytest.approx(float(m == n), abs=1e-8)


def test_envelope_is_supergaussian():
    x = np.linspace(0, 4, 101)
    m0 = mode(0)
    np.testing.assert_allclose(mode_eval(m0, x) ** 2, m0.alpha_n ** 2 * np.exp(-x ** 4 / 4), atol=1e-10)


def test_zero_counts():
    assert [count_zeros(mode(n)) for n in range(7)] == list(range(7))
    assert count_zeros(mode(3, q=1.0, A=2.0, y=-0.5)) == 3


def test_supergaussian_expansion():
    m0 = mode(0)
    coeffs, err = supergaussian_expand(4, n_max=4, scale=8 ** 0.25)
    assert coeffs[0] == pytest.approx(1.0, abs=1e-9)
    assert np.max(np.abs(coeffs[1:])) < 1e-8 and err < 1e-6
    c, _ = supergaussian_expand(4, n_max=3, target=lambda t: mode_eval(mode(1), t))
    np.testing.assert_allclose(c, [0, 1, 0, 0], atol=1e-8)


def test_supergaussian_error_decreases():
    errs = [supergaussian_expand(6, n_max=n)[1] for n in (5, 10, 20)]
    assert errs[0] > errs[1] > errs[2]


def test_emit_profiles():
    x = np.linspace(0, 3, 301)
    header, table = emit_profiles([0, 1, 2], 3, 1, -1, x)
    assert header == ["x", "phi_0", "phi_1", "phi_2"] and table.shape == (301, 4)
    assert table[0, 2] == pytest.approx(-mode(1).alpha_n)
    assert emit_profiles([], 3, 1, -1, x)[0] == ["x"]
    h, t = emit_profiles([4], 3, 1, -1, x, squared=True)
    assert h == ["x", "I_4"] and (t[:, 1] >= 0).all()
    assert profiles_csv(["x"], np.empty((0, 1))) == "x\n"
    with pytest.raises(InvalidParameterError):
        emit_profiles([0], 3, 1, 1, x)
