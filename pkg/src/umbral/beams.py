"""Flattened optical beam modes built on the constant-seed eigenfunctions.

``Phi_n(x) = alpha_n * exp(A x**(q+1) / (2 y (q+1))) * pi_n(x, y)`` with
``y < 0``, so the envelope is the decaying ``exp(-z/2)``,
``z = -A x**(q+1) / (y (q+1))``.  ``pi_n`` is the bare ladder monomial
``(A x**q D**-1 + y)**n 1``.  ``Phi_0**2`` is a super-gaussian of power ``q+1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate, special

from .errors import InvalidParameterError, QuadratureError
from .laguerre import closed_form_u_powerlaw, laguerre_eval

__all__ = [
    "BeamModeParams",
    "mode",
    "mode_eval",
    "pi_n",
    "normalize",
    "overlap",
    "count_zeros",
    "supergaussian_expand",
    "emit_profiles",
    "profiles_csv",
]


def _validate(q, A, y):
    if not q > -1:
        raise InvalidParameterError("q must exceed -1")
    if not A > 0:
        raise InvalidParameterError("A must be positive")
    if not y < 0:
        raise InvalidParameterError("y must be negative")


@dataclass(frozen=True)
class BeamModeParams:
    n: int
    q: float = 3.0
    A: float = 1.0
    y: float = -1.0
    alpha_n: float | None = None

    def __post_init__(self):
        _validate(self.q, self.A, self.y)
        if self.n < 0:
            raise InvalidParameterError("n must be non-negative")


def mode(n: int, q: float = 3.0, A: float = 1.0, y: float = -1.0) -> BeamModeParams:
    """Mode parameters with the normalization constant filled in."""
    return BeamModeParams(n, q, A, y, normalize(n, q, A, y))


def pi_n(n: int, q: float, A: float, y: float, x):
    """``pi_n(x, y)``; evaluated through the Laguerre recurrence for stability."""
    return closed_form_u_powerlaw(n, q, A, y, x)


def _envelope(q, A, y, x):
    return np.exp(A * np.power(x, q + 1) / (2 * y * (q + 1)))


def _envelope_integral(m: int, n: int, q: float, A: float, y: float) -> float:
    """``int_0^inf envelope**2 pi_m pi_n dx`` by Gauss-Laguerre quadrature.

    With ``Y = A x**(q+1)/(q+1)`` and ``Y = -y z`` the integral becomes
    ``c**(-a)/A (-y)**(a+1) int z**a exp(-z) pi_m pi_n dz``, ``a = -q/(q+1)``,
    ``c = A/(q+1)``.
    """
    a = -q / (q + 1)
    c = A / (q + 1)
    z, w = special.roots_genlaguerre(max(m, n) + 8, a)
    x = np.power(-y * z / c, 1 / (q + 1))
    s = np.sum(w * pi_n(m, q, A, y, x) * pi_n(n, q, A, y, x))
    return c ** (-a) / A * (-y) ** (a + 1) * s


def normalize(n: int, q: float = 3.0, A: float = 1.0, y: float = -1.0) -> float:
    """``(int_0^inf envelope**2 pi_n**2 dx)**(-1/2)``."""
    _validate(q, A, y)
    integral = _envelope_integral(n, n, q, A, y)
    if not integral > 0:
        raise QuadratureError("non-positive norm integral")
    return integral ** -0.5


def overlap(pm: BeamModeParams, pn: BeamModeParams) -> float:
    """``<Phi_m, Phi_n>`` on ``[0, inf)``; both modes must share ``q, A, y``."""
    if (pm.q, pm.A, pm.y) != (pn.q, pn.A, pn.y):
        raise InvalidParameterError("modes belong to different families")
    am = pm.alpha_n if pm.alpha_n is not None else normalize(pm.n, pm.q, pm.A, pm.y)
    an = pn.alpha_n if pn.alpha_n is not None else normalize(pn.n, pn.q, pn.A, pn.y)
    return am * an * _envelope_integral(pm.n, pn.n, pm.q, pm.A, pm.y)


def mode_eval(params: BeamModeParams, x):
    xs = np.asarray(x, float)
    if np.any(xs < 0):
        raise InvalidParameterError("x must be non-negative")
    alpha_n = params.alpha_n if params.alpha_n is not None else normalize(params.n, params.q, params.A, params.y)
    return alpha_n * _envelope(params.q, params.A, params.y, xs) * pi_n(params.n, params.q, params.A, params.y, xs)


def _x_of_z(z, q, A, y):
    return np.power(-y * (q + 1) * np.asarray(z, float) / A, 1 / (q + 1))


def count_zeros(params: BeamModeParams, points: int = 20001) -> int:
    """Sign changes of ``Phi_n`` on ``(0, inf)``.

    Only ``pi_n`` is sampled (the envelope is positive); the range covers every
    Laguerre zero, all of which lie below ``4n + 2a + 2``.
    """
    q, A, y, n = params.q, params.A, params.y, params.n
    a = -q / (q + 1)
    z_max = 4 * n + 2 * a + 10
    zs = np.linspace(0.0, z_max, points)[1:]
    vals = laguerre_eval(n, a, zs)
    s = np.sign(vals)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] * s[:-1] < 0))


def supergaussian_expand(p: float, q: float = 3.0, A: float = 1.0, y: float = -1.0,
                         n_max: int = 10, scale: float = 1.0, target=None):
    """Expand the unit-norm ``exp(-(x/scale)**p)`` on ``Phi_0..Phi_n_max``.

    Returns ``(coefficients, l2_error)``.  ``target`` may replace the
    super-gaussian by any callable on ``[0, inf)`` (it is normalized first).
    """
    if not p > 0:
        raise InvalidParameterError("p must be positive")
    _validate(q, A, y)
    modes = [mode(n, q, A, y) for n in range(n_max + 1)]
    raw = target if target is not None else (lambda t: np.exp(-np.power(t / scale, p)))
    # integration range: both the target and the highest mode are negligible beyond it
    x_modes = float(_x_of_z(4 * n_max + 80, q, A, y))
    x_target = scale * 60.0 ** (1 / p) if target is None else x_modes
    x_end = max(x_modes, x_target)
    edges = np.linspace(0.0, x_end, 4 * (n_max + 4))

    def quad(fn):
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            val, err, *_ = integrate.quad(fn, lo, hi, epsabs=1e-15, epsrel=1e-12, limit=200, full_output=1)
            total += val
        return total

    norm = math.sqrt(quad(lambda t: float(raw(t)) ** 2))
    f = lambda t: float(raw(t)) / norm
    coeffs = np.array([quad(lambda t, m=m: f(t) * float(mode_eval(m, t))) for m in modes])

    def resid_sq(t):
        approx = sum(c * float(mode_eval(m, t)) for c, m in zip(coeffs, modes))
        return (f(t) - approx) ** 2

    err = math.sqrt(max(quad(resid_sq), 0.0))
    return coeffs, err


def emit_profiles(ns: Sequence[int], q: float, A: float, y: float, x, squared: bool = False):
    """``(header, table)``: an ``x`` column then ``Phi_n`` (or ``|Phi_n|**2``) per requested ``n``."""
    _validate(q, A, y)
    xs = np.asarray(x, float)
    if not ns:
        return ["x"], np.empty((0, 1))
    prefix = "I" if squared else "phi"
    header = ["x"] + [f"{prefix}_{n}" for n in ns]
    cols = [xs]
    for n in ns:
        v = mode_eval(mode(n, q, A, y), xs)
        cols.append(v ** 2 if squared else v)
    return header, np.column_stack(cols)


def profiles_csv(header, table) -> str:
    lines = [",".join(header)]
    for row in np.atleast_2d(table):
        if row.size:
            lines.append(",".join(f"{v:.12g}" for v in row))
    return "\n".join(lines) + "\n"
