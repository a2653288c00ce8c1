"""Weights, inner products and Gram matrices for the eigenfunction families.

Both families share the weight ``w = Y**(-alpha) / |Y'| * exp(Y/k0)`` on
``[x0, inf)``, which requires ``k0 < 0``.  Two independent routes compute
``<u_m, u_n>``:

* ``"gauss"``: substitute ``z = -Y/k0``; the integrand becomes
  ``z**alpha exp(-z)`` times a polynomial, integrated exactly by
  generalized Gauss-Laguerre nodes.
* ``"adaptive"``: adaptive quadrature directly in ``x`` on point values of
  the weight and the eigenfunctions.
"""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import integrate, optimize, special

from .errors import InvalidParameterError, QuadratureError, SingularPointError
from .profiles import Basis, Flavor, state_derivatives

WeightSpec = Basis

__all__ = [
    "WeightSpec",
    "weight_eval",
    "inner_product",
    "gram_matrix",
    "norm_oracle",
    "stated_norm",
    "norm_comparison",
    "boundary_term",
    "weight_ode_residual",
    "gram_csv",
]


def _check(spec: Basis):
    if not float(spec.k0) < 0:
        raise InvalidParameterError("orthogonality on [x0, inf) needs k0 < 0")


def _bare_constant(spec: Basis) -> float:
    """x-independent factor of the constant-seed weight."""
    A, q = spec.A, spec.q
    return (A / (q + 1)) ** (q / (q + 1)) / A


def _substitution_factor(spec: Basis) -> float:
    """Ratio between the x-integral and ``int Y**alpha exp(Y/k0) p_m p_n dY``."""
    if spec.flavor is Flavor.PREFACTORED:
        return 1.0
    A, q = spec.A, spec.q
    return (A / (q + 1)) ** (2 * q / (q + 1)) / A ** 2


def weight_eval(spec: Basis, x):
    _check(spec)
    xs = np.asarray(x, float)
    p = spec.profile
    k0, a = float(spec.k0), float(spec.alpha)
    yv = np.asarray(p.y(xs), float)
    if spec.flavor is Flavor.BARE:
        out = _bare_constant(spec) * np.exp(yv / k0)
    else:
        y1 = np.abs(np.asarray(p.dy(xs), float))
        if np.any(y1 == 0) or (a > 0 and np.any(yv == 0)):
            raise SingularPointError("weight is singular at this point")
        out = np.power(yv, -a) / y1 * np.exp(yv / k0)
    return out[()] if out.ndim == 0 else out


def _poly(spec: Basis, n: int) -> np.ndarray:
    return np.array([float(c) for c in spec.monomial(n).coeffs])


def _gauss(spec: Basis, m: int, n: int, order: int | None) -> float:
    a, k0 = float(spec.alpha), float(spec.k0)
    order = order or 2 * (m + n) + 8
    z, w = special.roots_genlaguerre(order, a)
    y = -k0 * z
    s = np.sum(w * npoly.polyval(y, _poly(spec, m)) * npoly.polyval(y, _poly(spec, n)))
    return _substitution_factor(spec) * (-k0) ** (a + 1) * s


def _x_cutoff(spec: Basis, m: int, n: int) -> float:
    p = spec.profile
    y_max = -float(spec.k0) * (80.0 + 4 * (m + n))
    hi = p.x0 + 1.0
    while p.y(hi) < y_max:
        hi = p.x0 + 2 * (hi - p.x0)
        if hi > 1e8:
            raise QuadratureError("profile does not grow fast enough for a finite cutoff")
    return optimize.brentq(lambda t: p.y(t) - y_max, p.x0, hi, xtol=1e-12)


def _adaptive(spec: Basis, m: int, n: int) -> float:
    p = spec.profile
    um, un = spec.monomial(m), spec.monomial(n)

    def integrand(t):
        return float(weight_eval(spec, t) * spec.evaluate(um, t) * spec.evaluate(un, t))

    b = _x_cutoff(spec, m, n)
    edges = np.linspace(p.x0, b, 9)
    total, err_total = 0.0, 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err, *_ = integrate.quad(integrand, lo, hi, epsabs=1e-14, epsrel=1e-13,
                                      limit=400, full_output=1)
        total += val
        err_total += err
    if not math.isfinite(total) or err_total > 1e-8 * max(1.0, abs(total)):
        raise QuadratureError(f"adaptive quadrature error {err_total:.3g} for ({m}, {n})")
    return total


def inner_product(spec: Basis, m: int, n: int, method: str = "gauss", order: int | None = None) -> float:
    """``int w u_m u_n dx`` over ``[x0, inf)``."""
    _check(spec)
    if m < 0 or n < 0:
        raise InvalidParameterError("indices must be non-negative")
    m, n = min(m, n), max(m, n)
    if method == "gauss":
        return _gauss(spec, m, n, order)
    if method == "adaptive":
        return _adaptive(spec, m, n)
    raise InvalidParameterError(f"unknown method {method!r}")


def gram_matrix(spec: Basis, n_max: int, method: str = "gauss") -> np.ndarray:
    if n_max < 0:
        raise InvalidParameterError("n_max must be non-negative")
    g = np.empty((n_max + 1, n_max + 1))
    for i in range(n_max + 1):
        for j in range(i, n_max + 1):
            g[i, j] = g[j, i] = inner_product(spec, i, j, method)
    return g


def norm_oracle(spec: Basis, n: int) -> float:
    """Analytic ``<u_n, u_n>`` for the ladder normalization of ``u_n``.

    ``k0**(2n) (-k0)**(alpha+1) n! Gamma(alpha+1)**2 / Gamma(n+alpha+1)``,
    times the substitution factor for the constant-seed family.
    """
    _check(spec)
    a, k0 = float(spec.alpha), float(spec.k0)
    log_g = math.lgamma(n + 1) + 2 * math.lgamma(a + 1) - math.lgamma(n + a + 1)
    return _substitution_factor(spec) * k0 ** (2 * n) * (-k0) ** (a + 1) * math.exp(log_g)


def stated_norm(spec: Basis, n: int) -> float:
    """Closed-form norm constants as usually quoted for these families.

    Prefactored: ``(-k0)**alpha`` independent of ``n``.  Constant seed:
    ``Gamma(a+1)**2 n!/Gamma(n+a+1) (A/(q+1))**(2q/(q+1)) / A**2 (-k0)**(1/(q+1))``.
    Kept for comparison against :func:`norm_oracle`; they agree only in
    special cases (``alpha = 0, k0 = -1`` and ``k0 = -1`` respectively).
    """
    a, k0 = float(spec.alpha), float(spec.k0)
    if spec.flavor is Flavor.PREFACTORED:
        return (-k0) ** a
    A, q = spec.A, spec.q
    log_g = 2 * math.lgamma(a + 1) + math.lgamma(n + 1) - math.lgamma(n + a + 1)
    return math.exp(log_g) * (A / (q + 1)) ** (2 * q / (q + 1)) / A ** 2 * (-k0) ** (1 / (q + 1))


def norm_comparison(spec: Basis, n_max: int) -> list[tuple[int, float, float, float]]:
    """Rows ``(n, stated, oracle, quadrature)``."""
    return [(n, stated_norm(spec, n), norm_oracle(spec, n), inner_product(spec, n, n))
            for n in range(n_max + 1)]


def boundary_term(spec: Basis, m: int, n: int, x):
    """``Y**(1-alpha)/|Y'|**3 exp(Y/k0) (u_m u_n' - u_m' u_n)`` at ``x``.

    Its limits at ``x0+`` and ``inf`` must vanish for the eigenfunctions to
    be orthogonal.
    """
    xs = np.asarray(x, float)
    p = spec.profile
    a, k0 = float(spec.alpha), float(spec.k0)
    um, dum, _ = state_derivatives(spec.monomial(m), p, spec.flavor, xs)
    un, dun, _ = state_derivatives(spec.monomial(n), p, spec.flavor, xs)
    yv = np.asarray(p.y(xs), float)
    out = np.power(yv, 1 - a) / np.abs(p.dy(xs)) ** 3 * np.exp(yv / k0) * (um * dun - dum * un)
    return out[()] if np.ndim(out) == 0 else out


def weight_ode_residual(spec: Basis, x, h: float = 1e-5):
    """``f2 w' + (f2' - f1) w`` for the operator ``L = P M`` of the family."""
    from .profiles import number_operator_coeffs

    f2, f1, _ = number_operator_coeffs(spec.operators())
    xs = np.asarray(x, float)
    w = lambda t: weight_eval(spec, t)
    dw = (w(xs + h) - w(xs - h)) / (2 * h)
    df2 = (f2(xs + h) - f2(xs - h)) / (2 * h)
    return f2(xs) * dw + (df2 - f1(xs)) * w(xs)


def gram_csv(g: np.ndarray) -> str:
    lines = ["i,j,value"]
    for (i, j), v in np.ndenumerate(g):
        lines.append(f"{i},{j},{v:.12g}")
    return "\n".join(lines) + "\n"
