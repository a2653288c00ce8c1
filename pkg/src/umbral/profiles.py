"""Profile functions ``Y(x)`` and the concrete operators built from them.

Given ``Y`` with ``Y(x0) = 0`` the operator pair is::

    P = phi2 D**2 + phi1 D + phi0
    M = Y' D**-1 + k0,      (D**-1 u)(x) = integral of u from x0 to x

with ``phi2, phi1, phi0`` fixed by ``Y`` and two constants ``c0, c1``.
Everything numeric lives here: point evaluation of ladder states, finite
difference and quadrature application of ``P`` and ``M`` to callables, and
the boundary condition at ``x0``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Optional

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import integrate

from .errors import (
    DomainError,
    InvalidParameterError,
    NonConvergentLimitError,
    QuadratureError,
    SingularPointError,
)
from .ladder import LadderState, is_exact, monomial

EPS = np.finfo(float).eps


class Flavor(enum.Enum):
    PREFACTORED = "prefactored"
    BARE = "bare"


@dataclass(frozen=True)
class PowerLaw:
    A: float
    q: float
    gamma: float


@dataclass(frozen=True)
class YProfile:
    y: Callable
    dy: Callable
    d2y: Callable
    d3y: Callable
    x0: float = 0.0
    kind: Optional[PowerLaw] = None  # None for custom profiles

    @property
    def is_power_law(self) -> bool:
        return self.kind is not None


def make_power_law(A: float, q: float, x0: float = 0.0, gamma: float | None = None) -> YProfile:
    """``Y' = A (x + gamma)**q`` with ``Y(x0) = 0``; ``gamma`` defaults to ``-x0``."""
    if not A > 0:
        raise InvalidParameterError("A must be positive")
    if not q > -1:
        raise InvalidParameterError("q must exceed -1")
    A, q, x0 = float(A), float(q), float(x0)
    g = -x0 if gamma is None else float(gamma)
    base = (x0 + g) ** (q + 1) if x0 + g != 0 else 0.0

    def y(x):
        return A / (q + 1) * (np.power(np.asarray(x, float) + g, q + 1) - base)

    def dy(x):
        return A * np.power(np.asarray(x, float) + g, q)

    def d2y(x):
        return A * q * np.power(np.asarray(x, float) + g, q - 1)

    def d3y(x):
        return A * q * (q - 1) * np.power(np.asarray(x, float) + g, q - 2)

    return YProfile(y, dy, d2y, d3y, x0, PowerLaw(A, q, g))


def make_custom(y, dy, d2y, d3y, x0: float = 0.0) -> YProfile:
    """Profile from user-supplied ``Y`` and its first three derivatives."""
    if abs(float(y(x0))) > 1e-12:
        raise InvalidParameterError(f"Y(x0) must vanish, got {float(y(x0))}")
    return YProfile(y, dy, d2y, d3y, float(x0), None)


def make_sinh_profile() -> YProfile:
    return make_custom(np.sinh, np.cosh, np.sinh, np.cosh, 0.0)


def profile_from_config(table: Mapping) -> YProfile:
    """Build a profile from a flat table with keys ``kind, A, q, x0``."""
    kind = str(table.get("kind", "power-law")).lower()
    x0 = float(table.get("x0", 0.0))
    if kind in ("power-law", "powerlaw", "power_law"):
        return make_power_law(float(table.get("A", 1.0)), float(table.get("q", 3.0)), x0)
    if kind == "sinh":
        if x0 != 0.0:
            raise InvalidParameterError("sinh profile requires x0 = 0")
        return make_sinh_profile()
    raise InvalidParameterError(f"unknown profile kind {kind!r}")


def _out(v):
    v = np.asarray(v, float)
    return v[()] if v.ndim == 0 else v


def _check_domain(profile: YProfile, xs: np.ndarray):
    if np.any(xs < profile.x0):
        raise DomainError(f"x must be >= x0 = {profile.x0}")


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

def phi_from_profile(profile: YProfile, c0: float, c1: float):
    """The three coefficient functions of ``P`` for the given profile."""
    p = profile

    def _yp(x):
        yp = np.asarray(p.dy(x), float)
        if np.any(yp == 0) or not np.all(np.isfinite(yp)):
            raise SingularPointError("Y' vanishes or is infinite at an evaluation point")
        return yp

    def phi2(x):
        return _out((p.y(x) + c0) / _yp(x) ** 2)

    def phi1(x):
        yp = _yp(x)
        return _out((-3 * (p.y(x) + c0) * p.d2y(x) + (c1 + 3) * yp ** 2) / yp ** 3)

    def phi0(x):
        yp = _yp(x)
        y2 = p.d2y(x)
        return _out(-((p.y(x) + c0) * (p.d3y(x) * yp - 3 * y2 ** 2)
                      + (c1 + 3) * yp ** 2 * y2) / yp ** 4)

    return phi2, phi1, phi0


@dataclass(frozen=True)
class UmbralOperators:
    profile: YProfile
    c0: float
    c1: float
    k0: float
    phi2: Callable = field(repr=False, default=None)
    phi1: Callable = field(repr=False, default=None)
    phi0: Callable = field(repr=False, default=None)

    def __post_init__(self):
        if self.k0 == 0:
            raise InvalidParameterError("k0 must be non-zero")
        if self.phi2 is None:
            phis = phi_from_profile(self.profile, self.c0, self.c1)
            for name, fn in zip(("phi2", "phi1", "phi0"), phis):
                object.__setattr__(self, name, fn)


def make_operators(profile: YProfile, k0: float, c0: float = 0.0, c1: float = -2.0) -> UmbralOperators:
    return UmbralOperators(profile, float(c0), float(c1), float(k0))


def _fd_step(xs, x0, power):
    h = EPS ** power * np.maximum(1.0, np.abs(xs))
    return np.minimum(h, (xs - x0) / 4)


def fd_first(f, xs, h):
    return (-f(xs + 2 * h) + 8 * f(xs + h) - 8 * f(xs - h) + f(xs - 2 * h)) / (12 * h)


def fd_second(f, xs, h):
    return (-f(xs + 2 * h) + 16 * f(xs + h) - 30 * f(xs) + 16 * f(xs - h) - f(xs - 2 * h)) / (12 * h ** 2)


def _vec(f):
    def g(xs):
        xs = np.asarray(xs, float)
        out = f(xs)
        if np.shape(out) != xs.shape:
            out = np.vectorize(lambda t: float(f(t)))(xs)
        return np.asarray(out, float)
    return g


def apply_p_numeric(ops: UmbralOperators, f, x, df=None, d2f=None):
    """``phi2 f'' + phi1 f' + phi0 f`` at ``x``.

    Analytic derivatives are used when supplied; otherwise fourth-order
    central differences, with steps kept clear of ``x0``.
    """
    xs = np.asarray(x, float)
    x0 = ops.profile.x0
    _check_domain(ops.profile, xs)
    if np.any(xs == x0):
        raise SingularPointError("P is evaluated only in the interior x > x0")
    fv = _vec(f)
    d1 = _vec(df)(xs) if df is not None else fd_first(fv, xs, _fd_step(xs, x0, 1 / 5))
    d2 = _vec(d2f)(xs) if d2f is not None else fd_second(fv, xs, _fd_step(xs, x0, 1 / 6))
    return _out(ops.phi2(xs) * d2 + ops.phi1(xs) * d1 + ops.phi0(xs) * fv(xs))


def antiderivative(f, x0: float, x, epsrel: float = 1e-10):
    """``int_{x0}^{x} f`` by adaptive Gauss-Kronrod quadrature."""
    xs = np.asarray(x, float)
    out = np.empty(xs.shape)
    for idx, b in np.ndenumerate(xs):
        if b == x0:
            out[idx] = 0.0
            continue
        val, err, info = integrate.quad(lambda t: float(f(t)), x0, b, epsabs=1e-14,
                                        epsrel=epsrel, limit=200, full_output=1)[:3]
        if not np.isfinite(val) or err > max(1e-12, 100 * epsrel * abs(val)):
            raise QuadratureError(f"quadrature did not converge on [{x0}, {b}] (err={err:.3g})")
        out[idx] = val
    return _out(out)


def apply_m_numeric(ops: UmbralOperators, f, x):
    """``Y'(x) int_{x0}^{x} f + k0 f(x)``."""
    xs = np.asarray(x, float)
    _check_domain(ops.profile, xs)
    integral = antiderivative(f, ops.profile.x0, xs)
    return _out(ops.profile.dy(xs) * integral + ops.k0 * _vec(f)(xs))


# ---------------------------------------------------------------------------
# evaluation of ladder states
# ---------------------------------------------------------------------------

def _float_coeffs(state: LadderState) -> np.ndarray:
    return np.array([float(c) for c in state.coeffs], dtype=float) if state.coeffs else np.zeros(1)


def evaluate_state(state: LadderState, profile: YProfile, flavor: Flavor, x):
    """Point values of ``sum_j c_j e_j``."""
    xs = np.asarray(x, float)
    _check_domain(profile, xs)
    yv = np.asarray(profile.y(xs), float)
    poly = npoly.polyval(yv, _float_coeffs(state))
    if flavor is Flavor.BARE:
        return _out(poly)
    a = float(state.alpha)
    if a < 0 and np.any(yv == 0):
        raise SingularPointError("Y**alpha is singular at x0 for alpha < 0")
    return _out(profile.dy(xs) * np.power(yv, a) * poly)


def state_derivatives(state: LadderState, profile: YProfile, flavor: Flavor, x):
    """``(u, u', u'')`` of the function represented by ``state``."""
    xs = np.asarray(x, float)
    _check_domain(profile, xs)
    c = _float_coeffs(state)
    j = np.arange(len(c), dtype=float)
    yv = np.asarray(profile.y(xs), float)
    y1, y2, y3 = (np.asarray(d(xs), float) for d in (profile.dy, profile.d2y, profile.d3y))
    if flavor is Flavor.BARE:
        s0 = npoly.polyval(yv, c)
        s1 = npoly.polyval(yv, npoly.polyder(c)) if len(c) > 1 else np.zeros_like(yv)
        s2 = npoly.polyval(yv, npoly.polyder(c, 2)) if len(c) > 2 else np.zeros_like(yv)
        return _out(s0), _out(y1 * s1), _out(y2 * s1 + y1 ** 2 * s2)
    a = float(state.alpha)
    if np.any(yv <= 0):
        raise SingularPointError("prefactored derivatives need Y > 0")
    ya = np.power(yv, a)
    t0 = ya * npoly.polyval(yv, c)
    t1 = ya / yv * npoly.polyval(yv, c * (a + j))
    t2 = ya / yv ** 2 * npoly.polyval(yv, c * (a + j) * (a + j - 1))
    u = y1 * t0
    u1 = y2 * t0 + y1 ** 2 * t1
    u2 = y3 * t0 + 3 * y1 * y2 * t1 + y1 ** 3 * t2
    return _out(u), _out(u1), _out(u2)


def state_callables(state: LadderState, profile: YProfile, flavor: Flavor):
    """``(f, f', f'')`` as vectorized callables."""
    return (lambda x: state_derivatives(state, profile, flavor, x)[0],
            lambda x: state_derivatives(state, profile, flavor, x)[1],
            lambda x: state_derivatives(state, profile, flavor, x)[2])


# ---------------------------------------------------------------------------
# boundary condition at x0
# ---------------------------------------------------------------------------

def boundary_expression(ops: UmbralOperators, f, df, x):
    p, c0, c1 = ops.profile, ops.c0, ops.c1
    xs = np.asarray(x, float)
    yv, y1, y2 = p.y(xs), p.dy(xs), p.d2y(xs)
    return _out(((yv + c0) * y1 * df(xs) + ((2 + c1) * y1 ** 2 - (yv + c0) * y2) * f(xs)) / y1 ** 3)


def boundary_residual(ops: UmbralOperators, f, df=None, offsets=(1e-2, 1e-3, 1e-4)) -> float:
    """One-sided limit at ``x0`` of the domain boundary expression.

    The expression is sampled at ``x0 + offset`` and the last two samples
    are Richardson-extrapolated assuming a leading error linear in the
    offset.
    """
    x0 = ops.profile.x0
    fv = _vec(f)
    if df is None:
        def dfv(xs):
            h = (xs - x0) * EPS ** (1 / 5)
            return fd_first(fv, xs, h)
    else:
        dfv = _vec(df)
    g = [float(boundary_expression(ops, fv, dfv, x0 + d)) for d in offsets]
    if not all(math.isfinite(v) for v in g):
        raise NonConvergentLimitError("boundary expression is not finite near x0")
    d1, d2 = abs(g[1] - g[0]), abs(g[2] - g[1])
    scale = max(1.0, abs(g[-1]))
    if d2 > d1 + 1e-9 * scale:
        raise NonConvergentLimitError(f"boundary samples diverge: {g}")
    ratio = offsets[-2] / offsets[-1]
    return g[2] + (g[2] - g[1]) / (ratio - 1)


# ---------------------------------------------------------------------------
# the factored second-order operator L = P M
# ---------------------------------------------------------------------------

def number_operator_coeffs(ops: UmbralOperators):
    """Coefficient functions ``(f2, f1, f0)`` of ``L = P M`` written as an ODE operator."""
    p, c0, c1, k0 = ops.profile, ops.c0, ops.c1, ops.k0

    def f2(x):
        return _out(k0 * (p.y(x) + c0) / p.dy(x) ** 2)

    def f1(x):
        yc, y1 = p.y(x) + c0, p.dy(x)
        return _out(((yc + k0 * (c1 + 3)) * y1 ** 2 - 3 * k0 * yc * p.d2y(x)) / y1 ** 3)

    def f0(x):
        yc, y1, y2 = p.y(x) + c0, p.dy(x), p.d2y(x)
        return _out(-(k0 * yc * (y1 * p.d3y(x) - 3 * y2 ** 2)
                      + (k0 * (c1 + 3) + yc) * y1 ** 2 * y2
                      - (c1 + 3) * y1 ** 4) / y1 ** 4)

    return f2, f1, f0


def apply_number_numeric(ops: UmbralOperators, f, df, d2f, x):
    f2, f1, f0 = number_operator_coeffs(ops)
    xs = np.asarray(x, float)
    return _out(f2(xs) * _vec(d2f)(xs) + f1(xs) * _vec(df)(xs) + f0(xs) * _vec(f)(xs))


def powerlaw_eigen_residual(n: int, q: float, A: float, k0: float, u, du, d2u, x):
    """Residual of the power-law eigenvalue ODE ``u'' + (A x^q/k0 + (1-q)/x) u' - A(q+1) n x^(q-1) u / k0``."""
    xs = np.asarray(x, float)
    return _out(d2u(xs) + (A * xs ** q / k0 + (1 - q) / xs) * du(xs)
                - A * (q + 1) / k0 * n * xs ** (q - 1) * u(xs))


# ---------------------------------------------------------------------------
# eigenfunction families
# ---------------------------------------------------------------------------

def _exactify(v):
    if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
        return Fraction(v)
    return float(v)


def bare_alpha(q):
    """``-q/(q+1)``: the ladder parameter of the constant-seed family."""
    q = _exactify(q)
    return -q / (q + 1)


@lru_cache(maxsize=512)
def _cached_monomial(n, alpha, k0):
    return monomial(n, alpha, k0)


@dataclass(frozen=True)
class Basis:
    """One eigenfunction family: ladder parameters plus the profile they are evaluated on."""
    flavor: Flavor
    alpha: object
    k0: object
    profile: YProfile
    q: Optional[float] = None
    A: Optional[float] = None

    @classmethod
    def bare(cls, q=3, A=1, k0=-1, x0=0.0) -> "Basis":
        """Constant seed ``u0 = 1`` with ``Y' = A (x - x0)**q``."""
        if not q > -1:
            raise InvalidParameterError("q must exceed -1")
        k0 = _exactify(k0)
        return cls(Flavor.BARE, bare_alpha(q), k0, make_power_law(A, q, x0), float(q), float(A))

    @classmethod
    def prefactored(cls, alpha=0, k0=-1, profile: YProfile | None = None) -> "Basis":
        """Seed ``u0 = Y' Y**alpha`` on an arbitrary profile (default ``Y = x``)."""
        if profile is None:
            profile = make_power_law(1.0, 0.0, 0.0)
        return cls(Flavor.PREFACTORED, _exactify(alpha), _exactify(k0), profile)

    @property
    def exact(self) -> bool:
        return is_exact(self.alpha, self.k0)

    def monomial(self, n: int) -> LadderState:
        return _cached_monomial(n, self.alpha, self.k0)

    def evaluate(self, state, x):
        if isinstance(state, int):
            state = self.monomial(state)
        return evaluate_state(state, self.profile, self.flavor, x)

    def derivatives(self, state, x):
        if isinstance(state, int):
            state = self.monomial(state)
        return state_derivatives(state, self.profile, self.flavor, x)

    def operators(self) -> UmbralOperators:
        """Operators whose constants make this family's seed satisfy ``P u0 = 0``."""
        a = float(self.alpha)
        if self.flavor is Flavor.BARE:
            c1 = -(self.q + 2) / (self.q + 1)
        else:
            c1 = -2 - a
        return make_operators(self.profile, float(self.k0), 0.0, c1)
