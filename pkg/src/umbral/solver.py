"""Integro-differential evolution equations through the umbral correspondence.

A known power-series solution ``y(tau, x) = sum_k c_k(tau) x**k`` of
``y_tau = F(d/dx, x) y`` is lifted to ``f(tau, x) = sum_k c_k(tau) u_k(x)``,
which solves ``f_tau = F(P, M) f``.  In the ``u_k`` index space the ladder
operators act exactly: ``P u_k = k u_{k-1}`` and ``M u_k = u_{k+1}``.
"""
from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import InvalidParameterError, StepSizeUnderflowError, TruncationWarning
from .ladder import LadderState
from .profiles import Basis, UmbralOperators, antiderivative

__all__ = [
    "OperatorWord",
    "UmbralSeries",
    "example_series",
    "example_series_exact",
    "closed_form_series",
    "lift_and_sample",
    "residual_coeffs",
    "evolve_series",
    "ide_residual_numeric",
    "combine",
]


def _shift_down(c: list) -> list:
    """``P``: coefficient of ``u_n`` becomes ``(n+1) c_{n+1}``."""
    return [(n + 1) * c[n + 1] for n in range(len(c) - 1)] + [0 * c[0]] if c else []


def _shift_up(c: list) -> list:
    """``M``: coefficient of ``u_n`` becomes ``c_{n-1}``."""
    return [0 * c[0]] + list(c[:-1]) if c else []


_TERM = re.compile(r"([+-]?)(?:(\d+/\d+|\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)\*?)?([PM]*)")


@dataclass(frozen=True)
class OperatorWord:
    """``F(P, M)`` as a weighted sum of ordered words acting right-to-left.

    ``terms`` holds ``(weight, word)`` pairs; the empty word is the identity.
    """
    terms: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "OperatorWord":
        """Parse e.g. ``"P+M"``, ``"PM"``, ``"2*MP - 1/2 P"`` or ``"0"``."""
        text = text.replace(" ", "")
        if text in ("", "0"):
            return cls(())
        terms, pos = [], 0
        while pos < len(text):
            m = _TERM.match(text, pos)
            if not m or m.end() == pos:
                raise InvalidParameterError(f"cannot parse operator {text!r} at {pos}")
            sign, coef, word = m.groups()
            if coef is None and word == "":
                raise InvalidParameterError(f"empty term in {text!r}")
            w = Fraction(coef) if coef else Fraction(1)
            if sign == "-":
                w = -w
            terms.append((w, word))
            pos = m.end()
        return cls(tuple(terms))

    @property
    def max_len(self) -> int:
        return max((len(w) for _, w in self.terms), default=0)

    def apply(self, coeffs: Sequence) -> list:
        """Exact action on a coefficient list; the result is truncated to the input length."""
        n = len(coeffs)
        if n == 0:
            return []
        zero = 0 * coeffs[0]
        padded = list(coeffs) + [zero] * self.max_len
        total = [zero] * len(padded)
        for weight, word in self.terms:
            c = padded
            for letter in reversed(word):
                c = _shift_down(c) if letter == "P" else _shift_up(c)
            if isinstance(zero, float) or isinstance(zero, np.floating):
                weight = float(weight)
            total = [t + weight * v for t, v in zip(total, c)]
        return total[:n]

    def matrix(self, size: int) -> np.ndarray:
        m = np.zeros((size, size))
        for k in range(size):
            e = [0.0] * size
            e[k] = 1.0
            m[:, k] = self.apply(e)
        return m


@dataclass
class UmbralSeries:
    """Truncated expansion ``f(tau, x) = sum_{j<=N} c_j(tau) u_j(x)``."""
    basis: Basis
    N: int
    coeff_fn: Callable = field(repr=False)
    dcoeff_fn: Callable = field(repr=False)
    tau_range: tuple = (0.0, math.inf)
    tail_threshold: float = 1e-10

    def coeffs(self, tau):
        return self.coeff_fn(tau)

    def dcoeffs(self, tau):
        return self.dcoeff_fn(tau)

    def tail(self, taus: Optional[Sequence[float]] = None) -> float:
        """``max |c_N(tau)|`` over ``taus`` (default: 21 points of ``tau_range``)."""
        if taus is None:
            lo, hi = self.tau_range
            taus = np.linspace(lo, hi if math.isfinite(hi) else lo, 21)
        return max(abs(float(self.coeffs(t)[self.N])) for t in taus)


def example_series(tau: float, N: int) -> np.ndarray:
    """``c_k = exp(tau**2/2) tau**k / k!`` for ``k <= N``."""
    if N < 0:
        raise InvalidParameterError("N must be non-negative")
    k = np.arange(N + 1)
    logs = np.array([math.lgamma(i + 1) for i in k])
    with np.errstate(divide="ignore"):
        pw = np.where(k == 0, 1.0, float(tau) ** k)
    return math.exp(tau * tau / 2) * pw / np.exp(logs)


def _example_dseries(tau: float, N: int) -> np.ndarray:
    c = example_series(tau, N)
    return tau * c + np.concatenate(([0.0], c[:-1]))


def example_series_exact(tau: Fraction, N: int) -> list:
    """``tau**k / k!`` as fractions: the example series without the common factor ``exp(tau**2/2)``."""
    tau = Fraction(tau)
    return [tau ** k / math.factorial(k) for k in range(N + 1)]


def _example_dseries_exact(tau: Fraction, N: int) -> list:
    r = example_series_exact(tau, N)
    return [Fraction(tau) * r[k] + (r[k - 1] if k else 0) for k in range(N + 1)]


def closed_form_series(N: int, basis: Basis | None = None, exact: bool = False) -> UmbralSeries:
    """The lifted series of ``y = exp(tau**2/2 + tau x)``, which solves ``y_tau = (d/dx + x) y``.

    With ``exact=True`` coefficients are fractions scaled by ``exp(-tau**2/2)``;
    the scale is common to ``c`` and ``dc/dtau`` so residuals are unaffected.
    """
    basis = basis or Basis.bare(3, 1, -1)
    if exact:
        return UmbralSeries(basis, N, lambda t: example_series_exact(t, N),
                            lambda t: _example_dseries_exact(t, N))
    return UmbralSeries(basis, N, lambda t: example_series(t, N), lambda t: _example_dseries(t, N))


def _basis_matrix(basis: Basis, N: int, x) -> np.ndarray:
    return np.array([np.atleast_1d(basis.evaluate(k, x)) for k in range(N + 1)])


def combine(basis: Basis, coeffs: Sequence) -> LadderState:
    """``sum_k c_k u_k`` as a single state in the ``e_j`` basis (float)."""
    total = [0.0] * len(coeffs)
    for k, ck in enumerate(coeffs):
        ck = float(ck)
        if ck == 0:
            continue
        for j, m in enumerate(basis.monomial(k).coeffs):
            total[j] += ck * float(m)
    return LadderState(float(basis.alpha), float(basis.k0), tuple(total))


def _warn_tail(series: UmbralSeries, tau):
    tail = abs(float(series.coeffs(tau)[series.N]))
    if tail > series.tail_threshold:
        warnings.warn(f"series tail |c_N| = {tail:.3g} exceeds {series.tail_threshold:.3g}",
                      TruncationWarning, stacklevel=3)


def lift_and_sample(series: UmbralSeries, tau: float, x) -> np.ndarray:
    """``f(tau, x) = sum_k c_k(tau) u_k(x)`` on a grid."""
    _warn_tail(series, tau)
    c = np.array([float(v) for v in series.coeffs(tau)])
    return c @ _basis_matrix(series.basis, series.N, x)


def residual_coeffs(series: UmbralSeries, F: OperatorWord, tau) -> list:
    """Coefficients of ``f_tau - F(P, M) f`` in the ``u_n`` index space."""
    c = list(series.coeffs(tau))
    dc = list(series.dcoeffs(tau))
    Fc = F.apply(c)
    return [a - b for a, b in zip(dc, Fc)]


def _rk4(Fm: np.ndarray, c0: np.ndarray, tau_end: float, steps: int) -> np.ndarray:
    h = tau_end / steps
    traj = np.empty((steps + 1, len(c0)))
    c = c0.copy()
    traj[0] = c
    for i in range(steps):
        k1 = Fm @ c
        k2 = Fm @ (c + h / 2 * k1)
        k3 = Fm @ (c + h / 2 * k2)
        k4 = Fm @ (c + h * k3)
        c = c + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        traj[i + 1] = c
    return traj


def evolve_series(F: OperatorWord, c0: Sequence[float], tau_end: float, N: int,
                  basis: Basis | None = None, tol: float = 1e-9,
                  max_steps: int = 2 ** 20) -> UmbralSeries:
    """Integrate the truncated system ``dc/dtau = F c`` with classic RK4.

    The step is halved until the end state moves by less than ``tol``.
    """
    basis = basis or Basis.bare(3, 1, -1)
    c_init = np.zeros(N + 1)
    c0 = np.asarray(c0, float)
    c_init[:min(len(c0), N + 1)] = c0[:N + 1]
    Fm = F.matrix(N + 1)
    steps = max(8, int(math.ceil(abs(tau_end) * 16)))
    prev = _rk4(Fm, c_init, tau_end, steps)
    while True:
        steps *= 2
        if steps > max_steps:
            raise StepSizeUnderflowError("RK4 step halving did not converge")
        cur = _rk4(Fm, c_init, tau_end, steps)
        if np.max(np.abs(cur[-1] - prev[-1])) < tol:
            break
        prev = cur
    taus = np.linspace(0.0, tau_end, steps + 1)
    derivs = cur @ Fm.T
    if tau_end == 0:
        coeff_fn = lambda t: cur[0].copy()
        dcoeff_fn = lambda t: derivs[0].copy()
    else:
        spline = CubicHermiteSpline(taus, cur, derivs, axis=0)
        coeff_fn = lambda t: spline(t)
        dcoeff_fn = lambda t: Fm @ spline(t)
    series = UmbralSeries(basis, N, coeff_fn, dcoeff_fn, (0.0, float(tau_end)))
    series.trajectory = (taus, cur)
    return series


def ide_residual_numeric(series: UmbralSeries, ops: UmbralOperators, tau: float, x,
                         return_all: bool = False):
    """``|f_tau - [phi2 f'' + phi1 f' + (phi0 + k0) f + Y' int_x0^x f]|`` on a grid.

    Points at ``x0`` itself are skipped because the coefficient functions
    are singular there.
    """
    basis = series.basis
    xs = np.atleast_1d(np.asarray(x, float))
    xs = xs[xs > basis.profile.x0]
    f_state = combine(basis, series.coeffs(tau))
    ft_state = combine(basis, series.dcoeffs(tau))
    f, df, d2f = basis.derivatives(f_state, xs)
    ft = basis.evaluate(ft_state, xs)
    integral = antiderivative(lambda t: basis.evaluate(f_state, t), basis.profile.x0, xs)
    rhs = (ops.phi2(xs) * d2f + ops.phi1(xs) * df + (ops.phi0(xs) + ops.k0) * f
           + basis.profile.dy(xs) * integral)
    res = np.abs(np.atleast_1d(ft) - np.atleast_1d(rhs))
    if return_all:
        return xs, res
    return float(res.max()) if res.size else 0.0
