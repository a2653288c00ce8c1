"""Two-variable heat polynomials, point maps between diffusion equations, FD residuals.

With ``k0 = y`` the constant-seed monomials become ``pi_n(x, y)``, which obey
``d pi_n / dy = P pi_n``.  For the power-law profile ``P`` is
``D x**N D / (A (q+1))`` with ``N = 1 - q``, so ``pi_n(x, A (q+1) t)``
solves the variable-conductivity equation ``u_t = (x**N u_x)_x``.

Point maps implemented here:

* ``N = 4/3``: ``w(z, y) = (z/3) u((z/3)**3, y)`` turns ``u_t = (x**(4/3) u_x)_x``
  into ``w_y = w_zz``.
* ``w(xi, tau) = xi**(-3/2) exp(-9 tau/4) u(log xi, tau)`` turns ``u_t = u_xx``
  into ``w_tau = xi**(-2) (xi**4 w_xi)_xi``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import DomainError, GridTooCoarseError, InvalidParameterError
from .ladder import LadderState, apply_m, apply_p

__all__ = [
    "ConductivityPDE",
    "SZSolution",
    "YPoly",
    "pi_coefficients",
    "dpi_dy_check",
    "heat_polynomial",
    "heat_kernel",
    "map_43_to_heat",
    "map_heat_to_43",
    "sz_map",
    "sz_from_heat",
    "heat_residual",
    "sz_residual",
    "sz_residual_extrapolated",
    "sample",
    "refinement_ratio",
    "Generator",
    "symmetry_transform",
]


class YPoly:
    """Polynomial in ``y`` with exact coefficients, lowest power first.

    Just enough arithmetic for the ladder operators to run with ``k0 = y``.
    """
    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [Fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def y(cls) -> "YPoly":
        return cls((0, 1))

    @staticmethod
    def _lift(other):
        if isinstance(other, YPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return YPoly((other,))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.c), len(o.c))
        a = self.c + (0,) * (n - len(self.c))
        b = o.c + (0,) * (n - len(o.c))
        return YPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return YPoly(-v for v in self.c)

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.c or not o.c:
            return YPoly()
        out = [Fraction(0)] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            for j, b in enumerate(o.c):
                out[i + j] += a * b
        return YPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return YPoly(v / other for v in self.c)
        return NotImplemented

    def __eq__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"YPoly({[str(v) for v in self.c]})"

    def derivative(self) -> "YPoly":
        return YPoly(k * v for k, v in enumerate(self.c) if k > 0)

    def __call__(self, y):
        out = 0.0 * np.asarray(y, float)
        for v in reversed(self.c):
            out = out * y + float(v)
        return out


def _alpha_of(q) -> Fraction:
    if not q > -1:
        raise InvalidParameterError("q must exceed -1")
    qf = Fraction(q)
    return -qf / (qf + 1)


def pi_coefficients(n: int, q) -> list:
    """Coefficients of ``pi_n = M**n 1`` in powers of ``Y``, each a polynomial in ``y``."""
    if n < 0:
        raise InvalidParameterError("n must be non-negative")
    s = LadderState(_alpha_of(q), YPoly.y(), (YPoly((1,)),))
    for _ in range(n):
        s = apply_m(s)
    return list(s.coeffs)


def dpi_dy_check(n: int, q, A=1) -> Fraction:
    """``max_j |d c_j/dy - (P c)_j|`` over the ``Y**j`` coefficients of ``pi_n``.

    The ladder acts on ``Y**j`` coefficients, so ``A`` drops out; it is
    accepted for symmetry with the evaluation routines.
    """
    if not A > 0:
        raise InvalidParameterError("A must be positive")
    coeffs = pi_coefficients(n, q)
    if not coeffs:
        return Fraction(0)
    state = LadderState(_alpha_of(q), YPoly.y(), tuple(coeffs))
    image = list(apply_p(state).coeffs)
    image += [YPoly()] * (len(coeffs) - len(image))
    worst = Fraction(0)
    for c, p in zip(coeffs, image):
        diff = c.derivative() - p
        worst = max([worst] + [abs(v) for v in diff.c])
    return worst


def heat_polynomial(n: int, q: float, A: float = 1.0) -> Callable:
    """``pi_n(x, y)`` as a vectorized callable of ``(x, y)``; ``y`` may be zero."""
    if not A > 0:
        raise InvalidParameterError("A must be positive")
    coeffs = pi_coefficients(n, q)
    qf = float(q)

    def pi(x, y):
        xs = np.asarray(x, float)
        if np.any(xs < 0):
            raise DomainError("x must be non-negative")
        Y = A * np.power(xs, qf + 1) / (qf + 1)
        out = 0.0 * (Y + np.asarray(y, float))
        for c in reversed(coeffs):
            out = out * Y + c(y)
        return out

    return pi


def heat_kernel(x, t, t0: float = 0.0):
    """``(4 pi s)**(-1/2) exp(-x**2/(4 s))`` with ``s = t - t0``."""
    s = np.asarray(t, float) - t0
    if np.any(s <= 0):
        raise DomainError("heat kernel needs t > t0")
    return np.exp(-np.asarray(x, float) ** 2 / (4 * s)) / np.sqrt(4 * math.pi * s)


def map_43_to_heat(u: Callable) -> Callable:
    """``w(z, y) = (z/3) u((z/3)**3, y)``."""

    def w(z, y):
        zs = np.asarray(z, float)
        if np.any(zs <= 0):
            raise DomainError("z must be positive")
        return zs / 3 * u((zs / 3) ** 3, y)

    return w


def map_heat_to_43(w: Callable) -> Callable:
    """Inverse of :func:`map_43_to_heat`: ``u(x, t) = x**(-1/3) w(3 x**(1/3), t)``."""

    def u(x, t):
        xs = np.asarray(x, float)
        if np.any(xs <= 0):
            raise DomainError("x must be positive")
        r = np.cbrt(xs)
        return w(3 * r, t) / r

    return u


def sz_map(u: Callable) -> Callable:
    """``w(xi, tau) = xi**(-3/2) exp(-9 tau/4) u(log xi, tau)``."""

    def w(xi, tau):
        xs = np.asarray(xi, float)
        if np.any(xs <= 0):
            raise DomainError("xi must be positive")
        tau = np.asarray(tau, float)
        return xs ** -1.5 * np.exp(-2.25 * tau) * u(np.log(xs), tau)

    return w


@dataclass(frozen=True)
class ConductivityPDE:
    """``u_t = (x**N u_x)_x`` on the tensor grid ``xs`` by ``ts``."""
    N: float
    xs: np.ndarray
    ts: np.ndarray

    def __post_init__(self):
        if self.N == 2:
            raise InvalidParameterError("N = 2 is excluded")
        object.__setattr__(self, "xs", np.asarray(self.xs, float))
        object.__setattr__(self, "ts", np.asarray(self.ts, float))

    @classmethod
    def default(cls, N: float, points: int = 201) -> "ConductivityPDE":
        return cls(N, np.linspace(0.1, 3.0, points), np.linspace(0.1, 1.0, points))

    def sample(self, u: Callable) -> np.ndarray:
        return sample(u, self.xs, self.ts)


@dataclass(frozen=True)
class SZSolution:
    """Samples ``w[i, j] = w(xi_i, tau_j)``."""
    xi: np.ndarray
    tau: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.xi, float)
        if np.any(xi <= 0):
            raise DomainError("xi must be positive")
        w = np.asarray(self.w, float)
        if w.shape != (xi.size, np.size(self.tau)):
            raise InvalidParameterError("w must have shape (len(xi), len(tau))")
        if not np.all(np.isfinite(w)):
            raise InvalidParameterError("non-finite samples")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "tau", np.asarray(self.tau, float))
        object.__setattr__(self, "w", w)

    def csv(self) -> str:
        lines = ["xi,tau,w"]
        for i, x in enumerate(self.xi):
            for j, t in enumerate(self.tau):
                lines.append(f"{x:.12g},{t:.12g},{self.w[i, j]:.12g}")
        return "\n".join(lines) + "\n"


def sample(u: Callable, xs, ts) -> np.ndarray:
    """``u`` on the grid, indexed ``[x, t]``."""
    X, T = np.meshgrid(np.asarray(xs, float), np.asarray(ts, float), indexing="ij")
    return np.asarray(u(X, T), float) * np.ones_like(X)


def sz_from_heat(u: Callable, xi, tau) -> SZSolution:
    xi = np.asarray(xi, float)
    if np.any(xi <= 0):
        raise DomainError("xi must be positive")
    return SZSolution(xi, np.asarray(tau, float), sample(sz_map(u), xi, tau))


def _uniform_step(v: np.ndarray, name: str) -> float:
    if v.size < 5:
        raise GridTooCoarseError(f"need at least 5 {name} points, got {v.size}")
    d = np.diff(v)
    h = d[0]
    if not h > 0 or np.max(np.abs(d - h)) > 1e-9 * max(1.0, abs(v).max()):
        raise InvalidParameterError(f"{name} grid must be uniform and increasing")
    return float(h)


def _flux_residual(xs, ts, u, conductivity, outer=None):
    """``u_t - outer(x) (K u_x)_x`` at interior nodes, flux form with midpoint ``K``."""
    h = _uniform_step(xs, "x")
    k = _uniform_step(ts, "t")
    u = np.asarray(u, float)
    if u.shape != (xs.size, ts.size):
        raise InvalidParameterError("samples must have shape (len(xs), len(ts))")
    x_half = 0.5 * (xs[1:] + xs[:-1])
    K = conductivity(x_half)[:, None]
    flux = K * (u[1:, :] - u[:-1, :]) / h
    div = (flux[1:, :] - flux[:-1, :]) / h
    if outer is not None:
        div = outer(xs[1:-1])[:, None] * div
    ut = (u[:, 2:] - u[:, :-2]) / (2 * k)
    return ut[1:-1, :] - div[:, 1:-1]


def heat_residual(pde: ConductivityPDE, u_samples) -> float:
    """``max |u_t - (x**N u_x)_x|`` over interior nodes, second-order central differences."""
    r = _flux_residual(pde.xs, pde.ts, u_samples, lambda x: np.power(x, float(pde.N)))
    return float(np.max(np.abs(r)))


def sz_residual(sol: SZSolution) -> float:
    """``max |w_tau - xi**(-2) (xi**4 w_xi)_xi|`` over interior nodes."""
    r = _flux_residual(sol.xi, sol.tau, sol.w, lambda x: x ** 4, outer=lambda x: x ** -2.0)
    return float(np.max(np.abs(r)))


def sz_residual_extrapolated(u: Callable, xi_range=(0.5, 2.0), tau_range=(0.5, 1.0),
                             h: float = 5e-3) -> float:
    """Richardson-extrapolated SZ residual of the mapped heat solution ``u``.

    The residual fields on steps ``h`` and ``h/2`` are combined node by node
    as ``(4 r_{h/2} - r_h)/3``, which cancels the ``O(h**2)`` term.
    """
    fields = []
    for step in (h, h / 2):
        xi = np.arange(xi_range[0], xi_range[1] + 1e-12, step)
        tau = np.arange(tau_range[0], tau_range[1] + 1e-12, step)
        sol = sz_from_heat(u, xi, tau)
        fields.append(_flux_residual(sol.xi, sol.tau, sol.w, lambda x: x ** 4, outer=lambda x: x ** -2.0))
    coarse, fine = fields
    fine = fine[1::2, 1::2][:coarse.shape[0], :coarse.shape[1]]
    return float(np.max(np.abs((4 * fine - coarse) / 3)))


def refinement_ratio(residual_at: Callable[[float], float], h: float) -> tuple[float, float, float]:
    """``(r(h), r(h/2), r(h)/r(h/2))``; about 4 for a second-order scheme."""
    r1 = residual_at(h)
    r2 = residual_at(h / 2)
    return r1, r2, (r1 / r2 if r2 else math.inf)


class Generator(enum.Enum):
    X1 = "X1"
    X2 = "X2"
    X6 = "X6"


def symmetry_transform(gen, eps: float, u: Callable, N: float) -> Callable:
    """Finite flow of a point symmetry of ``u_t = (x**N u_x)_x``.

    ``X1`` translates time, ``X2`` is the scaling
    ``exp(-eps/(2(2-N))) u(exp(-eps/(2-N)) x, exp(-eps) t)``, ``X6`` scales
    the solution by ``exp(eps)``.
    """
    if N == 2:
        raise InvalidParameterError("N = 2 is excluded")
    gen = Generator(gen.value if isinstance(gen, Generator) else gen)
    if gen is Generator.X1:
        return lambda x, t: u(x, np.asarray(t, float) - eps)
    if gen is Generator.X2:
        s = 2 - N
        amp, sx, st = math.exp(-eps / (2 * s)), math.exp(-eps / s), math.exp(-eps)
        return lambda x, t: amp * u(sx * np.asarray(x, float), st * np.asarray(t, float))
    factor = math.exp(eps)
    return lambda x, t: factor * u(x, t)
