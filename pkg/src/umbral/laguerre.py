"""Generalized Laguerre polynomials and closed forms of the eigenfunctions."""
from __future__ import annotations

import math

import numpy as np

from .errors import InvalidParameterError, SingularPointError
from .profiles import YProfile

__all__ = [
    "gamma",
    "laguerre_eval",
    "laguerre_deriv",
    "ladder_normalization",
    "closed_form_u_powerlaw",
    "closed_form_u_prefactored",
]


def gamma(x: float) -> float:
    """Real Gamma function; raises at the poles 0, -1, -2, ..."""
    x = float(x)
    if x <= 0 and x == int(x):
        raise InvalidParameterError(f"Gamma has a pole at {x}")
    return math.gamma(x)


def laguerre_eval(n: int, alpha: float, z):
    """``L_n^(alpha)(z)`` by the three-term recurrence."""
    if n < 0:
        raise InvalidParameterError("n must be non-negative")
    z = np.asarray(z, float)
    a = float(alpha)
    prev = np.ones_like(z)
    if n == 0:
        return prev[()] if prev.ndim == 0 else prev
    cur = 1 + a - z
    for k in range(2, n + 1):
        prev, cur = cur, ((2 * k - 1 + a - z) * cur - (k - 1 + a) * prev) / k
    return cur[()] if cur.ndim == 0 else cur


def laguerre_deriv(n: int, alpha: float, z, order: int = 1):
    """``d^order/dz^order L_n^(alpha) = (-1)^order L_{n-order}^(alpha+order)``."""
    if order > n:
        return np.zeros_like(np.asarray(z, float))[()]
    return (-1) ** order * laguerre_eval(n - order, float(alpha) + order, z)


def ladder_normalization(n: int, alpha: float) -> float:
    """``n! Gamma(alpha+1) / Gamma(n+alpha+1)``: ladder monomials over ``k0**n L_n``."""
    a = float(alpha)
    if not a > -1:
        raise InvalidParameterError("alpha must exceed -1")
    return math.exp(math.lgamma(n + 1) + math.lgamma(a + 1) - math.lgamma(n + a + 1))


def closed_form_u_powerlaw(n: int, q: float, A: float, k0: float, x):
    """Constant-seed eigenfunction for ``Y' = A x**q`` through Laguerre polynomials."""
    if not q > -1:
        raise InvalidParameterError("q must exceed -1")
    if k0 == 0:
        raise InvalidParameterError("k0 must be non-zero")
    xs = np.asarray(x, float)
    if np.any(xs < 0):
        raise SingularPointError("x must be non-negative")
    a = -q / (q + 1)
    z = -A / (k0 * (q + 1)) * xs ** (q + 1)
    return ladder_normalization(n, a) * k0 ** n * laguerre_eval(n, a, z)


def closed_form_u_prefactored(n: int, alpha: float, k0: float, profile: YProfile, x):
    """Prefactored eigenfunction ``Y' Y**alpha * N_n k0**n L_n^(alpha)(-Y/k0)``."""
    xs = np.asarray(x, float)
    if np.any(xs < profile.x0) or (alpha < 0 and np.any(xs == profile.x0)):
        raise SingularPointError("x must lie in (x0, inf)")
    y = np.asarray(profile.y(xs), float)
    val = (profile.dy(xs) * np.power(y, float(alpha))
           * ladder_normalization(n, alpha) * float(k0) ** n * laguerre_eval(n, alpha, -y / k0))
    return val[()] if np.ndim(val) == 0 else val
