"""Coefficient-space ladder operators.

A :class:`LadderState` holds the coefficients ``c_j`` of a function
``sum_j c_j e_j`` where the basis elements are either

* ``e_j = Y'(x) * Y(x)**(alpha + j)`` (prefactored flavor), or
* ``e_j = Y(x)**j`` with ``alpha = -q/(q+1)`` (bare flavor, power-law ``Y``).

Both flavors obey the same ladder rules::

    M e_j = e_{j+1} / (alpha + j + 1) + k0 * e_j
    P e_j = j * (alpha + j) * e_{j-1}

so the operators here never need to evaluate anything at a point ``x``.
When ``alpha`` and ``k0`` are rational (``int`` or ``Fraction``) all
arithmetic is exact; floats switch the state to floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping

from .errors import InvalidParameterError

__all__ = [
    "LadderState",
    "apply_m",
    "apply_p",
    "apply_number",
    "monomial",
    "closed_form_coeffs",
    "is_exact",
]


def is_exact(*values: Any) -> bool:
    return not any(isinstance(v, (float, complex)) for v in values)


def _exact(v):
    if isinstance(v, bool):
        raise TypeError("boolean is not a coefficient")
    if isinstance(v, int):
        return Fraction(v)
    return v


@dataclass(frozen=True)
class LadderState:
    alpha: Any
    k0: Any
    coeffs: tuple = ()

    def __post_init__(self):
        alpha, k0 = self.alpha, self.k0
        if not alpha > -1:
            raise InvalidParameterError(f"alpha must exceed -1, got {alpha}")
        if k0 == 0:
            raise InvalidParameterError("k0 must be non-zero")
        if is_exact(alpha, k0):
            alpha, k0 = _exact(alpha), _exact(k0)
            cs = [_exact(c) for c in self.coeffs]
            if any(isinstance(c, float) for c in cs):
                raise TypeError("float coefficient in an exact state")
        else:
            alpha, k0 = float(alpha), float(k0)
            cs = [float(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "k0", k0)
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_dict(cls, alpha, k0, coeffs: Mapping[int, Any]) -> "LadderState":
        if any(j < 0 for j in coeffs):
            raise InvalidParameterError("basis indices must be non-negative")
        top = max(coeffs, default=-1)
        return cls(alpha, k0, tuple(coeffs.get(j, 0) for j in range(top + 1)))

    @classmethod
    def unit(cls, alpha, k0) -> "LadderState":
        return cls(alpha, k0, (1,))

    @property
    def exact(self) -> bool:
        return is_exact(self.alpha, self.k0)

    @property
    def degree(self) -> int:
        """Highest stored basis index, -1 for the zero state."""
        return len(self.coeffs) - 1

    def as_dict(self) -> dict:
        return {j: c for j, c in enumerate(self.coeffs) if c != 0}

    def to_float(self) -> "LadderState":
        return LadderState(float(self.alpha), float(self.k0), tuple(float(c) for c in self.coeffs))

    def _like(self, coeffs: Iterable) -> "LadderState":
        return LadderState(self.alpha, self.k0, tuple(coeffs))

    def _check_compatible(self, other: "LadderState"):
        if self.alpha != other.alpha or self.k0 != other.k0:
            raise InvalidParameterError("states carry different (alpha, k0)")

    def __add__(self, other):
        if not isinstance(other, LadderState):
            return NotImplemented
        self._check_compatible(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return self._like(x + y for x, y in zip(a, b))

    def __neg__(self):
        return self._like(-c for c in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, LadderState):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, LadderState):
            return NotImplemented
        s = _exact(scalar) if self.exact else scalar
        return self._like(s * c for c in self.coeffs)

    __rmul__ = __mul__

    def allclose(self, other: "LadderState", rtol=1e-12, atol=0.0) -> bool:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return all(abs(x - y) <= atol + rtol * max(abs(x), abs(y)) for x, y in zip(a, b))

    def csv_rows(self) -> list[str]:
        """``j,numerator,denominator`` rows for exact states, ``j,value`` otherwise."""
        if self.exact:
            return [f"{j},{Fraction(c).numerator},{Fraction(c).denominator}"
                    for j, c in enumerate(self.coeffs)]
        return [f"{j},{c:.12g}" for j, c in enumerate(self.coeffs)]


def apply_m(state: LadderState) -> LadderState:
    """Raising operator: ``c'_j = k0 c_j + c_{j-1} / (alpha + j)``."""
    cs = state.coeffs
    if not cs:
        return state
    a, k0 = state.alpha, state.k0
    out = [k0 * c for c in cs] + [0 * cs[0]]
    for j in range(1, len(out)):
        out[j] = out[j] + cs[j - 1] / (a + j)
    return state._like(out)


def apply_p(state: LadderState) -> LadderState:
    """Lowering operator: ``c'_j = (j+1)(alpha+j+1) c_{j+1}``; kills ``e_0``."""
    a = state.alpha
    cs = state.coeffs
    return state._like((j + 1) * (a + j + 1) * cs[j + 1] for j in range(len(cs) - 1))


def apply_number(state: LadderState) -> LadderState:
    return apply_p(apply_m(state))


def monomial(n: int, alpha, k0) -> LadderState:
    """``M**n`` applied to the seed ``e_0``."""
    if n < 0:
        raise InvalidParameterError("n must be non-negative")
    s = LadderState.unit(alpha, k0)
    for _ in range(n):
        s = apply_m(s)
    return s


def closed_form_coeffs(n: int, alpha, k0) -> LadderState:
    """Coefficients of ``M**n e_0`` from the generalized-binomial formula.

    ``c_j = N_n * binom(n + alpha, n - j) * k0**(n-j) / j!`` with the ladder
    normalization ``N_n = n! Gamma(alpha+1) / Gamma(n+alpha+1)``; this equals
    ``k0**n * N_n * L_n^(alpha)(-Y/k0)`` written in powers of ``Y``.
    """
    if n < 0:
        raise InvalidParameterError("n must be non-negative")
    if not alpha > -1:
        raise InvalidParameterError(f"alpha must exceed -1, got {alpha}")
    if is_exact(alpha, k0):
        a, k = _exact(alpha), _exact(k0)
        rising = [Fraction(1)]  # rising[j] = prod_{m=1}^{j} (a + m)
        for m in range(1, n + 1):
            rising.append(rising[-1] * (a + m))
        norm = math.factorial(n) / rising[n]
        cs = [norm * (rising[n] / rising[j]) / math.factorial(n - j) * k ** (n - j) / math.factorial(j)
              for j in range(n + 1)]
        return LadderState(a, k, tuple(cs))

    a, k = float(alpha), float(k0)
    for arg in (a + 1, n + a + 1):
        if arg <= 0 and arg == int(arg):
            raise InvalidParameterError(f"Gamma pole at {arg}")
    log_norm = math.lgamma(n + 1) + math.lgamma(a + 1) - math.lgamma(n + a + 1)
    cs = []
    for j in range(n + 1):
        log_binom = math.lgamma(n + a + 1) - math.lgamma(n - j + 1) - math.lgamma(a + j + 1)
        cs.append(math.exp(log_norm + log_binom - math.lgamma(j + 1)) * k ** (n - j))
    return LadderState(a, k, tuple(cs))
