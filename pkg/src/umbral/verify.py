"""Self-check suites behind ``umbral verify``.

Each check returns a :class:`Check` carrying the measured quantity and the
threshold it was compared against.  ``UMBRAL_PRECISION`` selects exact
rational arithmetic (default) or float64 for the ladder checks.
"""
from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import beams, orthogonality, pde_maps, solver
from .ladder import LadderState, apply_m, apply_number, apply_p, closed_form_coeffs, monomial
from .laguerre import closed_form_u_powerlaw, closed_form_u_prefactored
from .profiles import Basis, boundary_residual, make_operators, make_power_law

SUITES = ("ladder", "ortho", "pde", "ide", "beams")


@dataclass
class Check:
    name: str
    value: float
    threshold: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{tag} {self.name}: {self.value:.3e} (limit {self.threshold:.1e}){extra}"


def _below(name, value, threshold, detail=""):
    value = float(value)
    return Check(name, value, threshold, value <= threshold, detail)


def precision() -> str:
    mode = os.environ.get("UMBRAL_PRECISION", "rational").strip().lower()
    if mode not in ("rational", "float64"):
        raise ValueError(f"UMBRAL_PRECISION must be 'rational' or 'float64', got {mode!r}")
    return mode


def _params(mode):
    alphas = [Fraction(-3, 4), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(2)]
    k0s = [Fraction(-1), Fraction(-2)]
    if mode == "float64":
        return [float(a) for a in alphas], [float(k) for k in k0s]
    return alphas, k0s


def _max_abs(state: LadderState) -> float:
    return max((abs(float(c)) for c in state.coeffs), default=0.0)


def suite_ladder(mode: str | None = None) -> list[Check]:
    mode = mode or precision()
    tol = 0.0 if mode == "rational" else 1e-9
    alphas, k0s = _params(mode)
    rng = random.Random(20240611)
    worst = 0.0
    for _ in range(100):
        a, k = rng.choice(alphas), rng.choice(k0s)
        cs = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(rng.randint(1, 41))]
        if mode == "float64":
            cs = [float(c) for c in cs]
        s = LadderState(a, k, tuple(cs))
        comm = apply_p(apply_m(s)) - apply_m(apply_p(s)) - s
        scale = max(1.0, _max_abs(s)) if mode == "float64" else 1.0
        worst = max(worst, _max_abs(comm) / scale)
    out = [_below("commutator [P, M] = 1 on 100 random states", worst, tol)]

    worst = 0.0
    for a in alphas:
        for k in k0s:
            for n in range(26):
                u = monomial(n, a, k)
                r = apply_number(u) - (n + 1) * u
                worst = max(worst, _max_abs(r) / (1.0 if mode == "rational" else max(1.0, _max_abs(u))))
    out.append(_below("eigenvalue L u_n = (n+1) u_n, n <= 25", worst, tol))

    worst = 0.0
    for a in alphas:
        for k in k0s:
            for n in range(11):
                d = monomial(n, a, k) - closed_form_coeffs(n, a, k)
                worst = max(worst, _max_abs(d) / (1.0 if mode == "rational" else max(1.0, _max_abs(monomial(n, a, k)))))
    out.append(_below("ladder monomials equal Gamma-formula coefficients, n <= 10", worst, tol))

    xs = np.linspace(0.1, 3.0, 60)
    worst = 0.0
    for n in range(11):
        b = Basis.bare(3, 1, -1)
        lad = b.evaluate(n, xs)
        ref = closed_form_u_powerlaw(n, 3.0, 1.0, -1.0, xs)
        worst = max(worst, np.max(np.abs(lad - ref) / np.maximum(np.abs(ref), 1e-12 * np.max(np.abs(ref)))))
        bp = Basis.prefactored(Fraction(1, 2), -2)
        lad = bp.evaluate(n, xs)
        ref = closed_form_u_prefactored(n, 0.5, -2.0, bp.profile, xs)
        worst = max(worst, np.max(np.abs(lad - ref) / np.maximum(np.abs(ref), 1e-12 * np.max(np.abs(ref)))))
    out.append(_below("pointwise ladder vs Laguerre closed form on [0.1, 3]", worst, 1e-10, "relative"))

    ops = make_operators(make_power_law(1.0, 0.0, 0.0), -1.0, 0.0, -2.0)
    log_seed = boundary_residual(ops, np.log, lambda x: 1 / x)
    out.append(Check("logarithmic seed violates the boundary condition", abs(log_seed), 1e-6,
                     abs(log_seed) > 1e-6, "negative control, must be non-zero"))
    return out


def suite_ortho() -> list[Check]:
    out = []
    lines = []
    for label, spec in (("bare q=3 A=1 k0=-1", Basis.bare(3, 1, -1)),
                        ("prefactored alpha=1/2 k0=-2", Basis.prefactored(Fraction(1, 2), -2))):
        g = orthogonality.gram_matrix(spec, 10)
        diag = np.sqrt(np.abs(np.diag(g)))
        rel = np.abs(g) / np.outer(diag, diag)
        np.fill_diagonal(rel, 0.0)
        out.append(_below(f"Gram off-diagonal, n,m <= 10, {label}", rel.max(), 1e-8, "relative"))
        oracle = np.array([orthogonality.norm_oracle(spec, n) for n in range(11)])
        out.append(_below(f"Gram diagonal vs analytic norm, {label}",
                          np.max(np.abs(np.diag(g) - oracle) / oracle), 1e-8, "relative"))
        ad = orthogonality.gram_matrix(spec, 3, method="adaptive")
        out.append(_below(f"Gauss-Laguerre vs adaptive x-space quadrature, n,m <= 3, {label}",
                          np.max(np.abs(ad - g[:4, :4])) / np.max(np.abs(g[:4, :4])), 1e-8, "relative"))
        for n, stated, orc, quad in orthogonality.norm_comparison(spec, 3):
            lines.append(f"  {label} n={n}: quoted constant {stated:.10g}, analytic {orc:.10g}, quadrature {quad:.10g}")
    ref = math.gamma(0.25) / 8
    val = orthogonality.inner_product(Basis.bare(3, 1, -1), 0, 0)
    out.append(_below("bare n=0 norm equals Gamma(1/4)/8", abs(val - ref), 1e-8,
                      f"{val:.10f} vs {ref:.10f}"))
    out.append(Check("quoted norm constants vs analytic norms (informational)", 0.0, 0.0, True,
                     "not asserted; they coincide only for special (alpha, k0)\n" + "\n".join(lines)))
    return out


def _heat_poly_residual(n, h):
    xs = np.arange(0.1, 3.0 + 1e-12, h)
    ts = np.arange(0.1, 1.0 + 1e-12, h)
    pde = pde_maps.ConductivityPDE(0.0, xs, ts)
    p = pde_maps.heat_polynomial(n, 1, 1.0)
    return pde_maps.heat_residual(pde, pde.sample(lambda x, t: p(x, 2 * t)))


def _map43_residual(h):
    u = pde_maps.map_heat_to_43(lambda z, y: pde_maps.heat_kernel(z, y, -1.0))
    xs = np.arange(0.5, 3.0 + 1e-12, h)
    ts = np.arange(0.1, 1.0 + 1e-12, h)
    pde = pde_maps.ConductivityPDE(4 / 3, xs, ts)
    return pde_maps.heat_residual(pde, pde.sample(u))


def _sz_residual(h):
    xi = np.arange(0.5, 2.0 + 1e-12, h)
    tau = np.arange(0.5, 1.0 + 1e-12, h)
    return pde_maps.sz_residual(pde_maps.sz_from_heat(pde_maps.heat_kernel, xi, tau))


def suite_pde() -> list[Check]:
    out = []
    worst = max(abs(float(pde_maps.dpi_dy_check(n, q))) for q in (0, 1, 3, Fraction(1, 3)) for n in range(21))
    out.append(_below("d pi_n/dy = P pi_n exactly, n <= 20", worst, 0.0))
    for label, fn in (("heat polynomial pi_2 (q=1)", lambda h: _heat_poly_residual(2, h)),
                      ("N=4/3 map of the heat kernel", _map43_residual),
                      ("SZ map of the heat kernel", _sz_residual)):
        r1, r2, ratio = pde_maps.refinement_ratio(fn, 1e-2)
        out.append(Check(f"{label}: O(h^2) refinement ratio", ratio, 4.0, 3.5 <= ratio <= 4.5,
                         f"residuals {r1:.3e} -> {r2:.3e}, accepted range [3.5, 4.5]"))
    out.append(_below("N=4/3 mapped residual at h=5e-3", _map43_residual(5e-3), 1e-4))
    out.append(_below("SZ mapped residual at h=5e-3", _sz_residual(5e-3), 1e-4))
    u = lambda x, t: 9 * np.cbrt(x) + 2 * t / np.cbrt(x)
    w = pde_maps.map_43_to_heat(u)
    zs, ys = np.linspace(0.5, 3, 51), np.linspace(0.1, 1, 51)
    pde = pde_maps.ConductivityPDE(0.0, zs, ys)
    out.append(_below("N=4/3 solution maps to a heat solution", pde_maps.heat_residual(pde, pde.sample(w)), 1e-6))
    g = pde_maps.symmetry_transform("X2", 0.3, lambda x, t: pde_maps.heat_kernel(x, t, -1.0), 0.0)
    pde = pde_maps.ConductivityPDE.default(0.0)
    out.append(_below("scaling flow X2 keeps a heat solution a solution", pde_maps.heat_residual(pde, pde.sample(g)), 1e-5))
    ctrl = pde_maps.ConductivityPDE(0.5, np.linspace(0.1, 3, 51), np.linspace(0.1, 1, 51))
    r = pde_maps.heat_residual(ctrl, ctrl.sample(lambda x, t: x + 0 * t))
    out.append(Check("u = x is not a solution for N = 1/2", r, 1e-3, r > 1e-3, "negative control"))
    return out


def suite_ide() -> list[Check]:
    out = []
    F = solver.OperatorWord.parse("P+M")
    series = solver.closed_form_series(30, exact=True)
    res = solver.residual_coeffs(series, F, Fraction(1, 4))
    out.append(_below("coefficient residual vanishes below index N", max(abs(float(v)) for v in res[:-1]), 0.0))
    fs = solver.closed_form_series(30)
    basis = fs.basis
    ops = basis.operators()
    xs = np.linspace(0.0, 2.0, 41)
    r = solver.ide_residual_numeric(fs, ops, 0.25, xs)
    out.append(_below("integro-differential residual on [0, 2] at tau=0.25, N=30", r, 1e-6))
    ev = solver.evolve_series(F, solver.example_series(0.0, 30), 0.5, 30)
    err = np.max(np.abs(ev.coeffs(0.5) - solver.example_series(0.5, 30)))
    out.append(_below("RK4 evolution vs closed form at tau=0.5", err, 1e-8))
    bad = solver.UmbralSeries(basis, 30, lambda t: solver.example_series(t, 30) + 0.1 * (np.arange(31) == 1),
                              fs.dcoeff_fn)
    r = solver.ide_residual_numeric(bad, ops, 0.25, xs)
    out.append(Check("series with a wrong c_1 fails the residual check", r, 1e-2, r > 1e-2, "negative control"))
    return out


def suite_beams() -> list[Check]:
    out = []
    modes = [beams.mode(n) for n in range(7)]
    G = np.array([[beams.overlap(a, b) for b in modes] for a in modes])
    out.append(_below("mode orthonormality, m,n <= 6", np.max(np.abs(G - np.eye(7))), 1e-6))
    xs = np.linspace(0.0, 3.0, 301)
    lhs = beams.mode_eval(modes[0], xs) ** 2
    rhs = modes[0].alpha_n ** 2 * np.exp(-xs ** 4 / 4)
    out.append(_below("Phi_0^2 is a super-gaussian of power q+1", np.max(np.abs(lhs - rhs)), 1e-10))
    zeros = [beams.count_zeros(p) for p in modes]
    out.append(Check("Phi_n has n zeros, n <= 6", float(sum(abs(z - n) for n, z in enumerate(zeros))), 0.0,
                     zeros == list(range(7)), f"counts {zeros}"))
    out.append(_below("Phi_1 vanishes at x = 1", abs(beams.mode_eval(modes[1], 1.0)), 1e-9))
    out.append(Check("envelope sign convention (informational)", 0.0, 0.0, True,
                     "modes use exp(A x^(q+1)/(2 y (q+1))) with y < 0, i.e. the decaying envelope"))
    return out


def run(suite: str = "all", mode: str | None = None) -> list[Check]:
    if suite == "all":
        names = SUITES
    elif suite in SUITES:
        names = (suite,)
    else:
        raise ValueError(f"unknown suite {suite!r}")
    checks = []
    for name in names:
        fn = {"ladder": lambda: suite_ladder(mode), "ortho": suite_ortho, "pde": suite_pde,
              "ide": suite_ide, "beams": suite_beams}[name]
        checks.extend(fn())
    return checks
