"""Command-line interface: ``umbral {modes,verify,solve-ide,sz,gram}``.

Every subcommand accepts ``--config FILE`` holding ``key = value`` lines
whose keys are the long option names (``xmax``, ``tail-tol``, ...).  Flags
given on the command line override file values.

Exit codes: 0 success, 1 verification failure, 2 bad parameters,
3 I/O failure, 4 series truncation tail above ``--tail-tol``.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from fractions import Fraction

import numpy as np

from . import beams, orthogonality, pde_maps, solver, verify
from .errors import DomainError, InvalidParameterError, TruncationError, TruncationWarning, UmbralError
from .profiles import Basis

EXIT_OK, EXIT_VERIFY, EXIT_PARAMS, EXIT_IO, EXIT_TRUNCATION = 0, 1, 2, 3, 4


class ConfigError(InvalidParameterError):
    pass


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from exc
    return vals


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}") from exc


def _number(text: str):
    """Rational if written as an integer or ``p/q``, float otherwise."""
    text = str(text).strip()
    try:
        return Fraction(text) if "." not in text and "e" not in text.lower() else float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _truthy(v) -> bool:
    if isinstance(v, bool):
        return v
    return str(v).strip().lower() in ("1", "true", "yes", "on")


class _Parser(argparse.ArgumentParser):
    """Reports usage errors with exit code 2 (argparse's default as well)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAMS, f"error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="umbral", description="Ladder-operator eigenfunctions, verification and solvers.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--config", help="key = value file; flags override it")
        sp.add_argument("--output", "-o", help="write CSV here instead of stdout")

    m = sub.add_parser("modes", help="flattened beam mode profiles as CSV")
    common(m)
    m.add_argument("--q", type=float, default=3.0)
    m.add_argument("--A", type=float, default=1.0)
    m.add_argument("--y", type=float, default=-1.0)
    m.add_argument("--n", type=_int_list, default=[0, 1, 2])
    m.add_argument("--xmax", type=float, default=3.0)
    m.add_argument("--points", type=int, default=301)
    m.add_argument("--squared", action="store_true", help="emit |Phi_n|^2 instead of Phi_n")

    v = sub.add_parser("verify", help="run invariant checks")
    common(v)
    v.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")

    s = sub.add_parser("solve-ide", help="lifted series solution of f_tau = F(P, M) f")
    common(s)
    s.add_argument("--example", action="store_true",
                   help="use the closed-form series of y = exp(tau^2/2 + tau x)")
    s.add_argument("--operator", default="P+M", help="F(P, M) for the RK4 route, e.g. 'P+M'")
    s.add_argument("--tau", type=float, default=0.25)
    s.add_argument("--N", type=int, default=30)
    s.add_argument("--q", type=float, default=3.0)
    s.add_argument("--A", type=float, default=1.0)
    s.add_argument("--k0", type=float, default=-1.0)
    s.add_argument("--xmax", type=float, default=2.0)
    s.add_argument("--points", type=int, default=41)
    s.add_argument("--tail-tol", type=float, default=1e-10)

    z = sub.add_parser("sz", help="SZ-equation solution from a heat solution")
    common(z)
    z.add_argument("--init", choices=("heat-kernel", "constant", "heat-polynomial"), default="heat-kernel")
    z.add_argument("--tau", type=_float_list, default=[1.0], help="comma-separated times")
    z.add_argument("--xi-min", type=float, default=0.5)
    z.add_argument("--xi-max", type=float, default=2.0)
    z.add_argument("--points", type=int, default=31)
    z.add_argument("--degree", type=int, default=1, help="heat-polynomial degree")

    g = sub.add_parser("gram", help="Gram matrix of an eigenfunction family")
    common(g)
    g.add_argument("--family", choices=("bare", "prefactored"), default="bare")
    g.add_argument("--q", type=_number, default=Fraction(3))
    g.add_argument("--A", type=float, default=1.0)
    g.add_argument("--k0", type=_number, default=Fraction(-1))
    g.add_argument("--alpha", type=_number, default=Fraction(0))
    g.add_argument("--nmax", type=int, default=3)
    g.add_argument("--method", choices=("gauss", "adaptive"), default="gauss")
    return p


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            cfg = read_config(args.config)
        except OSError as exc:
            raise _IOFailure(str(exc)) from exc
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = set(cfg) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
        for action in sub._actions:
            if action.dest in cfg and isinstance(action, argparse._StoreTrueAction):
                cfg[action.dest] = _truthy(cfg[action.dest])
        sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
    return args


class _IOFailure(Exception):
    pass


def _emit(text: str, path: str | None):
    if path:
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise _IOFailure(str(exc)) from exc
    else:
        sys.stdout.write(text)


def cmd_modes(args) -> int:
    if args.points < 2:
        raise InvalidParameterError("points must be at least 2")
    if not args.xmax > 0:
        raise InvalidParameterError("xmax must be positive")
    if any(n < 0 for n in args.n):
        raise InvalidParameterError("mode indices must be non-negative")
    xs = np.linspace(0.0, args.xmax, args.points)
    header, table = beams.emit_profiles(args.n, args.q, args.A, args.y, xs, squared=args.squared)
    _emit(beams.profiles_csv(header, table), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        mode = verify.precision()
    except ValueError as exc:
        raise InvalidParameterError(str(exc)) from exc
    checks = verify.run(args.suite, mode)
    report = [f"precision: {mode}"] + [c.line() for c in checks]
    failed = sum(not c.passed for c in checks)
    report.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    _emit("\n".join(report) + "\n", args.output)
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def cmd_solve_ide(args) -> int:
    if args.N < 1:
        raise InvalidParameterError("N must be at least 1")
    if args.points < 1 or not args.xmax > 0:
        raise InvalidParameterError("need points >= 1 and xmax > 0")
    if args.tau < 0:
        raise InvalidParameterError("tau must be non-negative")
    basis = Basis.bare(args.q, args.A, args.k0)
    if args.example:
        series = solver.closed_form_series(args.N, basis)
    else:
        F = solver.OperatorWord.parse(args.operator)
        series = solver.evolve_series(F, [1.0], args.tau, args.N, basis)
    tail = abs(float(series.coeffs(args.tau)[args.N]))
    if tail > args.tail_tol:
        raise TruncationError(f"series tail |c_N| = {tail:.3g} exceeds --tail-tol {args.tail_tol:.3g}")
    x0 = basis.profile.x0
    xs = x0 + np.linspace(0.0, args.xmax, args.points + 1)[1:]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        f = solver.lift_and_sample(series, args.tau, xs)
    _, res = solver.ide_residual_numeric(series, basis.operators(), args.tau, xs, return_all=True)
    lines = ["tau,x,f,residual"]
    lines += [f"{args.tau:.12g},{x:.12g},{v:.12g},{r:.12g}" for x, v, r in zip(xs, f, res)]
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _sz_initial(args):
    if args.init == "heat-kernel":
        return pde_maps.heat_kernel
    if args.init == "constant":
        return lambda x, t: np.ones(np.broadcast(np.asarray(x), np.asarray(t)).shape)
    if args.degree < 0:
        raise InvalidParameterError("degree must be non-negative")
    p = pde_maps.heat_polynomial(args.degree, 1, 1.0)
    # pi_n(x, y) with q=1, A=1 solves the heat equation in t = y/2; it is even in x
    return lambda x, t: p(np.abs(x), 2 * np.asarray(t, float))


def cmd_sz(args) -> int:
    if not 0 < args.xi_min <= 1 <= args.xi_max:
        raise InvalidParameterError("xi range must be positive and contain 1")
    if args.points < 2:
        raise InvalidParameterError("points must be at least 2")
    if not args.tau:
        raise InvalidParameterError("at least one tau is required")
    if args.init == "heat-kernel" and min(args.tau) <= 0:
        raise InvalidParameterError("the heat kernel needs tau > 0")
    xi = np.union1d(np.linspace(args.xi_min, args.xi_max, args.points), [1.0])
    sol = pde_maps.sz_from_heat(_sz_initial(args), xi, np.asarray(args.tau, float))
    _emit(sol.csv(), args.output)
    return EXIT_OK


def cmd_gram(args) -> int:
    if args.nmax < 0:
        raise InvalidParameterError("nmax must be non-negative")
    if args.family == "bare":
        if not args.A > 0:
            raise InvalidParameterError("A must be positive")
        spec = Basis.bare(args.q, args.A, args.k0)
    else:
        spec = Basis.prefactored(args.alpha, args.k0)
    g = orthogonality.gram_matrix(spec, args.nmax, method=args.method)
    _emit(orthogonality.gram_csv(g), args.output)
    return EXIT_OK


COMMANDS = {"modes": cmd_modes, "verify": cmd_verify, "solve-ide": cmd_solve_ide,
            "sz": cmd_sz, "gram": cmd_gram}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TruncationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (InvalidParameterError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except UmbralError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
