"""Command-line front end: ``thetaxi {eval,check-functional,converge,reduce,selftest}``.

Results go to stdout (or ``--out``) as CSV with a header row, or as JSON lines
with ``--json``.  Complex numbers are written as ``a+bi`` with 17 significant
digits.  Timings and summaries go to stderr so that the data stream is
byte-identical between runs.

Exit codes: 0 success, 1 a check or threshold failed, 2 domain error
(including argument errors), 3 tolerance failure.  On errors the exception
class name is printed to stderr as ``error: <Name>: <message>``.

Settings resolve as flags > ``THETAXI_*`` environment variables > ``--config``
key=value file > built-in defaults.
"""
from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .asymptotics import convergence_study, correction_C, correction_D
from .errors import DomainError, ThetaXiError, ToleranceError
from .mellin import QuadratureConfig, f_z, functional_equation_residual
from .modular_forms import (S, T2, h_z, in_theta_group, j_theta, lambda_modular,
                            reduce_to_fundamental_domain, theta)
from .quadrature import integrate
from .special_functions import (polylog_unit_circle, riemann_zeta, upper_incomplete_gamma,
                                xi_completed, xi_via_theta)

ENV_PREFIX = "THETAXI_"
TARGETS = ("theta", "lambda", "jtheta", "hz", "F", "xi", "xi_theta")

# setting name -> (type, default)
SETTINGS = {
    "abs_tol": (float, 1e-10),
    "rel_tol": (float, 1e-9),
    "t0": (float, 1.0),
    "tail_mode": (str, "bound_truncation"),
    "jobs": (int, 1),
    "seed": (int, 0),
    "threshold": (float, None),
}

DEFAULT_Z = ("0.5+2i", "0.25+1.5i", "-0.6+1.2i", "0.8+3i")
DEFAULT_SIGMA = "-1.25:1.75:1.0"
DEFAULT_IM = "-4:4:4"
DEFAULT_X = ("0.25", "0.5")
DEFAULT_CONVERGE_S = ("0.3", "0.75", "0.6+2i")
DEFAULT_Y = "5,10,20,40"


def parse_complex(text: str) -> complex:
    """Parse ``a+bi``, ``bi``, ``a`` (``j`` is accepted for ``i``)."""
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}i"


def format_real(v) -> str:
    return "" if v is None else f"{float(v):.17g}"


def _parse_range(text: str) -> np.ndarray:
    try:
        lo, hi, step = (float(p) for p in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"range must be lo:hi:step, got {text!r}") from exc
    if step <= 0:
        raise argparse.ArgumentTypeError("range step must be positive")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(max(n, 0))


def _parse_floats(text: str) -> list:
    return [float(p) for p in text.split(",") if p.strip()]


# ---------------------------------------------------------------- settings

def read_config_file(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise DomainError(f"config line without '=': {raw.rstrip()!r}")
            out[key.strip().lower().replace("-", "_")] = value.strip()
    return out


def resolve_settings(args: argparse.Namespace, environ=None) -> dict:
    environ = os.environ if environ is None else environ
    file_values = read_config_file(args.config) if args.config else {}
    resolved = {}
    for name, (kind, default) in SETTINGS.items():
        flag = getattr(args, name, None)
        env = environ.get(ENV_PREFIX + name.upper())
        if flag is not None:
            value = flag
        elif env is not None:
            value = env
        elif name in file_values:
            value = file_values[name]
        else:
            value = default
        resolved[name] = None if value is None else kind(value)
    return resolved


def quadrature_config(settings: dict) -> QuadratureConfig:
    try:
        return QuadratureConfig(abs_tol=settings["abs_tol"], rel_tol=settings["rel_tol"],
                                t0=settings["t0"], tail_mode=settings["tail_mode"])
    except ValueError as exc:
        raise DomainError(str(exc)) from exc


# ---------------------------------------------------------------- output

class RecordWriter:
    """Serialise records either as CSV (header first) or JSON lines."""

    def __init__(self, stream, columns, as_json: bool):
        self.stream = stream
        self.columns = list(columns)
        self.as_json = as_json
        if not as_json:
            self._csv = csv.writer(stream, lineterminator="\n")
            self._csv.writerow(self.columns)

    def write(self, record: dict) -> None:
        if self.as_json:
            row = {k: record.get(k) for k in self.columns}
            self.stream.write(json.dumps(row, separators=(",", ":")) + "\n")
        else:
            self._csv.writerow(["" if record.get(k) is None else record[k] for k in self.columns])


def _error_name(exc: BaseException) -> str:
    return type(exc).__name__


def _exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, ToleranceError):
        return 3
    return 2


# ---------------------------------------------------------------- eval

def evaluate_target(target: str, z, s, tau, cfg: QuadratureConfig):
    """Return (value, error estimate or None) for one ``eval`` target."""
    def need(value, flag):
        if value is None:
            raise DomainError(f"target {target!r} needs {flag}")
        return value

    if target == "theta":
        return complex(theta(need(tau, "--tau"))), None
    if target == "lambda":
        return complex(lambda_modular(need(tau, "--tau"))), None
    if target == "jtheta":
        return complex(j_theta(need(tau, "--tau"))), None
    if target == "hz":
        return complex(h_z(need(z, "--z"), need(tau, "--tau"))), None
    if target == "F":
        res = f_z(need(z, "--z"), need(s, "--s"), cfg)
        return res.value, res.err_estimate
    if target == "xi":
        return xi_completed(need(s, "--s")), None
    if target == "xi_theta":
        return xi_via_theta(need(s, "--s"), cfg.t0), None
    raise DomainError(f"unknown target {target!r}")


def cmd_eval(args, settings, out, err) -> int:
    cfg = quadrature_config(settings)
    z = args.z[0] if args.z else None
    s = args.s[0] if args.s else None
    start = time.perf_counter()
    value, estimate = evaluate_target(args.target, z, s, args.tau, cfg)
    elapsed = time.perf_counter() - start
    writer = RecordWriter(out, ["target", "value", "err_estimate"], args.json)
    writer.write({"target": args.target, "value": format_complex(value),
                  "err_estimate": format_real(estimate)})
    err.write(f"# elapsed_s={elapsed:.6f}\n")
    return 0


# ---------------------------------------------------------------- sweeps

@dataclass(frozen=True)
class SweepSpec:
    """Points of a sweep: pole points, a rectangular s grid and a y list."""

    z_list: tuple
    s_list: tuple
    y_list: tuple
    cfg: QuadratureConfig

    def __post_init__(self):
        if not self.z_list or not self.s_list:
            raise DomainError("sweep needs at least one z and one s")

    @staticmethod
    def s_grid(sigmas, ims) -> tuple:
        return tuple(complex(sg, im) for sg in sigmas for im in ims)


def _functional_task(task):
    z, s, cfg = task
    try:
        return functional_equation_residual(z, s, cfg), None
    except ThetaXiError as exc:
        return None, exc


def _ordered_map(fn, tasks, jobs: int) -> list:
    """Map in input order, in a process pool when ``jobs > 1``."""
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, tasks))
    return [fn(t) for t in tasks]


def _combine_exit(current: int, new: int) -> int:
    # domain/tolerance errors dominate a plain check failure
    return max(current, new)


def cmd_check_functional(args, settings, out, err) -> int:
    cfg = quadrature_config(settings)
    threshold = settings["threshold"] if settings["threshold"] is not None else 1e-6
    zs = tuple(args.z) if args.z else tuple(parse_complex(t) for t in DEFAULT_Z)
    if args.s:
        ss = tuple(args.s)
    else:
        ss = SweepSpec.s_grid(_parse_range(args.sigma_grid or DEFAULT_SIGMA),
                              _parse_range(args.im_grid or DEFAULT_IM))
    spec = SweepSpec(z_list=zs, s_list=ss, y_list=(), cfg=cfg)
    tasks = [(z, s, spec.cfg) for z in spec.z_list for s in spec.s_list]
    results = _ordered_map(_functional_task, tasks, settings["jobs"])
    writer = RecordWriter(out, ["x", "y", "re_s", "im_s", "residual", "pass"], args.json)
    code = 0
    worst = 0.0
    for (z, s, _), (residual, exc) in zip(tasks, results):
        rec = {"x": format_real(z.real), "y": format_real(z.imag),
               "re_s": format_real(s.real), "im_s": format_real(s.imag)}
        if exc is not None:
            rec.update(residual=None, **{"pass": _error_name(exc)})
            err.write(f"error: {_error_name(exc)}: {exc}\n")
            code = _combine_exit(code, _exit_code_for(exc))
        else:
            ok = residual <= threshold
            worst = max(worst, residual)
            rec.update(residual=format_real(residual), **{"pass": "true" if ok else "false"})
            if not ok:
                code = _combine_exit(code, 1)
        writer.write(rec)
    err.write(f"# max_residual={worst:.3e} threshold={threshold:.1e} rows={len(tasks)}\n")
    return code


def cmd_converge(args, settings, out, err) -> int:
    cfg = quadrature_config(settings)
    threshold = settings["threshold"] if settings["threshold"] is not None else 1e-3
    xs = [float(x) for x in args.x] if args.x else [float(x) for x in DEFAULT_X]
    ss = list(args.s) if args.s else [parse_complex(t) for t in DEFAULT_CONVERGE_S]
    ys = _parse_floats(args.y_list or DEFAULT_Y)
    writer = RecordWriter(out, ["x", "re_s", "im_s", "y", "error", "monotone"], args.json)
    code = 0
    for x in xs:
        for s in ss:
            try:
                study = convergence_study(x, s, ys, cfg, jobs=settings["jobs"])
            except ThetaXiError as exc:
                writer.write({"x": format_real(x), "re_s": format_real(s.real),
                              "im_s": format_real(s.imag), "monotone": _error_name(exc)})
                err.write(f"error: {_error_name(exc)}: {exc}\n")
                code = _combine_exit(code, _exit_code_for(exc))
                continue
            flag = "true" if study.monotone else "false"
            for row in study.rows:
                writer.write({"x": format_real(x), "re_s": format_real(s.real),
                              "im_s": format_real(s.imag), "y": format_real(row.y),
                              "error": format_real(row.error), "monotone": flag})
            if not (study.monotone and study.final_error <= threshold):
                code = _combine_exit(code, 1)
            err.write(f"# x={x:g} s={format_complex(s)} final_error={study.final_error:.3e} "
                      f"monotone={flag}\n")
    return code


def cmd_reduce(args, settings, out, err) -> int:
    if not args.z:
        raise DomainError("reduce needs --z")
    writer = RecordWriter(out, ["z", "reduced", "a", "b", "c", "d", "axis_margin"], args.json)
    for z in args.z:
        point, gamma = reduce_to_fundamental_domain(z)
        a, b, c, d = gamma.as_tuple()
        writer.write({"z": format_complex(z), "reduced": format_complex(point.tau),
                      "a": str(a), "b": str(b), "c": str(c), "d": str(d),
                      "axis_margin": format_real(abs(point.u))})
    return 0


# ---------------------------------------------------------------- selftest

def _random_taus(rng, n: int) -> np.ndarray:
    u = rng.uniform(-3, 3, n)
    v = np.exp(rng.uniform(np.log(0.2), np.log(4), n))
    return u + 1j * v


def _rel(a, b) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def _suite_theta(rng):
    tau = _random_taus(rng, 40)
    lhs = theta(tau)
    return max(_rel(lhs, (-1j * tau) ** -0.5 * theta(-1 / tau)), _rel(theta(tau + 2), lhs))


def _suite_lambda(rng):
    tau = _random_taus(rng, 40)
    lam = lambda_modular(tau)
    return max(_rel(lambda_modular(-1 / tau), 1 - lam),
               _rel(lambda_modular(tau + 1), lam / (lam - 1)),
               _rel(lambda_modular(1 / (1 - tau)), 1 / (1 - lam)))


def _suite_jtheta(rng):
    tau = _random_taus(rng, 40)
    j = j_theta(tau)
    return max(_rel(j_theta(S(tau)), j), _rel(j_theta(T2(tau)), j))


def _suite_reduction(rng):
    worst = 0.0
    for tau in _random_taus(rng, 20):
        point, gamma = reduce_to_fundamental_domain(tau)
        w = point.tau
        if not in_theta_group(gamma) or abs(w.real) > 1 + 1e-12 or abs(w) < 1 - 1e-12:
            return math.inf
        worst = max(worst, abs(gamma(tau) - w) / abs(w))
    return worst


def _suite_xi(rng):
    worst = 0.0
    for _ in range(20):
        s = complex(rng.uniform(-1, 2), rng.uniform(-10, 10))
        worst = max(worst, abs(xi_completed(1 - s) - xi_completed(s)) / abs(xi_completed(s)))
    return worst


def _suite_zeta(rng):
    worst = abs(riemann_zeta(2) - math.pi ** 2 / 6) / (math.pi ** 2 / 6)
    for _ in range(10):
        s = complex(rng.uniform(-2, 3), rng.uniform(-20, 20))
        if abs(s - 1) < 0.1:
            continue
        a = riemann_zeta(s)
        worst = max(worst, abs(a - riemann_zeta(s, method="euler_maclaurin")) / abs(a))
    return worst


def _suite_polylog(rng):
    worst = 0.0
    for _ in range(20):
        x = rng.uniform(0.05, 1.95)
        worst = max(worst, abs(polylog_unit_circle(1, x) + cmath.log(1 - cmath.exp(1j * math.pi * x))))
        for ell in (2, 3):
            worst = max(worst, abs(polylog_unit_circle(ell, -x)
                                   - polylog_unit_circle(ell, x).conjugate()))
    return worst


def _suite_incomplete_gamma(rng):
    worst = 0.0
    for _ in range(20):
        s = complex(rng.uniform(-2, 3), rng.uniform(-3, 3))
        y = float(rng.uniform(0.1, 30))
        lhs = upper_incomplete_gamma(s + 1, y)
        rhs = s * upper_incomplete_gamma(s, y) + cmath.exp(s * math.log(y) - y)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1e-300))
    return worst


def _suite_functional(rng):
    worst = 0.0
    for _ in range(3):
        z = complex(rng.choice([-1, 1]) * rng.uniform(0.2, 0.9), rng.uniform(1.0, 3.0))
        s = complex(rng.uniform(-1, 1.5), rng.uniform(-3, 3))
        worst = max(worst, functional_equation_residual(z, s))
    return worst


def _suite_xi_theta(rng):
    worst = 0.0
    for _ in range(3):
        s = complex(rng.uniform(0.3, 1.0), rng.uniform(-5, 5))
        worst = max(worst, abs(xi_via_theta(s, 1.0) - xi_completed(2 * s)) / abs(xi_completed(2 * s)))
    return worst


def _suite_corrections(rng):
    worst = 0.0
    for _ in range(10):
        s = complex(rng.uniform(-2, 3), rng.uniform(-3, 3))
        x = float(rng.uniform(0.05, 0.95))
        worst = max(worst, abs(correction_C(1, s, x)))
        for ell in (0, 2, 3):
            worst = max(worst, abs(correction_D(ell, s, x) - correction_C(ell, 0.5 - s, x)))
    return worst


def _suite_quadrature(rng):
    worst = 0.0
    for _ in range(10):
        k = float(rng.uniform(0.5, 20))
        res = integrate(lambda t: np.exp(1j * k * t) * t, 0.0, 1.0, 1e-12, 1e-12)
        exact = cmath.exp(1j * k) * (1 / (1j * k) + 1 / k ** 2) - 1 / k ** 2
        worst = max(worst, abs(res.value - exact) - max(res.err_estimate, 1e-12))
    return max(worst, 0.0)


SELFTEST_SUITES = (
    ("theta_transformation", _suite_theta, 1e-10),
    ("lambda_identities", _suite_lambda, 1e-10),
    ("jtheta_invariance", _suite_jtheta, 1e-10),
    ("fundamental_domain", _suite_reduction, 1e-12),
    ("xi_symmetry", _suite_xi, 1e-10),
    ("zeta_reflection", _suite_zeta, 1e-11),
    ("polylog_identities", _suite_polylog, 1e-12),
    ("incomplete_gamma_recurrence", _suite_incomplete_gamma, 1e-10),
    ("mellin_functional_equation", _suite_functional, 1e-6),
    ("xi_two_routes", _suite_xi_theta, 1e-8),
    ("correction_coefficients", _suite_corrections, 0.0),
    ("quadrature_error_estimate", _suite_quadrature, 0.0),
)


def cmd_selftest(args, settings, out, err) -> int:
    writer = RecordWriter(out, ["suite", "max_residual", "tolerance", "pass"], args.json)
    override = args.tolerance
    for name, suite, tol in SELFTEST_SUITES:
        rng = np.random.default_rng([settings["seed"], len(name)])
        tol = tol if override is None else override
        residual = suite(rng)
        # an override is a strict bound, so --tolerance 0 can never pass
        ok = residual <= tol if override is None else residual < override
        writer.write({"suite": name, "max_residual": format_real(residual),
                      "tolerance": format_real(tol), "pass": "true" if ok else "false"})
        if not ok:
            err.write(f"FAIL: {name}\n")
            return 1
    err.write(f"PASS, {len(SELFTEST_SUITES)} suites\n")
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--z", type=parse_complex, action="append", help="pole point x+yi (repeatable)")
    common.add_argument("--s", type=parse_complex, action="append", help="spectral parameter (repeatable)")
    common.add_argument("--tau", type=parse_complex, help="point of the upper half-plane")
    common.add_argument("--t0", type=float, help="integral split point (default 1)")
    common.add_argument("--abs-tol", dest="abs_tol", type=float)
    common.add_argument("--rel-tol", dest="rel_tol", type=float)
    common.add_argument("--tail-mode", dest="tail_mode", choices=("bound_truncation", "termwise_gamma"))
    common.add_argument("--jobs", type=int, help="worker processes for sweeps")
    common.add_argument("--json", action="store_true", help="emit JSON lines instead of CSV")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="write records to this file instead of stdout")
    common.add_argument("--config", help="key=value settings file")
    common.add_argument("--threshold", type=float, help="pass threshold for sweeps")

    parser = argparse.ArgumentParser(prog="thetaxi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate one quantity")
    p.add_argument("target", choices=TARGETS)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("check-functional", parents=[common], help="sweep |F_z(s) - F_z(1/2-s)|")
    p.add_argument("--sigma-grid", help="lo:hi:step for Re s")
    p.add_argument("--im-grid", help="lo:hi:step for Im s")
    p.set_defaults(handler=cmd_check_functional)

    p = sub.add_parser("converge", parents=[common], help="corrected F_(x+iy)(s) against xi(2s)")
    p.add_argument("--x", action="append", help="real part of the pole point (repeatable)")
    p.add_argument("--y-list", dest="y_list", help="comma-separated increasing y values")
    p.set_defaults(handler=cmd_converge)

    p = sub.add_parser("reduce", parents=[common], help="reduce z to the theta-group domain")
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("selftest", parents=[common], help="run the invariant suites at reduced size")
    p.add_argument("--tolerance", type=float, help="override every suite tolerance")
    p.set_defaults(handler=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    err = sys.stderr
    try:
        settings = resolve_settings(args)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                return args.handler(args, settings, fh, err)
        buf = io.StringIO()
        code = args.handler(args, settings, buf, err)
        sys.stdout.write(buf.getvalue())
        return code
    except ThetaXiError as exc:
        err.write(f"error: {_error_name(exc)}: {exc}\n")
        return _exit_code_for(exc)
    except ValueError as exc:
        err.write(f"error: {_error_name(exc)}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
