"""Numerical evaluation of the Mellin transform F_z(s).

    F_z(s) = s (1/2 - s) j(z) int_0^oo theta(it) / (j(it) - j(z)) t^(s-1) dt

The integral is split at 1/y, t0 and y (y = Im of the reduced pole point).
The piece next to t = 0 is mapped to [y, oo) by t -> 1/t, using
theta(i/t) = sqrt(t) theta(it) and j(i/t) = j(it); on [y, oo) the integrand
decays like e^(-pi (t - y)).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import AxisPole, NearPoleOnPath, UnderflowWarning
from .modular_forms import POLE_GUARD, PolePoint, as_pole_point, j_theta_inv, jacobi_thetas
from .quadrature import QuadratureResult, integrate
from .special_functions import (X_EXCLUSION, SpectralParameter, as_complex,
                                upper_incomplete_gamma, upper_incomplete_gamma_scaled)

TAIL_MODES = ("bound_truncation", "termwise_gamma")
_TAIL_SHARE = 0.1
_TERMWISE_RATIO = 1e-2
_TERMWISE_ORDER = 40


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    t0: float = 1.0
    max_subdivisions: int = 2000
    tail_mode: str = "bound_truncation"

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.t0 > 0:
            raise ValueError("t0 must be positive")
        if self.tail_mode not in TAIL_MODES:
            raise ValueError(f"tail_mode must be one of {TAIL_MODES}")

    def tightened(self, factor: float = 0.5) -> "QuadratureConfig":
        return replace(self, abs_tol=self.abs_tol * factor, rel_tol=self.rel_tol * factor)


DEFAULT_CONFIG = QuadratureConfig()


def _pole(z) -> PolePoint:
    pp = as_pole_point(z)
    if pp.axis_margin <= X_EXCLUSION:
        raise AxisPole(f"z = {pp.z} is equivalent to a point of the imaginary axis "
                       f"(margin {pp.axis_margin:.3g})")
    return pp


class _Kernel:
    """t -> theta(it) g(it) / (g(z) - g(it)) with g = 1/j; equals theta(it) j(z)/(j(it) - j(z))."""

    def __init__(self, pp: PolePoint, pole_guard: float = POLE_GUARD):
        self.g_z = complex(j_theta_inv(pp.reduced.tau))
        self.pole_guard = pole_guard
        self.z = pp.z

    def __call__(self, t: np.ndarray) -> np.ndarray:
        th2, th3, th4 = jacobi_thetas(1j * t)
        g = ((th2 * th4 / (th3 * th3)) ** 4).real
        diff = self.g_z - g
        if np.any(np.abs(diff) <= self.pole_guard * (abs(self.g_z) + 1) * g):
            raise NearPoleOnPath(f"integration path passes within the pole guard of z = {self.z}")
        return th3.real * g / diff


def _power(t: np.ndarray, s: complex) -> np.ndarray:
    return np.exp((s - 1) * np.log(t))


def _theta_max(t: float) -> float:
    # theta(it) <= 1 + 2 e^{-pi t}/(1 - e^{-pi t})
    e = math.exp(-math.pi * t)
    return 1 + 2 * e / (1 - e)


def _tail_bound(g_abs: float, sigma: float, T: float) -> float:
    """Bound on |int_T^oo kernel t^(s-1) dt|, valid once 16 e^(-pi T) <= |g(z)|/2.

    Uses g(it) <= lambda(it) <= 16 e^(-pi t), so |g/(g_z - g)| <= 2 g/|g_z|.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnderflowWarning)
        inc = upper_incomplete_gamma(sigma, math.pi * T).real
    return _theta_max(T) * 32 / g_abs * math.pi ** (-sigma) * abs(inc)


def _truncation_point(g_abs: float, sigma: float, a: float, tol: float) -> float:
    T = max(a, math.log(32 / g_abs) / math.pi if g_abs < 32 else a, 1.0)
    while _tail_bound(g_abs, sigma, T) > tol:
        T += 0.25
    return T


def _series_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)[: a.size]


def _series_inv(a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    out[0] = 1 / a[0]
    for k in range(1, a.size):
        out[k] = -np.dot(a[1:k + 1], out[k - 1::-1]) / a[0]
    return out


def _axis_expansions(order: int):
    """Power series in p = e^(-pi t) of theta(it) and of g(it)/(16 p)."""
    L = order + 1
    th3 = np.zeros(L)
    th4 = np.zeros(L)
    even = np.zeros(L)
    n = 0
    while n * n < L:
        th3[n * n] += 1 if n == 0 else 2
        th4[n * n] += 1 if n == 0 else 2 * (-1) ** n
        n += 1
    m = 0
    while m * (m + 1) < L:
        even[m * (m + 1)] += 1
        m += 1
    e4 = _series_mul(_series_mul(even, even), _series_mul(even, even))
    t4 = _series_mul(_series_mul(th4, th4), _series_mul(th4, th4))
    t8 = _series_mul(_series_mul(th3, th3), _series_mul(th3, th3))
    t8 = _series_mul(t8, t8)
    reduced_g = _series_mul(_series_mul(e4, t4), _series_inv(t8))
    return th3, reduced_g


_EXPANSIONS = _axis_expansions(_TERMWISE_ORDER)


def _termwise_tail(g_z: complex, s: complex, a: float, tol: float):
    """int_a^oo theta(it) g/(g_z - g) t^(s-1) dt by the geometric series in g/g_z.

    theta g^n = 16^n p^n theta P^n with P = g/(16p), and each power of p is
    integrated exactly with an incomplete gamma function.
    """
    th3, red_g = _EXPANSIONS
    log_r0 = math.log(16) - math.pi * a - np.log(g_z)
    total = 0j
    last = 0.0
    coeff = th3.copy()
    log_a = math.log(a)
    for n in range(1, 200):
        coeff = _series_mul(coeff, red_g) if n > 1 else _series_mul(th3, red_g)
        block = 0j
        for k, c in enumerate(coeff):
            if c == 0:
                continue
            m = n + k
            X = math.pi * m * a
            weight = np.exp(n * log_r0 - math.pi * k * a + (s - 1) * log_a) / (math.pi * m)
            block += c * weight * upper_incomplete_gamma_scaled(s, X)
        total += block
        last = abs(block)
        if last < 1e-3 * tol and n > 1:
            break
    # neglected powers of p beyond the expansion order
    trunc = math.exp(-math.pi * (_TERMWISE_ORDER + 1) * a) * 1e3
    return total, last + trunc


def _direct(kernel: _Kernel, s: complex, a: float, b: float, cfg: QuadratureConfig,
            tail_mode: str) -> list:
    if a == b:
        return [((a, b), 0j, 0.0)]
    if math.isfinite(b):
        res = integrate(lambda t: kernel(t) * _power(t, s), a, b, cfg.abs_tol, cfg.rel_tol,
                        cfg.max_subdivisions)
        return [((a, b), res.value, res.err_estimate)]
    g_abs = abs(kernel.g_z)
    if tail_mode == "bound_truncation":
        tail_tol = _TAIL_SHARE * cfg.abs_tol
        T = _truncation_point(g_abs, s.real, a, tail_tol)
        res = integrate(lambda t: kernel(t) * _power(t, s), a, T, (1 - _TAIL_SHARE) * cfg.abs_tol,
                        cfg.rel_tol, cfg.max_subdivisions)
        return [((a, T), res.value, res.err_estimate), ((T, math.inf), 0j, _tail_bound(g_abs, s.real, T))]
    # termwise_gamma: quadrature until |g/g_z| <= ratio, series beyond
    split = max(a, math.log(16 / (_TERMWISE_RATIO * g_abs)) / math.pi, 1.0)
    pieces = []
    if split > a:
        res = integrate(lambda t: kernel(t) * _power(t, s), a, split, 0.5 * cfg.abs_tol,
                        cfg.rel_tol, cfg.max_subdivisions)
        pieces.append(((a, split), res.value, res.err_estimate))
    value, err = _termwise_tail(kernel.g_z, s, split, 0.5 * cfg.abs_tol)
    pieces.append(((split, math.inf), value, err))
    return pieces


def f_z_segment(z, s, t1: float, t2: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> QuadratureResult:
    """j(z) int_t1^t2 theta(it)/(j(it) - j(z)) t^(s-1) dt, with 0 <= t1 <= t2 <= oo.

    ``segments`` of the result lists the pieces actually integrated.  When
    t1 = 0 the part below min(t2, 1) is computed in the variable u = 1/t
    (an integral over [1/min(t2, 1), oo) at 1/2 - s); its entry records the
    original t-interval.
    """
    pp = _pole(z)
    s = as_complex(s)
    t1, t2 = float(t1), float(t2)
    if not 0 <= t1 <= t2:
        raise ValueError("need 0 <= t1 <= t2")
    kernel = _Kernel(pp)
    if t1 == t2:
        return QuadratureResult.from_segments([((t1, t2), 0j, 0.0)])
    pieces = []
    if t1 == 0:
        cut = min(t2, 1.0)
        inner = _direct(kernel, 0.5 - s, 1 / cut, math.inf, cfg, cfg.tail_mode)
        pieces.append(((0.0, cut), sum(c for _, c, _ in inner), sum(e for _, _, e in inner)))
        if t2 > cut:
            pieces.extend(_direct(kernel, s, cut, t2, cfg, cfg.tail_mode))
    else:
        pieces.extend(_direct(kernel, s, t1, t2, cfg, cfg.tail_mode))
    return QuadratureResult.from_segments(pieces)


def breakpoints(z, t0: float) -> tuple:
    """Sorted (1/y, t0, y) for the reduced pole point."""
    pp = as_pole_point(z)
    y = pp.reduced.v
    return tuple(sorted((1 / y, float(t0), y)))


def f_z(z, s, cfg: QuadratureConfig = DEFAULT_CONFIG) -> QuadratureResult:
    """F_z(s) summed over [0, p1], [p1, p2], [p2, p3], [p3, oo) with p = sorted(1/y, t0, y).

    Segment contributions in the result already carry the factor s(1/2 - s).
    """
    pp = _pole(z)
    s = as_complex(s)
    pref = s * (0.5 - s)
    if pref == 0:
        return QuadratureResult(0j, 0.0, [])
    p1, p2, p3 = breakpoints(pp, cfg.t0)
    segs = []
    for a, b in ((0.0, p1), (p1, p2), (p2, p3), (p3, math.inf)):
        r = f_z_segment(pp, s, a, b, cfg)
        segs.append(((a, b), pref * r.value, abs(pref) * r.err_estimate))
    return QuadratureResult.from_segments(segs)


def functional_equation_residual(z, s, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """|F_z(s) - F_z(1/2 - s)| / (1 + |F_z(s)|)."""
    s = as_complex(s)
    if s == 0.5 - s:
        return 0.0
    a = f_z(z, s, cfg).value
    b = f_z(z, 0.5 - s, cfg).value
    return abs(a - b) / (1 + abs(a))


__all__ = ["QuadratureConfig", "QuadratureResult", "SpectralParameter", "f_z", "f_z_segment",
           "functional_equation_residual", "breakpoints", "DEFAULT_CONFIG", "TAIL_MODES"]
