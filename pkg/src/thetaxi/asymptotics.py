"""Large-y behaviour of F_z(s): explicit corrections and convergence to xi(2s).

With z = x + iy and w = e^(i pi x), the corrected quantity is

    F_z(s) + (1/2 - s) y^s + s y^(1/2 - s)
      - s(1/2-s) sum_{l=1}^{floor(sigma)}     (1-s)_(l-1)     pi^-l Li_l(w)    y^(s-l)
      + s(1/2-s) sum_{l=1}^{floor(sigma)}     (s+1-l)_(l-1)   pi^-l Li_l(w^-1) y^(s-l)
      - s(1/2-s) sum_{l=1}^{floor(1/2-sigma)} (s+1/2)_(l-1)   pi^-l Li_l(w)    y^(1/2-s-l)
      + s(1/2-s) sum_{l=1}^{floor(1/2-sigma)} (3/2-s-l)_(l-1) pi^-l Li_l(w^-1) y^(1/2-s-l)

whose limit as y -> oo is xi(2s).  ``correction_C``/``correction_D`` are the
standalone coefficient functions in their short closed form, which pairs both
rising factorials with Li_l(e^(-i pi x)); they are kept for comparison only and
``corrected_f_z`` uses ``proposition_corrections``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError, UnstableCutoff
from .mellin import DEFAULT_CONFIG, QuadratureConfig, f_z
from .modular_forms import as_pole_point
from .special_functions import (X_EXCLUSION, as_complex, polylog_unit_circle, rising_factorial,
                                xi_completed)

SIGMA_EXCLUSION = 1e-3


def _check_x(x: float) -> None:
    if abs(x - round(x)) <= X_EXCLUSION:
        raise DomainError(f"x = {x} must stay away from the integers")


def correction_C(ell: int, s, x: float) -> complex:
    """C_(l,s)(x): 1/s for l = 0, else
    (1/pi) [(s+1-l)_(l-1) Li_l(e^(-i pi x)) - (1-s)_(l-1) Li_l(e^(-i pi x))].

    Both brackets carry the same polylogarithm, so C_(1,s) vanishes.
    """
    s = as_complex(s)
    ell = int(ell)
    if ell < 0:
        raise ValueError("ell must be non-negative")
    if ell == 0:
        if s == 0:
            raise DomainError("C_(0,s) = 1/s is undefined at s = 0")
        return 1 / s
    li = polylog_unit_circle(ell, -x)
    return (rising_factorial(s + 1 - ell, ell - 1) * li - rising_factorial(1 - s, ell - 1) * li) / math.pi


def correction_D(ell: int, s, x: float) -> complex:
    """D_(l,s)(x) = C_(l, 1/2 - s)(x)."""
    return correction_C(ell, 0.5 - as_complex(s), x)


@dataclass(frozen=True)
class CorrectionExpansion:
    """Additive corrections to F_z(s) as coefficients of powers of y.

    ``leading_terms`` multiply y^s and y^(1/2-s); ``Cl_terms[l-1]`` multiplies
    y^(s-l) and ``Dl_terms[l-1]`` multiplies y^(1/2-s-l).
    """

    x: float
    s: complex
    leading_terms: tuple
    Cl_terms: tuple
    Dl_terms: tuple

    def evaluate(self, y: float) -> complex:
        s = self.s
        log_y = math.log(y)

        def pw(e):
            return cmath.exp(e * log_y)

        total = self.leading_terms[0] * pw(s) + self.leading_terms[1] * pw(0.5 - s)
        for ell, c in enumerate(self.Cl_terms, start=1):
            total += c * pw(s - ell)
        for ell, d in enumerate(self.Dl_terms, start=1):
            total += d * pw(0.5 - s - ell)
        return total


def _check_sigma(sigma: float) -> None:
    for ref in (sigma, 0.5 - sigma):
        if abs(ref - round(ref)) <= SIGMA_EXCLUSION:
            raise UnstableCutoff(f"Re(s) = {sigma} is within {SIGMA_EXCLUSION} of a floor jump")


def proposition_corrections(z, s) -> CorrectionExpansion:
    """Corrections whose sum with F_z(s) tends to xi(2s), with the signs shown in the module docstring."""
    s = as_complex(s)
    zc = complex(z)
    x = zc.real
    _check_x(x)
    sigma = s.real
    _check_sigma(sigma)
    pref = s * (0.5 - s)
    c_terms = []
    for ell in range(1, math.floor(sigma) + 1):
        w = polylog_unit_circle(ell, x)
        wbar = polylog_unit_circle(ell, -x)
        c_terms.append(pref / math.pi ** ell * (-rising_factorial(1 - s, ell - 1) * w
                                                + rising_factorial(s + 1 - ell, ell - 1) * wbar))
    d_terms = []
    for ell in range(1, math.floor(0.5 - sigma) + 1):
        w = polylog_unit_circle(ell, x)
        wbar = polylog_unit_circle(ell, -x)
        d_terms.append(pref / math.pi ** ell * (-rising_factorial(s + 0.5, ell - 1) * w
                                                + rising_factorial(1.5 - s - ell, ell - 1) * wbar))
    return CorrectionExpansion(x=x, s=s, leading_terms=(0.5 - s, s),
                               Cl_terms=tuple(c_terms), Dl_terms=tuple(d_terms))


def corrected_f_z(z, s, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """F_z(s) plus every term of ``proposition_corrections`` at y = Im z."""
    s = as_complex(s)
    zc = complex(z)
    expansion = proposition_corrections(zc, s)
    return f_z(as_pole_point(zc), s, cfg).value + expansion.evaluate(zc.imag)


@dataclass(frozen=True)
class ConvergenceRow:
    y: float
    corrected: complex
    error: float


@dataclass(frozen=True)
class ConvergenceStudy:
    x: float
    s: complex
    target: complex
    rows: tuple

    @property
    def errors(self) -> list:
        return [r.error for r in self.rows]

    @property
    def monotone(self) -> bool:
        errs = self.errors
        return all(b < a for a, b in zip(errs, errs[1:]))

    @property
    def final_error(self) -> float:
        return self.rows[-1].error


def convergence_study(x: float, s, y_values, cfg: QuadratureConfig = DEFAULT_CONFIG,
                      jobs: int = 1) -> ConvergenceStudy:
    """Tabulate |corrected F_(x+iy)(s) - xi(2s)| over increasing y."""
    s = as_complex(s)
    ys = [float(y) for y in y_values]
    if not ys:
        raise ValueError("y_values must be non-empty")
    if any(b <= a for a, b in zip(ys, ys[1:])):
        raise ValueError("y_values must be strictly increasing")
    _check_x(x)
    target = xi_completed(2 * s)
    points = [complex(x, y) for y in ys]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            values = list(ex.map(corrected_f_z, points, [s] * len(ys), [cfg] * len(ys)))
    else:
        values = [corrected_f_z(p, s, cfg) for p in points]
    rows = tuple(ConvergenceRow(y, v, abs(v - target)) for y, v in zip(ys, values))
    return ConvergenceStudy(x=x, s=s, target=target, rows=rows)
