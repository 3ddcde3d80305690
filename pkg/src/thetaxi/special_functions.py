"""Gamma, incomplete gamma, polylogarithms on the unit circle, zeta and xi.

Everything here works in IEEE double precision on Python ``complex`` scalars.
No arbitrary-precision fallback is attempted.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (NonGenericParameter, PoleAtNonPositiveInteger, PoleAtOne,
                     PolylogOnSingularity, UnderflowWarning)

EULER_GAMMA = 0.57721566490153286060651209008240243
# xi'(1) = xi(1) (1 + gamma/2 - log(4 pi)/2)
XI_PRIME_AT_ONE = 0.5 * (1 + EULER_GAMMA / 2 - math.log(4 * math.pi) / 2)

# configuration defaults
POLE_RADIUS = 1e-14
ONE_RADIUS = 1e-12
X_EXCLUSION = 1e-6
HYPERGEOMETRIC_EXCLUSION = 1e-10
MAX_ASYMPTOTIC_ORDER = 30
ZETA_TERMS = 30
ZETA_CORRECTIONS = 15
XI_LINEAR_RADIUS = 1e-6


@dataclass(frozen=True)
class SpectralParameter:
    """The Mellin variable ``s = sigma + i*t``."""

    s: complex

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))

    @property
    def sigma(self) -> float:
        return self.s.real

    def reflected(self) -> "SpectralParameter":
        """The partner ``1/2 - s`` under the functional equation."""
        return SpectralParameter(0.5 - self.s)

    def __complex__(self):
        return self.s


@dataclass(frozen=True)
class AsymptoticOrder:
    N: int

    def __post_init__(self):
        if not 0 <= int(self.N) <= MAX_ASYMPTOTIC_ORDER:
            raise ValueError(f"asymptotic order must lie in [0, {MAX_ASYMPTOTIC_ORDER}], got {self.N}")
        object.__setattr__(self, "N", int(self.N))

    def __int__(self):
        return self.N


def as_complex(s) -> complex:
    return complex(s.s) if isinstance(s, SpectralParameter) else complex(s)


def _order(order) -> int:
    return int(order) if isinstance(order, AsymptoticOrder) else int(AsymptoticOrder(order))


def _bernoulli(n_max: int) -> tuple:
    """B_0..B_{n_max} with B_1 = -1/2, via sum_{k<=m} C(m+1, k) B_k = 0."""
    b = [Fraction(1)]
    for m in range(1, n_max + 1):
        acc = Fraction(0)
        binom = 1
        for k in range(m):
            acc += binom * b[k]
            binom = binom * (m + 1 - k) // (k + 1)
        b.append(-acc / (m + 1))
    return tuple(b)


_BERNOULLI_EXACT = _bernoulli(140)
BERNOULLI = tuple(float(x) for x in _BERNOULLI_EXACT)
# B_{2k}/(2k)!, k = 0..70
_BERNOULLI_OVER_FACTORIAL = tuple(float(_BERNOULLI_EXACT[2 * k] / math.factorial(2 * k))
                                  for k in range(71))


def rising_factorial(a: complex, n: int) -> complex:
    """Pochhammer symbol (a)_n as a direct product; (a)_0 = 1."""
    out = 1 + 0j
    for j in range(n):
        out *= a + j
    return out


# ---------------------------------------------------------------- Gamma

# Godfrey's g = 607/128 Lanczos coefficients
_LANCZOS_G = 607 / 128
_LANCZOS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_SQRT_2PI = 2.5066282746310005024


def _lanczos_log_gamma(s: complex) -> complex:
    # valid for Re(s) >= 1/2
    ser = _LANCZOS[0]
    for j in range(1, 15):
        ser += _LANCZOS[j] / (s + j)
    tmp = s + _LANCZOS_G + 0.5
    return (s + 0.5) * cmath.log(tmp) - tmp + cmath.log(_SQRT_2PI * ser / s)


def _check_gamma_pole(s: complex) -> None:
    n = round(s.real)
    if n <= 0 and abs(s - n) <= POLE_RADIUS:
        raise PoleAtNonPositiveInteger(f"Gamma has a pole at s = {n}")


def log_gamma(s) -> complex:
    """A logarithm of Gamma(s) (not necessarily the principal branch)."""
    s = as_complex(s)
    _check_gamma_pole(s)
    if s.real < 0.5:
        return cmath.log(math.pi / cmath.sin(math.pi * s)) - _lanczos_log_gamma(1 - s)
    return _lanczos_log_gamma(s)


def gamma_fn(s) -> complex:
    """Gamma(s) by the Lanczos approximation, reflected for Re(s) < 1/2."""
    s = as_complex(s)
    _check_gamma_pole(s)
    if s.real < 0.5:
        return math.pi / (cmath.sin(math.pi * s) * cmath.exp(_lanczos_log_gamma(1 - s)))
    return cmath.exp(_lanczos_log_gamma(s))


def reciprocal_gamma(s) -> complex:
    """1/Gamma(s); entire, so poles of Gamma map to exact zeros."""
    s = as_complex(s)
    n = round(s.real)
    if n <= 0 and s == n:
        return 0j
    if s.real < 0.5:
        return cmath.sin(math.pi * s) * cmath.exp(_lanczos_log_gamma(1 - s)) / math.pi
    return cmath.exp(-_lanczos_log_gamma(s))


# ------------------------------------------------------ incomplete Gamma

def _exprel(z: complex) -> complex:
    """(e^z - 1)/z without cancellation near 0."""
    if abs(z) < 1e-5:
        return 1 + z / 2 + z * z / 6
    # e^z - 1 = 2 e^{z/2} sinh(z/2)
    return 2 * cmath.exp(z / 2) * cmath.sinh(z / 2) / z


@lru_cache(maxsize=None)
def _zeta_int(k: int) -> float:
    return riemann_zeta(k).real


def _upper_gamma_near_zero(eps: complex, y: float) -> complex:
    """Gamma(eps, y) for |eps| < 0.1, written so the pole of Gamma(eps) cancels analytically.

    Gamma(eps, y) = [(Gamma(1+eps) - 1) - (y^eps - 1)]/eps
                    + y^eps * sum_{n>=1} (-1)^{n+1} y^n / (n! (eps + n)).
    """
    # log Gamma(1+eps) = -gamma*eps + sum_{k>=2} (-1)^k zeta(k) eps^k / k
    lg_over_eps = -EULER_GAMMA + 0j
    p = 1 + 0j
    for k in range(2, 40):
        p *= eps
        term = (-1) ** k * _zeta_int(k) * p / k
        lg_over_eps += term
        if abs(term) < 1e-18 * abs(lg_over_eps):
            break
    first = _exprel(lg_over_eps * eps) * lg_over_eps
    log_y = math.log(y)
    second = _exprel(eps * log_y) * log_y
    tail = 0j
    term = 1.0 + 0j
    for n in range(1, 10_000):
        term *= -y / n
        piece = -term / (eps + n)
        tail += piece
        if abs(piece) < 1e-17 * max(abs(tail), 1e-300) and n > y:
            break
    return first - second + cmath.exp(eps * log_y) * tail


def _lower_gamma(s: complex, y: float) -> complex:
    """gamma(s, y) = y^s e^{-y} sum_{n>=0} y^n / (s)_{n+1}."""
    term = 1 / s
    acc = term
    for n in range(1, 10_000):
        term *= y / (s + n)
        acc += term
        if abs(term) < 1e-17 * abs(acc) and n > y:
            break
    return cmath.exp(s * math.log(y) - y) * acc


def _upper_gamma_series(s: complex, y: float) -> complex:
    m = round(-s.real)
    if m >= 0 and abs(s + m) < 0.1:
        # walk down from the regular point eps = s + m via
        # Gamma(a, y) = (Gamma(a + 1, y) - y^a e^{-y}) / a
        eps = s + m
        val = _upper_gamma_near_zero(eps, y)
        log_y = math.log(y)
        for k in range(1, m + 1):
            a = eps - k
            val = (val - cmath.exp(a * log_y - y)) / a
        return val
    return gamma_fn(s) - _lower_gamma(s, y)


def _upper_gamma_cf(s: complex, y: float) -> complex:
    """Lentz evaluation of y / (y + 1 - s - 1(1-s)/(y + 3 - s - ...)).

    Equals e^y y^{1-s} Gamma(s, y).
    """
    tiny = 1e-300
    b = y + 1 - s
    c = 1 / tiny
    d = 1 / b
    h = d
    for i in range(1, 100_000):
        an = -i * (i - s)
        b += 2
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1 / d
        delta = d * c
        h *= delta
        if abs(delta - 1) < 1e-16:
            return y * h
    raise ArithmeticError(f"incomplete gamma continued fraction did not converge for s={s}, y={y}")


def _use_cf(s: complex, y: float) -> bool:
    return y >= abs(s) + 4


def upper_incomplete_gamma_scaled(s, y: float) -> complex:
    """e^y y^(1-s) Gamma(s, y), which tends to 1 as y grows."""
    s = as_complex(s)
    y = float(y)
    if not y > 0:
        raise ValueError("y must be positive")
    if _use_cf(s, y):
        return _upper_gamma_cf(s, y)
    return _upper_gamma_series(s, y) * cmath.exp(y + (1 - s) * math.log(y))


def upper_incomplete_gamma(s, y: float) -> complex:
    """Gamma(s, y) = int_y^oo t^(s-1) e^(-t) dt for y > 0 and any complex s.

    Continued fraction when ``y >= |s| + 4``, otherwise ``Gamma(s) - gamma(s, y)``
    (with the poles of Gamma(s) removed analytically near non-positive
    integers).  A result below the double range is returned as exact zero
    together with an ``UnderflowWarning``.
    """
    s = as_complex(s)
    y = float(y)
    if not y > 0:
        raise ValueError("y must be positive")
    if not _use_cf(s, y):
        return _upper_gamma_series(s, y)
    h = _upper_gamma_cf(s, y)
    log_mag = -y + (s.real - 1) * math.log(y) + math.log(abs(h))
    if log_mag < -745.0:
        warnings.warn(f"Gamma({s}, {y}) underflows double precision", UnderflowWarning, stacklevel=2)
        return 0j
    return cmath.exp(-y + (s - 1) * math.log(y)) * h


def incomplete_gamma_asymptotic_sum(s, y: float, order) -> complex:
    """sum_{j<N} (-1)^j (1-s)_j / y^j, the bracket of the large-y expansion."""
    s = as_complex(s)
    n = _order(order)
    acc = 0j
    term = 1 + 0j
    for j in range(n):
        acc += term
        term *= -(1 - s + j) / y
    return acc


def incomplete_gamma_asymptotic(s, y: float, order) -> complex:
    """y^(s-1) e^(-y) sum_{j<N} (-1)^j (1-s)_j / y^j."""
    s = as_complex(s)
    y = float(y)
    if y < 1:
        raise ValueError("the asymptotic expansion is only offered for y >= 1")
    return cmath.exp((s - 1) * math.log(y) - y) * incomplete_gamma_asymptotic_sum(s, y, order)


def confluent_1f1_asymptotic(s, y: float, order) -> complex:
    """Leading large-y approximant of 1F1(s; s+1; y): (s e^y / y) sum_{j<=N} (1-s)_j / y^j."""
    s = as_complex(s)
    y = float(y)
    n = _order(order)
    if abs(s - round(s.real)) <= HYPERGEOMETRIC_EXCLUSION:
        raise NonGenericParameter(f"s = {s} is too close to an integer")
    if y < 1:
        raise ValueError("the asymptotic expansion is only offered for y >= 1")
    acc = 0j
    term = 1 + 0j
    for j in range(n + 1):
        acc += term
        term *= (1 - s + j) / y
    scale = math.exp(y) / y if y < 700 else math.exp(y - math.log(y))
    return s * scale * acc


# ------------------------------------------------------------ polylog

def _reduce_mod2(x: float) -> float:
    """Representative of x in (-1, 1]."""
    r = math.fmod(x, 2.0)
    if r > 1:
        r -= 2
    elif r <= -1:
        r += 2
    return r


@lru_cache(maxsize=64)
def _polylog_coefficients(ell: int) -> tuple:
    """Coefficients c_k = zeta(ell - k)/k! for k != ell - 1, up to k = 80."""
    out = []
    for k in range(81):
        if k == ell - 1:
            out.append(0.0)
            continue
        m = ell - k
        if m >= 2:
            z = _zeta_int(m)
        elif m == 0:
            z = -0.5
        else:
            # zeta(-n) = -B_{n+1}/(n+1)
            n = -m
            z = float(-_BERNOULLI_EXACT[n + 1] / (n + 1))
        out.append(z / math.factorial(k))
    return tuple(out)


def polylog_unit_circle(ell: int, x: float) -> complex:
    """Li_ell(e^(i pi x)) for integer ell >= 1.

    ``ell = 1`` uses ``-log(1 - w)`` on the principal branch; ``1 - w`` has
    non-negative real part on the unit circle, so the cut is never reached.
    ``ell >= 2`` sums the expansion in mu = i*pi*x' about w = 1, where x' is x
    reduced into (-1, 1]:

        Li_n(e^mu) = mu^(n-1)/(n-1)! (H_(n-1) - log(-mu)) + sum_(k != n-1) zeta(n-k) mu^k/k!

    which converges geometrically with ratio |mu|/(2 pi) <= 1/2.
    """
    ell = int(ell)
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    x = float(x)
    xr = _reduce_mod2(x)
    if abs(xr) <= X_EXCLUSION:
        raise PolylogOnSingularity(f"x = {x} is within {X_EXCLUSION} of an even integer (w = 1)")
    w = cmath.exp(1j * math.pi * xr)
    if ell == 1:
        return -cmath.log(1 - w)
    mu = 1j * math.pi * xr
    coeffs = _polylog_coefficients(ell)
    acc = 0j
    p = 1 + 0j
    for k, c in enumerate(coeffs):
        if c:
            term = c * p
            acc += term
            if k > ell and abs(term) < 1e-18:
                break
        p *= mu
    harmonic = math.fsum(1.0 / j for j in range(1, ell))
    acc += mu ** (ell - 1) / math.factorial(ell - 1) * (harmonic - cmath.log(-mu))
    return acc


# --------------------------------------------------------------- zeta

def _zeta_euler_maclaurin(s: complex, terms: int, corrections: int) -> complex:
    n = np.arange(1, terms, dtype=float)
    head = complex(np.exp(-s * np.log(n)).sum())
    big_n = float(terms)
    log_n = math.log(big_n)
    n_pow = cmath.exp(-s * log_n)  # N^{-s}
    acc = head + big_n * n_pow / (s - 1) + 0.5 * n_pow
    # sum_k B_{2k}/(2k)! (s)_{2k-1} N^{-s-2k+1}
    poch = s
    npow = n_pow / big_n
    for k in range(1, corrections + 1):
        term = _BERNOULLI_OVER_FACTORIAL[k] * poch * npow
        acc += term
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        npow /= big_n * big_n
    return acc


def riemann_zeta(s, terms: int = ZETA_TERMS, corrections: int = ZETA_CORRECTIONS,
                 method: str = "auto") -> complex:
    """Riemann zeta by Euler-Maclaurin summation.

    ``method="auto"`` uses the reflection formula for Re(s) < 1/2;
    ``method="euler_maclaurin"`` forces direct summation everywhere (useful as
    an independent route when checking the functional equation).
    """
    s = as_complex(s)
    if abs(s - 1) <= ONE_RADIUS:
        raise PoleAtOne("zeta has a pole at s = 1")
    if s == 0:
        return -0.5 + 0j
    if method == "euler_maclaurin" or s.real >= 0.5:
        # keep the truncation error flat for larger |Im s|
        n_terms = max(terms, int(abs(s.imag) / 2) + terms // 2)
        return _zeta_euler_maclaurin(s, n_terms, corrections)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    one_minus = 1 - s
    return (cmath.exp(s * math.log(2 * math.pi)) / math.pi * cmath.sin(math.pi * s / 2)
            * gamma_fn(one_minus) * _zeta_euler_maclaurin(one_minus, max(terms, int(abs(s.imag) / 2) + terms // 2),
                                                         corrections))


def xi_completed(s) -> complex:
    """xi(s) = s(s-1)/2 pi^(-s/2) Gamma(s/2) zeta(s), with xi(0) = xi(1) = 1/2.

    For Re(s) >= 1/2 this is evaluated as (s-1) pi^(-s/2) Gamma(s/2+1) zeta(s).
    For Re(s) < 1/2 zeta is reflected and the Gamma factors combined into
    pole-free form, so the trivial zeros come out as genuine zeros.
    """
    s = as_complex(s)
    if s == 1 or s == 0:
        return 0.5 + 0j
    # zeta(1 - s) is not evaluable this close to s = 1 (or s = 0 after reflection);
    # the first-order expansion is exact to O(h^2) ~ 1e-14 there
    h = s - 1 if abs(s - 1) <= XI_LINEAR_RADIUS else (-s if abs(s) <= XI_LINEAR_RADIUS else None)
    if h is not None:
        return 0.5 + XI_PRIME_AT_ONE * h
    log_pi = math.log(math.pi)
    if s.real >= 0.5:
        return ((s - 1) * cmath.exp(-s / 2 * log_pi) * gamma_fn(s / 2 + 1) * riemann_zeta(s))
    # Gamma(s/2+1) sin(pi s/2) = (pi s/2)/Gamma(1-s/2), then
    # zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
    one_minus = 1 - s
    return ((s - 1) * s / 2 * cmath.exp(s / 2 * log_pi + s * math.log(2))
            * reciprocal_gamma(1 - s / 2) * gamma_fn(one_minus) * riemann_zeta(one_minus))


# --------------------------------------------------- xi through theta

def xi_via_theta(s, t0: float = 1.0, abs_tol: float = 1e-13) -> complex:
    """xi(2s) from the split Mellin transform of theta(it) at the point t0.

    xi(2s) = s(2s-1)/2 [ int_t0^oo (theta(it)-1) t^(s-1) dt
                         + int_0^t0 (theta(it)-t^(-1/2)) t^(s-1) dt ]
             - (2s-1) t0^s / 2 + s t0^(s-1/2)

    The boundary terms carry the prefactor already, which removes the apparent
    singularities at s = 0 and s = 1/2.  Each integral is done by adaptive
    quadrature on a finite window; the two infinite ends are summed termwise
    over the theta series with ``upper_incomplete_gamma``.
    """
    from .modular_forms import theta
    from .quadrature import integrate

    s = as_complex(s)
    t0 = float(t0)
    if not t0 > 0:
        raise ValueError("t0 must be positive")
    upper = t0 + 3.0          # int_upper^oo by incomplete gammas
    lower = 1 / (1 / t0 + 3.0)  # int_0^lower likewise, after t -> 1/t

    def large_t(t):
        return (theta(1j * t).real - 1) * np.exp((s - 1) * np.log(t))

    def small_t(t):
        # theta(it) - t^{-1/2} = t^{-1/2} (theta(i/t) - 1)
        return (theta(1j / t).real - 1) * np.exp((s - 1.5) * np.log(t))

    first = integrate(large_t, t0, upper, abs_tol=abs_tol, rel_tol=0.0).value
    second = integrate(small_t, lower, t0, abs_tol=abs_tol, rel_tol=0.0).value

    log_pi = math.log(math.pi)
    for n in range(1, 60):
        lam = log_pi + 2 * math.log(n)
        a = 2 * cmath.exp(-s * lam) * _quiet_upper_gamma(s, math.exp(lam) * upper)
        # int_0^lower (theta(it) - t^{-1/2}) t^{s-1} dt = 2 sum (pi n^2)^{s-1/2} Gamma(1/2-s, pi n^2/lower)
        b = 2 * cmath.exp((s - 0.5) * lam) * _quiet_upper_gamma(0.5 - s, math.exp(lam) / lower)
        first += a
        second += b
        if abs(a) + abs(b) < 1e-18:
            break

    pref = s * (2 * s - 1) / 2
    return (pref * (first + second) - (2 * s - 1) * cmath.exp(s * math.log(t0)) / 2
            + s * cmath.exp((s - 0.5) * math.log(t0)))


def _quiet_upper_gamma(s: complex, y: float) -> complex:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnderflowWarning)
        return upper_incomplete_gamma(s, y)
