"""Theta functions, the lambda function, the theta-group Hauptmodul and H_z.

All evaluators accept a scalar (``complex`` or :class:`UpperHalfPoint`) or a
numpy array of points in the upper half-plane and return the same shape.

Jacobi thetas are evaluated by first moving tau into the standard fundamental
domain of SL2(Z), tracking how (theta2, theta3, theta4) permute and pick up
automorphy factors, and then summing the q-series there (Im tau >= sqrt(3)/2,
so a handful of terms suffice).  This keeps every component accurate to a
few ulps relative, including near the cusps where theta3 is exponentially
small and direct summation would cancel catastrophically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NearPole, NotUnimodular, NumericalDegeneracy, ReductionStalled

THETA_DIGITS = 13
POLE_GUARD = 1e-8
REDUCTION_MAX_STEPS = 10_000
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class UpperHalfPoint:
    u: float
    v: float

    def __post_init__(self):
        if not self.v > 0:
            raise ValueError(f"point must lie in the upper half-plane, got v = {self.v}")

    @classmethod
    def from_complex(cls, tau) -> "UpperHalfPoint":
        tau = complex(tau)
        return cls(tau.real, tau.imag)

    @property
    def tau(self) -> complex:
        return complex(self.u, self.v)

    @property
    def q(self) -> complex:
        return np.exp(2j * np.pi * self.tau)

    def __complex__(self):
        return self.tau


@dataclass(frozen=True)
class IntegerMatrix2x2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise NotUnimodular(f"det {self.a * self.d - self.b * self.c} != 1")

    def __matmul__(self, other: "IntegerMatrix2x2") -> "IntegerMatrix2x2":
        return IntegerMatrix2x2(self.a * other.a + self.b * other.c,
                                self.a * other.b + self.b * other.d,
                                self.c * other.a + self.d * other.c,
                                self.c * other.b + self.d * other.d)

    def __call__(self, tau):
        tau = _as_tau(tau)
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def inverse(self) -> "IntegerMatrix2x2":
        return IntegerMatrix2x2(self.d, -self.b, -self.c, self.a)

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)


IDENTITY = IntegerMatrix2x2(1, 0, 0, 1)
S = IntegerMatrix2x2(0, -1, 1, 0)
T = IntegerMatrix2x2(1, 1, 0, 1)
T2 = IntegerMatrix2x2(1, 2, 0, 1)


@dataclass(frozen=True)
class PolePoint:
    """Location z = x + iy of the pole of H_z, with its reduced representative."""

    x: float
    y: float
    reduced: Optional[UpperHalfPoint] = None
    matrix: Optional[IntegerMatrix2x2] = None

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"pole point must lie in the upper half-plane, got y = {self.y}")

    @classmethod
    def from_complex(cls, z, reduce: bool = True) -> "PolePoint":
        z = complex(z)
        if not reduce:
            return cls(z.real, z.imag)
        red, gamma = reduce_to_fundamental_domain(z)
        return cls(z.real, z.imag, red, gamma)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @property
    def axis_margin(self) -> float:
        red = self.reduced if self.reduced is not None else reduce_to_fundamental_domain(self.z)[0]
        return abs(red.u)

    def __complex__(self):
        return self.z


def _as_tau(tau):
    if isinstance(tau, (UpperHalfPoint, PolePoint)):
        return complex(tau)
    if isinstance(tau, np.ndarray):
        return tau.astype(complex)
    return complex(tau)


def as_pole_point(z) -> PolePoint:
    if isinstance(z, PolePoint):
        return z if z.reduced is not None else PolePoint.from_complex(z.z)
    if isinstance(z, UpperHalfPoint):
        return PolePoint.from_complex(z.tau)
    return PolePoint.from_complex(z)


# ------------------------------------------------------------ series

def theta_terms(v: float, digits: int = THETA_DIGITS) -> int:
    """Truncation N(v) with sum_{|n|>N} |q^(n^2/2)| below 10^-digits."""
    return int(math.ceil(math.sqrt(2 * (digits + 2) * math.log(10) / (math.pi * v))))


def _series_triple(tau: np.ndarray, digits: int = THETA_DIGITS):
    """(theta2, theta3, theta4) by direct q-series, vectorized."""
    vmin = float(np.min(tau.imag)) if tau.size else 1.0
    n_max = theta_terms(vmin, digits)
    n = np.arange(1, n_max + 1)
    # e^{i pi n^2 tau}
    sq = np.exp(1j * np.pi * np.multiply.outer(tau, n * n))
    th3 = 1 + 2 * sq.sum(axis=-1)
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    th4 = 1 + 2 * (sq * sign).sum(axis=-1)
    m = np.arange(0, n_max + 1)
    half = np.exp(1j * np.pi * np.multiply.outer(tau, (m + 0.5) ** 2))
    th2 = 2 * half.sum(axis=-1)
    return th2, th3, th4


def theta_series(tau, digits: int = THETA_DIGITS):
    """sum_{|n|<=N(v)} e^(i pi n^2 tau) without any modular transformation."""
    t = np.atleast_1d(_as_tau(tau))
    _check_upper(t)
    out = _series_triple(t, digits)[1]
    return out if isinstance(tau, np.ndarray) else complex(out[0])


def _check_upper(t: np.ndarray) -> None:
    if np.any(~(t.imag > 0)):
        raise ValueError("all points must lie in the upper half-plane")


_EIGHTH_ROOTS = np.exp(1j * np.pi * np.arange(8) / 4)


def jacobi_thetas(tau):
    """(theta2, theta3, theta4) at tau, with theta3 = theta of this package.

    Each point is moved into the SL2(Z) fundamental domain.  Along the way
    theta(tau) = M theta(tau_reduced) with M a monomial matrix, stored as a
    permutation ``perm`` and coefficient vector ``coef``.
    """
    scalar = not isinstance(tau, np.ndarray)
    t = np.atleast_1d(_as_tau(tau)).astype(complex).ravel()
    _check_upper(t)
    coef = np.ones((t.size, 3), dtype=complex)
    perm = np.tile(np.arange(3), (t.size, 1))
    rows = np.arange(t.size)[:, None]
    for _ in range(REDUCTION_MAX_STEPS):
        n = np.round(t.real)
        if np.any(n != 0):
            t = t - n
            ni = n.astype(np.int64)
            odd = (ni % 2) != 0
            # theta2(tau+n) = e^{i pi n/4} theta2(tau); theta3/theta4 swap for odd n
            d = np.ones((t.size, 3), dtype=complex)
            d[:, 0] = _EIGHTH_ROOTS[ni % 8]
            r = np.tile(np.arange(3), (t.size, 1))
            r[odd, 1] = 2
            r[odd, 2] = 1
            coef = coef * d[rows, perm]
            perm = r[rows, perm]
        inv = np.abs(t) < 1 - 1e-15
        if not np.any(inv):
            break
        # theta3(tau) = (-i tau)^{-1/2} theta3(-1/tau), theta2 <-> theta4
        f = np.where(inv, (-1j * t) ** -0.5, 1.0)
        d = np.repeat(f[:, None], 3, axis=1)
        r = np.tile(np.arange(3), (t.size, 1))
        r[inv] = [2, 1, 0]
        coef = coef * d[rows, perm]
        perm = r[rows, perm]
        t = np.where(inv, -1 / t, t)
    else:
        raise ReductionStalled("theta reduction did not terminate")
    base = np.stack(_series_triple(t), axis=1)
    vals = coef * base[rows, perm]
    th2, th3, th4 = vals[:, 0], vals[:, 1], vals[:, 2]
    if scalar:
        return complex(th2[0]), complex(th3[0]), complex(th4[0])
    shape = np.shape(tau)
    return th2.reshape(shape), th3.reshape(shape), th4.reshape(shape)


def theta(tau):
    """theta(tau) = sum_n q^(n^2/2), q = e^(2 pi i tau)."""
    return jacobi_thetas(tau)[1]


def theta2(tau):
    """theta2(tau) = sum_n e^(pi i (n+1/2)^2 tau)."""
    return jacobi_thetas(tau)[0]


def lambda_pair(tau):
    """(lambda(tau), 1 - lambda(tau)), each to full relative precision."""
    th2, th3, th4 = jacobi_thetas(tau)
    den = np.abs(th3) ** 4
    if np.any(den == 0) or not np.all(np.isfinite(den)):
        raise NumericalDegeneracy("|theta(tau)|^4 under/overflows; lambda is not representable")
    return (th2 / th3) ** 4, (th4 / th3) ** 4


def lambda_modular(tau):
    """lambda(tau) = theta2(tau)^4 / theta(tau)^4."""
    return lambda_pair(tau)[0]


def j_theta_inv(tau):
    """1/j_theta(tau) = lambda(tau)(1 - lambda(tau)); finite on all of H."""
    th2, th3, th4 = jacobi_thetas(tau)
    return (th2 * th4 / (th3 * th3)) ** 4


def j_theta(tau):
    """Theta-group Hauptmodul 1/(lambda (1 - lambda))."""
    th2, th3, th4 = jacobi_thetas(tau)
    den = (th2 * th4) ** 4
    if np.any(den == 0) or not np.all(np.isfinite(den)):
        raise NumericalDegeneracy("lambda(1 - lambda) under/overflows")
    return th3 ** 8 / den


def h_z(z, tau, pole_guard: float = POLE_GUARD):
    """H_z(tau) = j(z) theta(tau) / (j(tau) - j(z)).

    Computed as theta(tau) g(tau) / (g(z) - g(tau)) with g = 1/j.  Raises
    ``NearPole`` if |j(tau) - j(z)| <= pole_guard (1 + |j(z)|).
    """
    zc = complex(z)
    g_z = complex(j_theta_inv(zc))
    th2, th3, th4 = jacobi_thetas(tau)
    g_t = (th2 * th4 / (th3 * th3)) ** 4
    diff = g_z - g_t
    # |j(tau)-j(z)| = |diff|/(|g_z||g_t|) against guard*(1+1/|g_z|)
    if np.any(np.abs(diff) <= pole_guard * (abs(g_z) + 1) * np.abs(g_t)):
        raise NearPole(f"tau is within the pole guard of the orbit of z = {zc}")
    return th3 * g_t / diff


# ------------------------------------------------------- theta group

def in_theta_group(m: IntegerMatrix2x2) -> bool:
    """Membership in the theta group: a = d and b = c modulo 2."""
    if isinstance(m, (tuple, list)):
        m = IntegerMatrix2x2(*m)
    if m.a * m.d - m.b * m.c != 1:
        raise NotUnimodular("matrix is not in SL2(Z)")
    return (m.a - m.d) % 2 == 0 and (m.b - m.c) % 2 == 0


def _shift(k: int) -> IntegerMatrix2x2:
    return IntegerMatrix2x2(1, 2 * k, 0, 1)


def reduce_to_fundamental_domain(z, max_steps: int = REDUCTION_MAX_STEPS):
    """Move z into |Re| <= 1, |z| >= 1 using T^(+-2) and S.

    Returns ``(UpperHalfPoint, IntegerMatrix2x2)`` with the matrix in the
    theta group and mapping z to the representative.  Ties on the boundary
    go to Re >= 0 (so Re = -1 becomes +1, and points on the unit circle are
    flipped by S to non-negative real part).
    """
    z = complex(z)
    if not z.imag > 0:
        raise ValueError("z must lie in the upper half-plane")
    w = z
    gamma = IDENTITY
    for _ in range(max_steps):
        k = -math.floor((w.real + 1) / 2)
        if w.real + 2 * k <= -1:
            k += 1
        if k:
            w = w + 2 * k
            gamma = _shift(k) @ gamma
        if abs(w) < 1 - BOUNDARY_TOL:
            w = -1 / w
            gamma = S @ gamma
            continue
        break
    else:
        raise ReductionStalled(f"reduction of {z} exceeded {max_steps} steps")
    if abs(abs(w) - 1) <= BOUNDARY_TOL and w.real < 0:
        w = -1 / w
        gamma = S @ gamma
    if abs(w.real + 1) <= BOUNDARY_TOL:
        w = w + 2
        gamma = _shift(1) @ gamma
    return UpperHalfPoint(w.real, w.imag), gamma


def axis_margin(z) -> float:
    """|Re| of the reduced representative; 0 on the orbit of i*R+."""
    if isinstance(z, PolePoint) and z.reduced is not None:
        return abs(z.reduced.u)
    return abs(reduce_to_fundamental_domain(complex(z))[0].u)
