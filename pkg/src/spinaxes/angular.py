"""Clebsch-Gordan coefficients, Wigner rotation matrices, spherical harmonics.

Conventions
-----------
* Condon-Shortley phases throughout; all Clebsch-Gordan coefficients are real.
* ``wigner_D(j, mp, m, phi, theta, psi)`` is the active z-y-z rotation matrix
  element ``<j mp| R(phi, theta, psi) |j m>`` with
  ``R = exp(-i phi Jz) exp(-i theta Jy) exp(-i psi Jz)``, so
  ``D = exp(-i mp phi) d(theta) exp(-i m psi)``.
* Basis vectors are ordered by descending m, from +j to -j.
* Spherical harmonics include the Condon-Shortley phase, so
  ``Y(1, 1) = -sqrt(3/8pi) sin(theta) e^{i phi}``.

Clebsch-Gordan coefficients are evaluated in exact rational arithmetic and
returned as an :class:`ExactCoefficient`, a sign together with the exact
square of the magnitude.  Spin quantum numbers are supported up to doubled
value 60 (j = 30); coupling ranks that arise from such spins go up to
doubled value 120.

All functions are pure and cache only immutable data, so they are safe to
call from multiple threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .halfint import HalfInt, dimension, halfint, m_range

MAX_DOUBLED_J = 60
# Couplings of two supported spins reach twice the single-spin cap.
_MAX_DOUBLED_ARG = 2 * MAX_DOUBLED_J

_f = math.factorial


def _check_j(dj: int, name: str = "j") -> None:
    if dj < 0:
        raise DomainError(f"{name} must be non-negative, got {dj}/2")
    if dj > _MAX_DOUBLED_ARG:
        raise DomainError(f"{name} = {dj}/2 exceeds the supported range (j <= {_MAX_DOUBLED_ARG // 2})")


def _check_jm(dj: int, dm: int, name: str = "j") -> None:
    _check_j(dj, name)
    if (dj - dm) % 2 != 0:
        raise DomainError(f"m and {name} must both be integers or both half-odd (got {name}={dj}/2, m={dm}/2)")
    if abs(dm) > dj:
        raise DomainError(f"|m| = {abs(dm)}/2 exceeds {name} = {dj}/2")


@dataclass(frozen=True)
class ExactCoefficient:
    """A real number of the form ``sign * sqrt(magnitude_squared)``.

    ``sign`` is -1, 0, or +1 and ``magnitude_squared`` is an exact
    non-negative rational.  Products of two such numbers are again of this
    form, which is what makes exact orthogonality checks possible.
    """

    sign: int
    magnitude_squared: Fraction

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0, or 1, got {self.sign}")
        if self.magnitude_squared < 0:
            raise ValueError("magnitude_squared must be non-negative")
        if (self.sign == 0) != (self.magnitude_squared == 0):
            raise ValueError("sign is zero exactly when the magnitude is zero")

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def __float__(self) -> float:
        return self.sign * math.sqrt(float(self.magnitude_squared))

    def __mul__(self, other: "ExactCoefficient") -> "ExactCoefficient":
        if not isinstance(other, ExactCoefficient):
            return NotImplemented
        return ExactCoefficient(self.sign * other.sign, self.magnitude_squared * other.magnitude_squared)

    def __neg__(self) -> "ExactCoefficient":
        return ExactCoefficient(-self.sign, self.magnitude_squared)

    def __repr__(self) -> str:
        if self.sign == 0:
            return "ExactCoefficient(0)"
        s = "-" if self.sign < 0 else "+"
        return f"ExactCoefficient({s}sqrt({self.magnitude_squared}))"


_ZERO = ExactCoefficient(0, Fraction(0))


@lru_cache(maxsize=None)
def _cg_doubled(dj1: int, dj2: int, dj: int, dm1: int, dm2: int, dm: int) -> ExactCoefficient:
    if dm1 + dm2 != dm:
        return _ZERO
    if dj < abs(dj1 - dj2) or dj > dj1 + dj2 or (dj1 + dj2 + dj) % 2 != 0:
        return _ZERO

    # All of the following are non-negative integers once the checks pass.
    a = (dj1 + dj2 - dj) // 2
    b = (dj1 - dj2 + dj) // 2
    c = (-dj1 + dj2 + dj) // 2
    j1p = (dj1 + dm1) // 2
    j1m = (dj1 - dm1) // 2
    j2p = (dj2 + dm2) // 2
    j2m = (dj2 - dm2) // 2
    jp = (dj + dm) // 2
    jm = (dj - dm) // 2

    prefactor = Fraction(
        (dj + 1) * _f(a) * _f(b) * _f(c) * _f(j1p) * _f(j1m) * _f(j2p) * _f(j2m) * _f(jp) * _f(jm),
        _f((dj1 + dj2 + dj) // 2 + 1),
    )

    # Racah sum; term t is nonzero only while every factorial argument is >= 0.
    e = (dj - dj2 + dm1) // 2
    g = (dj - dj1 - dm2) // 2
    t_lo = max(0, -e, -g)
    t_hi = min(a, j1m, j2p)
    total = Fraction(0)
    for t in range(t_lo, t_hi + 1):
        term = Fraction(1, _f(t) * _f(a - t) * _f(j1m - t) * _f(j2p - t) * _f(e + t) * _f(g + t))
        total += -term if t % 2 else term
    if total == 0:
        return _ZERO
    sign = 1 if total > 0 else -1
    return ExactCoefficient(sign, total * total * prefactor)


def cg(j1, j2, j, m1, m2, m) -> ExactCoefficient:
    """Clebsch-Gordan coefficient <j1 m1, j2 m2 | j m>, exact.

    Returns zero (not an error) when m1 + m2 != m or the triangle rule
    fails; raises :class:`DomainError` for invalid (j, m) pairs.
    """
    j1, j2, j = halfint(j1), halfint(j2), halfint(j)
    m1, m2, m = halfint(m1), halfint(m2), halfint(m)
    _check_jm(j1.doubled, m1.doubled, "j1")
    _check_jm(j2.doubled, m2.doubled, "j2")
    _check_jm(j.doubled, m.doubled, "j")
    return _cg_doubled(j1.doubled, j2.doubled, j.doubled, m1.doubled, m2.doubled, m.doubled)


def cg_value(j1, j2, j, m1, m2, m) -> float:
    """Clebsch-Gordan coefficient as a float."""
    return float(cg(j1, j2, j, m1, m2, m))


@lru_cache(maxsize=None)
def _d_terms(dj: int, dmp: int, dm: int) -> tuple[tuple[float, int, int], ...]:
    """Terms (coefficient, cos power, sin power) of the d-matrix sum.

    d^j_{mp,m}(b) = sum_s coeff_s cos(b/2)^{2j+m-mp-2s} sin(b/2)^{mp-m+2s}.
    Each coefficient is the square root of an exact rational, evaluated in
    one correctly rounded step so large factorials never overflow.
    """
    jpm = (dj + dm) // 2
    jmmp = (dj - dmp) // 2
    mpmm = (dmp - dm) // 2
    num = Fraction(_f((dj + dmp) // 2) * _f(jmmp) * _f(jpm) * _f((dj - dm) // 2))
    out = []
    for s in range(max(0, -mpmm), min(jpm, jmmp) + 1):
        den = _f(jpm - s) * _f(s) * _f(mpmm + s) * _f(jmmp - s)
        coeff = math.sqrt(float(num / (den * den)))
        if (mpmm + s) % 2:
            coeff = -coeff
        out.append((coeff, dj + (dm - dmp) // 2 - 2 * s, mpmm + 2 * s))
    return tuple(out)


def wigner_d(j, mp, m, beta: float) -> float:
    """Wigner small-d matrix element d^j_{mp, m}(beta)."""
    j, mp, m = halfint(j), halfint(mp), halfint(m)
    _check_jm(j.doubled, mp.doubled, "j")
    _check_jm(j.doubled, m.doubled, "j")
    c = math.cos(beta / 2.0)
    s = math.sin(beta / 2.0)
    total = 0.0
    for coeff, cos_pow, sin_pow in _d_terms(j.doubled, mp.doubled, m.doubled):
        total += coeff * c**cos_pow * s**sin_pow
    return total


def wigner_d_matrix(j, beta: float) -> np.ndarray:
    """Real matrix d^j(beta) with rows and columns ordered m = +j .. -j."""
    j = halfint(j)
    ms = m_range(j)
    out = np.empty((len(ms), len(ms)))
    for a, mp in enumerate(ms):
        for b, m in enumerate(ms):
            out[a, b] = wigner_d(j, mp, m, beta)
    return out


def wigner_D(j, mp, m, phi: float, theta: float, psi: float) -> complex:
    """Wigner D-matrix element D^j_{mp, m}(phi, theta, psi), z-y-z convention."""
    j, mp, m = halfint(j), halfint(mp), halfint(m)
    d = wigner_d(j, mp, m, theta)
    return np.exp(-1j * (float(mp) * phi + float(m) * psi)) * d


def wigner_D_matrix(j, phi: float, theta: float, psi: float) -> np.ndarray:
    """Unitary matrix D^j(phi, theta, psi), rows and columns m = +j .. -j."""
    j = halfint(j)
    d = wigner_d_matrix(j, theta)
    mvals = np.array([float(m) for m in m_range(j)])
    return np.exp(-1j * phi * mvals)[:, None] * d * np.exp(-1j * psi * mvals)[None, :]


def _assoc_legendre(l: int, m: int, x: np.ndarray, s: np.ndarray) -> np.ndarray:
    """P^m_l with Condon-Shortley phase, for 0 <= m <= l; s = sin(theta)."""
    pmm = np.ones_like(x)
    for i in range(1, m + 1):
        pmm = pmm * (-(2 * i - 1)) * s
    if l == m:
        return pmm
    pm1 = x * (2 * m + 1) * pmm
    if l == m + 1:
        return pm1
    for ll in range(m + 2, l + 1):
        pmm, pm1 = pm1, (x * (2 * ll - 1) * pm1 - (ll + m - 1) * pmm) / (ll - m)
    return pm1


def spherical_harmonic(l: int, m: int, theta, phi):
    """Spherical harmonic Y^l_m(theta, phi); accepts scalars or arrays.

    Negative orders are produced from Y^l_{-m} = (-1)^m conj(Y^l_m), which
    keeps the conjugation identity exact in floating point.
    """
    if not isinstance(l, int) or not isinstance(m, int):
        raise DomainError("spherical harmonic degree and order must be ints")
    if l < 0 or l > _MAX_DOUBLED_ARG // 2:
        raise DomainError(f"degree l = {l} outside the supported range")
    if abs(m) > l:
        raise DomainError(f"|m| = {abs(m)} exceeds l = {l}")
    if m < 0:
        y = spherical_harmonic(l, -m, theta, phi)
        return np.conj(y) if (-m) % 2 == 0 else -np.conj(y)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    x = np.cos(theta)
    s = np.sin(theta)
    norm = math.sqrt(float(Fraction((2 * l + 1) * _f(l - m), 4 * _f(l + m))) / math.pi)
    val = norm * _assoc_legendre(l, m, x, s) * np.exp(1j * m * phi)
    return val[()] if val.ndim == 0 else val
