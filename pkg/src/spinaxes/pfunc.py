"""Diagonal coherent-state representation of symmetric spin states.

A spin-j coherent state |alpha(theta, phi)> points along (theta, phi) and
has ladder-basis amplitudes

    <j m|alpha> = sqrt(C(2j, j+m)) cos^{j+m}(theta/2) sin^{j-m}(theta/2) e^{-i m phi},

the m-th column entry of D^j(phi, theta, 0) at m' = j.  A normalized weight
function lambda(Omega) on the sphere determines both a state and its tensor
parameters directly:

    rho = integral lambda(Omega) |alpha><alpha| dOmega,
    t^k_q = c_k(j) integral lambda(Omega) Y^k_q(Omega) dOmega,

with the rank-dependent scale c_k(j) = sqrt(4 pi) <j j, k 0|j j>.  The two
routes agree exactly for band-limited lambda on a large enough grid, which
the tests exploit as mutual oracles.

Weight functions are represented either as callables of (theta, phi) or as
:class:`SphericalExpansion` coefficient tables over conj(Y^l_m).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .angular import cg_value, spherical_harmonic
from .errors import DomainError, NonClassicalWarning, ValidationError
from .halfint import HalfInt, dimension, halfint, m_range
from .tensors import SpinDensityMatrix, TensorParams, _check_spin

NORMALIZATION_TOL = 1e-8
REALITY_TOL = 1e-10
NEGATIVITY_FLOOR = -1e-12


def coherent_state(j, theta: float, phi: float) -> np.ndarray:
    """Amplitude vector of |alpha(theta, phi)>, ordered m = +j .. -j."""
    j = halfint(j)
    _check_spin(j)
    return _coherent_amplitudes(j, np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))


def _coherent_amplitudes(j: HalfInt, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Amplitudes stacked along the last axis, for scalar or array angles."""
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    dj = j.doubled
    cols = []
    for m in m_range(j):
        jp = (dj + m.doubled) // 2
        jm = (dj - m.doubled) // 2
        amp = math.sqrt(math.comb(dj, jp)) * c**jp * s**jm * np.exp(-1j * float(m) * phi)
        cols.append(amp)
    return np.stack(cols, axis=-1)


def multipole_scale(j, k: int) -> float:
    """The constant c_k(j) = sqrt(4 pi) <j j, k 0 | j j>."""
    j = halfint(j)
    _check_spin(j)
    if not 0 <= k <= j.doubled:
        raise DomainError(f"rank k = {k} outside 0 .. 2j = {j.doubled}")
    return math.sqrt(4 * math.pi) * cg_value(j, HalfInt(2 * k), j, j, HalfInt(0), j)


@dataclass(frozen=True)
class QuadratureGrid:
    """Product quadrature on the sphere: Gauss-Legendre in cos(theta),
    uniform in phi.  Node weights sum to 4 pi; the rule integrates any
    integrand of spherical-harmonic degree <= band_limit exactly.
    """

    theta: np.ndarray
    phi: np.ndarray
    theta_weights: np.ndarray

    def __post_init__(self) -> None:
        for name in ("theta", "phi", "theta_weights"):
            a = np.asarray(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        if self.theta.shape != self.theta_weights.shape:
            raise ValidationError("theta nodes and weights differ in length")

    @classmethod
    def build(cls, n_theta: int, n_phi: int) -> "QuadratureGrid":
        if n_theta < 1 or n_phi < 1:
            raise DomainError("grid sizes must be positive")
        x, w = np.polynomial.legendre.leggauss(n_theta)
        return cls(np.arccos(x), np.arange(n_phi) * (2 * math.pi / n_phi), w)

    @classmethod
    def for_band_limit(cls, band_limit: int) -> "QuadratureGrid":
        """Smallest default grid exact through the given harmonic degree."""
        if band_limit < 0:
            raise DomainError("band limit must be non-negative")
        return cls.build(band_limit + 2, 2 * band_limit + 3)

    @property
    def n_theta(self) -> int:
        return len(self.theta)

    @property
    def n_phi(self) -> int:
        return len(self.phi)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(theta, phi) arrays of shape (n_theta, n_phi)."""
        return np.meshgrid(self.theta, self.phi, indexing="ij")

    def weights(self) -> np.ndarray:
        """Node weights of shape (n_theta, n_phi); they sum to 4 pi."""
        return np.repeat(self.theta_weights[:, None], self.n_phi, axis=1) * (2 * math.pi / self.n_phi)

    def integrate(self, values: np.ndarray):
        values = np.asarray(values)
        if values.shape != (self.n_theta, self.n_phi):
            raise ValidationError(f"values shape {values.shape} does not match grid {(self.n_theta, self.n_phi)}")
        return np.sum(self.weights() * values)


@dataclass(frozen=True)
class SphericalExpansion:
    """Coefficients of lambda(Omega) = sum_lm a^l_m conj(Y^l_m(Omega)).

    ``blocks[l]`` holds a^l_m for m = -l .. +l (ascending).  Real-valued
    expansions, the only kind accepted, satisfy
    conj(a^l_m) = (-1)^m a^l_{-m}.
    """

    l_max: int
    blocks: tuple = field(repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.l_max, int) or self.l_max < 0:
            raise DomainError(f"l_max must be a non-negative int, got {self.l_max!r}")
        if len(self.blocks) != self.l_max + 1:
            raise ValidationError(f"expected blocks for l = 0 .. {self.l_max}")
        blocks = []
        for l, block in enumerate(self.blocks):
            a = np.array(block, dtype=complex)
            if a.shape != (2 * l + 1,):
                raise ValidationError(f"degree {l} block has shape {a.shape}, expected ({2 * l + 1},)")
            flipped = a[::-1].conj() * (-1.0) ** np.arange(-l, l + 1)
            if np.abs(a - flipped).max() > 1e-12:
                raise ValidationError(f"degree {l} violates the reality condition conj(a^l_m) = (-1)^m a^l_-m")
            a.setflags(write=False)
            blocks.append(a)
        object.__setattr__(self, "blocks", tuple(blocks))

    @classmethod
    def from_table(cls, l_max: int, table: Mapping) -> "SphericalExpansion":
        blocks = [np.zeros(2 * l + 1, dtype=complex) for l in range(l_max + 1)]
        for (l, m), v in table.items():
            if not 0 <= l <= l_max:
                raise ValidationError(f"degree {l} outside 0 .. {l_max}")
            if abs(m) > l:
                raise ValidationError(f"order m = {m} outside |m| <= {l}")
            blocks[l][m + l] = v
        return cls(l_max, tuple(blocks))

    @classmethod
    def uniform(cls) -> "SphericalExpansion":
        """The constant distribution 1/(4 pi)."""
        return cls(0, (np.array([1.0 / math.sqrt(4 * math.pi)], dtype=complex),))

    def item(self, l: int, m: int) -> complex:
        if not 0 <= l <= self.l_max:
            raise DomainError(f"degree {l} outside 0 .. {self.l_max}")
        if abs(m) > l:
            raise DomainError(f"order m = {m} outside |m| <= {l}")
        return complex(self.blocks[l][m + l])

    @property
    def norm_integral(self) -> float:
        """integral lambda dOmega = sqrt(4 pi) a^0_0."""
        return float((math.sqrt(4 * math.pi) * self.blocks[0][0]).real)

    @property
    def is_normalized(self) -> bool:
        return abs(self.blocks[0][0] - 1.0 / math.sqrt(4 * math.pi)) <= 1e-12

    def normalized(self) -> "SphericalExpansion":
        n = self.norm_integral
        if abs(n) < 1e-300:
            raise DomainError("cannot normalize an expansion with zero mean")
        return SphericalExpansion(self.l_max, tuple(b / n for b in self.blocks))

    def evaluate(self, theta, phi) -> np.ndarray:
        """lambda(theta, phi) for scalar or array angles."""
        theta = np.asarray(theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        total = np.zeros(np.broadcast(theta, phi).shape, dtype=complex)
        for l in range(self.l_max + 1):
            for m in range(-l, l + 1):
                a = self.blocks[l][m + l]
                if a != 0:
                    total = total + a * np.conj(spherical_harmonic(l, m, theta, phi))
        return total[()] if total.ndim == 0 else total


def _values_on_grid(lam, grid: QuadratureGrid) -> np.ndarray:
    """Evaluate a weight function on the grid and check it is real."""
    th, ph = grid.mesh()
    if isinstance(lam, SphericalExpansion):
        vals = lam.evaluate(th, ph)
    elif callable(lam):
        vals = np.asarray(lam(th, ph), dtype=complex)
        if vals.shape != th.shape:
            vals = np.vectorize(lambda a, b: complex(lam(a, b)))(th, ph)
    else:
        raise DomainError(f"cannot evaluate {type(lam).__name__} as a weight function")
    if np.abs(vals.imag).max() > REALITY_TOL:
        raise ValidationError("weight function takes complex values on the grid")
    return vals.real


def _checked_values(lam, grid: QuadratureGrid) -> tuple[np.ndarray, float]:
    """Grid values and their integral; warns on negativity, errors off-norm."""
    vals = _values_on_grid(lam, grid)
    total = float(np.sum(grid.weights() * vals))
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ValidationError(f"weight function integrates to {total:.9g}, expected 1 within 1e-8")
    if vals.min() < NEGATIVITY_FLOOR:
        warnings.warn(
            f"weight function is negative on the grid (min {vals.min():.6g}); "
            "the represented state is not a classical mixture of coherent states",
            NonClassicalWarning,
            stacklevel=3,
        )
    return vals, total


def default_grid(l_max: int, j) -> QuadratureGrid:
    """Grid exact for products of a degree-l_max weight with rank <= 2j harmonics."""
    j = halfint(j)
    return QuadratureGrid.for_band_limit(l_max + j.doubled)


def t_from_distribution(lam, j, grid: QuadratureGrid | None = None) -> TensorParams:
    """Tensor parameters t^k_q = c_k integral lambda Y^k_q dOmega.

    ``lam`` is a SphericalExpansion or a callable of (theta, phi) arrays.
    When no grid is given, one sized for the expansion's band limit is
    used; callables have no known band limit and require an explicit grid.
    """
    j = halfint(j)
    _check_spin(j)
    if grid is None:
        if not isinstance(lam, SphericalExpansion):
            raise DomainError("a quadrature grid is required for callable weight functions")
        grid = default_grid(lam.l_max, j)
    vals, total = _checked_values(lam, grid)
    th, ph = grid.mesh()
    w = grid.weights() * vals / total
    blocks = []
    for k in range(j.doubled + 1):
        ck = multipole_scale(j, k)
        a = np.empty(2 * k + 1, dtype=complex)
        for q in range(-k, k + 1):
            a[q + k] = ck * np.sum(w * spherical_harmonic(k, q, th, ph))
        blocks.append(a)
    blocks[0][0] = 1.0
    return TensorParams(j, tuple(blocks))


def rho_from_distribution(lam, j, grid: QuadratureGrid | None = None) -> SpinDensityMatrix:
    """The state integral lambda(Omega) |alpha(Omega)><alpha(Omega)| dOmega."""
    j = halfint(j)
    _check_spin(j)
    if grid is None:
        if not isinstance(lam, SphericalExpansion):
            raise DomainError("a quadrature grid is required for callable weight functions")
        grid = default_grid(lam.l_max, j)
    vals, total = _checked_values(lam, grid)
    th, ph = grid.mesh()
    amps = _coherent_amplitudes(j, th.ravel(), ph.ravel())  # (nodes, dim)
    w = (grid.weights() * vals).ravel() / total
    rho = (amps.T * w) @ amps.conj()
    rho = 0.5 * (rho + rho.conj().T)
    rho /= rho.trace().real
    return SpinDensityMatrix(j, rho)


def expansion_from_function(f, l_max: int, grid: QuadratureGrid | None = None) -> SphericalExpansion:
    """Project a function on the sphere onto degrees 0 .. l_max.

    a^l_m = integral f Y^l_m dOmega; exact for band-limited f on the
    default grid, a least-squares style truncation otherwise.
    """
    if not isinstance(l_max, int) or l_max < 0:
        raise DomainError(f"l_max must be a non-negative int, got {l_max!r}")
    if grid is None:
        grid = QuadratureGrid.for_band_limit(2 * l_max)
    vals = _values_on_grid(f, grid)
    th, ph = grid.mesh()
    w = grid.weights() * vals
    blocks = []
    for l in range(l_max + 1):
        a = np.empty(2 * l + 1, dtype=complex)
        for m in range(-l, l + 1):
            a[m + l] = np.sum(w * spherical_harmonic(l, m, th, ph))
        blocks.append(a)
    return SphericalExpansion(l_max, tuple(blocks))


def ylm_squared_t(l: int, m: int, j) -> TensorParams:
    """Tensor parameters of the state whose weight function is |Y^l_m|^2.

    The product of harmonics collapses to zonal terms, leaving the closed
    form t^k_0 = c_k sqrt((2k+1)/4pi) <l 0, k 0|l 0><l m, k 0|l m> and
    t^k_q = 0 for q != 0; odd ranks vanish by parity.
    """
    j = halfint(j)
    _check_spin(j)
    if not isinstance(l, int) or not isinstance(m, int):
        raise DomainError("degree and order must be ints")
    if l < 0 or abs(m) > l:
        raise DomainError(f"invalid harmonic indices l = {l}, m = {m}")
    blocks = [np.zeros(2 * k + 1, dtype=complex) for k in range(j.doubled + 1)]
    for k in range(j.doubled + 1):
        ck = multipole_scale(j, k)
        gaunt = cg_value(l, k, l, 0, 0, 0) * cg_value(l, k, l, m, 0, m)
        blocks[k][k] = ck * math.sqrt((2 * k + 1) / (4 * math.pi)) * gaunt
    blocks[0][0] = 1.0
    return TensorParams(j, tuple(blocks))
