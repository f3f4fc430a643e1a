"""Exact geometry of the cuboidal lattice family.

The family is generated by the basis (u, v, 0), (u, 0, v), (0, v, v) and is
parameterized by the anisotropy ratio A = u^2 / v^2.  It interpolates through
the axial centred-cuboidal (A = 1/3), body-centred cubic (A = 1/2), mean
centred-cuboidal (A = 1/sqrt(2)) and face-centred cubic (A = 1) lattices.
Everything in this module is closed-form; enumeration helpers are provided so
tests can cross-check the closed forms independently.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

ONE_THIRD = 1.0 / 3.0

# Width of the window around A = 1/3 and A = 1 inside which a value is treated
# as sitting exactly on the regime boundary.  Floating-point inputs meant to be
# the boundary (e.g. float(1/3)) land within a few ulp, far inside this window.
BOUNDARY_EPS = 1e-12

DEFAULT_KISSING_TOL = 1e-9


class Regime(enum.Enum):
    """Branch of the minimum-norm formula the parameter falls in."""

    LOW = "low"    # 0 < A < 1/3
    MID = "mid"    # 1/3 <= A <= 1
    HIGH = "high"  # A > 1


@dataclass(frozen=True)
class AnisotropyParam:
    """Validated anisotropy ratio A together with its regime tag."""

    a: float
    regime: Regime

    @property
    def is_acc(self) -> bool:
        """True when A sits on the A = 1/3 boundary (within BOUNDARY_EPS)."""
        return abs(self.a - ONE_THIRD) <= BOUNDARY_EPS

    @property
    def is_fcc(self) -> bool:
        """True when A sits on the A = 1 boundary (within BOUNDARY_EPS)."""
        return abs(self.a - 1.0) <= BOUNDARY_EPS


@dataclass(frozen=True, eq=False)
class CuboidalLattice:
    """Normalized lattice data: basis rows, scale and Gram matrix."""

    param: AnisotropyParam
    v: float
    u: float
    basis: np.ndarray  # rows r1, r2, r3
    gram: np.ndarray   # 3x3, r_i . r_j


def classify(a: float) -> AnisotropyParam:
    """Validate A > 0 and attach its regime tag.

    Values within BOUNDARY_EPS of 1/3 or 1 are assigned to the closed middle
    regime, so that boundary lattices entered as floats (which can never hit
    the reals 1/3 exactly) take the boundary branch.
    """
    a = float(a)
    if not math.isfinite(a) or a <= 0.0:
        raise ValueError(f"anisotropy parameter A must be a finite positive real, got {a!r}")
    if abs(a - ONE_THIRD) <= BOUNDARY_EPS or abs(a - 1.0) <= BOUNDARY_EPS:
        regime = Regime.MID
    elif a < ONE_THIRD:
        regime = Regime.LOW
    elif a < 1.0:
        regime = Regime.MID
    else:
        regime = Regime.HIGH
    return AnisotropyParam(a, regime)


def minimum_norm_coefficient(param: AnisotropyParam) -> float:
    """Coefficient mu / v^2: the squared minimum distance at unit scale.

    Equals 4A below A = 1/3, A + 1 on the middle branch, and 2 above A = 1.
    Its reciprocal square root is the normalization scale, and it is the
    divisor of the normalized quadratic form.
    """
    if param.regime is Regime.LOW:
        return 4.0 * param.a
    if param.regime is Regime.MID:
        return param.a + 1.0
    return 2.0


def normalization_scale(param: AnisotropyParam) -> float:
    """Scale v that makes the minimum norm of the lattice equal to 1."""
    return 1.0 / math.sqrt(minimum_norm_coefficient(param))


def minimum_norm(param: AnisotropyParam, v: float) -> float:
    """Squared length of the shortest nonzero vector of the lattice at scale v."""
    if v <= 0.0:
        raise ValueError(f"scale v must be positive, got {v!r}")
    return minimum_norm_coefficient(param) * v * v


def base_quadratic_matrix(a: float) -> np.ndarray:
    """Gram matrix at unit scale: [[A+1, A, 1], [A, A+1, 1], [1, 1, 2]]."""
    return np.array([[a + 1.0, a, 1.0], [a, a + 1.0, 1.0], [1.0, 1.0, 2.0]])


def build_lattice(param: AnisotropyParam) -> CuboidalLattice:
    """Construct the normalized lattice: basis rows and Gram matrix."""
    v = normalization_scale(param)
    u = v * math.sqrt(param.a)
    basis = np.array([[u, v, 0.0], [u, 0.0, v], [0.0, v, v]])
    gram = (v * v) * base_quadratic_matrix(param.a)
    return CuboidalLattice(param=param, v=v, u=u, basis=basis, gram=gram)


def quadratic_form(param: AnisotropyParam, c) -> float:
    """Squared length of the normalized lattice vector with coordinates c.

    Evaluates (A (c1+c2)^2 + (c2+c3)^2 + (c1+c3)^2) / coeff, where coeff is
    the regime's minimum-norm coefficient, so the minimum over nonzero c is 1.
    """
    c1, c2, c3 = (float(x) for x in c)
    base = param.a * (c1 + c2) ** 2 + ((c2 + c3) ** 2 + (c1 + c3) ** 2)
    return base / minimum_norm_coefficient(param)


def gram_min_eigenvalue(param: AnisotropyParam) -> float:
    """Smallest eigenvalue of the normalized Gram matrix, in closed form.

    The unit-scale matrix has eigenvector (1, -1, 0) with eigenvalue 1, while
    the (1, 1, x) pair gives (2A + 3 +/- sqrt((2A-1)^2 + 8)) / 2.
    """
    a = param.a
    pair_min = 0.5 * (2.0 * a + 3.0 - math.sqrt((2.0 * a - 1.0) ** 2 + 8.0))
    return min(1.0, pair_min) / minimum_norm_coefficient(param)


def _integer_window(window: int) -> np.ndarray:
    rng = np.arange(-window, window + 1)
    pts = np.stack(np.meshgrid(rng, rng, rng, indexing="ij"), axis=-1).reshape(-1, 3)
    return pts[np.any(pts != 0, axis=1)]


def _window_form_values(param: AnisotropyParam, window: int) -> np.ndarray:
    pts = _integer_window(window).astype(float)
    s1 = pts[:, 0] + pts[:, 1]
    s2 = pts[:, 1] + pts[:, 2]
    s3 = pts[:, 0] + pts[:, 2]
    base = param.a * s1 * s1 + (s2 * s2 + s3 * s3)
    return base / minimum_norm_coefficient(param)


def enumerated_minimum(param: AnisotropyParam, v: float = 1.0, window: int = 2) -> float:
    """Minimum norm found by brute-force search over max|c_i| <= window.

    Cross-check for the closed-form minimum_norm; the window default of 2 is
    sufficient because the normalized form is bounded below by a multiple of
    |c|^2.
    """
    return float(np.min(_window_form_values(param, window))) * minimum_norm_coefficient(param) * v * v


def packing_density(param: AnisotropyParam) -> float:
    """Fraction of space filled by balls of the packing radius, for any scale."""
    a = param.a
    if param.regime is Regime.LOW:
        return 2.0 * math.pi * a / 3.0
    if param.regime is Regime.MID:
        return (math.pi / 12.0) * math.sqrt((a + 1.0) ** 3 / a)
    return (math.pi / 6.0) * math.sqrt(2.0 / a)


def density_derivative(param: AnisotropyParam) -> float:
    """d/dA of the packing density on the open middle branch 1/3 < A < 1.

    Vanishes at the body-centred cubic point A = 1/2, where the density has
    its interior local minimum.
    """
    if param.regime is not Regime.MID or param.is_acc or param.is_fcc:
        raise ValueError(
            f"density derivative formula applies to the interior 1/3 < A < 1 only, got A={param.a!r}"
        )
    a = param.a
    return (math.pi / 24.0) * math.sqrt((a + 1.0) / a**3) * (2.0 * a - 1.0)


def kissing_number(param: AnisotropyParam, tol: float = DEFAULT_KISSING_TOL, window: int = 3) -> int:
    """Number of lattice vectors achieving the minimum norm.

    Counts integer triples with 0 < max|c_i| <= window whose normalized
    squared length is within tol of 1.  Across the family this yields
    2 (A < 1/3), 10 (A = 1/3), 8 (1/3 < A < 1), 12 (A = 1) and 4 (A > 1);
    the boundary counts are triggered by the BOUNDARY_EPS window of classify.
    tol absorbs floating-point noise and must stay small against the spectral
    gap to the second shell, which closes near the regime boundaries.
    """
    if not tol > 0.0:
        raise ValueError(f"tolerance must be positive, got {tol!r}")
    values = _window_form_values(param, window)
    return int(np.count_nonzero(np.abs(values - 1.0) < tol))


def second_minimum_norm(param: AnisotropyParam, tol: float = DEFAULT_KISSING_TOL, window: int = 3) -> float:
    """Smallest normalized squared length strictly above the minimum shell."""
    values = np.sort(_window_form_values(param, window))
    above = values[values > values[0] + tol]
    return float(above[0])
