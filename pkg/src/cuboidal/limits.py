"""Degenerate ends of the family: A -> infinity, A -> 0 and s -> infinity.

Past A = 1 the normalized lattice flattens: coordinates with c1 + c2 != 0
blow up with A and the surviving sublattice is a square lattice of unit
minimum distance, so the zeta values converge to the two-dimensional square
lattice sum.  Below A = 1/3 the surviving sublattice is a unit one-dimensional
chain.  For s -> infinity the zeta value collapses onto the kissing number,
since every shell above the minimum is suppressed geometrically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import (
    Regime,
    classify,
    kissing_number,
    normalization_scale,
    second_minimum_norm,
)
from .zeta import (
    COMPENSATED,
    MAX_CUTOFF,
    MIN_CUTOFF,
    REPORTING_GATE,
    DivergenceError,
    SumSpec,
    UnattainableToleranceError,
    ZetaValue,
    _check_exponent,
    _fixed_order_sum,
    _neumaier,
    epstein_zeta,
)

SQRT_HALF = 1.0 / math.sqrt(2.0)

A_TO_INF = "a_to_inf"
A_TO_ZERO = "a_to_zero"
S_TO_INF = "s_to_inf"

# The A -> infinity deviation is dominated by the slab of lattice points with
# i + j = +/-1, a two-dimensional family whose aggregate contribution is
# asymptotically 2^s * (pi / (s-1)) * A^(1-s) (integral over the slab); the
# threshold applies a factor-4 slack to that estimate.
_INF_THRESHOLD_SLACK = 4.0
# Slack multiplier on the next-shell estimate for the s -> infinity deviation.
_KISS_SLACK = 100.0


@dataclass
class LimitReport:
    """Outcome of one degeneration probe sequence."""

    direction: str
    probes: tuple
    deviations: tuple
    threshold: float
    converged: bool
    reference: float | None = None
    kissing: int | None = None


def finite_sublattice_vectors(a: float, window: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Vectors of the A > 1 normalized lattice that stay finite as A grows.

    These are c1 (0, r, -r) + c3 (0, r, r) with r = 1/sqrt(2); the map to the
    integer pair (c1, c3) preserves all distances.  Returns the integer pairs
    over |c1|, |c3| <= window and the corresponding 3-vectors, row for row.
    """
    if not a > 1.0:
        raise ValueError(f"the finite sublattice construction needs A > 1, got {a!r}")
    rng = np.arange(-window, window + 1)
    coeffs = np.stack(np.meshgrid(rng, rng, indexing="ij"), axis=-1).reshape(-1, 2)
    e1 = np.array([0.0, SQRT_HALF, -SQRT_HALF])
    e3 = np.array([0.0, SQRT_HALF, SQRT_HALF])
    vectors = coeffs[:, :1] * e1 + coeffs[:, 1:] * e3
    return coeffs, vectors


def collapsed_axis_vectors(a: float, window: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Vectors of the A < 1/3 normalized lattice that stay finite as A -> 0.

    Only multiples of (2u, 0, 0) survive, and 2u = 1 under the normalization,
    so the limit is the unit integer chain.
    """
    param = classify(a)
    if param.regime is not Regime.LOW:
        raise ValueError(f"the axis collapse needs 0 < A < 1/3, got {a!r}")
    u = normalization_scale(param) * math.sqrt(a)
    coeffs = np.arange(-window, window + 1)
    vectors = np.zeros((coeffs.size, 3))
    vectors[:, 0] = 2.0 * u * coeffs
    return coeffs, vectors


def _square_tail(s: float, n: int) -> float:
    # shells of the square ring carry 8m points at squared radius >= m^2
    return 4.0 / (s - 1.0) * float(n) ** (2.0 - 2.0 * s)


def square_lattice_zeta(s: float, spec: SumSpec, *, check_tail: bool = True) -> ZetaValue:
    """Sum of (m^2 + n^2)^(-s) over nonzero integer pairs.

    Oracle for the A -> infinity limit.  Converges for s > 1; same shell
    discipline and reporting gate as the three-dimensional sums.
    """
    s = float(s)
    if not math.isfinite(s) or s <= 1.0:
        raise DivergenceError(f"the square lattice sum converges for s > 1 only, got s={s!r}")
    if spec.cutoff is not None:
        n = int(spec.cutoff)
    else:
        unit = _square_tail(s, 1)
        if unit <= spec.target_tol:
            n = MIN_CUTOFF
        else:
            n = max(MIN_CUTOFF, math.ceil((unit / spec.target_tol) ** (1.0 / (2.0 * s - 2.0))))
            if n > MAX_CUTOFF:
                raise UnattainableToleranceError(
                    f"tolerance {spec.target_tol:g} needs cutoff {n} > {MAX_CUTOFF} for the square lattice sum"
                )
    total = 0.0
    comp = 0.0
    for m in range(1, n + 1):
        fm = float(m)
        side = np.arange(-m, m + 1, dtype=np.float64)
        p = np.concatenate([np.full(side.size, -fm), np.repeat(np.arange(-m + 1, m, dtype=np.float64), 2), np.full(side.size, fm)])
        q = np.concatenate([side, np.tile(np.array([-fm, fm]), 2 * m - 1), side])
        terms = p * p
        terms += q * q
        np.divide(1.0, terms, out=terms)
        if float(s).is_integer():
            terms = terms ** int(s)
        else:
            terms = terms**s
        ring = _fixed_order_sum(terms)
        if spec.accumulation == COMPENSATED:
            total, comp = _neumaier(total, comp, ring)
        else:
            total += ring
    value = total + comp
    bound = _square_tail(s, n)
    if check_tail and not bound < abs(value) * REPORTING_GATE:
        raise UnattainableToleranceError(
            f"truncation bound {bound:.3g} exceeds the reporting gate for the square lattice sum (cutoff {n})"
        )
    return ZetaValue(value, bound, n, (2 * n + 1) ** 2 - 1)


def verify_A_to_inf(s: float, probes=(4.0, 16.0, 64.0)) -> LimitReport:
    """Compare high-A zeta values against the square lattice sum.

    Deviations must decrease strictly along the probes and the last one must
    fall below the recorded threshold, a slacked version of the slab
    asymptotic 2^s * (pi / (s-1)) * A_max^(1-s).
    """
    s = _check_exponent(s)
    probes = tuple(float(p) for p in probes)
    if len(probes) < 2 or any(p <= 1.0 for p in probes) or any(b <= a for a, b in zip(probes, probes[1:])):
        raise ValueError(f"probes must be strictly increasing values > 1, got {probes!r}")
    threshold = _INF_THRESHOLD_SLACK * 2.0**s * math.pi / (s - 1.0) * probes[-1] ** (1.0 - s)
    tol = threshold / 50.0
    spec = SumSpec(target_tol=tol)
    reference = square_lattice_zeta(s, spec)
    deviations = tuple(abs(epstein_zeta(classify(p), s, spec).value - reference.value) for p in probes)
    decreasing = all(b < a for a, b in zip(deviations, deviations[1:]))
    return LimitReport(
        direction=A_TO_INF,
        probes=probes,
        deviations=deviations,
        threshold=threshold,
        converged=decreasing and deviations[-1] < threshold,
        reference=reference.value,
    )


def verify_A_to_zero(a: float = 0.1, window: int = 3) -> LimitReport:
    """Distance check of the A < 1/3 finite sublattice against the unit chain."""
    coeffs, vectors = collapsed_axis_vectors(a, window)
    diffs = vectors[:, None, :] - vectors[None, :, :]
    dist = np.sqrt(np.sum(diffs * diffs, axis=-1))
    ref = np.abs(coeffs[:, None] - coeffs[None, :]).astype(float)
    deviation = float(np.max(np.abs(dist - ref)))
    return LimitReport(
        direction=A_TO_ZERO,
        probes=(float(a),),
        deviations=(deviation,),
        threshold=1e-13,
        converged=deviation <= 1e-13,
    )


def verify_s_to_inf(a: float, s_probes=(10.0, 20.0, 50.0)) -> LimitReport:
    """Check that zeta values collapse onto the kissing number as s grows.

    The deviation L(A;s) - kiss(A) is a sum of positive terms, the lightest
    of which sits on the second shell, so the final deviation must fall below
    second_norm^(-s_max) times a fixed slack factor.
    """
    param = classify(a)
    if param.regime is not Regime.MID or param.is_acc:
        raise ValueError(f"the kissing-number limit check needs 1/3 < A <= 1, got {a!r}")
    s_probes = tuple(float(s) for s in s_probes)
    if len(s_probes) < 2 or any(b <= x for x, b in zip(s_probes, s_probes[1:])):
        raise ValueError(f"s probes must be strictly increasing, got {s_probes!r}")
    for s in s_probes:
        _check_exponent(s)
    kiss = kissing_number(param)
    second = second_minimum_norm(param)
    threshold = _KISS_SLACK * second ** (-s_probes[-1])
    deviations = []
    for s in s_probes:
        tol = second ** (-s) / 100.0
        value = epstein_zeta(param, s, SumSpec(target_tol=tol)).value
        deviations.append(value - kiss)
    deviations = tuple(deviations)
    decreasing = all(b < x for x, b in zip(deviations, deviations[1:]))
    positive = all(d > 0.0 for d in deviations)
    return LimitReport(
        direction=S_TO_INF,
        probes=s_probes,
        deviations=deviations,
        threshold=threshold,
        converged=decreasing and positive and deviations[-1] < threshold,
        kissing=kiss,
    )
