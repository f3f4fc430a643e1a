"""Truncated lattice sums: the family zeta function and its A-derivatives.

Every series here runs over the integer cube max(|i|,|j|,|k|) <= N with the
origin excluded.  The cube is processed as concentric shells m = 1..N; a shell
is enumerated over a fixed half (the (i,j,k) -> (-i,-j,-k) symmetry supplies
the other half exactly), reduced in a fixed deterministic order, and shell
sums are combined in increasing m with compensated accumulation.  Results are
therefore bitwise reproducible for a given spec, independent of the worker
count, which is read from the CUBOIDAL_WORKERS environment variable.

Each sum carries a rigorous truncation bound of the form C(A, s) * N^(3-2s),
obtained from an exact lower bound lambda * |c|^2 on the quadratic form in the
denominator plus an integral comparison over whole shells.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .lattice import AnisotropyParam, Regime, gram_min_eigenvalue, minimum_norm_coefficient

PLAIN = "plain"
COMPENSATED = "compensated"

MIN_CUTOFF = 4
MAX_CUTOFF = 2000
# A reported value whose truncation bound is worse than this fraction of the
# value itself is refused rather than silently returned.
REPORTING_GATE = 1e-3

WORKER_ENV = "CUBOIDAL_WORKERS"

_FSUM_LIMIT = 4096
_CHUNK = 1 << 16

# max over directions of |ij + ik - 2jk| / (i^2 + j^2 + k^2): the largest
# eigenvalue magnitude of the numerator form, (1 + sqrt(3)) / 2.
_NUM_BOUND = (1.0 + math.sqrt(3.0)) / 2.0

# Direction bound used by the second-derivative series at A = 1/2.  With t the
# component of c along (1,1,1) and w the orthogonal part, the denominator is
# (t^2 + 4 w^2) / 3 exactly and the numerator satisfies
# num^2 <= 4 t^2 w^2 + 2 B^2 w^4 (B = _NUM_BOUND, numerator form vanishes on
# the axis).  Maximizing (4x + 2B^2) / (x + 4)^2 over x = t^2/w^2 >= 0 gives
# the constant below, so num^2 / q^(s+2) <= _BCC_DIR_BOUND * 3^(s+2) / |c|^(2s).
_B2 = 2.0 * _NUM_BOUND * _NUM_BOUND
_TAU = 4.0 - _B2 / 2.0
_BCC_DIR_BOUND = (4.0 * _TAU + _B2) / (_TAU + 4.0) ** 2

_TWO_THIRDS = 2.0 / 3.0


class DivergenceError(ValueError):
    """The requested exponent is outside the convergence region of the series."""


class UnattainableToleranceError(RuntimeError):
    """No admissible cutoff achieves the requested truncation quality."""


@dataclass(frozen=True)
class SumSpec:
    """How to truncate a lattice sum.

    Exactly one of cutoff (explicit N) and target_tol (absolute truncation
    budget, from which N is derived by inverting the tail bound) drives the
    summation.  Accumulation selects the reduction: compensated (default) or
    plain, the latter kept for benchmarking.
    """

    cutoff: int | None = None
    target_tol: float | None = None
    accumulation: str = COMPENSATED

    def __post_init__(self):
        if (self.cutoff is None) == (self.target_tol is None):
            raise ValueError("exactly one of cutoff and target_tol must be given")
        if self.cutoff is not None:
            if int(self.cutoff) != self.cutoff or self.cutoff < MIN_CUTOFF:
                raise ValueError(f"cutoff must be an integer >= {MIN_CUTOFF}, got {self.cutoff!r}")
        if self.target_tol is not None:
            if not (math.isfinite(self.target_tol) and self.target_tol > 0.0):
                raise ValueError(f"target_tol must be a positive real, got {self.target_tol!r}")
        if self.accumulation not in (PLAIN, COMPENSATED):
            raise ValueError(f"accumulation must be {PLAIN!r} or {COMPENSATED!r}")


@dataclass(frozen=True)
class ZetaValue:
    """A truncated sum with its rigorous truncation bound and cutoff metadata."""

    value: float
    tail_bound: float
    cutoff_used: int
    term_count: int


def _check_exponent(s: float) -> float:
    s = float(s)
    if not math.isfinite(s):
        raise DivergenceError(f"exponent s must be finite, got {s!r}")
    if s <= 1.5:
        raise DivergenceError(f"the series converges for s > 3/2 only, got s={s!r}")
    return s


def _require_mid(param: AnisotropyParam, what: str) -> None:
    if param.regime is not Regime.MID:
        raise ValueError(f"{what} requires 1/3 <= A <= 1, got A={param.a!r}")


# ---------------------------------------------------------------------------
# tail bounds
# ---------------------------------------------------------------------------

def transformed_min_eigenvalue(a: float) -> float:
    """Smallest eigenvalue of the change-of-variables quadratic form.

    The form i^2+j^2+k^2 - 2(ij+ik) A/(A+1) + 2jk (A-1)/(A+1) has eigenvector
    (0, 1, -1) with eigenvalue 2/(A+1); the (x, 1, 1) pair supplies the rest.
    """
    ca = a / (a + 1.0)
    cb = (a - 1.0) / (a + 1.0)
    pair_min = 1.0 + 0.5 * cb - 0.5 * math.sqrt(cb * cb + 8.0 * ca * ca)
    return min(1.0 - cb, pair_min)


def _shell_decay(s: float, n: int) -> float:
    # sum over shells m > n of (24 m^2 + 2) * m^(-2s), bounded by comparison
    # with the integrals of x^(2-2s) and x^(-2s).
    return (24.0 / (2.0 * s - 3.0) + 2.0 / (2.0 * s - 1.0)) * float(n) ** (3.0 - 2.0 * s)


def tail_bound(param: AnisotropyParam, s: float, n: int) -> float:
    """Upper bound on the discarded part of the direct sum beyond cutoff n."""
    s = _check_exponent(s)
    if n < MIN_CUTOFF:
        raise ValueError(f"cutoff must be >= {MIN_CUTOFF}, got {n!r}")
    return gram_min_eigenvalue(param) ** (-s) * _shell_decay(s, n)


def _transformed_tail(param: AnisotropyParam, s: float, n: int) -> float:
    return transformed_min_eigenvalue(param.a) ** (-s) * _shell_decay(s, n)


def _d1_tail(param: AnisotropyParam, s: float, n: int) -> float:
    a = param.a
    lam = transformed_min_eigenvalue(a)
    pref = 2.0 * s / (a + 1.0) ** 2
    return pref * _NUM_BOUND * lam ** (-(s + 1.0)) * _shell_decay(s, n)


def _d2_tail(param: AnisotropyParam, s: float, n: int) -> float:
    a = param.a
    lam = transformed_min_eigenvalue(a)
    decay = _shell_decay(s, n)
    t1 = 4.0 * s / (a + 1.0) ** 3 * _NUM_BOUND * lam ** (-(s + 1.0))
    t2 = 4.0 * s * (s + 1.0) / (a + 1.0) ** 4 * _NUM_BOUND**2 * lam ** (-(s + 2.0))
    return (t1 + t2) * decay


def _bcc_d2_tail(s: float, n: int) -> float:
    pref = 64.0 * s * (s + 1.0) / 81.0
    return pref * _BCC_DIR_BOUND * 3.0 ** (s + 2.0) * _shell_decay(s, n)


def _cutoff_for_tolerance(unit_const: float, s: float, tol: float) -> int:
    """Smallest admissible N with unit_const * N^(3-2s) <= tol."""
    if unit_const <= tol:
        return MIN_CUTOFF
    n = max(MIN_CUTOFF, math.ceil((unit_const / tol) ** (1.0 / (2.0 * s - 3.0))))
    if n > MAX_CUTOFF:
        raise UnattainableToleranceError(
            f"tolerance {tol:g} needs cutoff {n} > {MAX_CUTOFF}; "
            f"direct summation cannot reach it for s={s:g}"
        )
    return n


def _resolve_cutoff(spec: SumSpec, s: float, unit_const: float) -> int:
    if spec.cutoff is not None:
        return int(spec.cutoff)
    return _cutoff_for_tolerance(unit_const, s, spec.target_tol)


# ---------------------------------------------------------------------------
# deterministic shell reduction
# ---------------------------------------------------------------------------

def _worker_count() -> int:
    raw = os.environ.get(WORKER_ENV)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"{WORKER_ENV} must be an integer, got {raw!r}") from exc
    return max(1, n)


def _neumaier(total: float, comp: float, x: float) -> tuple[float, float]:
    t = total + x
    if abs(total) >= abs(x):
        comp += (total - t) + x
    else:
        comp += (x - t) + total
    return t, comp


def _fixed_order_sum(arr: np.ndarray) -> float:
    """Deterministic compensated reduction of a 1-D array.

    Small arrays are summed exactly (fsum); larger ones are reduced pairwise
    per fixed-size chunk with compensated combination of the chunk sums.  The
    exact path matters for the lowest shells, where terms of order one sit
    next to terms near machine epsilon.
    """
    if arr.size <= _FSUM_LIMIT:
        return math.fsum(arr)
    total = 0.0
    comp = 0.0
    for off in range(0, arr.size, _CHUNK):
        total, comp = _neumaier(total, comp, float(np.sum(arr[off : off + _CHUNK])))
    return total + comp


def _half_shell(m: int) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Representatives of the +/- pairs on the cube shell max|c| = m.

    Fixed enumeration order: the i = 0 half-ring, full rings for 0 < i < m,
    then the full i = m face.  Negation supplies the remaining 12 m^2 + 1
    points of the 24 m^2 + 2 point shell.
    """
    fm = float(m)
    side = np.arange(-m, m + 1, dtype=np.float64)
    n = side.size
    blocks = []
    # i = 0: (j, k) with max(|j|,|k|) = m, keeping one of each +/- pair
    j0 = [np.full(n, -fm)]
    k0 = [side]
    if m >= 2:
        j0.append(np.repeat(np.arange(-m + 1, 0, dtype=np.float64), 2))
        k0.append(np.tile(np.array([-fm, fm]), m - 1))
    j0.append(np.array([0.0]))
    k0.append(np.array([-fm]))
    jh = np.concatenate(j0)
    blocks.append((np.zeros(jh.size), jh, np.concatenate(k0)))
    # 0 < i < m: the full square ring per i
    if m >= 2:
        jr = np.concatenate([np.full(n, -fm), np.repeat(np.arange(-m + 1, m, dtype=np.float64), 2), np.full(n, fm)])
        kr = np.concatenate([side, np.tile(np.array([-fm, fm]), 2 * m - 1), side])
        imid = np.arange(1, m, dtype=np.float64)
        blocks.append((np.repeat(imid, jr.size), np.tile(jr, m - 1), np.tile(kr, m - 1)))
    # i = m: the full face
    blocks.append((np.full(n * n, fm), np.repeat(side, n), np.tile(side, n)))
    return blocks


def _ipow(x: np.ndarray, n: int) -> np.ndarray:
    """x**n elementwise for integer n >= 1 by squaring; consumes x as scratch."""
    if n == 1:
        return x
    r = None
    while n > 1:
        if n & 1:
            r = x.copy() if r is None else np.multiply(r, x, out=r)
        np.multiply(x, x, out=x)
        n >>= 1
    return x if r is None else np.multiply(r, x, out=r)


def _pow_consume(x: np.ndarray, s: float) -> np.ndarray:
    if float(s).is_integer() and 1 <= s <= 512:
        return _ipow(x, int(s))
    return np.power(x, s, out=x)


def _sum_shells(kernel, ncomp: int, n: int, accumulation: str):
    """Reduce kernel components over the cube of cutoff n, shells in order.

    kernel maps coordinate arrays (i, j, k) to ncomp term arrays.  Returns the
    per-component totals and the number of summed lattice points.
    """

    def shell(m: int) -> tuple[float, ...]:
        parts = [[] for _ in range(ncomp)]
        for i, j, k in _half_shell(m):
            out = kernel(i, j, k)
            for c in range(ncomp):
                parts[c].append(out[c])
        # the factor 2 restores the -c half of the shell exactly
        return tuple(2.0 * _fixed_order_sum(np.concatenate(p)) for p in parts)

    workers = _worker_count()
    if workers > 1 and n >= 8:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {m: pool.submit(shell, m) for m in range(1, n + 1)}
            results = [futures[m].result() for m in range(1, n + 1)]
    else:
        results = [shell(m) for m in range(1, n + 1)]

    totals = [0.0] * ncomp
    comps = [0.0] * ncomp
    for res in results:  # increasing m, fixed combination order
        for c in range(ncomp):
            if accumulation == COMPENSATED:
                totals[c], comps[c] = _neumaier(totals[c], comps[c], res[c])
            else:
                totals[c] += res[c]
    sums = tuple(totals[c] + comps[c] for c in range(ncomp))
    return sums, (2 * n + 1) ** 3 - 1


# ---------------------------------------------------------------------------
# term kernels
# ---------------------------------------------------------------------------

def direct_term_kernel(a: float, divisor: float, s: float):
    """Terms (divisor / (A (i+j)^2 + (j+k)^2 + (i+k)^2))^s.

    The base is assembled so that exchanging the roles of i and j produces
    bitwise-identical terms (the two squared sums commute).
    """

    def terms(i, j, k):
        s1 = i + j
        np.multiply(s1, s1, out=s1)
        s1 *= a
        s2 = j + k
        np.multiply(s2, s2, out=s2)
        s3 = i + k
        np.multiply(s3, s3, out=s3)
        s2 += s3
        s1 += s2
        np.divide(divisor, s1, out=s1)
        return (_pow_consume(s1, s),)

    return terms


def _transformed_denominator(a: float):
    ca2 = 2.0 * a / (a + 1.0)
    cb2 = 2.0 * (a - 1.0) / (a + 1.0)

    def den_of(i, j, k):
        den = i * i
        den += j * j
        den += k * k
        t = j + k
        t *= i
        t *= ca2
        den -= t
        w = j * k
        w *= cb2
        den += w
        return den

    return den_of


def _first_numerator(i, j, k):
    # ij + ik - 2jk, exact in float64 for the coordinate ranges used here
    num = j + k
    num *= i
    w = j * k
    w *= 2.0
    num -= w
    return num


def transformed_term_kernel(a: float, s: float):
    """Terms of the change-of-variables form of the same sum."""
    den_of = _transformed_denominator(a)

    def terms(i, j, k):
        den = den_of(i, j, k)
        np.divide(1.0, den, out=den)
        return (_pow_consume(den, s),)

    return terms


def d1_term_kernel(a: float, s: float):
    """Terms (ij + ik - 2jk) / den^(s+1) of the first-derivative series."""
    den_of = _transformed_denominator(a)

    def terms(i, j, k):
        den = den_of(i, j, k)
        num = _first_numerator(i, j, k)
        np.divide(1.0, den, out=den)
        p = _pow_consume(den, s + 1.0)
        np.multiply(num, p, out=num)
        return (num,)

    return terms


def d2_term_kernel(a: float, s: float):
    """Both second-derivative component series in one pass."""
    den_of = _transformed_denominator(a)

    def terms(i, j, k):
        den = den_of(i, j, k)
        num = _first_numerator(i, j, k)
        r = 1.0 / den
        p = _pow_consume(r, s + 1.0)
        c1 = num * p
        c2 = c1 * num
        c2 /= den
        return (c1, c2)

    return terms


def bcc_symmetrized_kernel(s: float):
    """Pointwise average of the three index-swapped first-derivative summands.

    The three numerators add to zero exactly (integer arithmetic in float64),
    so every term vanishes identically regardless of the cutoff.
    """

    def terms(i, j, k):
        ij = i * j
        ik = i * k
        jk = j * k
        num = ij + ik
        num -= 2.0 * jk
        num += (ij + jk) - 2.0 * ik
        num += (jk + ik) - 2.0 * ij
        den = i * i
        den += j * j
        den += k * k
        e = ij + ik
        e += jk
        e *= _TWO_THIRDS
        den -= e
        np.divide(1.0, den, out=den)
        p = _pow_consume(den, s + 1.0)
        p *= num
        p /= 3.0
        return (p,)

    return terms


def bcc_d2_term_kernel(s: float):
    """Terms (jk + ik - 2ij)^2 / q^(s+2) of the A = 1/2 curvature series."""

    def terms(i, j, k):
        ij = i * j
        ik = i * k
        jk = j * k
        num = jk + ik
        num -= 2.0 * ij
        np.multiply(num, num, out=num)
        den = i * i
        den += j * j
        den += k * k
        e = ij + ik
        e += jk
        e *= _TWO_THIRDS
        den -= e
        np.divide(1.0, den, out=den)
        p = _pow_consume(den, s + 2.0)
        np.multiply(num, p, out=num)
        return (num,)

    return terms


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def epstein_zeta(param: AnisotropyParam, s: float, spec: SumSpec, *, check_tail: bool = True) -> ZetaValue:
    """Direct truncated evaluation of the family zeta function at (A, s).

    Works in every regime through the normalized quadratic form.  With
    check_tail (default) the result is refused when its truncation bound
    exceeds REPORTING_GATE relative to the value; passing check_tail=False
    yields the raw fixed-cutoff sum, which is what difference-based
    diagnostics need when s sits close to the convergence edge.
    """
    s = _check_exponent(s)
    unit = gram_min_eigenvalue(param) ** (-s) * _shell_decay(s, 1)
    n = _resolve_cutoff(spec, s, unit)
    kern = direct_term_kernel(param.a, minimum_norm_coefficient(param), s)
    (value,), count = _sum_shells(kern, 1, n, spec.accumulation)
    bound = tail_bound(param, s, n)
    if check_tail and not bound < abs(value) * REPORTING_GATE:
        raise UnattainableToleranceError(
            f"truncation bound {bound:.3g} exceeds the reporting gate "
            f"{REPORTING_GATE:g} relative to the value {value:.6g} (cutoff {n})"
        )
    return ZetaValue(value, bound, n, count)


def epstein_zeta_transformed(param: AnisotropyParam, s: float, spec: SumSpec, *, check_tail: bool = True) -> ZetaValue:
    """Same sum after the unimodular change of variables; consistency oracle.

    Converges to the identical limit as epstein_zeta, so the two results must
    agree within the sum of their truncation bounds.
    """
    s = _check_exponent(s)
    _require_mid(param, "the transformed sum")
    unit = transformed_min_eigenvalue(param.a) ** (-s) * _shell_decay(s, 1)
    n = _resolve_cutoff(spec, s, unit)
    (value,), count = _sum_shells(transformed_term_kernel(param.a, s), 1, n, spec.accumulation)
    bound = _transformed_tail(param, s, n)
    if check_tail and not bound < abs(value) * REPORTING_GATE:
        raise UnattainableToleranceError(
            f"truncation bound {bound:.3g} exceeds the reporting gate for the transformed sum (cutoff {n})"
        )
    return ZetaValue(value, bound, n, count)


def first_derivative(param: AnisotropyParam, s: float, spec: SumSpec) -> ZetaValue:
    """Analytic d/dA of the zeta function on the middle branch.

    The tail bound is on absolute error; no value-relative gate applies since
    the derivative vanishes at A = 1/2.  Tolerance-driven specs guarantee
    tail_bound <= target_tol.
    """
    s = _check_exponent(s)
    _require_mid(param, "the derivative series")
    a = param.a
    unit = _d1_tail(param, s, 1)
    n = _resolve_cutoff(spec, s, unit)
    (core,), count = _sum_shells(d1_term_kernel(a, s), 1, n, spec.accumulation)
    value = (2.0 * s / (a + 1.0) ** 2) * core
    return ZetaValue(value, _d1_tail(param, s, n), n, count)


def second_derivative(param: AnisotropyParam, s: float, spec: SumSpec) -> ZetaValue:
    """Analytic d^2/dA^2 of the zeta function on the middle branch."""
    s = _check_exponent(s)
    _require_mid(param, "the derivative series")
    a = param.a
    unit = _d2_tail(param, s, 1)
    n = _resolve_cutoff(spec, s, unit)
    (c1, c2), count = _sum_shells(d2_term_kernel(a, s), 2, n, spec.accumulation)
    value = -4.0 * s / (a + 1.0) ** 3 * c1 + 4.0 * s * (s + 1.0) / (a + 1.0) ** 4 * c2
    return ZetaValue(value, _d2_tail(param, s, n), n, count)


def first_derivative_at_bcc_symmetrized(s: float, spec: SumSpec) -> float:
    """d/dA at A = 1/2 via the average of the three index-swapped series.

    Pointwise cancellation makes this zero up to rounding at any cutoff; the
    returned float is the direct evidence for the stationary point.
    """
    s = _check_exponent(s)
    unit = _d1_tail_at_bcc_unit(s)
    n = _resolve_cutoff(spec, s, unit)
    (core,), _ = _sum_shells(bcc_symmetrized_kernel(s), 1, n, spec.accumulation)
    return (8.0 * s / 9.0) * core


def _d1_tail_at_bcc_unit(s: float) -> float:
    # unit constant of the first-derivative tail at A = 1/2 (lambda = 1/3)
    return 2.0 * s / 2.25 * _NUM_BOUND * 3.0 ** (s + 1.0) * _shell_decay(s, 1)


def second_derivative_at_bcc(s: float, spec: SumSpec) -> ZetaValue:
    """d^2/dA^2 at A = 1/2 as the single series of non-negative terms.

    Every retained term is >= 0, so partial sums increase with the cutoff and
    positivity of the limit follows from value - tail_bound > 0.
    """
    s = _check_exponent(s)
    unit = _bcc_d2_tail(s, 1)
    n = _resolve_cutoff(spec, s, unit)
    (core,), count = _sum_shells(bcc_d2_term_kernel(s), 1, n, spec.accumulation)
    value = (64.0 * s * (s + 1.0) / 81.0) * core
    return ZetaValue(value, _bcc_d2_tail(s, n), n, count)
