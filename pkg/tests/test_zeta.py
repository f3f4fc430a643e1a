import math

import numpy as np
import pytest

from cuboidal.lattice import classify, kissing_number, minimum_norm_coefficient, second_minimum_norm
from cuboidal.zeta import (
    COMPENSATED,
    PLAIN,
    WORKER_ENV,
    DivergenceError,
    SumSpec,
    UnattainableToleranceError,
    _half_shell,
    direct_term_kernel,
    epstein_zeta,
    epstein_zeta_transformed,
    first_derivative,
    first_derivative_at_bcc_symmetrized,
    second_derivative,
    second_derivative_at_bcc,
    tail_bound,
    transformed_min_eigenvalue,
)

# High-precision reference values for spot checks of the direct summation.
REFERENCE = {
    (1.0, 6.0): 12.131880196544579717,
    (0.5, 6.0): 9.11418326807535893,
    (1.0, 3.0): 14.453921043744471864,
    (0.5, 3.0): 12.253667867292322831,
    (0.5, 20.0): 8.0190273087,
}


def _fixed(a, s, n, accumulation=COMPENSATED):
    return epstein_zeta(classify(a), s, SumSpec(cutoff=n, accumulation=accumulation), check_tail=False)


class TestSumSpec:
    def test_exactly_one_driver(self):
        with pytest.raises(ValueError):
            SumSpec()
        with pytest.raises(ValueError):
            SumSpec(cutoff=10, target_tol=1e-6)

    def test_cutoff_floor(self):
        with pytest.raises(ValueError):
            SumSpec(cutoff=3)
        SumSpec(cutoff=4)

    def test_tol_positive(self):
        with pytest.raises(ValueError):
            SumSpec(target_tol=0.0)
        with pytest.raises(ValueError):
            SumSpec(target_tol=-1e-9)

    def test_accumulation_tag(self):
        with pytest.raises(ValueError):
            SumSpec(cutoff=10, accumulation="fancy")


class TestPreconditions:
    def test_divergent_exponent(self):
        with pytest.raises(DivergenceError):
            epstein_zeta(classify(0.5), 1.5, SumSpec(cutoff=10))
        with pytest.raises(DivergenceError):
            epstein_zeta(classify(0.5), 1.2, SumSpec(target_tol=1e-6))

    def test_cap_exceeded(self):
        with pytest.raises(UnattainableToleranceError):
            epstein_zeta(classify(0.5), 2.0, SumSpec(target_tol=1e-9))

    def test_reporting_gate(self):
        # at s=2 the rigorous bound at any feasible cutoff exceeds the gate
        with pytest.raises(UnattainableToleranceError):
            epstein_zeta(classify(0.5), 2.0, SumSpec(cutoff=100))
        z = _fixed(0.5, 2.0, 100)
        assert z.value > 0 and z.tail_bound > 0

    def test_mid_only_series(self):
        for fn in (epstein_zeta_transformed, first_derivative, second_derivative):
            with pytest.raises(ValueError):
                fn(classify(2.0), 6.0, SumSpec(cutoff=10))


class TestDirectSum:
    @pytest.mark.parametrize("a,s", [(1.0, 6.0), (0.5, 6.0)])
    def test_reference_values_s6(self, a, s):
        z = epstein_zeta(classify(a), s, SumSpec(target_tol=1e-9))
        assert z.value == pytest.approx(REFERENCE[(a, s)], rel=1e-9)
        assert z.tail_bound <= 1e-9

    def test_reference_value_s20(self):
        z = epstein_zeta(classify(0.5), 20.0, SumSpec(target_tol=8e-8))
        assert z.value == pytest.approx(REFERENCE[(0.5, 20.0)], rel=1e-8)

    def test_fcc_s20_near_kissing(self):
        z = epstein_zeta(classify(1.0), 20.0, SumSpec(target_tol=1e-9))
        assert z.value == pytest.approx(12.0000057289405, abs=1e-6)

    def test_metadata(self):
        z = _fixed(0.5, 6.0, 12)
        assert z.cutoff_used == 12
        assert z.term_count == 25**3 - 1

    def test_low_and_high_regimes(self):
        # generic Gram route: values approach the kissing numbers for large s
        z_low = epstein_zeta(classify(0.2), 40.0, SumSpec(target_tol=1e-8))
        assert z_low.value == pytest.approx(2.0, abs=1e-3)
        z_high = epstein_zeta(classify(4.0), 40.0, SumSpec(target_tol=1e-8))
        assert z_high.value == pytest.approx(4.0, abs=1e-3)

    def test_kissing_number_limit(self):
        # second-shell suppression controls the gap at large s; at A = 1/2 the
        # gap (4/3)^(-50) is comfortably below 1e-3, near the A = 0.4 and 0.75
        # ends of the table the second shell sits at 8/7 and the gap is a few
        # times 1e-3.
        for a in (0.4, 0.5, 0.75):
            param = classify(a)
            z = epstein_zeta(param, 50.0, SumSpec(target_tol=1e-10))
            gap = z.value - kissing_number(param)
            assert 0.0 < gap <= 100.0 * second_minimum_norm(param) ** -50.0
        z = epstein_zeta(classify(0.5), 50.0, SumSpec(target_tol=1e-10))
        assert abs(z.value - 8.0) < 1e-3


class TestTailBound:
    def test_monotone_in_cutoff(self):
        param = classify(0.5)
        bounds = [tail_bound(param, 3.0, n) for n in (50, 100, 200, 400)]
        assert all(b < a for a, b in zip(bounds, bounds[1:]))

    def test_soundness_two_cutoffs(self):
        z1 = _fixed(0.5, 3.0, 50)
        z2 = _fixed(0.5, 3.0, 100)
        assert abs(z1.value - z2.value) <= tail_bound(classify(0.5), 3.0, 50)

    def test_soundness_fcc_s6(self):
        z1 = _fixed(1.0, 6.0, 30)
        z2 = _fixed(1.0, 6.0, 60)
        assert abs(z1.value - z2.value) <= 1e-9
        assert abs(z1.value - z2.value) <= tail_bound(classify(1.0), 6.0, 30)

    def test_validation(self):
        with pytest.raises(ValueError):
            tail_bound(classify(0.5), 3.0, 2)
        with pytest.raises(DivergenceError):
            tail_bound(classify(0.5), 1.4, 50)


class TestExchangeSymmetry:
    def test_terms_bitwise_under_ij_swap(self):
        a = 0.7654321
        kern = direct_term_kernel(a, minimum_norm_coefficient(classify(a)), 3.0)
        for m in (1, 2, 5, 9):
            for i, j, k in _half_shell(m):
                t_direct = kern(i.copy(), j.copy(), k.copy())[0]
                t_swapped = kern(j.copy(), i.copy(), k.copy())[0]
                np.testing.assert_array_equal(t_direct, t_swapped)

    def test_sum_bitwise_under_ij_swap(self):
        # pointwise bitwise-equal terms in identical reduction order imply an
        # identical total; run both role assignments through the reduction
        from cuboidal.zeta import _sum_shells

        a, s = 0.61, 4.0
        kern = direct_term_kernel(a, minimum_norm_coefficient(classify(a)), s)

        def swapped(i, j, k):
            return kern(j, i, k)

        (v1,), _ = _sum_shells(kern, 1, 20, COMPENSATED)
        (v2,), _ = _sum_shells(swapped, 1, 20, COMPENSATED)
        assert v1 == v2


class TestTransformedSum:
    def test_agrees_with_direct(self):
        for a, s, tol in [(0.5, 6.0, 1e-8), (2.0 / 3.0, 4.0, 1e-9), (1.0, 3.0, 1e-4)]:
            d = epstein_zeta(classify(a), s, SumSpec(target_tol=tol))
            t = epstein_zeta_transformed(classify(a), s, SumSpec(target_tol=tol))
            assert abs(d.value - t.value) <= d.tail_bound + t.tail_bound

    def test_reference_value(self):
        z = epstein_zeta_transformed(classify(1.0), 3.0, SumSpec(target_tol=1e-4))
        assert z.value == pytest.approx(REFERENCE[(1.0, 3.0)], abs=2e-4)

    def test_min_eigenvalue_closed_form(self):
        for a in np.linspace(1.0 / 3.0, 1.0, 9):
            ca = a / (a + 1.0)
            cb = (a - 1.0) / (a + 1.0)
            q = np.array([[1.0, -ca, -ca], [-ca, 1.0, cb], [-ca, cb, 1.0]])
            assert transformed_min_eigenvalue(a) == pytest.approx(np.linalg.eigvalsh(q)[0], rel=1e-12)


class TestDerivatives:
    def test_first_derivative_signs_and_fd(self):
        n = 48
        for a, sign in [(0.4, -1.0), (0.9, 1.0)]:
            d1 = first_derivative(classify(a), 6.0, SumSpec(cutoff=n))
            assert d1.value * sign > 0
            h = 1e-4
            fd = (_fixed(a + h, 6.0, n).value - _fixed(a - h, 6.0, n).value) / (2.0 * h)
            assert d1.value == pytest.approx(fd, rel=1e-5)

    @pytest.mark.parametrize("s", [3.0, 6.0])
    def test_first_derivative_zero_at_bcc(self, s):
        d1 = first_derivative(classify(0.5), s, SumSpec(cutoff=48))
        assert abs(d1.value) <= d1.tail_bound + 1e-9
        assert abs(d1.value) < 1e-12

    def test_symmetrized_zero(self):
        assert first_derivative_at_bcc_symmetrized(3.0, SumSpec(cutoff=32)) == 0.0
        assert first_derivative_at_bcc_symmetrized(6.0, SumSpec(cutoff=10)) == 0.0
        assert abs(first_derivative_at_bcc_symmetrized(2.1, SumSpec(cutoff=24))) <= 1e-12

    def test_second_derivative_positive_at_bcc(self):
        d2 = second_derivative_at_bcc(3.0, SumSpec(cutoff=64))
        assert d2.value > d2.tail_bound > 0.0

    def test_second_derivative_cross_formula(self):
        n = 48
        generic = second_derivative(classify(0.5), 6.0, SumSpec(cutoff=n))
        at_bcc = second_derivative_at_bcc(6.0, SumSpec(cutoff=n))
        assert generic.value == pytest.approx(at_bcc.value, rel=1e-12)
        assert abs(generic.value - at_bcc.value) <= generic.tail_bound + at_bcc.tail_bound

    def test_second_derivative_matches_fd(self):
        n, h = 48, 1e-3
        d2 = second_derivative(classify(0.5), 6.0, SumSpec(cutoff=n))
        fd = (
            epstein_zeta_transformed(classify(0.5 + h), 6.0, SumSpec(cutoff=n), check_tail=False).value
            - 2.0 * epstein_zeta_transformed(classify(0.5), 6.0, SumSpec(cutoff=n), check_tail=False).value
            + epstein_zeta_transformed(classify(0.5 - h), 6.0, SumSpec(cutoff=n), check_tail=False).value
        ) / (h * h)
        assert d2.value == pytest.approx(fd, rel=0.01)

    def test_partial_sums_monotone(self):
        values = [second_derivative_at_bcc(4.0, SumSpec(cutoff=n)).value for n in (4, 6, 8, 12, 16)]
        assert all(b >= a for a, b in zip(values, values[1:]))


class TestDeterminism:
    def test_worker_count_bitwise(self, monkeypatch):
        results = []
        for workers in ("1", "3"):
            monkeypatch.setenv(WORKER_ENV, workers)
            z = epstein_zeta(classify(0.5), 6.0, SumSpec(target_tol=1e-9))
            d = second_derivative_at_bcc(3.0, SumSpec(cutoff=32))
            results.append((z.value, z.tail_bound, d.value))
        assert results[0] == results[1]

    def test_repeat_run_bitwise(self):
        a = _fixed(0.7, 3.0, 60).value
        b = _fixed(0.7, 3.0, 60).value
        assert a == b

    def test_bad_worker_env(self, monkeypatch):
        monkeypatch.setenv(WORKER_ENV, "lots")
        with pytest.raises(ValueError):
            _fixed(0.5, 6.0, 8)


class TestAccumulation:
    def test_plain_close_to_compensated(self):
        comp = _fixed(0.5, 3.0, 80, COMPENSATED).value
        plain = _fixed(0.5, 3.0, 80, PLAIN).value
        assert plain == pytest.approx(comp, rel=1e-12)

    def test_compensated_keeps_tiny_shells(self):
        # at s = 50 the shells beyond the first contribute ~1e-15 of the total;
        # the compensated reduction must keep the value strictly above the
        # kissing-number floor
        z = _fixed(1.0, 50.0, 8)
        assert z.value > 12.0
