"""Special-function accuracy against independent high-precision oracles."""

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from vise import (
    TailSpec,
    TailUnderflowError,
    ValidationError,
    binomial_pmf,
    binomial_upper_tail,
    binomial_upper_tail_normal_approx,
    min_votes_to_exceed,
    std_normal_cdf,
    std_normal_pdf,
    truncated_normal_mean,
)

mpmath.mp.dps = 50


def mp_cdf(x: float) -> float:
    return float(mpmath.ncdf(x))


class TestStdNormalPdf:
    def test_at_zero(self):
        assert std_normal_pdf(0.0) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), abs=1e-16)

    def test_at_one(self):
        # direct evaluation of exp(-1/2)/sqrt(2 pi)
        assert std_normal_pdf(1.0) == pytest.approx(0.24197072451914337, abs=1e-16)

    def test_symmetry_exact(self):
        rng = np.random.default_rng(0)
        for x in rng.uniform(-10, 10, size=500):
            assert std_normal_pdf(float(x)) == std_normal_pdf(float(-x))

    def test_positive(self):
        for x in np.linspace(-30, 30, 301):
            assert std_normal_pdf(float(x)) > 0.0

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            std_normal_pdf(math.inf)
        with pytest.raises(ValidationError):
            std_normal_pdf(math.nan)


class TestStdNormalCdf:
    def test_at_zero(self):
        assert std_normal_cdf(0.0) == 0.5

    def test_documented_error_bound(self):
        # documented max abs error over |x| <= 8; pinned at 1e-13 (typically ~1e-16)
        xs = np.linspace(-8.0, 8.0, 2001)
        worst = max(abs(std_normal_cdf(float(x)) - mp_cdf(float(x))) for x in xs)
        assert worst <= 1e-13

    def test_reference_point(self):
        # high-precision reference for Phi(-1/sqrt(2))
        assert std_normal_cdf(-0.7071067811) == pytest.approx(0.2397500611, abs=1e-9)
        assert std_normal_cdf(-0.7071067811865476) == pytest.approx(
            float(mpmath.ncdf(mpmath.mpf(-1) / mpmath.sqrt(2))), abs=1e-15
        )

    def test_reflection_identity(self):
        rng = np.random.default_rng(1)
        for x in rng.uniform(-8, 8, size=1000):
            assert std_normal_cdf(float(x)) + std_normal_cdf(float(-x)) == pytest.approx(
                1.0, abs=1e-12
            )

    def test_monotone(self):
        xs = np.linspace(-10, 10, 4001)
        vals = [std_normal_cdf(float(x)) for x in xs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            std_normal_cdf(math.inf)


class TestMinVotesToExceed:
    def test_integer_threshold_is_strict(self):
        assert min_votes_to_exceed(29.0) == 30
        assert min_votes_to_exceed(0.0) == 1
        assert min_votes_to_exceed(-1.0) == 0

    def test_fractional_threshold(self):
        assert min_votes_to_exceed(29.4) == 30
        assert min_votes_to_exceed(-0.5) == 0
        assert min_votes_to_exceed(49.9) == 50

    def test_snaps_float_lattice_noise(self):
        # 0.29 * 100 rounds below the exact integer 29
        assert 0.29 * 100 < 29.0
        assert min_votes_to_exceed(0.29 * 100) == 30
        assert min_votes_to_exceed(0.46 * 100) == 47
        assert min_votes_to_exceed(0.46 * 100 - 50) == -3


def exact_pmf(x: int, ell: int, p: Fraction) -> Fraction:
    return Fraction(math.comb(ell, x)) * p**x * (1 - p) ** (ell - x)


class TestBinomialPmf:
    def test_degenerate_p_zero(self):
        assert binomial_pmf(0, 7, 0.0) == 1.0
        assert binomial_pmf(3, 7, 0.0) == 0.0

    def test_symmetric_half(self):
        for ell in (1, 5, 12):
            for x in range(ell + 1):
                assert binomial_pmf(x, ell, 0.5) == pytest.approx(
                    math.comb(ell, x) / 2.0**ell, rel=1e-13
                )

    def test_exact_rational_oracle(self):
        # log-space value against big-integer exact arithmetic
        exact = exact_pmf(50, 100, Fraction(46, 100))
        assert binomial_pmf(50, 100, 0.46) == pytest.approx(float(exact), rel=1e-12)

    def test_sums_to_one_large_ell(self):
        for ell, p in ((100, 0.46), (1000, 0.1), (10_000, 0.731)):
            total = math.fsum(binomial_pmf(x, ell, p) for x in range(ell + 1))
            assert total == pytest.approx(1.0, abs=1e-10)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValidationError):
            binomial_pmf(8, 7, 0.5)
        with pytest.raises(ValidationError):
            binomial_pmf(-1, 7, 0.5)


def exact_upper_tail(xi: float, ell: int, p: Fraction) -> Fraction:
    cut = math.floor(xi) + 1
    return sum(
        (exact_pmf(x, ell, p) for x in range(max(cut, 0), ell + 1)),
        start=Fraction(0),
    )


class TestBinomialUpperTail:
    def test_whole_support_is_exactly_one(self):
        for ell, p in ((1, 0.3), (50, 0.99), (10, 0.0)):
            assert binomial_upper_tail(TailSpec(-0.5, ell, p)) == 1.0
            assert binomial_upper_tail(TailSpec(-1.0, ell, p)) == 1.0

    def test_empty_sum_is_exactly_zero(self):
        for ell, p in ((1, 0.3), (50, 0.99)):
            assert binomial_upper_tail(TailSpec(float(ell), ell, p)) == 0.0
            assert binomial_upper_tail(TailSpec(ell + 2.5, ell, p)) == 0.0

    def test_exact_rational_oracle(self):
        cases = [(49.9, 100, Fraction(1, 2)), (49.9, 100, Fraction(46, 100)), (10.0, 40, Fraction(3, 10))]
        for xi, ell, p in cases:
            got = binomial_upper_tail(TailSpec(xi, ell, float(p)))
            assert got == pytest.approx(float(exact_upper_tail(xi, ell, p)), rel=1e-12)

    def test_nonincreasing_in_xi(self):
        spec_p = 0.37
        vals = [binomial_upper_tail(TailSpec(xi, 60, spec_p)) for xi in np.arange(-2, 62, 0.5)]
        assert all(b <= a for a, b in zip(vals, vals[1:]))

    def test_nondecreasing_in_p_at_fixed_cut(self):
        for xi in (4.0, 20.5, 49.0):
            vals = [binomial_upper_tail(TailSpec(xi, 60, p)) for p in np.linspace(0.01, 0.99, 50)]
            assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))


class TestNormalApproxTail:
    def test_centered_cut_is_half(self):
        # floor(xi) + 0.5 == p * ell makes the argument exactly zero
        assert binomial_upper_tail_normal_approx(TailSpec(49.0, 99, 0.5)) == 0.5

    def test_formula_substitution(self):
        # ell=100, p=0.5, xi=60 -> Phi(-(60.5 - 50) / 5) = Phi(-2.1)
        got = binomial_upper_tail_normal_approx(TailSpec(60.0, 100, 0.5))
        assert got == pytest.approx(std_normal_cdf(-2.1), abs=1e-15)

    def test_absolute_error_bound_on_grid(self):
        # |approx - exact| <= 0.02 for ell >= 50, 0.2 <= p <= 0.8
        worst = 0.0
        for ell in (50, 100, 250, 1000):
            for p in (0.2, 0.35, 0.5, 0.65, 0.8):
                for frac in np.linspace(0.0, 1.0, 21):
                    xi = frac * ell
                    exact = binomial_upper_tail(TailSpec(xi, ell, p))
                    approx = binomial_upper_tail_normal_approx(TailSpec(xi, ell, p))
                    worst = max(worst, abs(approx - exact))
        assert worst <= 0.02

    def test_rejects_degenerate_p(self):
        with pytest.raises(ValidationError):
            binomial_upper_tail_normal_approx(TailSpec(3.0, 10, 0.0))
        with pytest.raises(ValidationError):
            binomial_upper_tail_normal_approx(TailSpec(3.0, 10, 1.0))


class TestTruncatedNormalMean:
    def test_quadrature_oracle_standard_case(self):
        # E[Z | Z > 0] for Z ~ N(0,1) via numerical integration of z f(z)
        expected = float(
            mpmath.quad(lambda z: z * mpmath.npdf(z), [0, mpmath.inf]) / mpmath.mpf("0.5")
        )
        assert truncated_normal_mean(0.0, 1.0, 0.0) == pytest.approx(expected, rel=1e-12)
        assert truncated_normal_mean(0.0, 1.0, 0.0) == pytest.approx(0.7978845608, abs=1e-10)

    def test_truncation_at_mean(self):
        for mu, sigma in ((0.0, 1.0), (-3.0, 2.5), (10.0, 0.1)):
            assert truncated_normal_mean(mu, sigma, mu) == pytest.approx(
                mu + sigma * 0.7978845608028654, rel=1e-12
            )

    def test_no_truncation_limit(self):
        assert truncated_normal_mean(1.5, 2.0, -1e6) == pytest.approx(1.5, abs=1e-12)

    def test_quadrature_oracle_grid(self):
        for mu, sigma, t in ((0.0, 1.0, 1.7), (-1.0, 10.0, 0.0), (2.0, 0.5, 2.4)):
            z = mpmath.mpf(mu)
            num = mpmath.quad(
                lambda v: v * mpmath.npdf((v - z) / sigma) / sigma, [t, mu + 60 * sigma]
            )
            den = mpmath.ncdf((z - t) / sigma)
            assert truncated_normal_mean(mu, sigma, t) == pytest.approx(
                float(num / den), rel=1e-10
            )

    def test_exceeds_threshold_and_monotone_in_t(self):
        ts = np.linspace(-5, 6, 45)
        vals = []
        for t in ts:
            v = truncated_normal_mean(0.5, 1.5, float(t))
            assert v > t
            vals.append(v)
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_underflow_raises_with_diagnostic(self):
        with pytest.raises(TailUnderflowError, match="underflow"):
            truncated_normal_mean(0.0, 1.0, 60.0)

    def test_rejects_bad_sigma(self):
        with pytest.raises(ValidationError):
            truncated_normal_mean(0.0, -1.0, 0.0)
