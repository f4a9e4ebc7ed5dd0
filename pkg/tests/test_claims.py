"""Optimal claims threshold: closed form, special cases, numeric argmax."""

import math
from dataclasses import replace

import numpy as np
import pytest

from vise import (
    DegenerateRuleError,
    EnvironmentParams,
    SocietyParams,
    ValidationError,
    expected_society_increment,
    mu_plus,
    numeric_argmax_t,
    optimal_threshold,
    stationarity_check,
)
from vise.expectations import _tail, _vote_probs


def society_value(society: SocietyParams, env: EnvironmentParams, t: float) -> float:
    return expected_society_increment(replace(society, t=t), env).society


def sample_config(rng: np.random.Generator) -> tuple[SocietyParams, EnvironmentParams]:
    """A random configuration with a numerically well-conditioned maximum."""
    while True:
        n = int(rng.integers(20, 160))
        ell = int(rng.integers(max(1, int(0.2 * n)), int(0.8 * n) + 1))
        alpha = float(rng.uniform(0.25, 0.75))
        mu = float(rng.uniform(-0.3, 0.3))
        sigma = float(rng.uniform(0.5, 2.0))
        society = SocietyParams(n=n, ell=ell, alpha=alpha)
        env = EnvironmentParams(mu=mu, sigma=sigma)
        try:
            res = optimal_threshold(society, env)
        except DegenerateRuleError:
            continue
        g = n - ell
        t_tilde0 = (mu - res.t0) * math.sqrt(g) / sigma
        if abs(t_tilde0) <= 3.0:  # curvature at the optimum stays resolvable
            return society, env
        # otherwise the objective is flat at float precision; resample


class TestOptimalThreshold:
    def test_both_case_simple_form(self):
        res = optimal_threshold(SocietyParams(100, 30, 0.5), EnvironmentParams(0.1, 1.0))
        assert res.case_tag == "both"
        assert res.t0 == pytest.approx(-(30 / 70) * 0.1, abs=1e-15)

    def test_no_egoists_gives_zero(self):
        res = optimal_threshold(SocietyParams(40, 0, 0.5), EnvironmentParams(-0.4, 2.0))
        assert res.t0 == 0.0
        assert res.case_tag == "both"

    def test_case_tags(self):
        env = EnvironmentParams(0.1, 1.0)
        assert optimal_threshold(SocietyParams(100, 30, 0.5), env).case_tag == "both"
        assert (
            optimal_threshold(SocietyParams(100, 55, 0.4), env).case_tag == "group-decisive"
        )
        assert (
            optimal_threshold(SocietyParams(100, 30, 0.8), env).case_tag
            == "egoists-insufficient"
        )
        assert optimal_threshold(SocietyParams(100, 70, 0.6), env).case_tag == "general"

    def test_special_cases_match_general_formula(self):
        rng = np.random.default_rng(8)
        checked = {"both": 0, "group-decisive": 0, "egoists-insufficient": 0}
        while min(checked.values()) < 30:
            n = int(rng.integers(5, 200))
            ell = int(rng.integers(1, n))
            alpha = float(rng.uniform(0, 0.95))
            mu = float(rng.uniform(-1, 1))
            sigma = float(rng.uniform(0.2, 3.0))
            society = SocietyParams(n=n, ell=ell, alpha=alpha)
            env = EnvironmentParams(mu=mu, sigma=sigma)
            try:
                res = optimal_threshold(society, env)
            except DegenerateRuleError:
                continue
            if res.case_tag == "general":
                continue
            g, beta = n - ell, ell / (n - ell)
            p, q = _vote_probs(mu, sigma)
            f_gamma = _tail(alpha * n - g, ell, p, q, "exact")
            f_alpha = _tail(alpha * n, ell, p, q, "exact")
            mu_a = mu_plus(mu, sigma, ell, alpha * n)
            mu_g = mu_plus(mu, sigma, ell, alpha * n - g)
            if res.case_tag == "both":
                special = -beta * mu
            elif res.case_tag == "group-decisive":
                assert f_gamma == 1.0 and mu_g == mu
                special = beta * (mu_a - mu) / (1.0 - f_alpha)
            else:
                assert f_alpha == 0.0 and mu_a == 0.0
                special = -beta * mu_g / f_gamma
            assert res.t0 == pytest.approx(special, abs=1e-10)
            checked[res.case_tag] += 1

    def test_sign_law(self):
        # sign(t0) = sign(mu_plus at alpha-cut minus mu_plus at gamma-cut)
        rng = np.random.default_rng(9)
        for _ in range(200):
            n = int(rng.integers(5, 150))
            ell = int(rng.integers(1, n))
            alpha = float(rng.uniform(0, 0.95))
            mu = float(rng.uniform(-1, 1))
            society = SocietyParams(n=n, ell=ell, alpha=alpha)
            env = EnvironmentParams(mu=mu, sigma=1.0)
            try:
                res = optimal_threshold(society, env)
            except DegenerateRuleError:
                continue
            diff = mu_plus(mu, 1.0, ell, alpha * n) - mu_plus(mu, 1.0, ell, alpha * n - (n - ell))
            if diff != 0.0 and res.t0 != 0.0:
                assert math.copysign(1, res.t0) == math.copysign(1, diff)

    def test_scale_homogeneity(self):
        society = SocietyParams(n=80, ell=48, alpha=0.45)
        base = optimal_threshold(society, EnvironmentParams(-0.15, 1.2))
        for c in (0.1, 10.0):
            scaled = optimal_threshold(society, EnvironmentParams(-0.15 * c, 1.2 * c))
            assert scaled.t0 == pytest.approx(base.t0 * c, rel=1e-12)
            assert scaled.case_tag == base.case_tag

    def test_alpha_one_is_degenerate(self):
        with pytest.raises(DegenerateRuleError, match="cannot depend"):
            optimal_threshold(SocietyParams(50, 20, 1.0), EnvironmentParams(0.0, 1.0))

    def test_pure_egoist_rejected(self):
        with pytest.raises(ValidationError):
            optimal_threshold(SocietyParams(50, 50, 0.5), EnvironmentParams(0.0, 1.0))

    def test_maximal_on_probe_grid(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            society, env = sample_config(rng)
            res = optimal_threshold(society, env)
            at_t0 = society_value(society, env, res.t0)
            assert res.society_value_at_t0 == at_t0
            g = society.n - society.ell
            span = 4.0 * env.sigma / math.sqrt(g)
            for t in np.linspace(res.t0 - span, res.t0 + span, 41):
                assert society_value(society, env, float(t)) <= at_t0 + 1e-12


class TestNumericArgmax:
    def test_agrees_with_closed_form(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            society, env = sample_config(rng)
            res = optimal_threshold(society, env)
            t_star = numeric_argmax_t(society, env, tol=1e-9)
            assert t_star == pytest.approx(res.t0, abs=1e-6)

    def test_baseline_argmax_near_one(self):
        t_star = numeric_argmax_t(
            SocietyParams(100, 50, 0.5), EnvironmentParams(-1.0, 10.0), tol=1e-9
        )
        assert 0.8 < t_star < 1.2

    def test_all_group_argmax_is_zero(self):
        t_star = numeric_argmax_t(SocietyParams(30, 0, 0.5), EnvironmentParams(0.2, 1.0))
        assert t_star == pytest.approx(0.0, abs=1e-6)

    def test_explicit_bracket(self):
        society = SocietyParams(100, 50, 0.5)
        env = EnvironmentParams(-1.0, 10.0)
        t_star = numeric_argmax_t(society, env, bracket=(0.0, 2.0), tol=1e-9)
        assert t_star == pytest.approx(1.0, abs=1e-6)

    def test_bad_bracket_rejected(self):
        with pytest.raises(ValidationError):
            numeric_argmax_t(
                SocietyParams(10, 5, 0.5), EnvironmentParams(0.0, 1.0), bracket=(1.0, 1.0)
            )


class TestStationarity:
    def test_stationary_maximum_at_t0(self):
        rng = np.random.default_rng(12)
        for _ in range(15):
            society, env = sample_config(rng)
            res = optimal_threshold(society, env)
            diag = stationarity_check(society, env, res.t0)
            assert diag.is_stationary, (society, env, diag)
            assert diag.is_maximum

    def test_derivative_signs_off_optimum(self):
        society = SocietyParams(100, 50, 0.5)
        env = EnvironmentParams(-1.0, 10.0)
        res = optimal_threshold(society, env)
        right = stationarity_check(society, env, res.t0 + env.sigma)
        left = stationarity_check(society, env, res.t0 - env.sigma)
        assert right.first_derivative < 0.0
        assert left.first_derivative > 0.0
