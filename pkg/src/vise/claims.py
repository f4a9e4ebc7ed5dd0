"""The group claims threshold that maximizes the society's expected increment.

Closed form: with F_xi the upper tail of the egoist yes-vote count and
mu_plus the voting-sample expectation,

    t0 = beta / (F_gn - F_an) * (mu_plus(mu, sigma, ell, alpha n)
                                 - mu_plus(mu, sigma, ell, gamma n)),

where beta = ell / g.  Two special regimes simplify it exactly:

* group decisive (alpha < 1 - delta, i.e. gamma < 0): F_gn = 1 and
  mu_plus(.., gamma n) = mu, so t0 = beta (mu_plus(.., alpha n) - mu) / (1 - F_an);
* egoists insufficient (delta <= alpha): F_an = 0 and mu_plus(.., alpha n) = 0,
  so t0 = -beta mu_plus(.., gamma n) / F_gn;
* both: t0 = -beta mu.

The maximizer is unique: the t-derivative of the society expectation is
f(t_tilde) sqrt(g)/sigma * [delta (mu_a - mu_g) - (1 - delta)(F_gn - F_an) t],
which vanishes only at t0, and the second derivative there is negative.
``numeric_argmax_t`` re-derives the maximizer from function values only and
serves as an independent check of the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DegenerateRuleError, ValidationError
from .expectations import (
    _check_tail_mode,
    _tail,
    _vote_probs,
    expected_society_increment,
    mu_plus,
)
from .model import EnvironmentParams, SocietyParams, validate
from .special import min_votes_to_exceed

__all__ = [
    "OptimalThresholdResult",
    "StationarityDiagnostics",
    "optimal_threshold",
    "numeric_argmax_t",
    "stationarity_check",
]


@dataclass(frozen=True)
class OptimalThresholdResult:
    """Optimal claims threshold and the regime that produced it.

    case_tag is "general", "group-decisive", "egoists-insufficient" or
    "both" (sweep tooling additionally labels failed grid points
    "degenerate").  When case_tag is "both", t0 equals -beta * mu exactly.
    """

    t0: float
    case_tag: str
    society_value_at_t0: float


def _society_at(
    society: SocietyParams,
    env: EnvironmentParams,
    t: float,
    tail_mode: str,
) -> float:
    return expected_society_increment(
        replace(society, t=float(t)), env, tail_mode=tail_mode
    ).society


def optimal_threshold(
    society: SocietyParams,
    env: EnvironmentParams,
    *,
    tail_mode: str = "exact",
) -> OptimalThresholdResult:
    """Closed-form society-optimal claims threshold (society.t is ignored).

    Raises DegenerateRuleError when F_gn = F_an, i.e. when acceptance can
    never depend on the group's vote (for example alpha = 1): no claims
    threshold is then better than any other.
    """
    _check_tail_mode(tail_mode)
    cfg = validate(society, env, require_t=False)
    if cfg.g < 1:
        raise ValidationError("ell", "optimal threshold requires a nonempty group (g >= 1)")

    ell = society.ell
    p, q = _vote_probs(env.mu, env.sigma)
    f_gamma = _tail(cfg.gamma_votes, ell, p, q, tail_mode)
    f_alpha = _tail(cfg.alpha_votes, ell, p, q, tail_mode)
    if f_gamma == f_alpha:
        raise DegenerateRuleError(
            "the voting outcome cannot depend on the claims threshold: "
            f"P(X > {cfg.gamma_votes:g}) = P(X > {cfg.alpha_votes:g}) = {f_gamma:g} "
            f"for the egoist yes-vote count X (n={society.n}, ell={ell}, "
            f"alpha={society.alpha:g}, mu/sigma={env.mu / env.sigma:g})"
        )

    cut_alpha = min_votes_to_exceed(cfg.alpha_votes)
    cut_gamma = min_votes_to_exceed(cfg.gamma_votes)
    group_decisive = cut_gamma <= 0  # alpha < 1 - delta
    egoists_insufficient = cut_alpha > ell  # delta <= alpha
    if group_decisive and egoists_insufficient:
        tag = "both"
    elif group_decisive:
        tag = "group-decisive"
    elif egoists_insufficient:
        tag = "egoists-insufficient"
    else:
        tag = "general"

    if ell == 0:
        t0 = 0.0  # beta = 0: nothing to trade off against the group
    else:
        mu_a = mu_plus(env.mu, env.sigma, ell, cfg.alpha_votes, tail_mode=tail_mode)
        mu_g = mu_plus(env.mu, env.sigma, ell, cfg.gamma_votes, tail_mode=tail_mode)
        t0 = cfg.beta * (mu_a - mu_g) / (f_gamma - f_alpha)

    value = _society_at(society, env, t0, tail_mode)
    return OptimalThresholdResult(t0=t0, case_tag=tag, society_value_at_t0=value)


def _grid(lo: float, hi: float, count: int) -> np.ndarray:
    return np.linspace(lo, hi, count)


def numeric_argmax_t(
    society: SocietyParams,
    env: EnvironmentParams,
    bracket: tuple[float, float] | None = None,
    tol: float = 1e-8,
    *,
    tail_mode: str = "exact",
) -> float:
    """Maximize the society expectation over t from function values only.

    A coarse scan brackets the maximum and bounded scalar minimization
    polishes it to ``tol``.  The objective is unimodal in t (see module
    docstring); if the scan nevertheless sees multiple local maxima
    (flat-tail noise), a dense grid scan picks the global one before
    polishing.  The default bracket spans mu +/- 6 sigma/sqrt(g), outside
    which the group's support probability is numerically 0 or 1 and the
    objective is flat.
    """
    _check_tail_mode(tail_mode)
    cfg = validate(society, env, require_t=False)
    if cfg.g < 1:
        raise ValidationError("ell", "argmax over t requires a nonempty group (g >= 1)")
    if bracket is None:
        half = 6.0 * env.sigma / math.sqrt(cfg.g)
        bracket = (env.mu - half, env.mu + half)
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValidationError("bracket", f"must be a finite interval, got {bracket!r}")

    def objective(t: float) -> float:
        return _society_at(society, env, t, tail_mode)

    ts = _grid(lo, hi, 241)
    vals = np.array([objective(t) for t in ts])
    noise = 1e-13 * max(1.0, float(np.max(np.abs(vals))))
    diffs = np.diff(vals)
    rising = diffs > noise
    falling = diffs < -noise
    local_maxima = int(np.sum(rising[:-1] & falling[1:]))
    if local_maxima > 1:
        ts = _grid(lo, hi, 4801)
        vals = np.array([objective(t) for t in ts])

    i = int(np.argmax(vals))
    left = ts[max(i - 1, 0)]
    right = ts[min(i + 1, len(ts) - 1)]
    if left == right:
        return float(ts[i])
    res = minimize_scalar(
        lambda t: -objective(t),
        bounds=(float(left), float(right)),
        method="bounded",
        options={"xatol": tol},
    )
    best = float(res.x)
    if objective(best) >= vals[i]:
        return best
    return float(ts[i])


@dataclass(frozen=True)
class StationarityDiagnostics:
    """Finite-difference evidence that t0 is a stationary maximum."""

    t0: float
    step: float
    first_derivative: float
    second_difference: float
    derivative_tol: float
    is_stationary: bool
    is_maximum: bool


def stationarity_check(
    society: SocietyParams,
    env: EnvironmentParams,
    t0: float,
    *,
    step: float | None = None,
    tail_mode: str = "exact",
) -> StationarityDiagnostics:
    """Central finite differences of the society expectation at t0.

    The step defaults to 3e-4 of the natural t scale sigma/sqrt(g); the
    stationarity tolerance is 1e-6 of the natural derivative scale
    sqrt(g)/sigma * (|mu| + sigma).
    """
    _check_tail_mode(tail_mode)
    cfg = validate(society, env, require_t=False)
    if cfg.g < 1:
        raise ValidationError("ell", "stationarity check requires a nonempty group")
    if not math.isfinite(t0):
        raise ValidationError("t0", f"must be finite, got {t0!r}")
    t_scale = env.sigma / math.sqrt(cfg.g)
    h = 3e-4 * t_scale if step is None else float(step)
    m_minus = _society_at(society, env, t0 - h, tail_mode)
    m_zero = _society_at(society, env, t0, tail_mode)
    m_plus = _society_at(society, env, t0 + h, tail_mode)
    d1 = (m_plus - m_minus) / (2.0 * h)
    d2 = (m_plus - 2.0 * m_zero + m_minus) / (h * h)
    tol = 1e-6 * (abs(env.mu) + env.sigma) / t_scale
    return StationarityDiagnostics(
        t0=t0,
        step=h,
        first_derivative=d1,
        second_difference=d2,
        derivative_tol=tol,
        is_stationary=abs(d1) <= tol,
        is_maximum=d2 < 0.0,
    )
