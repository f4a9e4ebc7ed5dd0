"""Canonical parameter records, validation, and the one-step voting rule.

A society has ``n`` members: ``ell`` egoists followed by ``g = n - ell``
members of a cohesive group.  A proposal is a vector of n capital
increments.  Each egoist supports a proposal iff their own increment is
strictly positive; the group casts all g of its votes for the proposal iff
the mean increment over group members strictly exceeds the claims
threshold ``t``.  The proposal is implemented iff the number of supporting
votes strictly exceeds ``alpha * n``.

All inequalities are strict.  Ties occur with probability zero under the
continuous proposal distribution, and fixing strictness makes behaviour at
integer values of alpha * n deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .special import min_votes_to_exceed

__all__ = [
    "EnvironmentParams",
    "SocietyParams",
    "ModelConfig",
    "VoteOutcome",
    "validate",
    "tally_votes",
    "apply_step",
]


@dataclass(frozen=True)
class EnvironmentParams:
    """Proposal increments are i.i.d. N(mu, sigma^2), in capital units."""

    mu: float
    sigma: float


@dataclass(frozen=True)
class SocietyParams:
    """Society composition and decision thresholds.

    n:     society size
    ell:   number of egoists (members 0..ell-1; the group is ell..n-1)
    alpha: strict relative majority threshold in [0, 1]
    t:     group claims threshold (capital units); may be left None for
           operations that do not need it (e.g. optimal-threshold search)
    """

    n: int
    ell: int
    alpha: float
    t: float | None = None

    @property
    def g(self) -> int:
        return self.n - self.ell

    @property
    def delta(self) -> float:
        return self.ell / self.n

    @property
    def beta(self) -> float:
        if self.g == 0:
            raise ValidationError("ell", "beta = ell / (n - ell) requires g > 0")
        return self.ell / self.g

    @property
    def gamma(self) -> float:
        return self.alpha + self.delta - 1.0


@dataclass(frozen=True)
class ModelConfig:
    """Validated (society, environment) pair with derived quantities.

    ``gamma_votes`` is computed as ``alpha_votes - g`` (an exact float
    operation for any realistic n), so the identity gamma * n = alpha * n - g
    holds exactly and the two acceptance formulations coincide.
    """

    society: SocietyParams
    env: EnvironmentParams
    g: int
    delta: float
    gamma: float
    alpha_votes: float
    gamma_votes: float

    @property
    def beta(self) -> float:
        return self.society.beta

    @property
    def accept_cut(self) -> int:
        """Minimum total yes votes for acceptance."""
        return min_votes_to_exceed(self.alpha_votes)


def validate(
    society: SocietyParams,
    env: EnvironmentParams,
    *,
    require_t: bool = True,
) -> ModelConfig:
    """Check all field contracts and populate derived quantities.

    Raises ValidationError naming the offending field.
    """
    if not isinstance(society.n, int) or society.n < 1:
        raise ValidationError("n", f"must be a positive integer, got {society.n!r}")
    if not isinstance(society.ell, int) or not 0 <= society.ell <= society.n:
        raise ValidationError(
            "ell", f"must be an integer in [0, {society.n}], got {society.ell!r}"
        )
    alpha = society.alpha
    if not isinstance(alpha, (int, float)) or not math.isfinite(alpha):
        raise ValidationError("alpha", f"must be a finite number, got {alpha!r}")
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError("alpha", f"must be in [0, 1], got {alpha}")
    if require_t:
        if society.t is None:
            raise ValidationError("t", "claims threshold is required here")
        if not math.isfinite(society.t):
            raise ValidationError("t", f"must be finite, got {society.t!r}")
    if not math.isfinite(env.mu):
        raise ValidationError("mu", f"must be finite, got {env.mu!r}")
    if not (math.isfinite(env.sigma) and env.sigma > 0.0):
        raise ValidationError("sigma", f"must be finite and > 0, got {env.sigma!r}")

    alpha_votes = alpha * society.n
    g = society.n - society.ell
    return ModelConfig(
        society=society,
        env=env,
        g=g,
        delta=society.ell / society.n,
        gamma=alpha + society.ell / society.n - 1.0,
        alpha_votes=alpha_votes,
        gamma_votes=alpha_votes - g,
    )


@dataclass(frozen=True)
class VoteOutcome:
    """Tally of one proposal.

    total_yes = egoist_yes + (g if group_yes else 0), and the proposal is
    accepted iff total_yes > alpha * n (strictly).  group_mean is the mean
    increment over group members (nan when the group is empty).
    """

    egoist_yes: int
    group_yes: bool
    total_yes: int
    accepted: bool
    group_mean: float


def tally_votes(proposal: np.ndarray, society: SocietyParams) -> VoteOutcome:
    """Apply the deterministic voting rule to one proposal vector."""
    increments = np.asarray(proposal, dtype=np.float64)
    if increments.shape != (society.n,):
        raise ValidationError(
            "proposal", f"expected shape ({society.n},), got {increments.shape}"
        )
    if not np.all(np.isfinite(increments)):
        raise ValidationError("proposal", "all increments must be finite")

    ell, g = society.ell, society.g
    egoist_yes = int(np.count_nonzero(increments[:ell] > 0.0))
    if g > 0:
        group_mean = float(increments[ell:].mean())
        if society.t is None:
            raise ValidationError("t", "claims threshold is required to tally votes")
        group_yes = group_mean > society.t
    else:
        group_mean = math.nan
        group_yes = False
    total_yes = egoist_yes + (g if group_yes else 0)
    accepted = total_yes >= min_votes_to_exceed(society.alpha * society.n)
    return VoteOutcome(
        egoist_yes=egoist_yes,
        group_yes=group_yes,
        total_yes=total_yes,
        accepted=accepted,
        group_mean=group_mean,
    )


def apply_step(
    capitals: np.ndarray, outcome: VoteOutcome, proposal: np.ndarray
) -> np.ndarray:
    """Return updated capitals: incremented by the proposal iff accepted."""
    capitals = np.asarray(capitals, dtype=np.float64)
    increments = np.asarray(proposal, dtype=np.float64)
    if capitals.shape != increments.shape:
        raise ValidationError(
            "capitals", f"shape {capitals.shape} does not match proposal {increments.shape}"
        )
    if outcome.accepted:
        return capitals + increments
    return capitals.copy()
