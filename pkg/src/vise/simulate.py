"""Seeded Monte Carlo simulator of voting trajectories.

This is the independent oracle for the closed-form expectations: it draws
raw proposal vectors, applies the deterministic voting rule step by step,
and accumulates per-role per-step increments (rejected steps contribute
zeros, matching the unconditional expectations).

Reproducibility contract
------------------------
* Randomness comes from numpy's PCG64 bit generator; normal variates are
  produced by ``Generator.standard_normal`` (numpy's ziggurat rejection
  method, exact to double precision; not a sum-of-uniforms approximation).
  PCG64 passes the standard empirical test batteries (TestU01 BigCrush /
  PractRand) and numpy keeps its streams stable across releases.
* Replication r uses the substream ``SeedSequence(seed).spawn(replications)[r]``.
  Replications may execute on any number of worker threads; each owns its
  substream and accumulators, and the merge runs sequentially in
  replication order, so results are bit-identical for a fixed
  (config, seed) regardless of worker count.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .model import EnvironmentParams, SocietyParams, validate
from .special import min_votes_to_exceed

__all__ = [
    "SimulationConfig",
    "RoleSummary",
    "TrajectoryStats",
    "MuPlusEstimate",
    "run",
    "estimate_mu_plus",
]

_CHUNK_ELEMS = 1 << 21  # ~16 MiB of float64 per draw buffer

TRAJECTORY_COLUMNS = (
    "replication",
    "step",
    "accepted",
    "egoist_yes",
    "group_yes",
    "egoist_mean_increment",
    "group_mean_increment",
)


@dataclass(frozen=True)
class SimulationConfig:
    """A reproducible simulation request.

    ``steps`` is the trajectory length per replication; estimates pool
    ``steps * replications`` per-step samples.
    """

    society: SocietyParams
    env: EnvironmentParams
    steps: int
    replications: int = 1
    seed: int = 0


@dataclass(frozen=True)
class RoleSummary:
    """Final-capital summary over all members of one role, all replications."""

    mean: float
    min: float
    max: float


@dataclass(frozen=True)
class TrajectoryStats:
    """Pooled per-step estimates with standard errors.

    Role fields are nan/None when the role is empty (ell = 0 or g = 0).
    ``mean_society_step`` equals delta * mean_egoist_step +
    (1 - delta) * mean_group_step up to float accumulation error.
    """

    mean_egoist_step: float
    se_egoist_step: float
    mean_group_step: float
    se_group_step: float
    mean_society_step: float
    se_society_step: float
    acceptance_rate: float
    egoist_final: RoleSummary | None
    group_final: RoleSummary | None
    steps: int
    replications: int
    seed: int


@dataclass
class _RepResult:
    sums: tuple[float, float, float]
    sumsqs: tuple[float, float, float]
    accepted: int
    capitals: np.ndarray
    rows: list[tuple] | None


def _validate_config(config: SimulationConfig) -> int:
    g = config.society.n - config.society.ell
    validate(config.society, config.env, require_t=g > 0)
    if not isinstance(config.steps, int) or config.steps < 1:
        raise ValidationError("steps", f"must be a positive integer, got {config.steps!r}")
    if not isinstance(config.replications, int) or config.replications < 1:
        raise ValidationError(
            "replications", f"must be a positive integer, got {config.replications!r}"
        )
    if not isinstance(config.seed, int) or config.seed < 0:
        raise ValidationError("seed", f"must be a nonnegative integer, got {config.seed!r}")
    return min_votes_to_exceed(config.society.alpha * config.society.n)


def _run_replication(
    rep_index: int,
    seed_seq: np.random.SeedSequence,
    config: SimulationConfig,
    accept_cut: int,
    collect_rows: bool,
) -> _RepResult:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    society, env = config.society, config.env
    n, ell, g = society.n, society.ell, society.n - society.ell
    t = society.t
    mu, sigma = env.mu, env.sigma

    chunk = max(1, _CHUNK_ELEMS // n)
    sums = [0.0, 0.0, 0.0]
    sumsqs = [0.0, 0.0, 0.0]
    accepted_total = 0
    capitals = np.zeros(n, dtype=np.float64)
    rows: list[tuple] | None = [] if collect_rows else None
    step_base = 0

    remaining = config.steps
    while remaining > 0:
        m = min(chunk, remaining)
        x = mu + sigma * rng.standard_normal((m, n))
        egoists = x[:, :ell]
        group = x[:, ell:]
        egoist_yes = (
            (egoists > 0.0).sum(axis=1) if ell else np.zeros(m, dtype=np.int64)
        )
        if g:
            group_mean = group.mean(axis=1)
            group_yes = group_mean > t
            total_yes = egoist_yes + g * group_yes
        else:
            group_mean = np.full(m, np.nan)
            group_yes = np.zeros(m, dtype=bool)
            total_yes = egoist_yes
        acc = total_yes >= accept_cut
        w = acc.astype(np.float64)

        contribs = (
            egoists.mean(axis=1) * w if ell else None,
            group_mean * w if g else None,
            x.mean(axis=1) * w,
        )
        for k, c in enumerate(contribs):
            if c is not None:
                sums[k] += float(np.sum(c))
                sumsqs[k] += float(np.sum(c * c))
        accepted_total += int(np.count_nonzero(acc))
        capitals += x[acc].sum(axis=0)

        if rows is not None:
            for j in range(m):
                rows.append(
                    (
                        rep_index,
                        step_base + j,
                        int(acc[j]),
                        int(egoist_yes[j]),
                        int(group_yes[j]),
                        float(contribs[0][j]) if ell else math.nan,
                        float(contribs[1][j]) if g else math.nan,
                    )
                )
        step_base += m
        remaining -= m

    return _RepResult(
        sums=(sums[0], sums[1], sums[2]),
        sumsqs=(sumsqs[0], sumsqs[1], sumsqs[2]),
        accepted=accepted_total,
        capitals=capitals,
        rows=rows,
    )


def _mean_se(total: float, total_sq: float, count: int) -> tuple[float, float]:
    mean = total / count
    if count < 2:
        return mean, 0.0
    var = max(0.0, (total_sq - count * mean * mean) / (count - 1))
    return mean, math.sqrt(var / count)


def run(
    config: SimulationConfig,
    *,
    trajectory_path: str | None = None,
    workers: int | None = None,
) -> TrajectoryStats:
    """Simulate the voting trajectory and return pooled statistics.

    ``trajectory_path`` optionally writes one CSV row per step (see
    TRAJECTORY_COLUMNS; per-role mean increments are the realized values,
    zero for rejected steps).  Output is identical for any ``workers``.
    """
    accept_cut = _validate_config(config)
    children = np.random.SeedSequence(config.seed).spawn(config.replications)
    collect_rows = trajectory_path is not None

    def job(i: int) -> _RepResult:
        return _run_replication(i, children[i], config, accept_cut, collect_rows)

    if workers is None:
        workers = min(config.replications, 4)
    if workers > 1 and config.replications > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, range(config.replications)))
    else:
        results = [job(i) for i in range(config.replications)]

    n, ell = config.society.n, config.society.ell
    g = n - ell
    total_steps = config.steps * config.replications
    sums = [0.0, 0.0, 0.0]
    sumsqs = [0.0, 0.0, 0.0]
    accepted = 0
    for r in results:  # fixed merge order: replication index
        for k in range(3):
            sums[k] += r.sums[k]
            sumsqs[k] += r.sumsqs[k]
        accepted += r.accepted

    if ell:
        mean_e, se_e = _mean_se(sums[0], sumsqs[0], total_steps)
        ego_caps = np.concatenate([r.capitals[:ell] for r in results])
        egoist_final = RoleSummary(
            mean=float(ego_caps.mean()), min=float(ego_caps.min()), max=float(ego_caps.max())
        )
    else:
        mean_e, se_e = math.nan, math.nan
        egoist_final = None
    if g:
        mean_g, se_g = _mean_se(sums[1], sumsqs[1], total_steps)
        grp_caps = np.concatenate([r.capitals[ell:] for r in results])
        group_final = RoleSummary(
            mean=float(grp_caps.mean()), min=float(grp_caps.min()), max=float(grp_caps.max())
        )
    else:
        mean_g, se_g = math.nan, math.nan
        group_final = None
    mean_s, se_s = _mean_se(sums[2], sumsqs[2], total_steps)

    if trajectory_path is not None:
        with open(trajectory_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRAJECTORY_COLUMNS)
            for r in results:
                writer.writerows(r.rows or [])

    return TrajectoryStats(
        mean_egoist_step=mean_e,
        se_egoist_step=se_e,
        mean_group_step=mean_g,
        se_group_step=se_g,
        mean_society_step=mean_s,
        se_society_step=se_s,
        acceptance_rate=accepted / total_steps,
        egoist_final=egoist_final,
        group_final=group_final,
        steps=config.steps,
        replications=config.replications,
        seed=config.seed,
    )


@dataclass(frozen=True)
class MuPlusEstimate:
    """Monte Carlo estimate of a voting-sample expectation."""

    value: float
    se: float
    samples: int


def estimate_mu_plus(
    mu: float,
    sigma: float,
    ell: int,
    ell0: float,
    samples: int,
    seed: int = 0,
) -> MuPlusEstimate:
    """Simulate the designated-voter increment in a normal voting sample.

    Draws ``ell`` i.i.d. N(mu, sigma^2) increments per sample; the proposal
    is implemented iff strictly more than ``ell0`` increments are positive,
    in which case voter 0's increment is recorded (zero otherwise).  This
    is the empirical counterpart of ``vise.expectations.mu_plus`` and is
    deliberately a raw brute-force simulation of that definition.
    """
    if not isinstance(ell, int) or ell < 1:
        raise ValidationError("ell", f"must be an integer >= 1, got {ell!r}")
    if not (math.isfinite(mu) and math.isfinite(sigma) and sigma > 0.0):
        raise ValidationError("sigma", "requires finite mu and sigma > 0")
    if not isinstance(samples, int) or samples < 10_000:
        raise ValidationError("samples", f"must be an integer >= 10000, got {samples!r}")
    cut = min_votes_to_exceed(ell0)

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    chunk = max(1, _CHUNK_ELEMS // ell)
    total = 0.0
    total_sq = 0.0
    remaining = samples
    while remaining > 0:
        m = min(chunk, remaining)
        x = mu + sigma * rng.standard_normal((m, ell))
        acc = (x > 0.0).sum(axis=1) >= cut
        v = x[:, 0] * acc
        total += float(np.sum(v))
        total_sq += float(np.sum(v * v))
        remaining -= m

    mean, se = _mean_se(total, total_sq, samples)
    return MuPlusEstimate(value=mean, se=se, samples=samples)
