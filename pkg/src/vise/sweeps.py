"""Grid evaluation, pit-of-losses detection, and majority-threshold classes.

A sweep evaluates the closed-form expectation report over a 1- or 2-axis
grid; the pit analysis maps where the society's expected one-step increment
is negative in the (mu/sigma, delta) plane and finds the largest egoist
share for which choosing the optimal claims threshold keeps the whole
mu/sigma range pit-free.

Axis values are dimensionless where the model is scale-free (t/sigma,
mu/sigma) so sweeps are independent of the chosen sigma.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .claims import optimal_threshold
from .errors import DegenerateRuleError, ValidationError
from .expectations import TAIL_MODES, ExpectationReport, expected_society_increment
from .model import EnvironmentParams, SocietyParams

__all__ = [
    "AXIS_NAMES",
    "SweepAxis",
    "SweepSpec",
    "SweepRow",
    "SweepTable",
    "sweep",
    "PitResult",
    "pit_region",
    "max_delta_curve",
    "MajorityClass",
    "majority_threshold_classes",
]

AXIS_NAMES = ("t_over_sigma", "delta", "alpha", "mu_over_sigma")

_AXIS_TO_FIXED = {
    "t_over_sigma": "t",
    "delta": "ell",
    "alpha": "alpha",
    "mu_over_sigma": "mu",
}


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: values lo, lo+step, ..., up to hi inclusive."""

    name: str
    lo: float
    hi: float
    step: float

    def __post_init__(self) -> None:
        if self.name not in AXIS_NAMES:
            raise ValidationError("axis", f"unknown axis {self.name!r}; expected one of {AXIS_NAMES}")
        ok = all(math.isfinite(v) for v in (self.lo, self.hi, self.step))
        if not ok or self.step <= 0.0 or self.hi < self.lo:
            raise ValidationError(
                self.name, f"needs finite lo <= hi and step > 0, got [{self.lo}, {self.hi}] step {self.step}"
            )

    def values(self) -> tuple[float, ...]:
        count = int(math.floor((self.hi - self.lo) / self.step + 1e-9)) + 1
        return tuple(round(self.lo + i * self.step, 10) for i in range(count))


@dataclass(frozen=True)
class SweepSpec:
    """Fixed parameters plus 1-2 swept axes.

    With ``t_mode="optimal"`` the claims threshold is set per grid point to
    the closed-form optimum (t must then be neither fixed nor swept).
    """

    n: int
    axes: tuple[SweepAxis, ...]
    sigma: float = 1.0
    mu: float | None = None
    ell: int | None = None
    alpha: float | None = None
    t: float | None = None
    t_mode: str = "fixed"
    tail_mode: str = "exact"

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError("n", f"must be a positive integer, got {self.n!r}")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise ValidationError("sigma", f"must be finite and > 0, got {self.sigma!r}")
        if self.t_mode not in ("fixed", "optimal"):
            raise ValidationError("t_mode", f"must be 'fixed' or 'optimal', got {self.t_mode!r}")
        if self.tail_mode not in TAIL_MODES:
            raise ValidationError("tail_mode", f"must be one of {TAIL_MODES}")
        if not 1 <= len(self.axes) <= 2:
            raise ValidationError("axes", f"need 1 or 2 swept axes, got {len(self.axes)}")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValidationError("axes", f"axes must be distinct, got {names}")
        for a in self.axes:
            if getattr(self, _AXIS_TO_FIXED[a.name]) is not None:
                raise ValidationError(
                    a.name, f"swept axis conflicts with fixed parameter {_AXIS_TO_FIXED[a.name]!r}"
                )
        swept = set(names)
        if self.t_mode == "optimal" and ("t_over_sigma" in swept or self.t is not None):
            raise ValidationError("t_mode", "optimal t-mode excludes a fixed or swept t")
        for pname, axis in _AXIS_TO_FIXED.items():
            if pname == "t_over_sigma" and self.t_mode == "optimal":
                continue
            if pname not in swept and getattr(self, axis) is None:
                raise ValidationError(axis, f"must be fixed or swept (axis {pname!r})")


@dataclass(frozen=True)
class SweepRow:
    """One grid point: resolved parameters, report values, and a flag.

    Undefined numeric fields are nan.  flag is one of "", "pure-egoist",
    "no-egoists", "degenerate".  t0_case records the optimal-threshold
    regime when t_mode="optimal".
    """

    n: int
    ell: int
    delta: float
    alpha: float
    mu: float
    sigma: float
    t: float
    egoist: float
    group_member: float
    society: float
    support_prob: float
    t_tilde: float
    t0_case: str
    flag: str


SWEEP_COLUMNS = (
    "n",
    "ell",
    "delta",
    "alpha",
    "mu",
    "sigma",
    "t",
    "egoist",
    "group_member",
    "society",
    "support_prob",
    "t_tilde",
    "t0_case",
    "flag",
)


@dataclass(frozen=True)
class SweepTable:
    """Sweep output: rows in row-major grid order (first axis outermost)."""

    spec: SweepSpec
    rows: tuple[SweepRow, ...]

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(SWEEP_COLUMNS)
            for r in self.rows:
                writer.writerow([getattr(r, c) for c in SWEEP_COLUMNS])


def _nan_report() -> ExpectationReport:
    return ExpectationReport(
        egoist=None, group_member=None, society=math.nan, support_prob=None, t_tilde=None
    )


def _evaluate_point(spec: SweepSpec, point: dict[str, float]) -> SweepRow:
    n = spec.n
    sigma = spec.sigma
    mu = point["mu_over_sigma"] * sigma if "mu_over_sigma" in point else spec.mu
    alpha = point.get("alpha", spec.alpha)
    if "delta" in point:
        ell = int(round(point["delta"] * n))
        ell = min(max(ell, 0), n)
    else:
        ell = spec.ell
    g = n - ell

    flag = ""
    t0_case = ""
    t_used = math.nan
    society = SocietyParams(n=n, ell=ell, alpha=alpha, t=None)

    if g == 0:
        flag = "pure-egoist"
        if spec.t_mode == "fixed":
            t_used = point["t_over_sigma"] * sigma if "t_over_sigma" in point else spec.t
        report = expected_society_increment(
            society, EnvironmentParams(mu=mu, sigma=sigma), tail_mode=spec.tail_mode
        )
    else:
        if spec.t_mode == "optimal":
            try:
                res = optimal_threshold(
                    society, EnvironmentParams(mu=mu, sigma=sigma), tail_mode=spec.tail_mode
                )
                t_used = res.t0
                t0_case = res.case_tag
            except DegenerateRuleError:
                return SweepRow(
                    n=n, ell=ell, delta=ell / n, alpha=alpha, mu=mu, sigma=sigma,
                    t=math.nan, egoist=math.nan, group_member=math.nan, society=math.nan,
                    support_prob=math.nan, t_tilde=math.nan, t0_case="", flag="degenerate",
                )
        else:
            t_used = point["t_over_sigma"] * sigma if "t_over_sigma" in point else spec.t
        if ell == 0:
            flag = "no-egoists"
        report = expected_society_increment(
            SocietyParams(n=n, ell=ell, alpha=alpha, t=t_used),
            EnvironmentParams(mu=mu, sigma=sigma),
            tail_mode=spec.tail_mode,
        )

    def num(v: float | None) -> float:
        return math.nan if v is None else v

    return SweepRow(
        n=n, ell=ell, delta=ell / n, alpha=alpha, mu=mu, sigma=sigma, t=t_used,
        egoist=num(report.egoist), group_member=num(report.group_member),
        society=report.society, support_prob=num(report.support_prob),
        t_tilde=num(report.t_tilde), t0_case=t0_case, flag=flag,
    )


def sweep(spec: SweepSpec, *, workers: int = 1) -> SweepTable:
    """Evaluate the expectation report over the grid.

    Grid points are independent; with ``workers > 1`` they are evaluated
    concurrently, and output ordering is by grid index either way.
    """
    grids = [(a.name, a.values()) for a in spec.axes]
    if len(grids) == 1:
        points = [{grids[0][0]: v} for v in grids[0][1]]
    else:
        points = [
            {grids[0][0]: v0, grids[1][0]: v1}
            for v0 in grids[0][1]
            for v1 in grids[1][1]
        ]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda pt: _evaluate_point(spec, pt), points))
    else:
        rows = [_evaluate_point(spec, pt) for pt in points]
    return SweepTable(spec=spec, rows=tuple(rows))


def _default_mu_grid() -> tuple[float, ...]:
    # mu/sigma in (-1, 0], step 0.01
    return tuple(round(-0.99 + 0.01 * i, 10) for i in range(100))


def _society_value_at(
    n: int,
    ell: int,
    alpha: float,
    mu: float,
    sigma: float,
    t: float,
    tail_mode: str,
) -> float:
    return expected_society_increment(
        SocietyParams(n=n, ell=ell, alpha=alpha, t=t),
        EnvironmentParams(mu=mu, sigma=sigma),
        tail_mode=tail_mode,
    ).society


def _point_state(
    n: int,
    ell: int,
    alpha: float,
    mu: float,
    sigma: float,
    t_mode: str,
    t_fixed: float,
    tail_mode: str,
    tolerance: float,
) -> tuple[bool, bool]:
    """(is_pit, is_flagged) for one (mu, delta) grid point."""
    if ell == 0:
        t = 0.0 if t_mode == "optimal" else t_fixed
        value = _society_value_at(n, ell, alpha, mu, sigma, t, tail_mode)
        return value < -tolerance, False
    if t_mode == "optimal":
        try:
            t = optimal_threshold(
                SocietyParams(n=n, ell=ell, alpha=alpha),
                EnvironmentParams(mu=mu, sigma=sigma),
                tail_mode=tail_mode,
            ).t0
        except DegenerateRuleError:
            # No threshold can matter here; fall back to the t = 0 value and
            # flag the point if that alone cannot clear the pit test.
            value = _society_value_at(n, ell, alpha, mu, sigma, 0.0, tail_mode)
            pit = value < -tolerance
            return pit, pit
    else:
        t = t_fixed
    value = _society_value_at(n, ell, alpha, mu, sigma, t, tail_mode)
    return value < -tolerance, False


@dataclass(frozen=True)
class PitResult:
    """Pit-of-losses mask over (mu/sigma, delta) and its neutralization bound.

    mask[i, j] is True where the society expectation at (mu_over_sigma[i],
    delta[j]) is below -tolerance under the requested t rule.  delta_max is
    the largest delta such that every column delta' <= delta is entirely
    pit-free (None if even delta = 0 has a pit, which cannot happen for the
    standard grids).
    """

    alpha: float
    n: int
    t_mode: str
    t_fixed: float
    sigma: float
    tail_mode: str
    tolerance: float
    mu_over_sigma: tuple[float, ...]
    delta: tuple[float, ...]
    mask: np.ndarray = field(compare=False)
    delta_max: float | None
    flagged: tuple[tuple[int, int], ...]

    def mask_to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["mu_over_sigma"] + [f"delta={d:g}" for d in self.delta])
            for i, m in enumerate(self.mu_over_sigma):
                writer.writerow([m] + [int(v) for v in self.mask[i]])

    def summary_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "n": self.n,
            "t_mode": self.t_mode,
            "t_fixed": self.t_fixed if self.t_mode == "fixed" else None,
            "sigma": self.sigma,
            "tail_mode": self.tail_mode,
            "tolerance": self.tolerance,
            "delta_max": self.delta_max,
            "pit_points": int(self.mask.sum()),
            "flagged_points": len(self.flagged),
            "mu_over_sigma": {
                "lo": self.mu_over_sigma[0],
                "hi": self.mu_over_sigma[-1],
                "count": len(self.mu_over_sigma),
            },
            "delta": {
                "lo": self.delta[0],
                "hi": self.delta[-1],
                "count": len(self.delta),
            },
        }

    def summary_json(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.summary_dict(), fh, indent=2)
            fh.write("\n")


def pit_region(
    alpha: float,
    n: int,
    *,
    t_mode: str = "optimal",
    t: float = 0.0,
    mu_over_sigma: tuple[float, ...] | None = None,
    delta: tuple[float, ...] | None = None,
    sigma: float = 1.0,
    tail_mode: str = "exact",
    tolerance: float = 1e-9,
) -> PitResult:
    """Compute the pit mask and the largest pit-free egoist-share prefix.

    Defaults: mu/sigma in (-1, 0] step 0.01, delta on the lattice k/n for
    k = 0..n-1, pit test ``society < -tolerance``.  ``tolerance=0.0``
    together with ``tail_mode="normal-approx"`` reproduces the published
    neutralization percentages, whose boundary cells have society maxima
    within 1e-12 of zero (see pit docs in FORMATS.md).
    """
    if t_mode not in ("fixed", "optimal"):
        raise ValidationError("t_mode", f"must be 'fixed' or 'optimal', got {t_mode!r}")
    if tolerance < 0.0:
        raise ValidationError("tolerance", f"must be >= 0, got {tolerance}")
    mu_grid = _default_mu_grid() if mu_over_sigma is None else tuple(mu_over_sigma)
    delta_grid = (
        tuple(k / n for k in range(n)) if delta is None else tuple(delta)
    )
    if not mu_grid or not delta_grid:
        raise ValidationError("grid", "mu_over_sigma and delta grids must be nonempty")

    mask = np.zeros((len(mu_grid), len(delta_grid)), dtype=bool)
    flagged: list[tuple[int, int]] = []
    for j, d in enumerate(delta_grid):
        ell = int(round(d * n))
        if not 0 <= ell < n:
            raise ValidationError("delta", f"delta={d} requires 0 <= ell < n on the 1/n lattice")
        for i, m in enumerate(mu_grid):
            pit, flag = _point_state(
                n, ell, alpha, m * sigma, sigma, t_mode, t, tail_mode, tolerance
            )
            mask[i, j] = pit
            if flag:
                flagged.append((i, j))

    delta_max: float | None = None
    for j, d in enumerate(delta_grid):
        if mask[:, j].any():
            break
        delta_max = d
    return PitResult(
        alpha=alpha,
        n=n,
        t_mode=t_mode,
        t_fixed=t,
        sigma=sigma,
        tail_mode=tail_mode,
        tolerance=tolerance,
        mu_over_sigma=mu_grid,
        delta=delta_grid,
        mask=mask,
        delta_max=delta_max,
        flagged=tuple(flagged),
    )


def max_delta_curve(
    n: int,
    alpha_grid: tuple[float, ...],
    *,
    sigma: float = 1.0,
    mu_over_sigma: tuple[float, ...] | None = None,
    tail_mode: str = "exact",
    tolerance: float = 1e-9,
) -> tuple[tuple[float, float], ...]:
    """delta_max versus alpha under the optimal claims threshold.

    Walks delta upward per alpha and stops at the first column containing a
    pit point, which is what delta_max measures; the full mask is not built.
    """
    mu_grid = _default_mu_grid() if mu_over_sigma is None else tuple(mu_over_sigma)
    out: list[tuple[float, float]] = []
    for alpha in alpha_grid:
        if not 0.0 <= alpha < 1.0:
            raise ValidationError("alpha", f"alpha grid values must be in [0, 1), got {alpha}")
        best = None
        for k in range(n):
            column_clear = True
            for m in mu_grid:
                pit, _ = _point_state(
                    n, k, alpha, m * sigma, sigma, "optimal", 0.0, tail_mode, tolerance
                )
                if pit:
                    column_clear = False
                    break
            if not column_clear:
                break
            best = k / n
        out.append((alpha, best if best is not None else math.nan))
    return tuple(out)


@dataclass(frozen=True)
class MajorityClass:
    """Majority thresholds in [lo, hi) share floor(alpha * n) = k and hence
    induce identical winning coalitions."""

    k: int
    lo: float
    hi: float
    representative: float


def majority_threshold_classes(n: int) -> tuple[MajorityClass, ...]:
    """Partition [0, 1) into the n equivalence classes [k/n, (k+1)/n)."""
    if not isinstance(n, int) or n < 1:
        raise ValidationError("n", f"must be a positive integer, got {n!r}")
    return tuple(
        MajorityClass(k=k, lo=k / n, hi=(k + 1) / n, representative=(k + 0.5) / n)
        for k in range(n)
    )
