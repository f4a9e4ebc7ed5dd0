"""Scalar special functions used throughout the model.

Standard normal density/CDF, binomial probabilities and upper tails
(exact log-space sums and the continuity-corrected normal approximation),
and the mean of a normal variable truncated from below.

Accuracy notes
--------------
``std_normal_cdf`` is computed as ``erfc(-x / sqrt(2)) / 2`` via the C math
library.  On the platforms we target (glibc/musl libm) ``erfc`` is accurate
to a few ulp, which bounds the absolute CDF error by about 1e-15 over
|x| <= 8; the test suite pins an absolute error bound of 1e-13 against a
50-digit reference.  Binomial probabilities are evaluated in log space with
``lgamma`` (relative error near 1e-13 for ell up to 1e4) and tails are summed
with ``math.fsum``, which is exact compensated summation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import TailUnderflowError, ValidationError

__all__ = [
    "TailSpec",
    "std_normal_pdf",
    "std_normal_cdf",
    "binomial_pmf",
    "binomial_upper_tail",
    "binomial_upper_tail_normal_approx",
    "truncated_normal_mean",
    "min_votes_to_exceed",
]

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_SQRT_2 = math.sqrt(2.0)

# Vote-count thresholds arrive as alpha*n style float products.  Values within
# this tolerance of an integer are treated as that integer before flooring, so
# that e.g. 0.29 * 100 = 28.999999999999996 still means "more than 29 votes".
_LATTICE_SNAP = 1e-9


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(name, f"must be finite, got {value!r}")
    return value


def std_normal_pdf(x: float) -> float:
    """Density of N(0, 1): exp(-x^2 / 2) / sqrt(2 pi)."""
    x = _require_finite("x", x)
    return math.exp(-0.5 * x * x) * _INV_SQRT_2PI


def std_normal_cdf(x: float) -> float:
    """Distribution function of N(0, 1).

    Evaluated as erfc(-x / sqrt(2)) / 2, accurate to well below 1e-13
    absolute over |x| <= 8 (see module docstring).
    """
    x = _require_finite("x", x)
    return 0.5 * math.erfc(-x / _SQRT_2)


def min_votes_to_exceed(threshold: float) -> int:
    """Smallest integer vote count that strictly exceeds ``threshold``.

    This is floor(threshold) + 1 with the lattice snap described above.
    "More than xi votes" therefore means a count >= floor(xi) + 1 for
    integer and non-integer xi alike.
    """
    threshold = _require_finite("threshold", threshold)
    nearest = round(threshold)
    if abs(threshold - nearest) <= _LATTICE_SNAP * max(1.0, abs(threshold)):
        return int(nearest) + 1
    return math.floor(threshold) + 1


@dataclass(frozen=True)
class TailSpec:
    """Upper-tail query for the egoist yes-vote count.

    xi:  vote threshold (count scale, may be fractional or negative)
    ell: number of egoists, >= 1
    p:   probability that a single egoist votes yes
    """

    xi: float
    ell: int
    p: float

    def __post_init__(self) -> None:
        _require_finite("xi", self.xi)
        if not isinstance(self.ell, int) or self.ell < 1:
            raise ValidationError("ell", f"must be an integer >= 1, got {self.ell!r}")
        p = _require_finite("p", self.p)
        if not 0.0 <= p <= 1.0:
            raise ValidationError("p", f"must be in [0, 1], got {p}")


@lru_cache(maxsize=64)
def _log_binom_coeffs(ell: int) -> np.ndarray:
    x = np.arange(ell + 1, dtype=np.float64)
    lg = math.lgamma(ell + 1)
    return lg - np.array(
        [math.lgamma(k + 1.0) + math.lgamma(ell - k + 1.0) for k in range(ell + 1)]
    )


@lru_cache(maxsize=512)
def _pmf_vector(ell: int, p: float, q: float) -> np.ndarray:
    """All binomial(ell, p) probabilities, computed in log space.

    ``q`` is passed separately so callers that know 1 - p to better than
    float subtraction (e.g. q = Phi(-x) next to p = Phi(x)) keep that
    accuracy in the tails.
    """
    x = np.arange(ell + 1, dtype=np.float64)
    if p == 0.0:
        out = np.zeros(ell + 1)
        out[0] = 1.0
        return out
    if q == 0.0:
        out = np.zeros(ell + 1)
        out[ell] = 1.0
        return out
    logs = _log_binom_coeffs(ell) + x * math.log(p) + (ell - x) * math.log(q)
    return np.exp(logs)


def binomial_pmf(x: int, ell: int, p: float) -> float:
    """P(X = x) for X ~ Binomial(ell, p), stable for ell up to 1e4."""
    if not isinstance(ell, int) or ell < 0:
        raise ValidationError("ell", f"must be a nonnegative integer, got {ell!r}")
    if not isinstance(x, int) or not 0 <= x <= ell:
        raise ValidationError("x", f"must be an integer in [0, {ell}], got {x!r}")
    p = _require_finite("p", p)
    if not 0.0 <= p <= 1.0:
        raise ValidationError("p", f"must be in [0, 1], got {p}")
    if p == 0.0:
        return 1.0 if x == 0 else 0.0
    if p == 1.0:
        return 1.0 if x == ell else 0.0
    if ell == 0:
        return 1.0
    return float(_pmf_vector(ell, p, 1.0 - p)[x])


def _upper_tail(xi: float, ell: int, p: float, q: float) -> float:
    cut = min_votes_to_exceed(xi)
    if cut <= 0:
        return 1.0
    if cut > ell:
        return 0.0
    return min(1.0, math.fsum(_pmf_vector(ell, p, q)[cut:]))


def binomial_upper_tail(spec: TailSpec) -> float:
    """P(X > xi) = sum of binomial_pmf from floor(xi) + 1 through ell.

    Returns exactly 1.0 when floor(xi) + 1 <= 0 and exactly 0.0 when
    floor(xi) >= ell (no summation in either case).
    """
    return _upper_tail(spec.xi, spec.ell, spec.p, 1.0 - spec.p)


def _upper_tail_normal_approx(xi: float, ell: int, p: float, q: float) -> float:
    cut = min_votes_to_exceed(xi)
    if cut <= 0:
        return 1.0
    if cut > ell:
        return 0.0
    sd = math.sqrt(p * q * ell)
    return std_normal_cdf(-((cut - 1) + 0.5 - p * ell) / sd)


def binomial_upper_tail_normal_approx(spec: TailSpec) -> float:
    """Continuity-corrected normal approximation of ``binomial_upper_tail``:
    Phi(-(floor(xi) + 0.5 - p*ell) / sqrt(p*q*ell)).

    Exact short-circuits for the full and empty tails are kept so the
    approximation agrees with the exact sum at the support boundaries.
    """
    if not 0.0 < spec.p < 1.0:
        raise ValidationError("p", "normal approximation requires 0 < p < 1")
    return _upper_tail_normal_approx(spec.xi, spec.ell, spec.p, 1.0 - spec.p)


def truncated_normal_mean(mu: float, sigma: float, t: float) -> float:
    """E[Z | Z > t] for Z ~ N(mu, sigma^2).

    Closed form mu + sigma * f(z) / F(z) with z = (mu - t) / sigma.
    Always strictly greater than t.  Raises TailUnderflowError when F(z)
    underflows to zero in float64 (t roughly 38 sigma above mu).
    """
    mu = _require_finite("mu", mu)
    sigma = _require_finite("sigma", sigma)
    t = _require_finite("t", t)
    if sigma <= 0.0:
        raise ValidationError("sigma", f"must be > 0, got {sigma}")
    z = (mu - t) / sigma
    tail = std_normal_cdf(z)
    if tail == 0.0:
        raise TailUnderflowError(
            f"survival probability underflowed: mu={mu}, sigma={sigma}, t={t} "
            f"(z={z:.3f}); the conditional mean is not representable"
        )
    return mu + sigma * std_normal_pdf(z) / tail
