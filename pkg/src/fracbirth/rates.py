"""Birth-rate schedules and the spectral weights of the state probabilities.

Every closed-form distribution in this package is a signed combination

    p_k(t) = sum_{m=n0}^{k} c_m(k) * phi(lambda_m, t),

where ``phi`` depends on the random clock and the weights

    c_m(k) = prod_{j=n0}^{k-1} lambda_j / prod_{l != m} (lambda_l - lambda_m)

are the partial-fraction residues of the rate ladder.  The weights grow
combinatorially and alternate in sign, so they are kept as (sign, log
magnitude) pairs and recombined with exact summation.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NearDegenerateRatesError, NonPositiveRateError
from .specfun import lgamma_fn

__all__ = ["RateSchedule", "SpectralCoeffs", "make_schedule", "spectral_coeffs", "mean_weights"]

# Below this relative separation the divided-difference denominators lose
# more precision than the coefficient combination can recover.
EPS_SEPARATION = 1e-9

# Cancellation in the general-kind weights exceeds the double budget past
# ~60 states; the warning threshold flags schedules already in the risky zone.
GENERAL_KMAX_CAP = 60
GENERAL_KMAX_WARN = 30
LINEAR_KMAX_CAP = 500


@dataclass(frozen=True)
class RateSchedule:
    """A validated ladder of birth rates lambda_k, k = 1..kmax.

    ``kind`` is "general" (explicit list) or "linear" (lambda_k = lam * k).
    ``n0`` is the initial population; state k is occupied by k individuals
    and leaves at rate lambda_k.
    """

    kind: str
    n0: int = 1
    rates: tuple = ()
    lam: float = 0.0
    kmax: int = 0
    inv_rate_sum: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.kind not in ("general", "linear"):
            raise DomainError(f"unknown schedule kind {self.kind!r}")
        if not (isinstance(self.n0, int) and self.n0 >= 1):
            raise DomainError("n0 must be a positive integer")
        if self.kmax < self.n0:
            raise DomainError("kmax must be >= n0")

    def rate(self, k):
        """lambda_k for a state n0 <= k <= kmax."""
        if not (1 <= k <= self.kmax):
            raise DomainError(f"state {k} outside 1..{self.kmax}")
        if self.kind == "linear":
            return self.lam * k
        return self.rates[k - 1]

    def rate_array(self, lo, hi):
        """Rates for states lo..hi inclusive, as a float array."""
        if not (1 <= lo <= hi <= self.kmax):
            raise DomainError(f"states {lo}..{hi} outside 1..{self.kmax}")
        if self.kind == "linear":
            return self.lam * np.arange(lo, hi + 1, dtype=float)
        return np.asarray(self.rates[lo - 1 : hi], dtype=float)

    @property
    def is_linear(self):
        return self.kind == "linear"

    def to_json(self):
        if self.kind == "linear":
            obj = {"kind": "linear", "lambda": self.lam, "kmax": self.kmax}
        else:
            obj = {"kind": "general", "rates": list(self.rates)}
        if self.n0 != 1:
            obj["n0"] = self.n0
        return json.dumps(obj)

    @classmethod
    def from_json(cls, text):
        """Parse {"kind":"linear","lambda":..,"kmax":..} or {"kind":"general","rates":[..],"n0":..}."""
        obj = json.loads(text) if isinstance(text, str) else dict(text)
        kind = obj.get("kind")
        n0 = int(obj.get("n0", 1))
        if kind == "linear":
            return linear_schedule(float(obj["lambda"]), kmax=int(obj.get("kmax", LINEAR_KMAX_CAP)), n0=n0)
        if kind == "general":
            return make_schedule([float(r) for r in obj["rates"]], n0=n0)
        raise DomainError(f"unknown schedule kind {kind!r}")


def make_schedule(rates, n0=1):
    """Validate an explicit rate list and build a general-kind schedule.

    Raises ``NonPositiveRateError`` for rates <= 0 and
    ``NearDegenerateRatesError`` when two rates are closer than the relative
    separation the spectral weights can tolerate.  ``inv_rate_sum`` records
    sum(1/lambda_k) as a non-explosion diagnostic: the untruncated process
    is non-exploding only if that sum diverges, so a small value on a long
    ladder is a warning sign.
    """
    rates = [float(r) for r in rates]
    if not rates:
        raise DomainError("rate list must be non-empty")
    if len(rates) > GENERAL_KMAX_CAP:
        raise DomainError(
            f"general-kind schedules are capped at {GENERAL_KMAX_CAP} states; "
            "use the linear kind for long ladders"
        )
    if len(rates) > GENERAL_KMAX_WARN:
        warnings.warn(
            f"general-kind weights lose precision beyond ~{GENERAL_KMAX_WARN} states",
            stacklevel=2,
        )
    for r in rates:
        if not (r > 0.0) or not math.isfinite(r):
            raise NonPositiveRateError(f"rates must be positive and finite, got {r!r}")
    for i in range(len(rates)):
        for j in range(i + 1, len(rates)):
            sep = abs(rates[i] - rates[j]) / max(rates[i], rates[j])
            if sep < EPS_SEPARATION:
                raise NearDegenerateRatesError(
                    f"rates {rates[i]!r} and {rates[j]!r} are relatively closer than {EPS_SEPARATION}"
                )
    if not (1 <= n0 <= len(rates)):
        raise DomainError("n0 must index into the rate list")
    inv_sum = math.fsum(1.0 / r for r in rates)
    return RateSchedule(
        kind="general", n0=n0, rates=tuple(rates), kmax=len(rates), inv_rate_sum=inv_sum
    )


def linear_schedule(lam, kmax=LINEAR_KMAX_CAP, n0=1):
    """lambda_k = lam * k, closed forms available throughout."""
    if not (lam > 0.0) or not math.isfinite(lam):
        raise NonPositiveRateError(f"need lam > 0, got {lam!r}")
    if not (1 <= kmax <= LINEAR_KMAX_CAP):
        raise DomainError(f"linear kmax must be within 1..{LINEAR_KMAX_CAP}")
    if not (1 <= n0 <= kmax):
        raise DomainError("n0 must be within 1..kmax")
    inv_sum = math.fsum(1.0 / (lam * k) for k in range(1, kmax + 1))
    return RateSchedule(kind="linear", n0=n0, lam=lam, kmax=kmax, inv_rate_sum=inv_sum)


@dataclass(frozen=True)
class SpectralCoeffs:
    """Signed log-magnitude weights c_m(k) for states m = n0..k."""

    k: int
    n0: int
    signs: np.ndarray
    log_mags: np.ndarray
    rates: np.ndarray  # lambda_m for m = n0..k

    def combine(self, log_factors):
        """sum_m c_m * f_m for non-negative factors given as log f_m.

        The shifted exponentials are added with exact (compensated)
        summation, which is what keeps alternating weights of magnitude
        e^300 from destroying a result of order one.
        """
        v = self.log_mags + np.asarray(log_factors, dtype=float)
        shift = np.max(v)
        if shift == -math.inf:
            return 0.0
        return float(math.fsum(self.signs * np.exp(v - shift))) * math.exp(shift)

    def values(self):
        """The weights as plain floats (overflow-prone for large k)."""
        return self.signs * np.exp(self.log_mags)


def spectral_coeffs(schedule, k):
    """Partial-fraction weights c_m(k) of the state-k probability.

    Linear schedules use the closed binomial form
    c_m = binom(k-1, m-1) (-1)^(m-1); general schedules accumulate the
    divided differences in log magnitude with explicit sign tracking.
    """
    n0 = schedule.n0
    if not (n0 <= k <= schedule.kmax):
        raise DomainError(f"need n0 <= k <= kmax, got k={k}")
    lam = schedule.rate_array(n0, k)
    if schedule.is_linear and n0 == 1:
        m = np.arange(1, k + 1, dtype=float)
        log_binom = _lgamma_vec(k) - _lgamma_vec(m) - _lgamma_vec(k - m + 1.0)
        signs = np.where(np.arange(1, k + 1) % 2 == 1, 1.0, -1.0)
        return SpectralCoeffs(k=k, n0=1, signs=signs, log_mags=log_binom, rates=lam)
    log_prod = math.fsum(math.log(schedule.rate(j)) for j in range(n0, k))
    signs = np.ones(k - n0 + 1)
    log_mags = np.empty(k - n0 + 1)
    for i, m in enumerate(range(n0, k + 1)):
        lam_m = lam[i]
        acc = 0.0
        sign = 1.0
        for j, lam_l in enumerate(lam):
            if j == i:
                continue
            d = lam_l - lam_m
            acc += math.log(abs(d))
            if d < 0:
                sign = -sign
        signs[i] = sign
        log_mags[i] = log_prod - acc
    return SpectralCoeffs(k=k, n0=n0, signs=signs, log_mags=log_mags, rates=lam)


def mean_weights(schedule, k):
    """Weights d_m(k) = prod_{l != m} lambda_l / (lambda_l - lambda_m).

    These sum to one and turn the cumulative tail probability into
    1 - sum_m d_m phi(lambda_m, t); they equal c_m lambda_k / lambda_m.
    Defined for a single progenitor.
    """
    if schedule.n0 != 1:
        raise DomainError("mean weights are defined for n0 = 1")
    if schedule.is_linear:
        m = np.arange(1, k + 1, dtype=float)
        log_binom = _lgamma_vec(k + 1.0) - _lgamma_vec(m + 1.0) - _lgamma_vec(k - m + 1.0)
        signs = np.where(np.arange(1, k + 1) % 2 == 1, 1.0, -1.0)
        return SpectralCoeffs(
            k=k, n0=1, signs=signs, log_mags=log_binom, rates=schedule.rate_array(1, k)
        )
    c = spectral_coeffs(schedule, k)
    log_lam_k = math.log(schedule.rate(k))
    return SpectralCoeffs(
        k=k,
        n0=1,
        signs=c.signs,
        log_mags=c.log_mags + log_lam_k - np.log(c.rates),
        rates=c.rates,
    )


def _lgamma_vec(x):
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.array([lgamma_fn(v)[0] for v in arr])
    return out if out.size > 1 else float(out[0])
