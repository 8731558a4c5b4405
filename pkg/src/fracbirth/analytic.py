"""State probabilities and means of the birth process under each random clock.

Each composition replaces the exponential clock factor of the bare process
with the Laplace transform of its random time:

====================  =================================================
clock                 factor multiplying the spectral weight c_m
====================  =================================================
none                  exp(-lambda_m t)
first passage (n=1)   exp(-t sqrt(2 lambda_m))
first passage (n)     exp(-t lambda_m^(1/2^n) 2^(1 - 1/2^n))
positive sojourn      exp(-t lambda_m / 2) I0(t lambda_m / 2)
bridge sojourn        (1 - sum_m d_m exp(-lambda_m t)) / (lambda_k t)
stable (alpha)        exp(-t lambda_m^alpha)
inverse stable (nu)   E_{nu,1}(-lambda_m t^nu)
====================  =================================================

Compositions that have no closed factor (fractional process at a
first-passage time, fractional at a stable time) are one-dimensional
quadratures against the appropriate mixing density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergentMeanError, DomainError, TruncationNotConvergedError
from .quadrature import DEFAULT_SPEC, quad_semi_infinite
from .rates import mean_weights, spectral_coeffs
from .specfun import (
    bessel_i0_scaled,
    folded_cauchy_density,
    mittag_leffler,
    wright_neg,
)

__all__ = [
    "Pmf",
    "MeanValue",
    "classical_pmf",
    "classical_mean",
    "fractional_pmf",
    "fractional_mean",
    "waiting_time_density",
    "fp_stopped_pmf",
    "fp_stopped_mean",
    "sojourn_pmf",
    "bridge_pmf",
    "bridge_moments",
    "stable_stopped_pmf",
    "frac_fp_pmf",
    "frac_stable_pmf",
    "frac_t2alpha_pmf",
    "stable_of_t2nu_pmf",
    "cauchy_abs_pmf",
    "pmf_value",
    "build_pmf",
    "COMPOSITIONS",
]

# Past this state the alternating binomial sums of the linear kind amplify
# the per-factor Mittag-Leffler error beyond ~1e-9; the clock-mixing
# quadrature takes over (identical values, tested at the seam).
_LINEAR_DIRECT_K = 12

_SLACK = 1e-12


@dataclass(frozen=True)
class Pmf:
    """Truncated state-probability vector p_k, k = n0 .. n0+len(probs)-1."""

    t: float
    n0: int
    probs: np.ndarray
    tail_mass: float
    provenance: str

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if np.any(p < -_SLACK) or np.any(p > 1.0 + _SLACK):
            bad = p[(p < -_SLACK) | (p > 1.0 + _SLACK)]
            raise DomainError(f"probabilities outside [0,1]: {bad[:4]}")
        if self.tail_mass < -1e-9:
            raise DomainError(f"tail mass {self.tail_mass} < 0")

    @property
    def ks(self):
        return np.arange(self.n0, self.n0 + len(self.probs))

    def total(self):
        return float(np.sum(self.probs) + self.tail_mass)


@dataclass(frozen=True)
class MeanValue:
    """A truncated mean with its stopping diagnostics."""

    t: float
    value: float
    truncation_k: int
    last_increment: float


def _check_state(schedule, k):
    if not (schedule.n0 <= k <= schedule.kmax):
        raise DomainError(f"state {k} outside n0..kmax = {schedule.n0}..{schedule.kmax}")


def _single_progenitor(schedule, name):
    if schedule.n0 != 1:
        raise DomainError(f"{name} is defined for a single progenitor (n0 = 1)")


def _indicator(schedule, k):
    return 1.0 if k == schedule.n0 else 0.0


# ---------------------------------------------------------------------------
# Bare process
# ---------------------------------------------------------------------------


def classical_pmf(schedule, k, t):
    """Pr{N(t) = k | N(0) = n0} for the bare nonlinear process.

    Linear schedules use the stable geometric / negative-binomial closed
    form; general schedules combine the spectral weights with exp(-lambda_m t).
    """
    _check_state(schedule, k)
    if t < 0:
        raise DomainError("need t >= 0")
    if t == 0.0:
        return _indicator(schedule, k)
    if schedule.is_linear:
        lam, n0 = schedule.lam, schedule.n0
        # log of binom(k-1, k-n0) e^{-n0 lam t} (1 - e^{-lam t})^{k-n0}
        log_p = (
            _log_binom(k - 1, k - n0)
            - n0 * lam * t
            + (k - n0) * _log1mexp(lam * t)
        )
        return math.exp(log_p)
    coeffs = spectral_coeffs(schedule, k)
    return coeffs.combine(-coeffs.rates * t)


def classical_mean(schedule, t, K=None, tol=1e-10):
    """E N(t) truncated at state K: 1 + sum_{k=1}^K Pr{N(t) > k}.

    The truncated value equals E min(N(t), K+1), which stays finite even
    for explosive rate ladders.  Raises ``TruncationNotConvergedError``
    (carrying the partial result) if the last increment still exceeds
    ``tol`` at the cap.
    """
    _single_progenitor(schedule, "classical_mean")
    if t < 0:
        raise DomainError("need t >= 0")
    K = schedule.kmax if K is None else K
    if t == 0.0:
        return MeanValue(t, 1.0, 0, 0.0)
    return _mean_from_increments(t, _classical_tail_probability, schedule, t, K, tol)


def _classical_tail_probability(schedule, t, k):
    """Pr{N(t) > k} for one progenitor."""
    if schedule.is_linear:
        return math.exp(k * _log1mexp(schedule.lam * t))
    d = mean_weights(schedule, k)
    return 1.0 - d.combine(-d.rates * t)


def _mean_from_increments(t, tail_fn, schedule, targ, K, tol):
    total = 1.0
    inc = 0.0
    k_stop = 0
    for k in range(1, K + 1):
        inc = tail_fn(schedule, targ, k)
        total += inc
        k_stop = k
        if inc < tol:
            break
    mean = MeanValue(t, total, k_stop, inc)
    if inc >= tol:
        raise TruncationNotConvergedError(
            f"mean increments still {inc:.3e} at k = {k_stop}", partial=mean
        )
    return mean


# ---------------------------------------------------------------------------
# Fractional process (inverse-stable clock)
# ---------------------------------------------------------------------------


def fractional_pmf(schedule, nu, k, t):
    """Pr{N^nu(t) = k}: spectral weights against E_{nu,1}(-lambda_m t^nu).

    Reduces exactly to the bare process at nu = 1.  For linear schedules
    beyond the cancellation budget the same value is computed as the
    geometric law mixed over the inverse-stable clock.
    """
    if not (0.0 < nu <= 1.0):
        raise DomainError(f"need 0 < nu <= 1, got {nu}")
    if nu == 1.0:
        return classical_pmf(schedule, k, t)
    _single_progenitor(schedule, "fractional_pmf")
    _check_state(schedule, k)
    if t < 0:
        raise DomainError("need t >= 0")
    if t == 0.0:
        return _indicator(schedule, k)
    if schedule.is_linear and k > _LINEAR_DIRECT_K:
        return _linear_fractional_quad(schedule.lam, nu, k, t)
    coeffs = spectral_coeffs(schedule, k)
    logf = [math.log(mittag_leffler(nu, 1.0, -lam_m * t**nu).value) for lam_m in coeffs.rates]
    return coeffs.combine(logf)


def _linear_fractional_quad(lam, nu, k, t, spec=DEFAULT_SPEC):
    """Geometric pmf mixed over the unit inverse-stable clock density."""

    def f(xi):
        log_geo = -lam * t**nu * xi + (k - 1) * _log1mexp(lam * t**nu * xi)
        w = wright_neg(nu, xi).value
        return math.exp(log_geo) * w if w > 0.0 else 0.0

    # The geometric factor peaks where lam t^nu xi ~ log k.
    hint = max(1.0, math.log(max(k, 2)) / (lam * t**nu))
    return quad_semi_infinite(f, spec, scale_hint=hint).value


def fractional_mean(schedule, nu, t, K=None, tol=1e-10):
    """Truncated E N^nu(t); increments are Pr{N^nu(t) > k}.

    Linear increments go through the clock-mixing quadrature, which stays
    stable at every k; general increments use the mean weights with
    Mittag-Leffler factors.
    """
    if not (0.0 < nu <= 1.0):
        raise DomainError(f"need 0 < nu <= 1, got {nu}")
    if nu == 1.0:
        return classical_mean(schedule, t, K, tol)
    _single_progenitor(schedule, "fractional_mean")
    if t < 0:
        raise DomainError("need t >= 0")
    K = schedule.kmax if K is None else K
    if t == 0.0:
        return MeanValue(t, 1.0, 0, 0.0)

    if schedule.is_linear:
        lam = schedule.lam

        def tail(s, targ, k):
            def f(xi):
                w = wright_neg(nu, xi).value
                if w <= 0.0:
                    return 0.0
                return -math.expm1(k * _log1mexp(lam * targ**nu * xi)) * w

            return quad_semi_infinite(f, DEFAULT_SPEC, scale_hint=1.0).value

    else:

        def tail(s, targ, k):
            d = mean_weights(s, k)
            logf = [math.log(mittag_leffler(nu, 1.0, -lm * targ**nu).value) for lm in d.rates]
            return 1.0 - d.combine(logf)

    return _mean_from_increments(t, tail, schedule, t, K, tol)


def waiting_time_density(schedule, nu, k, s):
    """Density of the holding time in state k: lambda_k s^(nu-1) E_{nu,nu}(-lambda_k s^nu)."""
    if not (0.0 < nu <= 1.0):
        raise DomainError(f"need 0 < nu <= 1, got {nu}")
    if not (s > 0.0):
        raise DomainError("need s > 0")
    _check_state(schedule, k)
    lam_k = schedule.rate(k)
    e = mittag_leffler(nu, nu, -lam_k * s**nu).value
    return lam_k * s ** (nu - 1.0) * e


# ---------------------------------------------------------------------------
# First-passage clocks
# ---------------------------------------------------------------------------


def _fp_exponent_scale(n):
    """a(lambda) = lambda^(1/2^n) * 2^(1 - 1/2^n); n = 1 gives sqrt(2 lambda)."""
    if not (isinstance(n, int) and n >= 1):
        raise DomainError("iteration count n must be an integer >= 1")
    p = 2.0 ** (-n)
    return p, 2.0 ** (1.0 - p)


def fp_stopped_pmf(schedule, k, t, n=1):
    """Distribution of the process stopped at an n-fold iterated first-passage time."""
    _single_progenitor(schedule, "fp_stopped_pmf")
    _check_state(schedule, k)
    if t < 0:
        raise DomainError("need t >= 0")
    if t == 0.0:
        return _indicator(schedule, k)
    p, two = _fp_exponent_scale(n)
    coeffs = spectral_coeffs(schedule, k)
    return coeffs.combine(-t * two * coeffs.rates**p)


def fp_stopped_mean(schedule, t, K=None, tol=1e-10):
    """Truncated mean under the single first-passage clock.

    Linear ladders make this mean infinite (exponential growth against a
    heavy-tailed clock), surfaced as ``DivergentMeanError``.
    """
    _single_progenitor(schedule, "fp_stopped_mean")
    if schedule.is_linear:
        raise DivergentMeanError("the first-passage clock gives an infinite mean for linear rates")
    if t < 0:
        raise DomainError("need t >= 0")
    K = schedule.kmax if K is None else K
    if t == 0.0:
        return MeanValue(t, 1.0, 0, 0.0)

    def tail(s, targ, k):
        d = mean_weights(s, k)
        return 1.0 - d.combine(-targ * np.sqrt(2.0 * d.rates))

    return _mean_from_increments(t, tail, schedule, t, K, tol)


# ---------------------------------------------------------------------------
# Sojourn and bridge clocks
# ---------------------------------------------------------------------------


def sojourn_pmf(schedule, k, t):
    """Distribution at the arcsine-distributed positive sojourn time."""
    _single_progenitor(schedule, "sojourn_pmf")
    _check_state(schedule, k)
    if t < 0:
        raise DomainError("need t >= 0")
    if t == 0.0:
        return _indicator(schedule, k)
    coeffs = spectral_coeffs(schedule, k)
    logf = [math.log(bessel_i0_scaled(0.5 * t * lam_m).value) for lam_m in coeffs.rates]
    return coeffs.combine(logf)


def bridge_pmf(schedule, k, t):
    """Distribution at the bridge sojourn time (uniform clock on [0, t]).

    Continuously extended to the initial condition at t = 0.  Linear
    schedules give the logarithmic law (1 - e^{-lam t})^k / (k lam t).
    """
    _single_progenitor(schedule, "bridge_pmf")
    _check_state(schedule, k)
    if t < 0:
        raise DomainError("need t >= 0")
    if t == 0.0:
        return _indicator(schedule, k)
    if schedule.is_linear:
        lam = schedule.lam
        return math.exp(k * _log1mexp(lam * t)) / (k * lam * t)
    if k == 1:
        lam1 = schedule.rate(1)
        return -math.expm1(-lam1 * t) / (lam1 * t)
    d = mean_weights(schedule, k)
    return (1.0 - d.combine(-d.rates * t)) / (schedule.rate(k) * t)


def bridge_moments(lam, t):
    """(mean, variance) of the population at the bridge sojourn time, linear rates.

    mean = (e^{lam t} - 1) / (lam t);
    var  = e^{lam t} (e^{lam t} - 1) / (lam t) * [1 - (1 - e^{-lam t}) / (lam t)].
    """
    if not (lam > 0.0):
        raise DomainError("need lam > 0")
    if t < 0:
        raise DomainError("need t >= 0")
    if t == 0.0:
        return 1.0, 0.0
    x = lam * t
    mean = math.expm1(x) / x
    var = math.exp(x) * math.expm1(x) / x * (1.0 + math.expm1(-x) / x)
    return mean, var


# ---------------------------------------------------------------------------
# Stable clocks
# ---------------------------------------------------------------------------


def stable_stopped_pmf(schedule, alpha, k, t):
    """Distribution at the one-sided stable time: factors exp(-t lambda_m^alpha)."""
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"need 0 < alpha <= 1, got {alpha}")
    if alpha == 1.0:
        return classical_pmf(schedule, k, t)
    _single_progenitor(schedule, "stable_stopped_pmf")
    _check_state(schedule, k)
    if t < 0:
        raise DomainError("need t >= 0")
    if t == 0.0:
        return _indicator(schedule, k)
    coeffs = spectral_coeffs(schedule, k)
    return coeffs.combine(-t * coeffs.rates**alpha)


def frac_fp_pmf(schedule, nu, k, t, n=1, spec=DEFAULT_SPEC):
    """Fractional process at an n-fold iterated first-passage time.

    One-dimensional integral of the iterated-clock factors against the
    ratio-law density with exponent nu:

        (sin nu pi / pi) int_0^inf r^(nu-1) / (r^(2nu) + 2 r^nu cos nu pi + 1)
            * sum_m c_m exp(-t r^(1/2^n) lambda_m^(1/(nu 2^n)) 2^(1-1/2^n)) dr.
    """
    if not (0.0 < nu < 1.0):
        raise DomainError(f"need 0 < nu < 1, got {nu}")
    _single_progenitor(schedule, "frac_fp_pmf")
    _check_state(schedule, k)
    if t < 0:
        raise DomainError("need t >= 0")
    if t == 0.0:
        return _indicator(schedule, k)
    p, two = _fp_exponent_scale(n)
    coeffs = spectral_coeffs(schedule, k)
    lam_pow = coeffs.rates ** (p / nu)
    sin_nu = math.sin(nu * math.pi)
    cos_nu = math.cos(nu * math.pi)

    def f(r):
        rn = r**nu
        kernel = sin_nu / math.pi * r ** (nu - 1.0) / (rn * rn + 2.0 * rn * cos_nu + 1.0)
        mix = coeffs.combine(-t * two * r**p * lam_pow)
        return kernel * mix

    return quad_semi_infinite(f, spec, singular_power=nu).value


def frac_stable_pmf(schedule, nu, alpha, k, t, spec=DEFAULT_SPEC):
    """Fractional process at a stable time: weights against E exp(-t lambda_m^(alpha/nu) W).

    W follows the ratio law with indices (nu, alpha); at alpha = 1 the
    expectation collapses to E_{nu,1}(-lambda_m t^nu) and the call reduces
    exactly to the plain fractional distribution.
    """
    if not (0.0 < nu < 1.0):
        raise DomainError(f"need 0 < nu < 1, got {nu}")
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"need 0 < alpha <= 1, got {alpha}")
    if alpha == 1.0:
        return fractional_pmf(schedule, nu, k, t)
    _single_progenitor(schedule, "frac_stable_pmf")
    _check_state(schedule, k)
    if t < 0:
        raise DomainError("need t >= 0")
    if t == 0.0:
        return _indicator(schedule, k)
    coeffs = spectral_coeffs(schedule, k)
    logf = [
        math.log(_ratio_law_laplace(nu, alpha, t * lam_m ** (alpha / nu), spec))
        for lam_m in coeffs.rates
    ]
    return coeffs.combine(logf)


def _ratio_law_laplace(nu, alpha, a, spec):
    """E exp(-a W) for the ratio law with indices (nu, alpha)."""
    sin_nu = math.sin(nu * math.pi)
    cos_nu = math.cos(nu * math.pi)
    q = nu / alpha

    def f(w):
        u = w**q
        return sin_nu / (alpha * math.pi) * (u / w) / (u * u + 2.0 * u * cos_nu + 1.0) * math.exp(-a * w)

    return quad_semi_infinite(f, spec, singular_power=q, scale_hint=min(1.0, 1.0 / a)).value


def frac_t2alpha_pmf(schedule, nu, alpha, k, t):
    """Fractional process run on a second inverse-stable clock.

    The indices multiply: the distribution is exactly the fractional pmf
    of order nu * alpha.
    """
    if not (0.0 < nu <= 1.0 and 0.0 < alpha <= 1.0):
        raise DomainError("need nu, alpha in (0, 1]")
    return fractional_pmf(schedule, nu * alpha, k, t)


def stable_of_t2nu_pmf(schedule, nu, alpha, k, t):
    """Stable time composed onto the inverse-stable clock (opposite order).

    The clock expectation evaluates in closed form: weights against
    E_{nu,1}(-lambda_m^alpha t^nu).  At alpha = nu this differs in
    distribution from the same indices in the other composition order.
    """
    if not (0.0 < nu < 1.0):
        raise DomainError(f"need 0 < nu < 1, got {nu}")
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"need 0 < alpha <= 1, got {alpha}")
    _single_progenitor(schedule, "stable_of_t2nu_pmf")
    _check_state(schedule, k)
    if t < 0:
        raise DomainError("need t >= 0")
    if t == 0.0:
        return _indicator(schedule, k)
    coeffs = spectral_coeffs(schedule, k)
    logf = [
        math.log(mittag_leffler(nu, 1.0, -(lam_m**alpha) * t**nu).value)
        for lam_m in coeffs.rates
    ]
    return coeffs.combine(logf)


def cauchy_abs_pmf(schedule, k, t, scale=1.0, spec=DEFAULT_SPEC):
    """Process at the absolute value of a Cauchy time of scale ``scale * t``.

    Computed as the bare pmf mixed against the folded Cauchy density.  At
    scale sqrt(2) this matches the order-1/2 fractional process at a
    first-passage time.
    """
    _single_progenitor(schedule, "cauchy_abs_pmf")
    _check_state(schedule, k)
    if t < 0:
        raise DomainError("need t >= 0")
    if not (scale > 0.0):
        raise DomainError("need scale > 0")
    if t == 0.0:
        return _indicator(schedule, k)
    c = scale * t
    if schedule.is_linear:
        lam, n0 = schedule.lam, schedule.n0

        def base(s):
            return math.exp(
                _log_binom(k - 1, k - n0) - n0 * lam * s + (k - n0) * _log1mexp(lam * s)
            )

    else:
        coeffs = spectral_coeffs(schedule, k)

        def base(s):
            return coeffs.combine(-coeffs.rates * s)

    def f(s):
        return base(s) * folded_cauchy_density(c, s)

    return quad_semi_infinite(f, spec, scale_hint=max(c, 1.0 / schedule.rate(k))).value


def frac_fp_complex_form(schedule, nu, k, t, spec=DEFAULT_SPEC):
    """Cross-check form of ``frac_fp_pmf`` (n = 1) via complex Mittag-Leffler values.

    Valid for nu <= 1/2, where the integral converges:

        sum_m c_m (1/pi) int_0^inf
            2 Im E_{2nu,1}(x^{2nu} e^{-i pi (1-nu)}) / (x + t sqrt(2 lambda_m^(1/nu))) dx.

    Only intended as a loose (1e-3) consistency check on the real-integral
    route; the real route is the computational definition.
    """
    if not (0.0 < nu <= 0.5):
        raise DomainError("complex-form cross-check restricted to nu <= 1/2")
    _single_progenitor(schedule, "frac_fp_complex_form")
    _check_state(schedule, k)
    if t <= 0:
        raise DomainError("need t > 0")
    coeffs = spectral_coeffs(schedule, k)
    shifts = t * np.sqrt(2.0 * coeffs.rates ** (1.0 / nu))
    phase = complex(math.cos(math.pi * (1.0 - nu)), -math.sin(math.pi * (1.0 - nu)))

    total = 0.0
    for sign, log_mag, a in zip(coeffs.signs, coeffs.log_mags, shifts):
        if nu == 0.5:
            # E_{1,1} is the plain exponential; Im e^{-ix} = -sin x, and the
            # conditionally convergent sine integral is exchanged for an
            # absolutely convergent one.
            def f(u, a=a):
                return math.exp(-a * u) / (1.0 + u * u)

            part = (2.0 / math.pi) * quad_semi_infinite(f, spec, scale_hint=1.0 / max(a, 1e-6)).value
        else:

            def f(x, a=a):
                z = x ** (2.0 * nu) * phase
                im = mittag_leffler(2.0 * nu, 1.0, z).value.imag
                return -2.0 * im / (math.pi * (x + a))

            part = quad_semi_infinite(f, spec, singular_power=2.0 * nu).value
        total += sign * math.exp(log_mag) * part
    return total


# ---------------------------------------------------------------------------
# Table assembly
# ---------------------------------------------------------------------------

COMPOSITIONS = {
    "classical": (),
    "fp": ("n",),
    "fp-iterated": ("n",),
    "sojourn": (),
    "bridge": (),
    "stable": ("alpha",),
    "frac": ("nu",),
    "frac-fp": ("nu", "n"),
    "frac-stable": ("nu", "alpha"),
    "nu-of-t2alpha": ("nu", "alpha"),
    "stable-of-t2nu": ("nu", "alpha"),
    "cauchy-abs": ("scale",),
}


def pmf_value(schedule, composition, k, t, params=None):
    """Dispatch one pmf evaluation by composition name."""
    p = dict(params or {})
    if composition == "classical":
        return classical_pmf(schedule, k, t)
    if composition in ("fp", "fp-iterated"):
        return fp_stopped_pmf(schedule, k, t, n=int(p.get("n", 1)))
    if composition == "sojourn":
        return sojourn_pmf(schedule, k, t)
    if composition == "bridge":
        return bridge_pmf(schedule, k, t)
    if composition == "stable":
        return stable_stopped_pmf(schedule, p["alpha"], k, t)
    if composition == "frac":
        return fractional_pmf(schedule, p["nu"], k, t)
    if composition == "frac-fp":
        return frac_fp_pmf(schedule, p["nu"], k, t, n=int(p.get("n", 1)))
    if composition == "frac-stable":
        return frac_stable_pmf(schedule, p["nu"], p["alpha"], k, t)
    if composition == "nu-of-t2alpha":
        return frac_t2alpha_pmf(schedule, p["nu"], p["alpha"], k, t)
    if composition == "stable-of-t2nu":
        return stable_of_t2nu_pmf(schedule, p["nu"], p["alpha"], k, t)
    if composition == "cauchy-abs":
        return cauchy_abs_pmf(schedule, k, t, scale=float(p.get("scale", 1.0)))
    raise DomainError(f"unknown composition {composition!r}")


def build_pmf(schedule, composition, t, k_hi=None, params=None):
    """Assemble a truncated Pmf over states n0..k_hi with a tail estimate."""
    k_hi = schedule.kmax if k_hi is None else min(k_hi, schedule.kmax)
    probs = np.array(
        [pmf_value(schedule, composition, k, t, params) for k in range(schedule.n0, k_hi + 1)]
    )
    probs = np.clip(probs, 0.0, 1.0)
    tail = max(0.0, 1.0 - float(np.sum(probs)))
    return Pmf(t=t, n0=schedule.n0, probs=probs, tail_mass=tail, provenance=composition)


def _log1mexp(x):
    """log(1 - e^{-x}) for x > 0."""
    if x <= 0:
        raise DomainError("need x > 0")
    if x < 0.693:
        return math.log(-math.expm1(-x))
    return math.log1p(-math.exp(-x))


def _log_binom(n, k):
    from .rates import _lgamma_vec

    return float(_lgamma_vec(n + 1.0) - _lgamma_vec(k + 1.0) - _lgamma_vec(n - k + 1.0))
