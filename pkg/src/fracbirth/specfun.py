"""Special functions and probability densities used by the birth-process formulas.

Everything here is self-contained: the gamma function is a Lanczos
approximation with reflection, the Mittag-Leffler function switches between
its power series and a spectral (Bromwich-cut) integral, and the one-sided
stable density is evaluated through a single Zolotarev-type integral.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError, NonConvergenceError
from .quadrature import DEFAULT_SPEC, SpecialValue, quad_adaptive, quad_semi_infinite

__all__ = [
    "SpecialValue",
    "DensityPoint",
    "gamma_fn",
    "lgamma_fn",
    "rgamma",
    "mittag_leffler",
    "wright_neg",
    "bessel_i0",
    "bessel_i0_scaled",
    "exp_integral_e1",
    "levy_fp_density",
    "stable_density",
    "lamperti_density",
    "lamperti_cdf",
    "folded_cauchy_density",
    "inverse_gaussian_density",
    "iterated_clock_mixing_density",
]


@dataclass(frozen=True)
class DensityPoint:
    """One evaluation of a transition density q(t, s)."""

    t: float
    s: float
    value: float

    def __post_init__(self):
        if not (self.t > 0 and self.s > 0):
            raise DomainError("density points need t > 0 and s > 0")
        if not (self.value >= 0.0):
            raise DomainError(f"density value must be >= 0, got {self.value!r}")


# ---------------------------------------------------------------------------
# Gamma: Lanczos approximation (g = 7, 9 terms), reflected for x < 1/2.
# ---------------------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_log(x):
    """log Gamma(x) for x >= 0.5 via the Lanczos sum."""
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (x - 1.0 + i)
    t = x + _LANCZOS_G - 0.5
    return _LOG_SQRT_2PI + (x - 0.5) * math.log(t) - t + math.log(acc)


def lgamma_fn(x):
    """(log |Gamma(x)|, sign) for real non-pole x; (inf, 0) at poles."""
    if x >= 0.5:
        return _lanczos_log(x), 1.0
    # Reflection: Gamma(x) = pi / (sin(pi x) Gamma(1 - x)).
    if x == math.floor(x):
        return math.inf, 0.0
    s = math.sin(math.pi * x)
    lg = math.log(math.pi) - math.log(abs(s)) - _lanczos_log(1.0 - x)
    return lg, math.copysign(1.0, s)


def gamma_fn(x):
    """Gamma(x) for real x off the non-positive integers."""
    lg, sign = lgamma_fn(x)
    if sign == 0.0:
        raise DomainError(f"gamma pole at x={x}")
    return sign * math.exp(lg)


def rgamma(x):
    """1 / Gamma(x); zero at the poles x = 0, -1, -2, ..."""
    lg, sign = lgamma_fn(x)
    if sign == 0.0:
        return 0.0
    return sign * math.exp(-lg)


# ---------------------------------------------------------------------------
# Mittag-Leffler E_{nu,gamma}
# ---------------------------------------------------------------------------

# Each series term computed as exp(h log|x| - lgamma) carries ~5e-14
# absolute error relative to the peak term, so capping the peak at e^11
# keeps the alternating-sum round-off near 3e-9.
_ML_SERIES_LOG_PEAK = 11.0
_ML_MAX_TERMS = 20000


def _ml_series_real(nu, gam, x):
    """Power series sum_h x^h / Gamma(nu h + gam) with a tail bound."""
    lx = math.log(abs(x)) if x != 0.0 else -math.inf
    neg = x < 0.0
    terms = []
    peak = 0.0
    prev_mag = math.inf
    h = 0
    while h < _ML_MAX_TERMS:
        lg, _ = lgamma_fn(nu * h + gam)
        mag = math.exp(h * lx - lg)
        terms.append(-mag if (neg and h % 2 == 1) else mag)
        peak = max(peak, mag)
        if mag < prev_mag and h > 0:
            ratio = mag / prev_mag
            if ratio < 0.5 and mag <= 1e-17 * (abs(math.fsum(terms)) + 1e-300):
                break
        prev_mag = mag
        h += 1
    else:
        raise NonConvergenceError("Mittag-Leffler series did not terminate")
    value = math.fsum(terms)
    tail = 2.0 * mag
    cancel = peak * 1e-15 if neg else abs(value) * 1e-15
    return value, tail + cancel


def _ml_series_peak_log(nu, gam, q):
    """Rough log of the largest series term for argument magnitude q."""
    if q <= 1.0:
        return 0.0
    h_star = max(1.0, q ** (1.0 / nu) / nu)
    best = 0.0
    for h in (0.5 * h_star, h_star, 1.5 * h_star):
        lg, _ = lgamma_fn(nu * h + gam)
        best = max(best, h * math.log(q) - lg)
    return best


def _ml_spectral_kernel(nu, gam, r):
    """Spectral density on the Bromwich cut for E_{nu,gam}(-q), 0 < nu < 1."""
    rn = r**nu
    den = rn * rn + 2.0 * rn * math.cos(nu * math.pi) + 1.0
    num = rn * math.sin(gam * math.pi) + math.sin((gam - nu) * math.pi)
    return r ** (nu - gam) * num / (den * math.pi)


def _ml_negative_quad(nu, gam, q, spec):
    """E_{nu,gam}(-q) by integrating e^{-r q^(1/nu)} against the cut density.

    Valid for 0 < nu < 1 and 0 < gam < 1 + nu, which covers the gam = 1
    state-probability case and the gam = nu waiting-time case.
    """
    if not (0.0 < gam < 1.0 + nu):
        raise DomainError("spectral path needs 0 < gamma < 1 + nu")
    scale = q ** (1.0 / nu)
    if abs(math.sin((gam - nu) * math.pi)) > 1e-14:
        power = nu - gam + 1.0
    else:
        power = 2.0 * nu - gam + 1.0

    def f(r):
        return math.exp(-r * scale) * _ml_spectral_kernel(nu, gam, r)

    est = quad_semi_infinite(f, spec, singular_power=power, scale_hint=1.0 / scale)
    prefactor = q ** ((1.0 - gam) / nu)
    return prefactor * est.value, prefactor * max(est.abs_err_estimate, 5e-11 * abs(est.value))


def _ml_series_complex(nu, gam, z):
    lz = cmath.log(z)
    re_terms, im_terms = [], []
    peak = 0.0
    prev_mag = math.inf
    h = 0
    while h < _ML_MAX_TERMS:
        lg, _ = lgamma_fn(nu * h + gam)
        term = cmath.exp(h * lz - lg)
        re_terms.append(term.real)
        im_terms.append(term.imag)
        mag = abs(term)
        peak = max(peak, mag)
        if h > 0 and mag < prev_mag and mag / prev_mag < 0.5 and mag < 1e-17 * (peak + 1e-300):
            break
        prev_mag = mag
        h += 1
    else:
        raise NonConvergenceError("complex Mittag-Leffler series did not terminate")
    value = complex(math.fsum(re_terms), math.fsum(im_terms))
    return value, 2.0 * mag + peak * 1e-15


def _ml_asymptotic_complex(nu, gam, z):
    """Algebraic large-|z| expansion, valid outside the exponential sector."""
    if abs(cmath.phase(z)) <= nu * math.pi + 0.05:
        raise NonConvergenceError("argument inside the exponential sector")
    acc = 0.0 + 0.0j
    last = math.inf
    zk = 1.0 + 0.0j
    for k in range(1, 45):
        zk /= z
        rg = rgamma(gam - nu * k)
        if rg == 0.0:
            continue  # reciprocal-gamma pole: the term vanishes identically
        term = zk * rg
        if abs(term) > last:
            break
        acc -= term
        last = abs(term)
    return acc, 2.0 * last + abs(acc) * 1e-15


def mittag_leffler(nu, gam, x, spec=DEFAULT_SPEC):
    """Evaluate the two-parameter Mittag-Leffler function E_{nu,gam}(x).

    Parameters
    ----------
    nu : float in (0, 1]
    gam : float > 0
    x : float or complex
        Real arguments of either sign are fully supported.  Complex
        arguments are supported through the power series (moderate |x|)
        and the algebraic asymptotic expansion outside the exponential
        sector.

    Returns
    -------
    SpecialValue
        ``value`` is float for real input, complex otherwise.

    Notes
    -----
    Route selection for real negative arguments is by the size of the
    largest series term rather than a fixed cutoff on |x|: the peak grows
    like exp(nu |x|^(1/nu)), so a fixed cutoff is far too permissive for
    small nu.
    """
    if not (0.0 < nu <= 1.0):
        raise DomainError(f"need 0 < nu <= 1, got {nu}")
    if not (gam > 0.0):
        raise DomainError(f"need gamma > 0, got {gam}")

    if isinstance(x, complex) and x.imag != 0.0:
        if nu == 1.0 and gam == 1.0:
            v = cmath.exp(x)
            return SpecialValue(v, abs(v) * 1e-15)
        if _ml_series_peak_log(nu, gam, abs(x)) <= _ML_SERIES_LOG_PEAK:
            v, e = _ml_series_complex(nu, gam, x)
            return SpecialValue(v, e)
        v, e = _ml_asymptotic_complex(nu, gam, x)
        return SpecialValue(v, e)

    x = float(x.real) if isinstance(x, complex) else float(x)
    if x == 0.0:
        return SpecialValue(rgamma(gam), 1e-16)
    if nu == 1.0 and gam == 1.0:
        v = math.exp(x)
        return SpecialValue(v, v * 1e-15)
    if x > 0.0 or _ml_series_peak_log(nu, gam, abs(x)) <= _ML_SERIES_LOG_PEAK:
        # Positive arguments carry no cancellation at any size.
        v, e = _ml_series_real(nu, gam, x)
        return SpecialValue(v, e)
    if nu == 1.0:
        # No spectral cut at nu = 1; fall back to the (lossier) series.
        v, e = _ml_series_real(nu, gam, x)
        return SpecialValue(v, e)
    v, e = _ml_negative_quad(nu, gam, -x, spec)
    return SpecialValue(v, e)


# ---------------------------------------------------------------------------
# Wright function W_{-nu,1-nu}(-xi): the inverse-clock density kernel.
# ---------------------------------------------------------------------------

# Several terms sit near the peak, each with ~1e-13 relative round-off;
# capping the peak at 3e4 keeps the summed error near 1e-8 absolute.
_WRIGHT_PEAK_LIMIT = 3e4


class _SeriesPeakExceeded(Exception):
    """Internal: the running peak term left the cancellation budget."""


def _wright_series(nu, xi):
    # Term magnitudes are not monotone: Gamma(1 - nu(r+1)) sweeps through
    # poles, so single small terms are dips, not the tail.  Stop only after
    # several consecutive negligible terms.
    lx = math.log(xi)
    terms = []
    peak = 0.0
    tiny_run = 0
    recent = [math.inf] * 4
    r = 0
    while r < _ML_MAX_TERMS:
        lgf, _ = lgamma_fn(r + 1.0)
        lgg, sign = lgamma_fn(1.0 - nu * (r + 1.0))
        if sign == 0.0:
            mag = 0.0
        else:
            mag = math.exp(r * lx - lgf - lgg)
            terms.append(sign * mag if r % 2 == 0 else -sign * mag)
        peak = max(peak, mag)
        if peak > _WRIGHT_PEAK_LIMIT:
            raise _SeriesPeakExceeded
        recent[r % 4] = mag
        if mag < 1e-17 * (peak + 1e-300) and r > 5:
            tiny_run += 1
            if tiny_run >= 4:
                break
        else:
            tiny_run = 0
        r += 1
    else:
        raise NonConvergenceError("Wright series did not terminate")
    value = math.fsum(terms)
    tail = 2.0 * max(m for m in recent if math.isfinite(m))
    return value, tail + peak * 1e-15


def wright_neg(nu, xi, spec=DEFAULT_SPEC):
    """W_{-nu,1-nu}(-xi) = sum_r (-xi)^r / (r! Gamma(1 - nu(r+1))), xi >= 0.

    This is the probability density (in xi) of the unit-time inverse
    stable clock.  Large arguments are routed through the stable density
    via the hitting-time relation, where the series would cancel
    catastrophically.
    """
    if not (0.0 < nu < 1.0):
        raise DomainError(f"need 0 < nu < 1, got {nu}")
    if xi < 0.0:
        raise DomainError("need xi >= 0")
    if xi == 0.0:
        return SpecialValue(rgamma(1.0 - nu), 1e-16)
    try:
        v, e = _wright_series(nu, xi)
        return SpecialValue(v, e)
    except _SeriesPeakExceeded:
        pass
    # Hitting-time inversion: the xi-density equals q_nu(xi, 1) / (nu xi),
    # with q_nu the one-sided stable density run to "time" xi.
    q = stable_density(nu, xi, 1.0, spec)
    return SpecialValue(q.value / (nu * xi), max(1e-10, 1e-8 * q.value) / (nu * xi))


# ---------------------------------------------------------------------------
# Bessel I0 and the exponential integral
# ---------------------------------------------------------------------------


def bessel_i0(z):
    """I0(z) = sum_k (z/2)^(2k) / (k!)^2 for z >= 0."""
    if z < 0.0:
        raise DomainError("need z >= 0")
    sv = bessel_i0_scaled(z)
    v = sv.value * math.exp(z)
    return SpecialValue(v, max(sv.abs_err_estimate * math.exp(z), v * 1e-15))


def bessel_i0_scaled(z):
    """e^{-z} I0(z); stays bounded for large z."""
    if z < 0.0:
        raise DomainError("need z >= 0")
    if z < 15.0:
        term = 1.0
        acc = [1.0]
        k = 0
        q = 0.25 * z * z
        while term > 1e-18 * math.fsum(acc):
            k += 1
            term *= q / (k * k)
            acc.append(term)
        v = math.fsum(acc) * math.exp(-z)
        return SpecialValue(v, v * 1e-14)
    # Asymptotic series I0(z) ~ e^z / sqrt(2 pi z) * sum_k c_k, truncated
    # at its smallest term.
    acc = 1.0
    term = 1.0
    last = 1.0
    for k in range(1, 14):
        term *= (2 * k - 1) ** 2 / (8.0 * k * z)
        if term > last:
            break
        acc += term
        last = term
    v = acc / math.sqrt(2.0 * math.pi * z)
    return SpecialValue(v, v * 1e-13 + last / math.sqrt(2.0 * math.pi * z))


_EULER_GAMMA = 0.5772156649015328606


def exp_integral_e1(z):
    """Exponential integral E1(z) on the principal branch, |arg z| < pi.

    Accepts real z > 0 or complex z off the branch cut.  Uses the standard
    series for moderate |z| and a continued fraction otherwise.
    """
    zc = complex(z)
    if zc == 0:
        raise DomainError("E1 undefined at z = 0")
    if zc.imag == 0.0 and zc.real < 0.0:
        raise DomainError("E1 branch cut along the negative real axis")
    if abs(zc) <= 9.0:
        # E1(z) = -euler_gamma - log z + sum_{k>=1} (-1)^(k+1) z^k / (k k!)
        term = 1.0 + 0.0j
        re_t, im_t = [], []
        peak = 0.0
        for k in range(1, 400):
            term *= -zc / k
            contrib = -term / k
            re_t.append(contrib.real)
            im_t.append(contrib.imag)
            peak = max(peak, abs(contrib))
            if abs(contrib) < 1e-18 * (peak + 1e-300):
                break
        v = -_EULER_GAMMA - cmath.log(zc) + complex(math.fsum(re_t), math.fsum(im_t))
        err = peak * 1e-15 + abs(term)
    else:
        # Modified Lentz on E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(...))).
        tiny = 1e-30
        b = zc + 1.0
        c = 1.0 / tiny
        d = 1.0 / b
        h = d
        for i in range(1, 300):
            a = -float(i * i)
            b += 2.0
            d = b + a * d
            if d == 0:
                d = tiny
            c = b + a / c
            if c == 0:
                c = tiny
            d = 1.0 / d
            delta = d * c
            h *= delta
            if abs(delta - 1.0) < 1e-15:
                break
        else:
            raise NonConvergenceError("E1 continued fraction stalled")
        v = h * cmath.exp(-zc)
        err = abs(v) * 1e-13
    if isinstance(z, complex):
        return SpecialValue(v, err)
    return SpecialValue(v.real, err)


# ---------------------------------------------------------------------------
# Densities of the random clocks
# ---------------------------------------------------------------------------


def levy_fp_density(t, s):
    """Density of the Brownian first-passage time through level t.

    q(t, s) = t exp(-t^2 / 2s) / sqrt(2 pi s^3).
    """
    if not (t > 0 and s > 0):
        raise DomainError("need t > 0 and s > 0")
    log_v = math.log(t) - t * t / (2.0 * s) - 1.5 * math.log(s) - _LOG_SQRT_2PI
    return DensityPoint(t, s, math.exp(log_v) if log_v > -700.0 else 0.0)


def _stable_log_a(alpha, theta):
    """log of Zolotarev's auxiliary function A(theta) on (0, pi)."""
    frac = alpha / (1.0 - alpha)
    return (
        frac * math.log(math.sin(alpha * theta))
        + math.log(math.sin((1.0 - alpha) * theta))
        - (1.0 + frac) * math.log(math.sin(theta))
    )


def _stable_series_tail(alpha, x):
    """Convergent large-x series for the standardised one-sided density.

    q_alpha(1, x) = (1/pi) sum_{k>=1} (-1)^(k+1) Gamma(k alpha + 1) / k!
                    * sin(k pi alpha) * x^(-k alpha - 1).

    Raises ``_SeriesPeakExceeded`` when the leading terms grow (small x),
    in which case the Zolotarev integral takes over.
    """
    lx = math.log(x)
    terms = []
    peak = 0.0
    k = 1
    while k < 400:
        lgn, _ = lgamma_fn(k * alpha + 1.0)
        lgk, _ = lgamma_fn(k + 1.0)
        mag = math.exp(lgn - lgk - (k * alpha + 1.0) * lx)
        term = mag * math.sin(k * math.pi * alpha) / math.pi
        terms.append(term if k % 2 == 1 else -term)
        peak = max(peak, mag)
        if peak > 1e9 * (abs(terms[0]) + 1e-300):
            raise _SeriesPeakExceeded
        if mag < 1e-17 * peak:
            break
        k += 1
    else:
        raise _SeriesPeakExceeded
    return max(math.fsum(terms), 0.0)


def stable_density(alpha, t, s, spec=DEFAULT_SPEC):
    """Density q_alpha(t, s) of the one-sided stable clock.

    Normalised by its Laplace transform exp(-t mu^alpha).  Evaluated from
    the single-integral Zolotarev representation,

        q_alpha(1, x) = alpha / ((1-alpha) pi) x^(-1/(1-alpha))
                        * int_0^pi A(th) exp(-A(th) x^(-alpha/(1-alpha))) dth,

    with the closed Levy form short-circuited at alpha = 1/2 and
    self-similar scaling q_alpha(t, s) = t^(-1/alpha) q_alpha(1, s t^(-1/alpha)).
    """
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"need 0 < alpha < 1, got {alpha}")
    if not (t > 0 and s > 0):
        raise DomainError("need t > 0 and s > 0")
    if alpha == 0.5:
        log_v = math.log(t) - t * t / (4.0 * s) - 1.5 * math.log(s) - math.log(2.0) - 0.5 * math.log(math.pi)
        return DensityPoint(t, s, math.exp(log_v) if log_v > -700.0 else 0.0)
    scale = t ** (-1.0 / alpha)
    x = s * scale
    if x >= 2.0:
        # The algebraic-tail series converges quickly out here, where the
        # Zolotarev boundary layer would be unresolvable in doubles.
        try:
            return DensityPoint(t, s, _stable_series_tail(alpha, x) * scale)
        except _SeriesPeakExceeded:
            pass
    c = x ** (-alpha / (1.0 - alpha))

    def f(theta):
        la = _stable_log_a(alpha, theta)
        arg = la - math.exp(la) * c if la < 700.0 else -math.inf
        return math.exp(arg) if arg > -700.0 else 0.0

    est = quad_adaptive(f, 1e-12, math.pi - 1e-12, spec)
    if est.value <= 0.0:
        return DensityPoint(t, s, 0.0)
    # Assemble in logs: the x power overflows exactly where the integral
    # underflows, and their product is a far-tail density value near zero.
    log_v = (
        math.log(alpha / ((1.0 - alpha) * math.pi))
        - math.log(x) / (1.0 - alpha)
        + math.log(est.value)
        + math.log(scale)
    )
    return DensityPoint(t, s, math.exp(log_v) if log_v > -700.0 else 0.0)


def lamperti_density(nu, alpha, w):
    """Density of the two-sided stable ratio raised to alpha.

    f(w) = sin(nu pi) / (alpha pi) * w^(nu/alpha - 1)
           / (w^(2 nu/alpha) + 2 w^(nu/alpha) cos(nu pi) + 1).
    """
    if not (0.0 < nu < 1.0):
        raise DomainError(f"need 0 < nu < 1, got {nu}")
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"need 0 < alpha <= 1, got {alpha}")
    if not (w > 0.0):
        raise DomainError("need w > 0")
    u = w ** (nu / alpha)
    v = math.sin(nu * math.pi) / (alpha * math.pi) * (u / w) / (u * u + 2.0 * u * math.cos(nu * math.pi) + 1.0)
    return DensityPoint(1.0, w, v)


def lamperti_cdf(nu, alpha, w):
    """Closed-form CDF of the Lamperti ratio law (for distribution tests)."""
    if w <= 0.0:
        return 0.0
    u = w ** (nu / alpha)
    s = math.sin(nu * math.pi)
    return (math.atan((u + math.cos(nu * math.pi)) / s) - 0.5 * math.pi + nu * math.pi) / (nu * math.pi)


def folded_cauchy_density(scale, w):
    """Density of |C| for a Cauchy variable C with the given scale."""
    if not (scale > 0.0) or not (w >= 0.0):
        raise DomainError("need scale > 0 and w >= 0")
    return (2.0 / math.pi) * scale / (w * w + scale * scale)


def inverse_gaussian_density(theta):
    """Density exp(-1/(2 theta)) / sqrt(2 pi theta^3) of the random-rate mixer."""
    if not (theta > 0.0):
        raise DomainError("need theta > 0")
    log_v = -0.5 / theta - 1.5 * math.log(theta) - _LOG_SQRT_2PI
    return math.exp(log_v) if log_v > -700.0 else 0.0


def iterated_clock_mixing_density(n, r):
    """Mixing density of the n-fold first-passage clock at dyadic order.

    f(r) = (sin(pi/2^n) / (pi/2^n)) / (r^2 + 2 r cos(pi/2^n) + 1); tends to
    1/(1+r)^2 as n grows.
    """
    if n < 1:
        raise DomainError("need n >= 1")
    if not (r > 0.0):
        raise DomainError("need r > 0")
    ang = math.pi / 2.0**n
    return (math.sin(ang) / ang) / (r * r + 2.0 * r * math.cos(ang) + 1.0)
