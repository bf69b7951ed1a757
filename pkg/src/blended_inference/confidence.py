"""Significance functions and confidence posteriors for a Student-t location model."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import FiniteDistribution
from .exceptions import DomainError

_CF_TOL = 1e-14
_CF_MAX_ITER = 300
_TINY = 1e-300


class UnboundedEndpointError(DomainError):
    """Requested confidence level 0 or 1, whose quantile is infinite."""


def _beta_cf(a: float, b: float, x: float) -> float:
    # Modified Lentz evaluation of the incomplete beta continued fraction.
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_TOL:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def _log_beta(a: float, b: float) -> float:
    # ln B(a, b); for a large argument the lgamma difference is formed from a
    # Stirling series so the two O(a ln a) terms never cancel numerically.
    big, small = max(a, b), min(a, b)
    if big < 100.0:
        return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
    s = big + small
    ratio = (big - 0.5) * math.log1p(small / big) + small * math.log(s) - small
    ratio += (1.0 / s - 1.0 / big) / 12.0
    ratio -= (1.0 / s**3 - 1.0 / big**3) / 360.0
    ratio += (1.0 / s**5 - 1.0 / big**5) / 1260.0
    return math.lgamma(small) - ratio


def betainc_regularized(a: float, b: float, x: float, one_minus_x: float | None = None) -> float:
    """Regularized incomplete beta function ``I_x(a, b)``.

    ``one_minus_x`` may be supplied when ``1 - x`` is known more accurately
    than the subtraction would give.
    """
    if a <= 0 or b <= 0:
        raise DomainError("shape parameters must be positive")
    y = 1.0 - x if one_minus_x is None else one_minus_x
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_x = math.log1p(-y) if y < 0.5 else math.log(x)
    log_y = math.log1p(-x) if x < 0.5 else math.log(y)
    log_front = a * log_x + b * log_y - _log_beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_cf(a, b, x) / a
    return 1.0 - math.exp(log_front) * _beta_cf(b, a, y) / b


def t_cdf(t: float, df: float) -> float:
    """Cumulative distribution function of Student's t with ``df`` degrees of freedom.

    Non-integer ``df`` is allowed. Infinite ``t`` maps to 0 or 1.
    """
    if not df > 0:
        raise DomainError(f"df must be positive, got {df!r}")
    if math.isnan(t):
        raise DomainError("t must not be NaN")
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    t2 = t * t
    # lower tail of |t|: 0.5 * I_{df/(df+t^2)}(df/2, 1/2)
    tail = 0.5 * betainc_regularized(0.5 * df, 0.5, df / (df + t2), t2 / (df + t2))
    return 1.0 - tail if t > 0 else tail


@dataclass(frozen=True)
class LocationModel:
    """Estimate, standard error and degrees of freedom of a t-distributed pivot."""

    estimate: float
    std_error: float
    df: float

    def __post_init__(self):
        if not math.isfinite(self.estimate):
            raise DomainError("estimate must be finite")
        if not self.std_error > 0 or not math.isfinite(self.std_error):
            raise DomainError(f"std_error must be positive, got {self.std_error!r}")
        if not self.df > 0:
            raise DomainError(f"df must be positive, got {self.df!r}")

    @property
    def t_ratio(self) -> float:
        return self.estimate / self.std_error


@dataclass(frozen=True)
class SignificanceFunction:
    """``S(theta; x)``: the confidence distribution function of the location parameter."""

    model: LocationModel

    def __call__(self, theta: float) -> float:
        return significance(self, theta)

    def inverse(self, level: float) -> float:
        return _quantile(self, level)


@dataclass(frozen=True)
class BinaryConfidencePosterior:
    null_prob: float
    alt_prob: float

    def as_distribution(self) -> FiniteDistribution:
        """The posterior on ``{0: null, 1: alternative}``."""
        return FiniteDistribution([self.null_prob, self.alt_prob], atoms=(0, 1))


def significance(sf: SignificanceFunction, theta: float) -> float:
    m = sf.model
    if math.isinf(theta):
        return 1.0 if theta > 0 else 0.0
    return t_cdf((theta - m.estimate) / m.std_error, m.df)


def _quantile(sf: SignificanceFunction, level: float, tol: float = 1e-12) -> float:
    m = sf.model
    if not 0.0 < level < 1.0:
        raise UnboundedEndpointError(f"level {level!r} has an unbounded quantile")
    if level == 0.5:
        return m.estimate
    # invert the standardized CDF so the tolerance is in std_error units
    lo, hi = -10.0, 10.0
    while t_cdf(lo, m.df) > level:
        lo *= 2
    while t_cdf(hi, m.df) < level:
        hi *= 2
    while hi - lo > tol * max(1.0, abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if t_cdf(mid, m.df) < level:
            lo = mid
        else:
            hi = mid
    return m.estimate + m.std_error * 0.5 * (lo + hi)


def confidence_interval(sf: SignificanceFunction, alpha: float, beta: float) -> tuple[float, float]:
    """``[S^{-1}(alpha), S^{-1}(beta)]``, a ``(beta - alpha)`` confidence interval."""
    if not 0.0 <= alpha <= beta <= 1.0:
        raise DomainError(f"need 0 <= alpha <= beta <= 1, got alpha={alpha!r}, beta={beta!r}")
    return _quantile(sf, alpha), _quantile(sf, beta)


def two_sided_p(model: LocationModel) -> float:
    """Two-sided p-value for ``theta = 0``, i.e. ``2 * (1 - T(|estimate| / std_error))``."""
    return min(1.0, 2.0 * t_cdf(-abs(model.t_ratio), model.df))


def confidence_posterior_null(model: LocationModel) -> BinaryConfidencePosterior:
    """Confidence posterior on null/alternative; its null mass is the two-sided p-value."""
    p = two_sided_p(model)
    return BinaryConfidencePosterior(null_prob=p, alt_prob=1.0 - p)
