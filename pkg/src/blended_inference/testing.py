"""Blended posterior probability of a point null hypothesis.

Given a p-value and a lower bound on the prior probability of the null, the
Bayes-factor bound ``-e p ln p`` yields a lower bound on the local false
discovery rate (the Bayesian posterior probability of the null). Blending
that bound with the p-value, read as a confidence posterior probability of
the null, gives the larger of the two.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .distributions import FiniteDistribution
from .exceptions import DomainError
from .projection import ConstraintSet

_INV_E = math.exp(-1.0)


class Regime(enum.Enum):
    FREQUENTIST_DOMINATED = "frequentist_dominated"
    BAYES_DOMINATED = "bayes_dominated"
    PRIOR_KNOWN = "prior_known"


@dataclass(frozen=True)
class TestInput:
    """A p-value together with a lower bound on the prior null probability."""

    __test__ = False  # not a pytest class

    p_value: float
    pi0_lower: float

    def __post_init__(self):
        p, pi0 = float(self.p_value), float(self.pi0_lower)
        if not 0.0 < p <= 1.0:
            raise DomainError(f"p_value must lie in (0, 1], got {self.p_value!r}")
        if not 0.0 <= pi0 <= 1.0:
            raise DomainError(f"pi0_lower must lie in [0, 1], got {self.pi0_lower!r}")
        object.__setattr__(self, "p_value", p)
        object.__setattr__(self, "pi0_lower", pi0)


@dataclass(frozen=True)
class BlendResult:
    blended_null_prob: float
    lfdr_lower: float
    bayes_factor_lower: float
    regime: Regime


def sellke_bound(p_value: float) -> float:
    """Lower bound on the Bayes factor in favour of the null.

    ``-e p ln p`` for ``p < 1/e`` and 1 otherwise; valid whenever the
    hazard rate of ``-ln p`` under the alternative is nonincreasing.

    >>> round(sellke_bound(0.05), 6)
    0.407162
    """
    p = float(p_value)
    if not 0.0 < p <= 1.0:
        raise DomainError(f"p-value must lie in (0, 1], got {p_value!r}")
    if p >= _INV_E:
        return 1.0
    return min(-math.e * p * math.log(p), 1.0)


def _as_input(input_or_p, pi0_lower=None) -> TestInput:
    if isinstance(input_or_p, TestInput):
        return input_or_p
    return TestInput(input_or_p, pi0_lower)


def lfdr_lower_bound(input: TestInput | float, pi0_lower: float | None = None) -> float:
    """Lower bound on the posterior probability of the null.

    Accepts a :class:`TestInput` or a ``(p_value, pi0_lower)`` pair.
    """
    t = _as_input(input, pi0_lower)
    b = sellke_bound(t.p_value)
    if t.pi0_lower == 0.0:
        return 0.0
    if t.pi0_lower == 1.0:
        return 1.0
    prior_weight = t.pi0_lower * b
    if prior_weight == 0.0:  # underflow; the bound tends to 0
        return 0.0
    return 1.0 / (1.0 + (1.0 - t.pi0_lower) / prior_weight)


def blended_null_probability(input: TestInput | float, pi0_lower: float | None = None) -> BlendResult:
    """Blended probability of the null: ``max(p, lfdr_lower)``."""
    t = _as_input(input, pi0_lower)
    b = sellke_bound(t.p_value)
    phi = lfdr_lower_bound(t)
    blended = max(t.p_value, phi)
    if t.pi0_lower == 1.0:
        regime = Regime.PRIOR_KNOWN
    elif t.p_value >= phi:
        regime = Regime.FREQUENTIST_DOMINATED
    else:
        regime = Regime.BAYES_DOMINATED
    return BlendResult(blended, phi, b, regime)


def maxent_alternative(input: TestInput | float, pi0_lower: float | None = None) -> float:
    """Null probability from averaging the Bayesian posteriors uniformly: ``(1 + lfdr_lower) / 2``."""
    return (1.0 + lfdr_lower_bound(_as_input(input, pi0_lower))) / 2.0


def binary_instance(input: TestInput | float, pi0_lower: float | None = None):
    """Posterior set and benchmark on ``{0: null, 1: alternative}`` for a test.

    The benchmark is the confidence posterior ``(p, 1 - p)``; the Bayesian set
    is every distribution with null mass at least the LFDR lower bound.
    """
    t = _as_input(input, pi0_lower)
    atoms = (0, 1)
    benchmark = FiniteDistribution([t.p_value, 1.0 - t.p_value], atoms)
    cset = ConstraintSet([lfdr_lower_bound(t), 0.0], [1.0, 1.0], atoms)
    return cset, benchmark


class TableRow(NamedTuple):
    p: float
    pi0_lower: float
    sellke: float
    lfdr_lower: float
    blended: float
    maxent: float


TABLE_COLUMNS = TableRow._fields


def blend_table(p_grid: Iterable[float], pi0_grid: Iterable[float]) -> list[TableRow]:
    """Cross-product table of calibrations, ``pi0_lower`` outer and ``p`` inner."""
    p_grid = list(p_grid)
    rows = []
    for pi0 in pi0_grid:
        for p in p_grid:
            try:
                res = blended_null_probability(TestInput(p, pi0))
            except DomainError as exc:
                raise DomainError(f"invalid grid point (p={p!r}, pi0_lower={pi0!r}): {exc}") from None
            rows.append(
                TableRow(
                    p=float(p),
                    pi0_lower=float(pi0),
                    sellke=res.bayes_factor_lower,
                    lfdr_lower=res.lfdr_lower,
                    blended=res.blended_null_prob,
                    maxent=(1.0 + res.lfdr_lower) / 2.0,
                )
            )
    return rows
