"""Blend Bayesian posterior sets with frequentist benchmark posteriors.

The blended posterior is the information projection of a benchmark posterior
(such as a confidence posterior) onto a convex set of Bayesian posteriors. For
a point null hypothesis it reduces to the larger of the p-value and a lower
bound on the local false discovery rate.
"""

from .confidence import (
    BinaryConfidencePosterior,
    LocationModel,
    SignificanceFunction,
    confidence_interval,
    confidence_posterior_null,
    significance,
    t_cdf,
    two_sided_p,
)
from .distributions import ExtendedReal, FiniteDistribution, inferential_gain, kl_divergence
from .estimators import BlendedNullCalibrator, InformationProjector
from .exceptions import (
    BlendedInferenceError,
    DomainError,
    InfeasibleError,
    StructuralError,
    ValidationError,
)
from .projection import (
    ConstraintSet,
    GameSolution,
    ProjectionResult,
    blend,
    finite_divergence_subset,
    i_projection,
    maximin_bruteforce,
)
from .testing import (
    BlendResult,
    Regime,
    TestInput,
    blend_table,
    blended_null_probability,
    lfdr_lower_bound,
    maxent_alternative,
    sellke_bound,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryConfidencePosterior",
    "BlendResult",
    "BlendedInferenceError",
    "BlendedNullCalibrator",
    "ConstraintSet",
    "DomainError",
    "ExtendedReal",
    "FiniteDistribution",
    "GameSolution",
    "InfeasibleError",
    "InformationProjector",
    "LocationModel",
    "ProjectionResult",
    "Regime",
    "SignificanceFunction",
    "StructuralError",
    "TestInput",
    "ValidationError",
    "blend",
    "blend_table",
    "blended_null_probability",
    "confidence_interval",
    "confidence_posterior_null",
    "finite_divergence_subset",
    "i_projection",
    "inferential_gain",
    "kl_divergence",
    "lfdr_lower_bound",
    "maxent_alternative",
    "maximin_bruteforce",
    "sellke_bound",
    "significance",
    "t_cdf",
    "two_sided_p",
]
