"""scikit-learn compatible transformers wrapping the blending calibrations.

These let the calibrations sit inside a :class:`sklearn.pipeline.Pipeline`
and take part in ``get_params``/``set_params`` based tooling. They hold no
learned state beyond input-shape bookkeeping; ``fit`` only validates.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .distributions import FiniteDistribution
from .exceptions import DomainError
from .projection import ConstraintSet, blend
from .testing import blended_null_probability, lfdr_lower_bound, maxent_alternative

_OUTPUTS = ("blended", "lfdr_lower", "maxent")


def check_p_values(X):
    """Validate an array of p-values: finite floats in ``(0, 1]``."""
    X = check_array(X, dtype=np.float64, ensure_2d=False)
    if np.any(X <= 0) or np.any(X > 1):
        raise DomainError("p-values must lie in (0, 1]")
    return X


def _check_pi0(pi0_lower):
    if not isinstance(pi0_lower, (int, float, np.floating)) or not 0.0 <= pi0_lower <= 1.0:
        raise DomainError(f"pi0_lower must be a number in [0, 1], got {pi0_lower!r}")


class BlendedNullCalibrator(TransformerMixin, BaseEstimator):
    """Map p-values to blended posterior probabilities of the null hypothesis.

    Parameters
    ----------
    pi0_lower : float, default=0.5
        Known lower bound on the prior probability of the null.
    output : {"blended", "lfdr_lower", "maxent"}, default="blended"
        Which calibration to return: the blend ``max(p, lfdr_lower)``, the
        LFDR lower bound alone, or the uniform average ``(1 + lfdr_lower) / 2``.

    Examples
    --------
    >>> import numpy as np
    >>> cal = BlendedNullCalibrator(pi0_lower=0.0).fit(np.array([[0.05]]))
    >>> cal.transform(np.array([[0.05]]))
    array([[0.05]])
    """

    def __init__(self, pi0_lower=0.5, output="blended"):
        self.pi0_lower = pi0_lower
        self.output = output

    def _validate_params(self):
        _check_pi0(self.pi0_lower)
        if self.output not in _OUTPUTS:
            raise ValueError(f"output must be one of {_OUTPUTS}, got {self.output!r}")

    def fit(self, X, y=None):
        self._validate_params()
        X = check_p_values(X)
        self.n_features_in_ = X.shape[1] if X.ndim == 2 else 1
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        self._validate_params()
        X = check_p_values(X)
        n_features = X.shape[1] if X.ndim == 2 else 1
        if n_features != self.n_features_in_:
            raise ValueError(
                f"X has {n_features} features, but {type(self).__name__} was fitted with "
                f"{self.n_features_in_}"
            )
        pi0 = float(self.pi0_lower)
        if self.output == "blended":
            fn = lambda p: blended_null_probability(p, pi0).blended_null_prob  # noqa: E731
        elif self.output == "lfdr_lower":
            fn = lambda p: lfdr_lower_bound(p, pi0)  # noqa: E731
        else:
            fn = lambda p: maxent_alternative(p, pi0)  # noqa: E731
        return np.vectorize(fn, otypes=[np.float64])(X)


class InformationProjector(TransformerMixin, BaseEstimator):
    """Blend each row of ``X``, read as a benchmark distribution, with a box-constrained set.

    Parameters
    ----------
    lower, upper : array-like of shape (n_atoms,)
        Per-atom probability bounds describing the Bayesian posterior set.
        ``None`` means no bound (0 and 1 respectively).
    """

    def __init__(self, lower=None, upper=None):
        self.lower = lower
        self.upper = upper

    def _constraint_set(self, n_atoms):
        lower = np.zeros(n_atoms) if self.lower is None else np.asarray(self.lower, dtype=float)
        upper = np.ones(n_atoms) if self.upper is None else np.asarray(self.upper, dtype=float)
        if lower.shape != (n_atoms,) or upper.shape != (n_atoms,):
            raise ValueError(f"lower and upper must have shape ({n_atoms},)")
        return ConstraintSet(lower, upper)

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        self.n_features_in_ = X.shape[1]
        self.constraint_set_ = self._constraint_set(self.n_features_in_)
        return self

    def transform(self, X):
        check_is_fitted(self, "constraint_set_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, but {type(self).__name__} was fitted with "
                f"{self.n_features_in_}"
            )
        out = np.empty_like(X)
        for i, row in enumerate(X):
            out[i] = blend(self.constraint_set_, FiniteDistribution(row)).projection.probs
        return out
