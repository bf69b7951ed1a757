import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from blended_inference.estimators import BlendedNullCalibrator, InformationProjector
from blended_inference.exceptions import DomainError
from blended_inference.testing import blended_null_probability, lfdr_lower_bound, maxent_alternative


class TestBlendedNullCalibrator:
    def test_get_set_params(self):
        cal = BlendedNullCalibrator(pi0_lower=0.2)
        assert cal.get_params() == {"pi0_lower": 0.2, "output": "blended"}
        cal.set_params(output="maxent")
        assert clone(cal).output == "maxent"

    @pytest.mark.parametrize(
        "output, fn",
        [
            ("blended", lambda p, pi0: blended_null_probability(p, pi0).blended_null_prob),
            ("lfdr_lower", lfdr_lower_bound),
            ("maxent", maxent_alternative),
        ],
    )
    def test_matches_scalar_functions(self, rng, output, fn):
        X = rng.uniform(1e-6, 1, size=(40, 3))
        got = BlendedNullCalibrator(0.3, output).fit_transform(X)
        want = np.vectorize(lambda p: fn(p, 0.3))(X)
        np.testing.assert_array_equal(got, want)

    def test_one_dimensional(self):
        out = BlendedNullCalibrator(0.0).fit(np.array([0.2])).transform(np.array([0.05, 0.5]))
        np.testing.assert_array_equal(out, [0.05, 0.5])

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            BlendedNullCalibrator().transform(np.array([[0.5]]))

    def test_rejects_bad_p(self):
        with pytest.raises(DomainError):
            BlendedNullCalibrator().fit(np.array([[0.0]]))

    def test_rejects_bad_params(self):
        with pytest.raises(DomainError):
            BlendedNullCalibrator(pi0_lower=1.5).fit(np.array([[0.5]]))
        with pytest.raises(ValueError):
            BlendedNullCalibrator(output="nope").fit(np.array([[0.5]]))

    def test_feature_count_checked(self):
        cal = BlendedNullCalibrator().fit(np.full((2, 2), 0.5))
        with pytest.raises(ValueError, match="features"):
            cal.transform(np.full((2, 3), 0.5))

    def test_in_pipeline(self):
        pipe = make_pipeline(BlendedNullCalibrator(pi0_lower=1.0))
        np.testing.assert_array_equal(pipe.fit_transform(np.array([[0.01], [0.9]])), [[1.0], [1.0]])


class TestInformationProjector:
    def test_rows_projected(self):
        X = np.array([[0.05, 0.95], [0.5, 0.5]])
        phi = lfdr_lower_bound(0.05, 0.5)
        out = InformationProjector(lower=[phi, 0]).fit_transform(X)
        assert out[0, 0] == phi
        np.testing.assert_array_equal(out[1], [0.5, 0.5])

    def test_default_unconstrained_is_identity(self, rng):
        X = rng.dirichlet(np.ones(4), size=10)
        np.testing.assert_array_equal(InformationProjector().fit_transform(X), X)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            InformationProjector(lower=[0, 0, 0]).fit(np.array([[0.5, 0.5]]))
