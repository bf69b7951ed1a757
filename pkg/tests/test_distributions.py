import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blended_inference.distributions import (
    INDETERMINATE,
    NEG_INF,
    POS_INF,
    ExtendedReal,
    FiniteDistribution,
    inferential_gain,
    kl_divergence,
)
from blended_inference.exceptions import StructuralError, ValidationError

from oracles import mp_kl

# frozen from mp_kl at 40 digits
KL_POINT_MASS_VS_UNIFORM = 0.6931471805599453
KL_03_VS_005 = 0.3237606860825892


def test_oracle_values_frozen():
    assert float(mp_kl([1, 0], [0.5, 0.5])) == pytest.approx(KL_POINT_MASS_VS_UNIFORM, abs=1e-15)
    assert float(mp_kl(["0.3", "0.7"], ["0.05", "0.95"])) == pytest.approx(KL_03_VS_005, abs=1e-15)


class TestFiniteDistribution:
    def test_valid(self):
        d = FiniteDistribution([0.25, 0.75], atoms=("a", "b"))
        assert d["b"] == 0.75
        assert d.support() == ("a", "b")
        assert len(d) == 2

    def test_default_atoms(self):
        assert FiniteDistribution([1.0]).atoms == (0,)

    def test_tiny_deviation_accepted_unchanged(self):
        d = FiniteDistribution([0.5, 0.5 + 5e-13])
        assert d.probs == (0.5, 0.5 + 5e-13)

    @pytest.mark.parametrize(
        "probs, atoms",
        [
            ([0.5, 0.6], None),
            ([-0.1, 1.1], None),
            ([0.5, 0.5], ("x", "x")),
            ([0.5, 0.5], ("x",)),
            ([], None),
            ([float("nan"), 1.0], None),
        ],
    )
    def test_invalid(self, probs, atoms):
        with pytest.raises(ValidationError):
            FiniteDistribution(probs, atoms)

    def test_immutable(self):
        d = FiniteDistribution([0.5, 0.5])
        with pytest.raises(AttributeError):
            d.probs = (1.0, 0.0)


class TestExtendedReal:
    def test_subtraction_table(self):
        one = ExtendedReal(1.0)
        assert (one - ExtendedReal(0.25)) == ExtendedReal(0.75)
        assert (POS_INF - one) == POS_INF
        assert (one - POS_INF) == NEG_INF
        assert (POS_INF - NEG_INF) == POS_INF
        assert (POS_INF - POS_INF).is_indeterminate
        assert (NEG_INF - NEG_INF).is_indeterminate
        assert (INDETERMINATE - one).is_indeterminate

    def test_ordering(self):
        assert ExtendedReal(3.0) < POS_INF
        assert NEG_INF < ExtendedReal(-1e300)
        with pytest.raises(TypeError):
            INDETERMINATE < POS_INF

    def test_float_conversion(self):
        assert float(POS_INF) == math.inf
        assert math.isnan(float(INDETERMINATE))

    def test_finite_rejects_inf(self):
        with pytest.raises(ValueError):
            ExtendedReal.finite(math.inf)


class TestKLDivergence:
    def test_identity(self):
        p = FiniteDistribution([0.3, 0.7])
        assert kl_divergence(p, p) == ExtendedReal(0.0)

    def test_point_mass_vs_uniform(self):
        d = kl_divergence(FiniteDistribution([1, 0]), FiniteDistribution([0.5, 0.5]))
        assert d.value == pytest.approx(KL_POINT_MASS_VS_UNIFORM, abs=1e-15)

    def test_support_violation(self):
        d = kl_divergence(FiniteDistribution([0.5, 0.5]), FiniteDistribution([1, 0]))
        assert d == POS_INF

    def test_mismatched_atoms(self):
        with pytest.raises(StructuralError):
            kl_divergence(FiniteDistribution([1, 0], "ab"), FiniteDistribution([1, 0], "ba"))

    def test_continuity_at_zero_mass(self):
        q = FiniteDistribution([0.2, 0.3, 0.5])
        limit = kl_divergence(FiniteDistribution([0.0, 0.4, 0.6]), q).value
        for eps in (1e-4, 1e-6, 1e-9, 1e-12):
            near = kl_divergence(FiniteDistribution([eps, 0.4 - eps / 2, 0.6 - eps / 2]), q).value
            assert abs(near - limit) < 50 * eps * (1 + abs(math.log(eps)))

    def test_matches_mpmath(self, rng):
        for _ in range(200):
            n = rng.integers(2, 6)
            p, q = rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(n))
            got = kl_divergence(FiniteDistribution(p), FiniteDistribution(q)).value
            assert got == pytest.approx(float(mp_kl(p, q)), rel=1e-12, abs=1e-14)


class TestInferentialGain:
    def test_all_equal(self):
        p = FiniteDistribution([0.3, 0.7])
        assert inferential_gain(p, p, p) == ExtendedReal(0.0)

    def test_report_p_against_benchmark(self):
        p = FiniteDistribution([0.3, 0.7])
        g = inferential_gain(p, FiniteDistribution([0.05, 0.95]), p)
        assert g.value == pytest.approx(KL_03_VS_005, abs=1e-14)

    def test_infinite_gain(self):
        p = FiniteDistribution([0.5, 0.5])
        assert inferential_gain(p, FiniteDistribution([1, 0]), p) == POS_INF

    def test_infinite_loss(self):
        p = FiniteDistribution([0.5, 0.5])
        assert inferential_gain(p, p, FiniteDistribution([0, 1])) == NEG_INF

    def test_indeterminate(self):
        p = FiniteDistribution([0.5, 0.5])
        g = inferential_gain(p, FiniteDistribution([1, 0]), FiniteDistribution([0, 1]))
        assert g.is_indeterminate


simplex3 = st.lists(st.floats(0.0, 1.0), min_size=3, max_size=3).filter(lambda v: sum(v) > 1e-3)


def _normalize(v):
    v = np.asarray(v)
    return FiniteDistribution(v / v.sum())


@settings(max_examples=300, deadline=None)
@given(simplex3, simplex3)
def test_nonnegative_and_zero_iff_equal(a, b):
    p, q = _normalize(a), _normalize(b)
    d = kl_divergence(p, q)
    assert d.is_infinite or d.value >= 0
    if np.allclose(p.probs, q.probs, atol=0, rtol=0):
        assert d.value == 0


@settings(max_examples=300, deadline=None)
@given(simplex3, simplex3, simplex3, st.floats(0.01, 0.99))
def test_convexity_in_first_argument(a, b, c, lam):
    p1, p2, q = _normalize(a), _normalize(b), _normalize(c)
    mix = FiniteDistribution(lam * p1.as_array() + (1 - lam) * p2.as_array())
    lhs = float(kl_divergence(mix, q))
    rhs = lam * float(kl_divergence(p1, q)) + (1 - lam) * float(kl_divergence(p2, q))
    if math.isinf(rhs):
        return
    assert lhs <= rhs + 1e-10


@settings(max_examples=300, deadline=None)
@given(simplex3, simplex3, simplex3)
def test_gain_decomposition(a, b, c):
    p, bench, q = _normalize(a), _normalize(b), _normalize(c)
    first, second = kl_divergence(p, bench), kl_divergence(p, q)
    if first.is_finite and second.is_finite:
        assert inferential_gain(p, bench, q).value == first.value - second.value
