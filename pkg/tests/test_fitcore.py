import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from implicitreg import (
    Dataset,
    DegenerateDataError,
    InsufficientDataError,
    ModelSpec,
    SingularDesignError,
    Term,
    constancy_index,
    fit_ols,
    reduce_model,
    self_weighting_mean,
)
from implicitreg.fitcore import design_matrix, reduce_model_trace
from implicitreg.formula import parse_model
from implicitreg.simulate import SimulationConfig, generate


def exact_inverse_dataset():
    """x = 200/t, y = 20 t over t = 1..10; x*y = 4000 identically."""
    t = np.arange(1.0, 11.0)
    return Dataset("x", "y", 200.0 / t, 20.0 * t)


class TestFitOls:
    def test_intercept_only_is_arithmetic_mean(self):
        data = Dataset("x", "y", [1.0, 2.0, 3.0], [2.0, 4.0, 6.0])
        fit = fit_ols(parse_model("y ~ 1"), data)
        assert fit.coefficients[0].estimate == pytest.approx(4.0, abs=1e-12)

    def test_noiseless_non_response_recovers_inverse_law(self):
        data = exact_inverse_dataset()
        fit = fit_ols(parse_model("1 ~ x + y + x*y"), data)
        estimates = [c.estimate for c in fit.coefficients]
        assert estimates[0] == pytest.approx(0.0, abs=1e-8)
        assert estimates[1] == pytest.approx(0.0, abs=1e-8)
        assert estimates[2] == pytest.approx(1.0 / 4000.0, abs=1e-8)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)

    def test_noiseless_non_response_grid_refinement_oracle(self):
        # Independent check that (0, 0, 1/4000) minimizes the residual sum
        # of squares: refine a brute-force grid around the solution and
        # confirm the center always beats every neighbor.
        data = exact_inverse_dataset()
        X, _ = design_matrix(parse_model("1 ~ x + y + x*y"), data)
        target = np.ones(data.n)

        def sse(coefs):
            r = target - X @ np.asarray(coefs)
            return float(r @ r)

        center = np.array([0.0, 0.0, 1.0 / 4000.0])
        spans = np.array([1e-3, 1e-3, 1e-5])
        for _ in range(4):
            best = min(
                itertools.product(*[(-1, 0, 1)] * 3),
                key=lambda steps: sse(center + spans * np.asarray(steps)),
            )
            assert best == (0, 0, 0)
            spans /= 8.0
        assert sse(center) < 1e-20

    def test_exact_line(self):
        data = Dataset("x", "y", [1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        fit = fit_ols(parse_model("y ~ 1 + x"), data)
        assert fit.coefficients[0].estimate == pytest.approx(0.0, abs=1e-12)
        assert fit.coefficients[1].estimate == pytest.approx(1.0, abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0)
        assert fit.sse == pytest.approx(0.0, abs=1e-24)

    def test_inference_matches_linregress(self):
        rng = np.random.default_rng(42)
        x = rng.uniform(0, 10, 40)
        y = 3.0 + 0.7 * x + rng.normal(0, 1.5, 40)
        fit = fit_ols(parse_model("y ~ 1 + x"), Dataset("x", "y", x, y))
        ref = stats.linregress(x, y)
        intercept, slope = fit.coefficients
        assert slope.estimate == pytest.approx(ref.slope, rel=1e-12)
        assert intercept.estimate == pytest.approx(ref.intercept, rel=1e-12)
        assert slope.std_error == pytest.approx(ref.stderr, rel=1e-10)
        assert intercept.std_error == pytest.approx(ref.intercept_stderr, rel=1e-10)
        assert slope.p_value == pytest.approx(ref.pvalue, rel=1e-9)
        assert fit.r_squared == pytest.approx(ref.rvalue ** 2, rel=1e-12)

    def test_singular_design_names_collinear_column(self):
        data = Dataset("x", "y", [2.0, 2.0, 2.0, 2.0], [1.0, 2.0, 3.0, 4.0])
        with pytest.raises(SingularDesignError, match="x"):
            fit_ols(parse_model("y ~ 1 + x + x^2"), data)

    def test_insufficient_data(self):
        data = Dataset("x", "y", [1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        with pytest.raises(InsufficientDataError):
            fit_ols(parse_model("y ~ 1 + x + x^2"), data)

    def test_pythagorean_identity_with_intercept(self):
        rng = np.random.default_rng(3)
        for spec_text in ("y ~ 1 + x", "y ~ 1 + x + x*y", "x*y ~ 1 + x + y"):
            x = rng.uniform(1, 10, 30)
            y = rng.uniform(1, 10, 30)
            fit = fit_ols(parse_model(spec_text), Dataset("x", "y", x, y))
            assert fit.ssm + fit.sse == pytest.approx(fit.sst_centered, rel=1e-8)

    def test_recovers_generating_coefficients(self):
        rng = np.random.default_rng(11)
        x = rng.uniform(1, 10, 25)
        a0, a1, a2 = 4.0, -2.0, 0.01
        y = (a0 + a1 * x) / (1.0 - a2 * x)  # satisfies y = a0 + a1 x + a2 x y
        fit = fit_ols(parse_model("y ~ 1 + x + x*y"), Dataset("x", "y", x, y))
        recovered = [c.estimate for c in fit.coefficients]
        assert recovered == pytest.approx([a0, a1, a2], abs=1e-8)

    def test_nested_models_never_lose_r_squared(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            x = rng.uniform(1, 10, 30)
            y = rng.uniform(1, 10, 30)
            data = Dataset("x", "y", x, y)
            small = fit_ols(parse_model("y ~ 1 + x"), data)
            big = fit_ols(parse_model("y ~ 1 + x + x*y"), data)
            assert big.r_squared >= small.r_squared - 1e-12

    def test_p_values_in_unit_interval(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            x = rng.uniform(1, 10, 15)
            y = rng.uniform(1, 10, 15)
            fit = fit_ols(parse_model("y ~ 1 + x + x^2"), Dataset("x", "y", x, y))
            for coef in fit.coefficients:
                assert 0.0 <= coef.p_value <= 1.0

    def test_non_response_r_squared_is_uncentered(self):
        data = exact_inverse_dataset()
        fit = fit_ols(parse_model("1 ~ x*y"), data)
        assert fit.r_squared == pytest.approx(1.0 - fit.sse / fit.sst_uncentered)
        assert fit.residual_dof == data.n - 1


class TestSelfWeightingMean:
    def test_constant_data(self):
        for c in (3.0, -2.5, 1e-3):
            assert self_weighting_mean([c, c, c]) == pytest.approx(c, rel=1e-12)

    def test_hand_computed_example(self):
        assert self_weighting_mean([1.0, 3.0]) == pytest.approx(2.5)

    def test_degenerate_sum(self):
        with pytest.raises(DegenerateDataError):
            self_weighting_mean([1.0, -1.0])

    def test_dominates_arithmetic_mean_on_positive_data(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            v = rng.uniform(0.1, 50, rng.integers(2, 40))
            assert self_weighting_mean(v) >= v.mean() - 1e-12

    @given(
        st.lists(st.floats(0.5, 100), min_size=1, max_size=30),
        st.floats(0.01, 100).filter(lambda c: abs(c) > 1e-6),
    )
    def test_scaling(self, values, c):
        v = np.array(values)
        assert self_weighting_mean(c * v) == pytest.approx(
            c * self_weighting_mean(v), rel=1e-9
        )

    def test_scaling_by_powers_of_two_is_exact(self):
        v = np.array([1.25, 3.5, 7.0, 0.375])
        for c in (2.0, 0.5, 8.0):
            assert self_weighting_mean(c * v) == c * self_weighting_mean(v)


class TestConstancyIndex:
    def test_constant_is_exactly_one(self):
        assert constancy_index([0.1, 0.1, 0.1]) == 1.0
        assert constancy_index([-7.0] * 11) == 1.0

    def test_hand_computed_example(self):
        assert constancy_index([1.0, 3.0]) == pytest.approx(0.8)

    def test_non_constant_below_one(self):
        assert constancy_index([1.0, 2.0]) < 1.0

    def test_all_zero_rejected(self):
        with pytest.raises(DegenerateDataError):
            constancy_index([0.0, 0.0])

    @given(st.lists(st.floats(0.5, 100), min_size=1, max_size=30))
    def test_in_unit_interval(self, values):
        assert 0.0 <= constancy_index(values) <= 1.0

    @given(
        st.lists(st.floats(0.5, 100), min_size=2, max_size=30),
        st.sampled_from([2.0, -1.0, 0.25, 3.0, -128.0]),
    )
    def test_scale_invariance(self, values, c):
        v = np.array(values)
        assert constancy_index(c * v) == pytest.approx(constancy_index(v), rel=1e-12)

    def test_equals_uncentered_r_squared_of_non_response_fit(self):
        rng = np.random.default_rng(13)
        for _ in range(25):
            v = rng.uniform(0.5, 20, 12)
            data = Dataset("x", "y", v, rng.uniform(0.5, 20, 12))
            fit = fit_ols(parse_model("1 ~ x"), data)
            assert constancy_index(v) == pytest.approx(fit.r_squared, abs=1e-12)
            # and the self-weighting mean is the reciprocal coefficient
            assert self_weighting_mean(v) == pytest.approx(
                1.0 / fit.coefficients[0].estimate, rel=1e-10
            )


class TestReduceModel:
    def test_drops_interaction_absorbed_by_intercept(self):
        data = generate(SimulationConfig(n=50, sigma=5.0, seed=12345))
        fit = fit_ols(parse_model("y ~ 1 + x + x*y"), data)
        assert fit.coefficient(Term.XY).p_value > 0.05
        reduced = reduce_model(fit, data)
        assert reduced.spec == parse_model("y ~ 1 + x")

    def test_constant_rotation_reduces_to_intercept_only(self):
        data = generate(SimulationConfig(n=50, sigma=5.0, seed=12345))
        fit = fit_ols(parse_model("x*y ~ 1 + x + y"), data)
        reduced, steps = reduce_model_trace(fit, data)
        assert reduced.spec == ModelSpec(Term.XY, (), True)
        assert len(steps) == 2
        assert all(p > 0.05 for _, p in steps)

    def test_all_significant_unchanged(self):
        rng = np.random.default_rng(2)
        x = rng.uniform(1, 10, 60)
        y = 5.0 + 2.0 * x + rng.normal(0, 0.1, 60)
        data = Dataset("x", "y", x, y)
        fit = fit_ols(parse_model("y ~ 1 + x"), data)
        assert reduce_model(fit, data).spec == fit.spec

    def test_exact_fit_unchanged(self):
        data = Dataset("x", "y", [1.0, 2.0, 3.0, 4.0], [1.0, 2.0, 3.0, 4.0])
        fit = fit_ols(parse_model("y ~ 1 + x"), data)
        reduced = reduce_model(fit, data)
        assert reduced.spec == fit.spec
        assert fit.coefficient(Term.X).p_value < 1e-6

    def test_no_intercept_model_keeps_one_predictor(self):
        # pure noise: nothing is significant, but the non-response form
        # must keep at least one estimated coefficient
        rng = np.random.default_rng(8)
        x = rng.normal(0, 1, 40)
        y = rng.normal(0, 1, 40)
        data = Dataset("x", "y", x, y)
        fit = fit_ols(parse_model("1 ~ x + y + x*y"), data)
        reduced = reduce_model(fit, data)
        assert not reduced.spec.intercept
        assert len(reduced.spec.predictors) >= 1
