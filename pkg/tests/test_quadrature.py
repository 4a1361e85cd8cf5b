"""Adaptive quadrature primitives against closed-form integrals."""

import math

import pytest

from rice_maxima.quadrature import (
    QuadResult,
    integrate_adaptive,
    integrate_to_infinity,
    sum_results,
)


class TestFiniteInterval:
    @pytest.mark.parametrize(
        "f,a,b,exact",
        [
            (lambda x: x * x, 0.0, 3.0, 9.0),
            (math.sin, 0.0, math.pi, 2.0),
            (lambda x: math.exp(-x), 0.0, 5.0, 1.0 - math.exp(-5.0)),
            # Sharp interior peak forces genuine refinement.
            (lambda x: 1.0 / (1e-4 + (x - 0.3) ** 2), 0.0, 1.0, None),
        ],
    )
    def test_known_integrals(self, f, a, b, exact):
        if exact is None:
            w = 1e-2
            exact = (math.atan((b - 0.3) / w) - math.atan((a - 0.3) / w)) / w
        result = integrate_adaptive(f, a, b, rel_tol=1e-10)
        assert result.converged
        assert result.value == pytest.approx(exact, rel=1e-10)
        assert abs(result.value - exact) <= 10.0 * max(result.abs_error, 1e-15)
        assert result.evaluations >= 4 * 22

    def test_endpoints_never_evaluated(self):
        def f(x):
            if x in (0.0, 1.0):
                raise AssertionError("endpoint evaluated")
            return 1.0 / math.sqrt(x)  # integrable singularity at 0

        result = integrate_adaptive(f, 0.0, 1.0, rel_tol=1e-6, max_panels=4000)
        assert result.value == pytest.approx(2.0, rel=1e-4)

    def test_empty_interval_is_zero(self):
        result = integrate_adaptive(math.sin, 2.0, 2.0, rel_tol=1e-8)
        assert result == QuadResult(0.0, 0.0, 0, True)
        assert integrate_adaptive(math.sin, 3.0, 2.0, rel_tol=1e-8).value == 0.0

    def test_infinite_endpoint_rejected(self):
        with pytest.raises(ValueError):
            integrate_adaptive(math.sin, 0.0, math.inf, rel_tol=1e-8)

    def test_budget_exhaustion_reported_not_hidden(self):
        f = lambda x: 1.0 / (1e-8 + (x - 0.37) ** 2)  # noqa: E731
        result = integrate_adaptive(f, 0.0, 1.0, rel_tol=1e-12, max_panels=6)
        assert not result.converged
        assert result.abs_error > 0.0

    def test_deterministic(self):
        f = lambda x: math.exp(-x * x) * math.cos(7.0 * x)  # noqa: E731
        first = integrate_adaptive(f, -2.0, 2.0, rel_tol=1e-11)
        second = integrate_adaptive(f, -2.0, 2.0, rel_tol=1e-11)
        assert first == second


class TestSemiInfinite:
    def test_exponential_tail(self):
        result = integrate_to_infinity(lambda t: math.exp(-t), 0.0, rel_tol=1e-10)
        assert result.converged
        assert result.value == pytest.approx(1.0, rel=1e-9)

    def test_gaussian_tail_from_offset(self):
        result = integrate_to_infinity(
            lambda t: math.exp(-t * t), 1.0, rel_tol=1e-10
        )
        exact = 0.5 * math.sqrt(math.pi) * math.erfc(1.0)
        assert result.value == pytest.approx(exact, rel=1e-9)

    def test_analytic_tail_estimate_is_used(self):
        # exp(-t) with the exact analytic tail: the value is exact no matter
        # where truncation lands, and the tail charges 10% to the error.
        result = integrate_to_infinity(
            lambda t: math.exp(-t),
            0.0,
            rel_tol=1e-6,
            tail=lambda T: math.exp(-T),
        )
        assert result.value == pytest.approx(1.0, rel=1e-10)

    def test_slow_decay_flagged_unconverged(self):
        # 1/t decays too slowly for the geometric truncation bound.
        result = integrate_to_infinity(
            lambda t: 1.0 / t, 1.0, rel_tol=1e-8, max_blocks=10
        )
        assert not result.converged

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            integrate_to_infinity(math.exp, 0.0, rel_tol=1e-8, first_width=0.0)
        with pytest.raises(ValueError):
            integrate_to_infinity(math.exp, 0.0, rel_tol=1e-8, growth=1.0)


class TestResultAlgebra:
    def test_addition_accumulates_fields(self):
        a = QuadResult(1.0, 1e-8, 22, True)
        b = QuadResult(2.5, 2e-8, 44, True)
        c = QuadResult(-0.5, 1e-9, 22, False)
        assert a + b == QuadResult(3.5, 1e-8 + 2e-8, 66, True)
        assert (a + c).converged is False
        assert sum_results([a, b, c]) == (a + b) + c
        assert sum_results([]) == QuadResult(0.0, 0.0, 0, True)
