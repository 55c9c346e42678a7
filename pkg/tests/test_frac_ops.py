import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import binom

from fracstar.errors import DomainError
from fracstar.frac_ops import (
    GridSpec,
    Monomial,
    gl_weights,
    power_derivative,
    power_integral,
    rl_derivative_numeric,
    rl_integral_numeric,
)
from fracstar.specfun import gamma_ratio

TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


class TestPowerRule:
    def test_integral_of_x_is_half_x_squared(self):
        out = power_integral(1.0, Monomial(1.0, 1.0))
        assert out.expo == 2.0
        assert out.coef == pytest.approx(0.5, rel=1e-14)

    def test_half_integral_of_one(self):
        out = power_integral(0.5, Monomial(1.0, 0.0))
        assert out.expo == 0.5
        assert out.coef == pytest.approx(TWO_OVER_SQRT_PI, rel=1e-13)

    def test_half_integral_of_x_3_75(self):
        out = power_integral(0.5, Monomial(1.0, 3.75))
        assert out.expo == 4.25
        # Gamma(4.75)/Gamma(5.25), mpmath at 40 digits
        assert out.coef == pytest.approx(0.4710436604993748790285020065126881684898, rel=1e-12)

    def test_derivative_examples(self):
        d = power_derivative(1.5, Monomial(1.0, 1.5))
        assert d.expo == 0.0
        assert d.coef == pytest.approx(1.329340388179137, rel=1e-13)

        d = power_derivative(0.5, Monomial(1.0, 1.0))
        assert d.expo == 0.5
        assert d.coef == pytest.approx(1.1283791671, rel=1e-10)

    @pytest.mark.parametrize("expo", [0.5, -0.5])
    def test_kernel_monomials_vanish(self, expo):
        # x^(q-1) and x^(q-2) for q = 1.5
        d = power_derivative(1.5, Monomial(3.0, expo))
        assert d.coef == 0.0
        assert d.is_zero

    @pytest.mark.parametrize("op", [power_integral, power_derivative])
    @pytest.mark.parametrize("expo", [-1.0, -2.5])
    def test_non_integrable_exponent(self, op, expo):
        with pytest.raises(DomainError):
            op(0.5, Monomial(1.0, expo))

    @given(
        st.floats(0.05, 3.0),
        st.floats(0.05, 3.0),
        st.floats(-0.95, 6.0),
        st.floats(0.1, 10.0),
    )
    def test_semigroup(self, q1, q2, p, c):
        m = Monomial(c, p)
        lhs = power_integral(q1, power_integral(q2, m))
        rhs = power_integral(q1 + q2, m)
        assert lhs.expo == pytest.approx(rhs.expo, abs=1e-13)
        assert lhs.coef == pytest.approx(rhs.coef, rel=1e-11)

    @given(st.floats(0.05, 1.99), st.floats(-0.95, 6.0), st.floats(0.1, 10.0))
    def test_left_inverse(self, q, p, c):
        m = Monomial(c, p)
        back = power_derivative(q, power_integral(q, m))
        assert back.expo == pytest.approx(p, abs=1e-13)
        assert back.coef == pytest.approx(c, rel=1e-11)


class TestGLWeights:
    def test_examples(self):
        np.testing.assert_allclose(gl_weights(1.5, 3), [1, -1.5, 0.375, 0.0625], rtol=0, atol=1e-15)
        np.testing.assert_allclose(gl_weights(1.0, 2), [1, -1, 0], rtol=0, atol=1e-15)
        assert gl_weights(0.7, 0).tolist() == [1.0]

    @given(st.floats(0.01, 1.99))
    def test_binomial_form(self, q):
        k = np.arange(30)
        np.testing.assert_allclose(gl_weights(q, 29), (-1.0) ** k * binom(q, k), rtol=1e-10, atol=1e-14)

    @given(st.floats(1.001, 1.999))
    def test_sign_pattern_for_orders_between_one_and_two(self, q):
        w = gl_weights(q, 200)
        assert w[1] < 0
        assert np.all(w[2:] > 0)

    @given(st.floats(0.01, 1.99), st.integers(0, 200))
    def test_partial_sums(self, q, n):
        s = 1.0
        for j in range(1, n + 1):
            s *= 1.0 - q / j
        assert np.sum(gl_weights(q, n)) == pytest.approx(s, abs=1e-10)


class TestGLDerivative:
    def test_x_squared(self):
        got = rl_derivative_numeric(lambda t: t**2, 1.5, 1.0, 1e-4)
        assert got == pytest.approx(gamma_ratio(3.0, 1.5), rel=1e-3)

    def test_kernel_function_gives_near_zero(self):
        got = rl_derivative_numeric(lambda t: t**0.5, 1.5, 0.7, 1e-4)
        assert abs(got) < 1e-5

    def test_zero_function(self):
        assert rl_derivative_numeric(np.zeros_like, 1.3, 0.9, 1e-3) == 0.0

    @pytest.mark.parametrize("q", [0.0, 2.0, -0.5, 2.5])
    def test_order_out_of_range(self, q):
        with pytest.raises(DomainError):
            rl_derivative_numeric(lambda t: t, q, 1.0, 1e-3)

    def test_too_few_nodes(self):
        with pytest.raises(DomainError):
            rl_derivative_numeric(lambda t: t, 0.5, 1.0, 0.2)

    @pytest.mark.parametrize("q, p", [(0.5, 1.5), (0.5, 3.0), (1.5, 2.5), (1.5, 4.2), (1.9, 3.0)])
    def test_first_order_convergence(self, q, p):
        f = Monomial(1.0, p)
        exact = power_derivative(q, f)(1.0)
        steps = [1 / 64, 1 / 128, 1 / 256, 1 / 512]
        errs = [abs(rl_derivative_numeric(f, q, 1.0, h) - exact) for h in steps]
        slope = np.polyfit(np.log(steps), np.log(errs), 1)[0]
        assert slope == pytest.approx(1.0, abs=0.3)


class TestProductTrapezoid:
    def test_constant(self):
        x = GridSpec().nodes(1.0)
        got = rl_integral_numeric(x, np.ones_like(x), 0.5, 1.0)
        assert got == pytest.approx(TWO_OVER_SQRT_PI, abs=1e-6)

    def test_linear_is_exact(self):
        x = GridSpec().nodes(1.0)
        assert rl_integral_numeric(x, x, 1.0, 1.0) == pytest.approx(0.5, abs=1e-10)
        got = rl_integral_numeric(x, 2.0 * x + 1.0, 0.3, 1.0)
        exact = 2.0 * gamma_ratio(2.0, 2.3) + gamma_ratio(1.0, 1.3)
        assert got == pytest.approx(exact, abs=1e-10)

    def test_x_3_75(self):
        x = GridSpec().nodes(1.0)
        got = rl_integral_numeric(x, x**3.75, 0.5, 1.0)
        assert got == pytest.approx(gamma_ratio(4.75, 5.25), abs=1e-5)

    def test_interior_node(self):
        x = GridSpec(n=512).nodes(2.0)
        node = x[300]
        got = rl_integral_numeric(x, x**2, 0.7, node)
        assert got == pytest.approx(power_integral(0.7, Monomial(1.0, 2.0))(node), rel=1e-5)

    def test_first_node_is_zero(self):
        x = GridSpec(n=16).nodes(1.0)
        assert rl_integral_numeric(x, x, 0.5, 0.0) == 0.0

    def test_not_a_node(self):
        x = GridSpec(n=16).nodes(1.0)
        with pytest.raises(DomainError):
            rl_integral_numeric(x, x, 0.5, 0.123456)


class TestGridSpec:
    def test_defaults(self):
        g = GridSpec()
        assert (g.n, g.grading) == (4096, 2.0)

    def test_nodes(self):
        x = GridSpec(n=8, grading=2.0).nodes(4.0)
        assert x[0] == 0.0 and x[-1] == 4.0
        assert x[4] == pytest.approx(1.0)
        assert np.all(np.diff(x) > 0)

    @pytest.mark.parametrize("n, grading", [(7, 2.0), (16, 0.5), (8.5, 1.0)])
    def test_invalid(self, n, grading):
        with pytest.raises(DomainError):
            GridSpec(n=n, grading=grading)
