import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ehrenfest.potentials import PolynomialPotential, StepPotential, hermite_real


class TestPolynomialValue:
    def test_harmonic_at_two(self):
        pot = PolynomialPotential((0.0, 0.0, 0.5))
        assert pot.value(2.0) == pytest.approx(2.0, abs=1e-15)

    def test_constant(self):
        pot = PolynomialPotential((5.0,))
        for x in (-3.0, 0.0, 17.5):
            assert pot.value(x) == 5.0

    def test_cube(self):
        # oracle: direct multiplication
        expected = 1.5 * 1.5 * 1.5
        pot = PolynomialPotential((0.0, 0.0, 0.0, 1.0))
        assert pot.value(1.5) == pytest.approx(expected, rel=1e-15)

    def test_array_input(self):
        pot = PolynomialPotential((1.0, 2.0))
        np.testing.assert_allclose(pot.value(np.array([0.0, 1.0])), [1.0, 3.0])

    def test_rejects_empty_and_nonfinite(self):
        with pytest.raises(ValueError):
            PolynomialPotential(())
        with pytest.raises(ValueError):
            PolynomialPotential((1.0, np.inf))


class TestPolynomialDerivative:
    def test_third_derivative_of_cube(self):
        pot = PolynomialPotential((0.0, 0.0, 0.0, 1.0))
        assert pot.derivative(2.0, order=3) == pytest.approx(6.0, abs=1e-15)

    def test_beyond_degree_is_zero(self):
        pot = PolynomialPotential((1.0, -2.0, 3.0))
        assert pot.derivative(0.7, order=5) == 0.0

    def test_harmonic_gradient(self):
        # V = mu omega^2 x^2 / 2 with mu = 1, omega = 2 -> V' = 4 x
        pot = PolynomialPotential((0.0, 0.0, 2.0))
        assert pot.derivative(0.5, order=1) == pytest.approx(2.0, abs=1e-15)

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            PolynomialPotential((1.0,)).derivative(0.0, order=-1)

    @given(
        coeffs=st.lists(
            st.floats(min_value=-2.0, max_value=2.0), min_size=1, max_size=7
        ),
        x=st.floats(min_value=-2.0, max_value=2.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_first_derivative_matches_centered_difference(self, coeffs, x):
        pot = PolynomialPotential(tuple(coeffs))
        h = 1e-6
        fd = (pot.value(x + h) - pot.value(x - h)) / (2.0 * h)
        exact = pot.derivative(x, order=1)
        assert abs(exact - fd) <= 1e-6 * (1.0 + abs(exact))


class TestStepPotential:
    def test_piecewise_values(self):
        pot = StepPotential(height=5.0, wall=1.0)
        assert pot.value(0.0) == 0.0
        assert pot.value(1.0) == 0.0  # boundary belongs to the zero side
        assert pot.value(2.0) == 5.0

    def test_array_input(self):
        pot = StepPotential(height=5.0, wall=1.0)
        np.testing.assert_array_equal(
            pot.value(np.array([0.5, 1.0, 1.5])), [0.0, 0.0, 5.0]
        )

    def test_has_no_derivative_operation(self):
        # the step's force must only enter through the closed-form
        # smeared acceleration, never generic derivative machinery
        assert not hasattr(StepPotential(5.0, 1.0), "derivative")

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            StepPotential(height=0.0, wall=1.0)
        with pytest.raises(ValueError):
            StepPotential(height=-2.0, wall=1.0)
        with pytest.raises(ValueError):
            StepPotential(height=5.0, wall=np.nan)


class TestHermiteReal:
    def test_order_zero(self):
        for y in (-4.0, 0.0, 2.5):
            assert hermite_real(0, y) == 1.0

    def test_order_two(self):
        # H_2(x) = 4x^2 - 2 continued to imaginary argument: 4y^2 + 2
        assert hermite_real(2, 1.0) == pytest.approx(6.0, abs=1e-15)

    def test_order_three(self):
        # H_3(x) = 8x^3 - 12x: R_3(y) = 8y^3 + 12y = 1 + 6 at y = 0.5
        assert hermite_real(3, 0.5) == pytest.approx(7.0, abs=1e-14)

    def test_parity_and_factorial_at_origin(self):
        for n in range(11):
            got = hermite_real(n, 0.0)
            if n % 2:
                assert got == 0.0
            else:
                expected = math.factorial(n) / math.factorial(n // 2)
                assert got == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("n", [1, 4, 9, 15])
    def test_against_complex_hermite(self, n):
        # independent oracle: numpy's physicists' Hermite at imaginary
        # argument, rotated back to the real axis
        from numpy.polynomial import hermite as H

        for y in (-3.0, -0.4, 0.0, 1.2, 5.0):
            coeffs = np.zeros(n + 1)
            coeffs[n] = 1.0
            expected = (1j ** (-n) * H.hermval(1j * y, coeffs)).real
            assert hermite_real(n, y) == pytest.approx(expected, rel=1e-12)

    @given(
        n=st.integers(min_value=1, max_value=29),
        y=st.floats(min_value=-10.0, max_value=10.0),
    )
    @settings(max_examples=80, deadline=None)
    def test_recurrence_residual(self, n, y):
        r_next = hermite_real(n + 1, y)
        residual = r_next - 2.0 * y * hermite_real(n, y) - 2.0 * n * hermite_real(n - 1, y)
        assert abs(residual) <= 1e-9 * max(1.0, abs(r_next))

    def test_array_argument(self):
        y = np.array([0.0, 1.0])
        np.testing.assert_allclose(hermite_real(2, y), [2.0, 6.0])

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            hermite_real(-1, 0.0)
