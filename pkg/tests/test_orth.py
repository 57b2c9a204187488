"""Tests for the orthogonal-case special function built from the Poisson
integral on the half-plane, pulled back to the strip by the conformal map."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from sharpmart.constants import kp
from sharpmart.orth import (
    OrthContext,
    QuadratureError,
    conformal_strip_to_half,
    orth_property_suite,
    poisson_w,
    scalar_inequality_check,
    u_orth,
    v_orth,
)

P_RANGE = [1.0, 1.25, 1.5, 1.75, 2.0]


def oracle_w(p: float, alpha: float, beta: float) -> float:
    """Independent Poisson-integral evaluation on a split integrand."""
    c = 2**p / math.pi ** (p + 1)

    def f(t):
        return abs(math.log(abs(t))) ** p / ((alpha - t) ** 2 + beta**2)

    total = 0.0
    for a, b in [(-np.inf, -1.0), (-1.0, 0.0), (0.0, 1.0), (1.0, np.inf)]:
        val, _ = quad(f, a, b, limit=400, epsabs=1e-11)
        total += val
    return c * beta * total


class TestConformalMap:
    def test_origin(self):
        a, b = conformal_strip_to_half(0.0, 0.0)
        assert (a, b) == pytest.approx((0.0, 1.0))

    def test_boundary_goes_to_real_axis(self):
        for x in (-1.0, 0.3, 2.0):
            _, b = conformal_strip_to_half(x, 1.0 - 1e-14)
            assert abs(b) < 1e-10

    def test_upper_half_plane(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            x = rng.uniform(-2, 2)
            y = rng.uniform(-1, 1)
            _, b = conformal_strip_to_half(x, y)
            assert b > 0


class TestValueAtOrigin:
    @pytest.mark.parametrize("p", P_RANGE)
    def test_scaled_value_is_one(self, p):
        ctx = OrthContext(p)
        assert u_orth(ctx, 0.0, 0.0) * kp(p).value ** p == pytest.approx(1.0, abs=1e-8)


class TestAgainstQuadratureOracle:
    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0])
    def test_random_points(self, p):
        ctx = OrthContext(p)
        rng = np.random.default_rng(1)
        for _ in range(5):
            alpha = rng.uniform(-3, 3)
            beta = rng.uniform(0.3, 3)
            assert poisson_w(ctx, alpha, beta) == pytest.approx(
                oracle_w(p, alpha, beta), rel=1e-6, abs=1e-8
            )

    def test_p2_closed_form(self):
        ctx = OrthContext(2.0)
        rng = np.random.default_rng(2)
        x = rng.uniform(-1.5, 1.5, 40)
        y = rng.uniform(-0.999, 0.999, 40)
        vals = np.array([u_orth(ctx, a, b) for a, b in zip(x, y)])
        assert np.allclose(vals, x**2 + 1 - y**2, atol=1e-6)


class TestStripBehaviour:
    def test_outside_strip_is_payoff(self):
        ctx = OrthContext(1.5)
        assert u_orth(ctx, 0.7, 1.2) == abs(0.7) ** 1.5
        assert v_orth(ctx, 0.7, 1.2) == pytest.approx(
            1.0 - kp(1.5).value ** 1.5 * 0.7**1.5
        )
        assert v_orth(ctx, 0.7, 0.2) == pytest.approx(
            -kp(1.5).value ** 1.5 * 0.7**1.5
        )

    def test_even_in_both_arguments(self):
        ctx = OrthContext(1.5)
        for x, y in [(0.4, 0.3), (1.2, -0.7)]:
            ref = u_orth(ctx, x, y)
            assert u_orth(ctx, -x, y) == pytest.approx(ref, rel=1e-9)
            assert u_orth(ctx, x, -y) == pytest.approx(ref, rel=1e-9)

    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0])
    def test_boundary_continuity_attainable(self, p):
        # the gap to the boundary payoff decays linearly in the distance:
        # it is below 1e-4 at distance 1e-5 and shrinks ~10x per decade
        ctx = OrthContext(p)
        for x in (0.5, 1.0, 2.0):
            g5 = abs(u_orth(ctx, x, 1 - 1e-5) - x**p)
            g4 = abs(u_orth(ctx, x, 1 - 1e-4) - x**p)
            assert g5 < 1e-4
            assert g5 < 0.4 * g4  # linear decay, not a plateau

    @pytest.mark.xfail(
        reason="normal derivative at the strip boundary is O(1), so the gap "
        "at distance 1e-3 is ~1e-3; the 1e-4 tolerance at that distance "
        "is not attainable by any correct evaluation",
        strict=True,
    )
    def test_boundary_continuity_strict_form(self):
        ctx = OrthContext(1.5)
        assert abs(u_orth(ctx, 0.5, 1 - 1e-3) - 0.5**1.5) < 1e-4


class TestScalarInequality:
    def test_randomized(self):
        rng = np.random.default_rng(3)
        for _ in range(2000):
            p = rng.uniform(1, 2)
            assert scalar_inequality_check(p, rng.uniform(-3, 3), rng.uniform(-3, 3))

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            scalar_inequality_check(2.5, 1.0, 1.0)


class TestPropertySuite:
    def test_passes(self):
        report = orth_property_suite(OrthContext(1.5), n_samples=40, seed=7)
        assert report["passed"], report


class TestErrors:
    def test_exponent_window(self):
        for p in (0.5, 2.5):
            with pytest.raises(ValueError):
                OrthContext(p)

    def test_quadrature_error_is_raised_not_swallowed(self):
        assert issubclass(QuadratureError, RuntimeError)
