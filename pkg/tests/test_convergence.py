import math

import numpy as np
import pytest

from spherecount.convergence import (ALPHA, UniversalQuadratic, alpha_star,
                                     contraction_coefficients,
                                     error_bound_alpha, g_deriv,
                                     g_gamma_drift, gamma_contraction_table,
                                     gamma_error_sequence,
                                     geometric_series_coeff, newton_h_gamma,
                                     psi, r0, r1, robust_alpha_threshold,
                                     robust_u0, universal_orbit_closed)

from oracles import newton_iterates_on_model, newton_step_h_gamma_direct

# Reference cells: -log2(u_i/u_0) for the pure error recurrence.  The
# published table truncates to three decimals and transposes the digits of
# the (u0=1/8, i=1) cell (2.870 in print, 2.087 recomputed); values here
# are the recomputed ones at full precision of the recurrence.
GAMMA_TABLE = {
    (1, 1 / 32): 4.810, (1, 1 / 16): 3.599, (1, 1 / 10): 2.632,
    (1, 1 / 8): 2.087, (1, "edge"): 1.000,
    (2, 1 / 32): 14.614, (2, 1 / 16): 11.169, (2, 1 / 10): 8.491,
    (2, 1 / 8): 6.997, (2, "edge"): 3.900,
    (3, 1 / 32): 34.229, (3, 1 / 16): 26.339, (3, 1 / 10): 20.302,
    (3, 1 / 8): 16.988, (3, "edge"): 10.229,
    (4, 1 / 32): 73.458, (4, 1 / 16): 56.679, (4, 1 / 10): 43.926,
    (4, 1 / 8): 36.977, (4, "edge"): 22.954,
    (5, 1 / 32): 151.917, (5, 1 / 16): 117.358, (5, 1 / 10): 91.175,
    (5, 1 / 8): 76.954, (5, "edge"): 48.406,
}


class TestPsi:
    def test_at_zero(self):
        assert psi(0.0) == 1.0

    def test_at_first_kind_edge(self):
        u = (3.0 - math.sqrt(7.0)) / 2.0
        # u/psi(u) = 1/2 exactly at the edge
        assert psi(u) == pytest.approx(2.0 * u, abs=1e-15)

    def test_value(self):
        assert psi(0.1) == pytest.approx(0.62, abs=1e-15)

    def test_decreasing_nonnegative(self):
        us = np.linspace(0.0, 1.0 - math.sqrt(2.0) / 2.0, 1000)
        vals = 1.0 - 4.0 * us + 2.0 * us * us
        assert np.all(vals >= 0.0)
        assert np.all(np.diff(vals) < 0.0)

    def test_ratio_bounds(self):
        # u/psi(u) < 1 below (5-sqrt(17))/4 and <= 1/2 below (3-sqrt(7))/2
        for u in np.linspace(0.0, ALPHA.u_strict, 1000, endpoint=False):
            assert u / psi(u) < 1.0
        for u in list(np.linspace(0.0, ALPHA.u_first_kind, 1000)) + [ALPHA.u_first_kind]:
            assert u / psi(u) <= 0.5 + 1e-15
        assert ALPHA.u_first_kind / psi(ALPHA.u_first_kind) == pytest.approx(0.5, abs=1e-12)


class TestRadii:
    def test_r0_at_alpha0(self):
        assert r0(ALPHA.alpha0) == pytest.approx(1.390388203, abs=1e-6)

    def test_r1_at_alpha0(self):
        assert r1(ALPHA.alpha0) == pytest.approx(0.390388203, abs=1e-6)

    def test_difference_is_one(self, rng):
        for a in rng.uniform(1e-6, ALPHA.alpha_tight, size=20):
            assert r0(a) - r1(a) == pytest.approx(1.0, abs=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            r0(0.5)
        with pytest.raises(ValueError):
            r1(-0.1)


class TestConstants:
    def test_alpha0_digits(self):
        assert ALPHA.alpha0 == pytest.approx(0.157670780786754, abs=1e-12)
        assert 0.1576707 < ALPHA.alpha0 < 0.1576708

    def test_alpha_star(self):
        a = alpha_star()
        assert a > 0.116
        assert abs(a - ALPHA.alpha0 * (1.0 - a * r0(a)) ** 2) < 1e-12
        # frozen by 200-iteration bisection of the fixed-point equation
        assert a == pytest.approx(0.116789015756975, abs=1e-12)

    def test_robust_threshold(self):
        a = robust_alpha_threshold()
        assert a == pytest.approx(0.074290, abs=1e-5)
        assert robust_u0(a) == pytest.approx(ALPHA.u_robust_max, abs=1e-10)

    def test_robust_u0_monotone_bracket(self):
        assert robust_u0(0.05) < ALPHA.u_robust_max < robust_u0(0.09)


class TestNewtonModelStep:
    def test_fixed_point_at_zero(self):
        assert newton_h_gamma(1.0, 0.0) == 0.0

    def test_value(self):
        assert newton_h_gamma(1.0, 0.1) == pytest.approx(-0.01 / 0.62, abs=1e-15)

    def test_matches_direct_differentiation(self, rng):
        for _ in range(50):
            gamma = rng.uniform(0.2, 3.0)
            t = rng.uniform(-0.1, 0.1) / gamma
            direct = newton_step_h_gamma_direct(gamma, t)
            assert newton_h_gamma(gamma, t) == pytest.approx(direct, abs=1e-12)

    def test_singular_step(self):
        u = (2.0 - math.sqrt(2.0)) / 2.0  # root of psi
        with pytest.raises(ZeroDivisionError):
            newton_h_gamma(1.0, u)


class TestErrorSequence:
    @pytest.mark.parametrize("i,u0key", sorted(GAMMA_TABLE, key=str))
    def test_table_cells(self, i, u0key):
        u0 = ALPHA.u_first_kind if u0key == "edge" else u0key
        seq = gamma_error_sequence(u0, i)
        assert -math.log2(seq[i] / u0) == pytest.approx(GAMMA_TABLE[(i, u0key)], abs=1e-3)

    def test_edge_column_first_step_exact(self):
        seq = gamma_error_sequence(ALPHA.u_first_kind, 1)
        assert seq[1] / seq[0] == pytest.approx(0.5, abs=1e-14)

    def test_robust_cell(self):
        seq = gamma_error_sequence(1 / 8, 2, delta=0.0)
        assert -math.log2(seq[2] / seq[0]) == pytest.approx(6.997, abs=1e-3)

    def test_quadratic_contraction_bound(self):
        u0 = ALPHA.u_first_kind
        seq = gamma_error_sequence(u0, 10)
        for i, u in enumerate(seq):
            assert u / u0 <= 2.0 ** (-(2**i) + 1) * (1 + 1e-12)

    def test_sharpness_above_edge(self):
        u0 = ALPHA.u_first_kind + 1e-6
        seq = gamma_error_sequence(u0, 1)
        assert seq[1] / u0 > 0.5

    def test_perturbed_envelope(self):
        u0, delta = 0.12, 0.01
        seq = gamma_error_sequence(u0, 12, delta)
        for i, u in enumerate(seq):
            assert u / u0 <= max(2.0 ** (-(2**i) + 1), 2.0 * delta / u0) + 1e-12
        # plateau at roughly 2 delta / u0
        assert seq[-1] / u0 == pytest.approx(2.0 * delta / u0, rel=0.5)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            gamma_error_sequence(ALPHA.u_strict, 3)
        with pytest.raises(ValueError):
            gamma_error_sequence(0.01, 3, delta=0.02)
        with pytest.raises(ValueError):
            gamma_error_sequence(0.2, 3, delta=0.01)


class TestUniversalQuadratic:
    def test_construction_bounds(self):
        with pytest.raises(ValueError):
            UniversalQuadratic.from_invariants(1.0, 0.2)

    def test_zeros_and_ratios(self, rng):
        for _ in range(20):
            beta = rng.uniform(0.05, 1.0)
            alpha = rng.uniform(1e-3, ALPHA.alpha_tight)
            u = UniversalQuadratic.from_invariants(beta, alpha / beta)
            assert 0.0 < u.zeta1 <= u.zeta2 < 1.0 / u.gamma
            assert 0.0 <= u.q <= u.eta_ratio < 1.0
            assert abs(u.value(u.zeta1)) < 1e-12
            assert abs(u.value(u.zeta2)) < 1e-11

    def test_product_equals_series(self, rng):
        u = UniversalQuadratic.from_invariants(0.4, 0.25)
        for t in rng.uniform(-0.5, 0.9 * u.zeta1, size=50):
            assert u.value(t) == pytest.approx(u.value_series(t), abs=1e-12)

    def test_first_step_is_beta(self):
        u = UniversalQuadratic.from_invariants(0.11, 0.9)
        assert u.orbit(1) - u.orbit(0) == pytest.approx(u.beta, abs=1e-14)

    def test_closed_form_against_direct_newton(self):
        beta, gamma = 0.08, 1.7
        direct = newton_iterates_on_model(beta, gamma, 30)
        u = UniversalQuadratic.from_invariants(beta, gamma)
        for i in (0, 1, 2, 3, 5, 10, 30):
            assert u.orbit(i) == pytest.approx(direct[i], rel=1e-10)
        assert universal_orbit_closed(beta, gamma, 4) == pytest.approx(direct[4], rel=1e-10)

    def test_second_kind_iff_alpha0(self):
        below = UniversalQuadratic.from_invariants(1.0, ALPHA.alpha0 * 0.999)
        above = UniversalQuadratic.from_invariants(1.0, ALPHA.alpha0 * 1.001)
        at = UniversalQuadratic.from_invariants(1.0, ALPHA.alpha0)
        assert below.q < 0.5
        assert above.q > 0.5
        assert at.q == pytest.approx(0.5, abs=1e-12)

    def test_zeta1_gamma_closed_form(self, rng):
        # zeta1 * gamma(h, zeta1) against the closed form
        # (1+a-sqrt(D))/(3-a+sqrt(D)) / psi((1+a-sqrt(D))/4), where gamma at
        # zeta1 is measured through the derivatives of the rational function
        for alpha in rng.uniform(0.01, 0.16, size=20):
            u = UniversalQuadratic.from_invariants(1.0, alpha)
            g = u.gamma
            z1, z2, p = u.zeta1, u.zeta2, 1.0 / u.gamma
            # h = 2 (t-z1)(t-z2)/(p-t); derivatives from the partial-fraction
            # form h(t) = -2t + c0 + c1/(p - t)
            c1 = 2.0 * (p - z1) * (p - z2)
            hp_z1 = -2.0 + c1 / (p - z1) ** 2
            best = 0.0
            for k in range(2, 60):
                hk = c1 * math.factorial(k) / (p - z1) ** (k + 1)
                best = max(best, abs(hk / (math.factorial(k) * hp_z1)) ** (1.0 / (k - 1)))
            s = math.sqrt(u.Delta)
            closed = ((1.0 + alpha - s) / (3.0 - alpha + s)
                      / psi((1.0 + alpha - s) / 4.0))
            assert z1 * best == pytest.approx(closed, rel=1e-9)


# Reference cells of the certified-error table; the alpha = 1/32 column is
# fully recomputable, two malformed printed cells are covered by their
# recomputed values.
ALPHA_TABLE = {
    (1, 1 / 32): 4.854, (2, 1 / 32): 14.472, (3, 1 / 32): 33.700,
    (4, 1 / 32): 72.157, (5, 1 / 32): 149.071, (6, 1 / 32): 302.899,
    (2, 1 / 16): 10.865, (1, "alpha0"): 1.357,
}


class TestErrorBound:
    @pytest.mark.parametrize("i,col", sorted(ALPHA_TABLE, key=str))
    def test_table_cells(self, i, col):
        alpha = ALPHA.alpha0 if col == "alpha0" else col
        assert -math.log2(error_bound_alpha(alpha, i)) == pytest.approx(
            ALPHA_TABLE[(i, col)], abs=2e-3)

    def test_matches_orbit_tail(self):
        # bound at i dominates the distance from t_i to zeta1, in beta units
        beta, gamma = 1.0, 0.05
        u = UniversalQuadratic.from_invariants(beta, gamma)
        for i in range(1, 8):
            gap = (u.zeta1 - u.orbit(i)) / beta
            assert gap <= error_bound_alpha(u.alpha, i) * r0(u.alpha) ** 0 + 1e-12


class TestContractionCoefficients:
    def test_c0_is_one(self, rng):
        for a in rng.uniform(1e-3, ALPHA.alpha_tight, size=10):
            assert contraction_coefficients(a, 0)[0] == pytest.approx(1.0, abs=1e-12)

    def test_non_increasing_positive_limit(self):
        cs = contraction_coefficients(ALPHA.alpha0, 20)
        assert all(cs[i + 1] <= cs[i] + 1e-15 for i in range(20))
        assert cs[-1] > 0.0

    def test_reproduces_orbit_differences(self, rng):
        for alpha in rng.uniform(0.02, 0.15, size=5):
            u = UniversalQuadratic.from_invariants(0.7, alpha / 0.7)
            cs = contraction_coefficients(alpha, 6)
            for i in range(6):
                lhs = (u.orbit(i + 1) - u.orbit(i)) / u.beta
                assert lhs == pytest.approx(cs[i] * u.q ** (2**i - 1), abs=1e-12)

    def test_q_below_eta(self, rng):
        for a in rng.uniform(1e-4, ALPHA.alpha_tight, size=50):
            u = UniversalQuadratic.from_invariants(1.0, a)
            assert u.q <= u.eta_ratio + 1e-15


class TestSeriesHelpers:
    def test_coefficients_d2(self):
        assert [geometric_series_coeff(2, k) for k in range(4)] == [1.0, 2.0, 3.0, 4.0]

    def test_partial_sum(self):
        total = sum(geometric_series_coeff(3, k) * 0.5**k for k in range(41))
        assert total == pytest.approx(8.0, abs=1e-9)

    def test_bound_helpers_at_zero(self):
        assert g_deriv(0.0) == 1.0
        assert g_gamma_drift(0.0) == 1.0

    def test_domains(self):
        with pytest.raises(ValueError):
            geometric_series_coeff(0, 1)
        with pytest.raises(ValueError):
            g_deriv(0.5)


def test_table_functions_shape():
    g = gamma_contraction_table()
    assert len(g) == 5 and all(len(r) == 5 for r in g)
    assert g[0][3] == pytest.approx(2.087, abs=1e-3)
