import math

import numpy as np
import pytest
from scipy import special

from abspectral.density import (FluxParameter, family_square_sum, lowered_product, rho, rho_asymptotic,
                                rho_families, rho_half, rho_prime, rho_prime_terms)
from abspectral.errors import AccuracyError, DomainError
from abspectral.specfun import NumericPolicy, integrate
from oracles import centered_difference, rho_mp, series_si

# 40-digit direct sums of J^2 over both order families (oracles.rho_mp).
RHO_REFERENCE = [
    (0.3, 300.7, 1.0001839830542706),
    (0.1, 57.3, 0.9998729835750829),
    (0.45, 0.37, 0.46268284211428601),
]


class TestFluxParameter:
    def test_valid(self):
        f = FluxParameter(0.25)
        assert f.sin_pi_alpha == pytest.approx(math.sin(math.pi / 4))
        assert f.mirror.alpha == 0.75
        assert FluxParameter(0.0).mirror.alpha == 0.0

    @pytest.mark.parametrize("bad", [-0.1, 1.0, 1.5, math.nan])
    def test_invalid(self, bad):
        with pytest.raises(DomainError):
            FluxParameter(bad)


class TestRhoExamples:
    def test_vanishes_at_origin(self):
        assert rho(0.3, 0.0) == 0.0

    def test_no_flux_is_one(self):
        assert rho(0.0, 17.2) == 1.0

    def test_half_flux_closed_form(self):
        # (2/pi) Si(2) with Si from its Taylor series; the value is 1.0220376...
        expected = 2 / math.pi * series_si(2.0)
        assert rho(0.5, 1.0) == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(1.02203764, abs=1e-8)

    @pytest.mark.parametrize("alpha,t,expected", RHO_REFERENCE)
    def test_against_extended_precision_sum(self, alpha, t, expected):
        assert rho(alpha, t) == pytest.approx(expected, abs=1e-12)

    def test_reference_values_reproduce(self):
        alpha, t, expected = RHO_REFERENCE[2]
        assert rho_mp(alpha, t) == pytest.approx(expected, abs=1e-15)

    def test_negative_t(self):
        with pytest.raises(DomainError):
            rho(0.3, -1.0)

    def test_series_limit(self):
        with pytest.raises(AccuracyError):
            rho(0.3, 500.0, NumericPolicy(max_series_terms=100))


class TestRhoInvariants:
    @pytest.mark.parametrize("alpha", [0.1, 0.2, 0.3, 0.4])
    def test_flux_symmetry(self, alpha):
        t = np.linspace(0, 50, 501)
        np.testing.assert_allclose(rho(alpha, t), rho(1 - alpha, t), atol=1e-12)

    @pytest.mark.parametrize("alpha", [0.2, 0.5])
    @pytest.mark.parametrize("T", [1.0, 5.0, 20.0])
    def test_fundamental_theorem(self, alpha, T):
        # rho_prime ~ s^(2 alpha - 1) at 0, handled by the algebraic weight.
        p = min(2 * alpha, 2 - 2 * alpha) - 1

        def smooth(s):
            s = max(s, 1e-200)  # QUADPACK samples the endpoint itself
            return rho_prime(alpha, s) / s ** p

        integral = integrate(smooth, 0, T, endpoint_powers=(p, 0.0))
        assert integral == pytest.approx(rho(alpha, T), abs=1e-7)

    @pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.8])
    def test_decay_envelope(self, alpha):
        t = np.linspace(20, 400, 3000)
        bound = 2 * math.sin(alpha * math.pi) / math.pi / t
        assert np.all(np.abs(rho(alpha, t) - 1) <= 1.2 * bound)

    def test_nonnegative(self):
        t = np.linspace(0, 80, 4001)
        for alpha in (0.05, 0.5, 0.93):
            assert np.all(rho(alpha, t) >= 0)

    def test_miller_matches_direct_sum(self):
        x = np.array([1.0, 3.3, 27.0, 140.0, 611.0])
        for first in (0.3, 0.7, 1.5):
            direct = sum(special.jv(first + m, x) ** 2 for m in range(int(x.max() + 250)))
            np.testing.assert_allclose(family_square_sum(first, x, NumericPolicy()), direct, rtol=1e-12)

    def test_families_behave_like_powers_at_origin(self):
        a, b = rho_families(0.3, np.array([1e-4, 2e-4]))
        assert a[1] / a[0] == pytest.approx(2 ** 0.6, rel=1e-6)
        assert b[1] / b[0] == pytest.approx(2 ** 1.4, rel=1e-6)


class TestRhoPrime:
    def test_half_flux(self):
        t = np.linspace(0.1, 30, 80)
        np.testing.assert_allclose(rho_prime(0.5, t), 2 / math.pi * np.sin(2 * t) / t, atol=1e-14)

    def test_half_flux_at_one(self):
        assert rho_prime(0.5, 1.0) == pytest.approx(2 / math.pi * math.sin(2.0), abs=1e-14)
        assert rho_prime(0.5, 1.0) == pytest.approx(0.578877, abs=1e-6)

    def test_limit_at_origin(self):
        assert rho_prime(0.5, 0.0) == pytest.approx(4 / math.pi)
        # rho_0.3 grows like t^0.6, so the one-sided derivative is infinite.
        assert rho_prime(0.3, 0.0) == math.inf
        assert rho_prime(0.3, 1e-12) > 1e4

    @pytest.mark.parametrize("t", [0.7, 5.0, 31.0])
    def test_finite_difference(self, t):
        fd = centered_difference(lambda s: rho(0.3, s), t, 1e-4)
        assert rho_prime(0.3, t) == pytest.approx(fd, abs=1e-6)

    def test_zero_flux_rejected(self):
        with pytest.raises(DomainError):
            rho_prime(0.0, 1.0)

    def test_recurrence_route_matches_connection_formula(self):
        x = np.geomspace(1e-3, 500, 300)
        for alpha in (0.1, 0.5, 0.77):
            first, second = rho_prime_terms(alpha, x)
            np.testing.assert_allclose(lowered_product(alpha, x), first, rtol=1e-9, atol=1e-13)
            np.testing.assert_allclose(lowered_product(1 - alpha, x), second, rtol=1e-9, atol=1e-13)


class TestAsymptotic:
    def test_node(self):
        assert rho_asymptotic(0.5, math.pi / 4) == pytest.approx(1.0, abs=1e-15)

    def test_value(self):
        expected = 1 - math.sin(0.2 * math.pi) / math.pi * math.cos(20.0) / 10
        assert rho_asymptotic(0.2, 10.0) == pytest.approx(expected, abs=1e-15)
        assert rho_asymptotic(0.2, 10.0) == pytest.approx(0.992365, abs=1e-5)

    def test_remainder_decays_like_inverse_square(self):
        # Sample at the nodes of cos(2t) so the leading term cannot mask the remainder.
        t = np.array([math.pi / 4 + k * math.pi / 2 for k in range(13, 128, 6)])
        t = t[(t >= 20) & (t <= 200)]
        err = np.abs(rho(0.3, t) - rho_asymptotic(0.3, t))
        fit = np.polyfit(np.log(t), np.log(err), 1)[0]
        assert fit <= -1.9

    def test_positive_t_required(self):
        with pytest.raises(DomainError):
            rho_asymptotic(0.3, 0.0)


def test_rho_half_matches_general_sum():
    t = np.linspace(0, 60, 700)
    np.testing.assert_allclose(rho(0.5, t), rho_half(t), atol=1e-12)
