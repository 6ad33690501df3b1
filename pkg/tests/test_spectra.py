import math

import numpy as np
import pytest
from scipy import special

from abspectral.errors import DomainError, RangeError, UnsupportedError
from abspectral.spectra import (PRESETS, Annulus, Disc, Square, bessel_zeros, cross_product,
                                cross_product_zeros, eigenvalue_branches, lambda_grid, parse_domain,
                                riesz_sum, spectrum, weyl_quotient)
from oracles import series_zeros, shooting_eigen_t

# Largest |lambda(0.2) - lambda(0)| / (2 sqrt(lambda) 0.2) over the lowest 20
# disc eigenvalues was 1.61; frozen with margin.
FLUX_CONTINUITY_C = 2.0

SANDWICH_RANGES = [("A", 0.0, 1e4), ("A", 0.2, 5e4), ("B", 0.0, 840.0), ("C", 0.0, 1e4), ("C", 0.2, 1e4),
                   ("D", 0.0, 1e3), ("D", 0.2, 1e3), ("E", 0.0, 300.0), ("E", 0.2, 300.0)]


class TestDomains:
    def test_presets(self):
        assert PRESETS["A"] == Disc(1.0, "A")
        assert PRESETS["E"].ratio == 11.0
        assert PRESETS["B"].area == pytest.approx(4.0)
        assert PRESETS["D"].area == pytest.approx(3 * math.pi)

    @pytest.mark.parametrize("text,expected", [("a", Disc(1.0, "A")), ("disc:2.5", Disc(2.5)),
                                               ("annulus:1,3", Annulus(1.0, 3.0)), ("square:0.5", Square(0.5))])
    def test_parse(self, text, expected):
        assert parse_domain(text) == expected

    @pytest.mark.parametrize("text", ["F", "disc:", "annulus:2,1", "square:x", "ellipse:1,2", "disc:-1"])
    def test_parse_rejects(self, text):
        with pytest.raises(DomainError):
            parse_domain(text)


class TestBesselZeros:
    def test_order_zero(self):
        np.testing.assert_allclose(bessel_zeros(0.0, 10.0), [2.404825558, 5.520078110, 8.653727913], atol=1e-8)

    @pytest.mark.parametrize("nu", [0.2, 1.8, 6.5])
    def test_against_series_oracle(self, nu):
        np.testing.assert_allclose(bessel_zeros(nu, 25.0), series_zeros(nu, 25.0), atol=1e-9)

    def test_half_order(self):
        np.testing.assert_allclose(bessel_zeros(0.5, 10.0), [math.pi, 2 * math.pi, 3 * math.pi], atol=1e-12)

    def test_empty(self):
        assert bessel_zeros(0.0, 2.0) == []
        assert bessel_zeros(30.0, 29.0) == []

    @pytest.mark.parametrize("nu", [0.0, 0.3, 2.0, 7.7, 10.0])
    def test_spacing(self, nu):
        gaps = np.diff(bessel_zeros(nu, 200.0))[1:]
        assert np.all((gaps > 3.0) & (gaps < 4.5))
        # Gaps approach pi from above for nu > 1/2 and from below for nu < 1/2.
        trend = np.diff(gaps) * (1 if nu > 0.5 else -1)
        assert np.all(trend < 1e-12)
        assert np.all((gaps - math.pi) * (nu - 0.5) > -1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            bessel_zeros(-1.0, 5.0)


class TestCrossProduct:
    def test_half_order(self):
        np.testing.assert_allclose(cross_product_zeros(0.5, 2.0, 12.0), [math.pi, 2 * math.pi, 3 * math.pi],
                                   atol=1e-12)

    def test_order_zero_against_shooting(self):
        (t,) = cross_product_zeros(0.0, 2.0, 4.0)
        assert t == pytest.approx(math.pi, rel=0.05)
        assert t == pytest.approx(shooting_eigen_t(0.0, 2.0, 2.5, 3.5), abs=1e-8)

    def test_thin_annulus_empty(self):
        assert cross_product_zeros(0.0, 1.1, 30.0) == []

    def test_sign_matches_unnormalized(self):
        t = np.linspace(0.5, 20, 60)
        raw = special.jv(1.3, t) * special.yv(1.3, 2 * t) - special.jv(1.3, 2 * t) * special.yv(1.3, t)
        assert np.all(np.sign(cross_product(1.3, 2.0, t)) == np.sign(raw))
        assert np.all(np.abs(cross_product(1.3, 2.0, t)) <= 1.0)

    def test_large_order_stays_finite(self):
        z = cross_product_zeros(150.0, 11.0, 40.0)
        assert all(np.isfinite(z))

    @pytest.mark.parametrize("nu", [0.2, 3.7])
    def test_flux_order_against_shooting(self, nu):
        zeros = cross_product_zeros(nu, 2.0, 12.0)
        for t in zeros[:3]:
            assert t == pytest.approx(shooting_eigen_t(nu, 2.0, t - 0.2, t + 0.2), abs=1e-8)

    def test_domain(self):
        with pytest.raises(DomainError):
            cross_product_zeros(0.0, 1.0, 5.0)


class TestSpectrum:
    def test_disc_example(self):
        spec = spectrum(PRESETS["A"], 0.0, 6.0)
        assert len(spec) == 1
        assert spec.lambdas[0] == pytest.approx(5.78319, abs=1e-5)
        assert spec.entries[0][1:] == (0, 1)

    def test_square_example(self):
        spec = spectrum(PRESETS["B"], 0.0, 13.0)
        np.testing.assert_allclose(spec.lambdas, math.pi ** 2 / 4 * np.array([2, 5, 5]))

    def test_square_with_flux_unsupported(self):
        with pytest.raises(UnsupportedError):
            spectrum(PRESETS["B"], 0.2, 100.0)

    def test_bad_cutoff(self):
        with pytest.raises(DomainError):
            spectrum(PRESETS["A"], 0.0, 0.0)

    def test_sorted_positive_bounded(self, preset_spectrum):
        spec = preset_spectrum("D", 0.2, 1e3)
        assert np.all(np.diff(spec.lambdas) >= 0)
        assert np.all(spec.lambdas > 0) and np.all(spec.lambdas <= 1e3)

    def test_zero_flux_degeneracy(self):
        spec = spectrum(PRESETS["A"], 0.0, 200.0)
        for lam, n, k in spec.entries:
            if n > 0:
                assert (lam, -n, k) in spec.entries

    @pytest.mark.parametrize("alpha", [0.0, 0.2, 0.5])
    def test_disc_completeness(self, alpha):
        lam_max = 3000.0
        spec = spectrum(PRESETS["A"], alpha, lam_max)
        reach = math.sqrt(lam_max)
        expected = 0
        for n in range(-int(reach) - 2, int(reach) + 3):
            nu = abs(n - alpha)
            expected += len(bessel_zeros(nu, reach, step=math.pi / 16))
        assert len(spec) == expected

    @pytest.mark.parametrize("key", ["C", "D"])
    def test_annulus_completeness(self, key):
        dom = PRESETS[key]
        lam_max = 2000.0
        spec = spectrum(dom, 0.2, lam_max)
        reach = math.sqrt(lam_max)
        expected = 0
        for n in range(-int(reach * dom.outer) - 2, int(reach * dom.outer) + 3):
            expected += len(cross_product_zeros(abs(n - 0.2), dom.ratio, reach * dom.inner, refine=16))
        assert len(spec) == expected

    def test_annulus_eigenvalue_against_shooting(self):
        spec = spectrum(PRESETS["D"], 0.2, 30.0)
        lam, n, k = spec.entries[0]
        assert (n, k) == (0, 1)
        t = shooting_eigen_t(0.2, 2.0, math.sqrt(lam) - 0.2, math.sqrt(lam) + 0.2)
        assert lam == pytest.approx(t * t, rel=1e-9)

    def test_flux_continuity(self):
        a0 = spectrum(PRESETS["A"], 0.0, 400.0).lambdas[:20]
        a2 = spectrum(PRESETS["A"], 0.2, 400.0).lambdas[:20]
        assert np.all(np.abs(a2 - a0) <= 2 * np.sqrt(a0) * 0.2 * FLUX_CONTINUITY_C)

    @pytest.mark.parametrize("key,alpha,lam_max", SANDWICH_RANGES)
    def test_counting_below_weyl(self, preset_spectrum, key, alpha, lam_max):
        # Observed behavior rather than a theorem for these domains.
        spec = preset_spectrum(key, alpha, lam_max)
        grid = lambda_grid(spec, per_decade=100)
        assert np.all(spec.counting(grid) <= spec.domain.area * grid / (4 * math.pi))


class TestWeylQuotient:
    def test_below_first_eigenvalue(self):
        spec = spectrum(PRESETS["A"], 0.0, 10.0)
        assert np.all(weyl_quotient(spec, 1.0, [1.0, 5.0]).values == 0.0)

    def test_single_eigenvalue(self):
        spec = spectrum(PRESETS["A"], 0.0, 6.0)
        assert weyl_quotient(spec, 0.0, 6.0).values[0] == pytest.approx(2 / 3)

    def test_disc_gamma_one(self, preset_spectrum):
        spec = preset_spectrum("A", 0.0, 1e4)
        v = weyl_quotient(spec, 1.0, 1e4).values[0]
        assert 0.95 <= v <= 1.0

    def test_out_of_range(self):
        spec = spectrum(PRESETS["A"], 0.0, 50.0)
        with pytest.raises(RangeError):
            weyl_quotient(spec, 1.0, [60.0])

    def test_nonpositive_lambda(self):
        spec = spectrum(PRESETS["A"], 0.0, 50.0)
        with pytest.raises(DomainError):
            weyl_quotient(spec, 1.0, [0.0])

    @pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0])
    def test_riesz_sum_direct(self, gamma):
        spec = spectrum(PRESETS["D"], 0.2, 300.0)
        lam = np.array([20.0, 150.0, 299.0])
        direct = [np.sum(np.clip(L - spec.lambdas, 0, None) ** gamma) for L in lam]
        np.testing.assert_allclose(riesz_sum(spec, gamma, lam), direct, rtol=1e-12)

    def test_counting_strict(self):
        spec = spectrum(PRESETS["A"], 0.0, 20.0)
        first = spec.lambdas[0]
        assert riesz_sum(spec, 0.0, [first])[0] == 0
        assert riesz_sum(spec, 0.0, [np.nextafter(first, np.inf)])[0] == 1

    def test_gamma_zero_decreasing_between_jumps(self, preset_spectrum):
        spec = preset_spectrum("A", 0.2, 5e4)
        grid = lambda_grid(spec)
        v = weyl_quotient(spec, 0.0, grid).values
        n = spec.counting(grid)
        same = (n[1:] == n[:-1]) & (n[1:] > 0)
        assert np.all(np.diff(v)[same] < 0)

    def test_grid_includes_jumps(self):
        spec = spectrum(PRESETS["A"], 0.0, 100.0)
        grid = lambda_grid(spec)
        assert set(spec.lambdas.tolist()) <= set(grid.tolist())
        assert np.all(np.diff(grid) > 0)


class TestBranches:
    def test_endpoint_matches_spectrum(self):
        branches = eigenvalue_branches(PRESETS["A"], [0.0, 0.25, 0.5], 100.0)
        at_zero = sorted(b.lambdas[0] for b in branches if not math.isnan(b.lambdas[0]))
        np.testing.assert_allclose(at_zero, spectrum(PRESETS["A"], 0.0, 100.0).lambdas)

    def test_ground_branch_increasing(self):
        alphas = np.linspace(0, 0.5, 11)
        (b,) = [b for b in eigenvalue_branches(PRESETS["A"], alphas, 100.0) if (b.n, b.k) == (0, 1)]
        assert np.all(np.diff(b.lambdas) > 0)
        np.testing.assert_allclose(b.lambdas, [bessel_zeros(a, 10.0)[0] ** 2 for a in alphas], rtol=1e-12)

    def test_half_flux_coincidence(self):
        branches = {(b.n, b.k): b for b in eigenvalue_branches(PRESETS["A"], [0.5], 100.0)}
        assert branches[(0, 1)].lambdas[0] == branches[(1, 1)].lambdas[0]

    def test_disc_only(self):
        with pytest.raises(UnsupportedError):
            eigenvalue_branches(PRESETS["D"], [0.0], 100.0)
