"""Special-function evaluation against independent oracles.

Oracles live in conftest: scipy's erfcx for the index-1/2 identity,
high-precision mpmath summation for general orders, closed-form Gaussians
for the index-1/2 density.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from fractime import (
    ConvergenceError,
    DomainError,
    MLRegime,
    PoleError,
    density_tail_cutoff,
    gamma_fn,
    inverse_stable_density,
    mittag_leffler,
    wright,
)
from conftest import (
    half_gaussian_density,
    ml_erfcx_oracle,
    ml_series_oracle,
    ml_spectral_oracle,
    wright_series_oracle,
)


class TestGamma:
    def test_unity(self):
        assert gamma_fn(1.0) == pytest.approx(1.0, rel=1e-13)

    def test_half(self):
        assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)

    def test_factorial(self):
        assert gamma_fn(4.0) == pytest.approx(6.0, rel=1e-13)

    @pytest.mark.parametrize("x", [0.0, -1.0, -7.0])
    def test_poles(self, x):
        with pytest.raises(PoleError):
            gamma_fn(x)


class TestMittagLeffler:
    def test_at_zero(self):
        assert mittag_leffler(0.5, 0.0) == 1.0

    def test_classical_exponential(self):
        assert mittag_leffler(1.0, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-13)

    def test_half_at_one(self):
        # frozen from the series oracle; equals e * erfc(1)
        assert mittag_leffler(0.5, 1.0) == pytest.approx(0.4275835761558070, rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
    def test_series_band_against_oracle(self, alpha):
        for x in (0.01, 0.3, 1.0, 2.7, 4.9):
            ref = ml_series_oracle(alpha, x)
            assert mittag_leffler(alpha, x) == pytest.approx(ref, rel=1e-10)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
    def test_contour_band_against_oracle(self, alpha):
        for x in (5.5, 9.0, 20.0, 49.0):
            ref = ml_erfcx_oracle(x) if alpha == 0.5 else ml_spectral_oracle(alpha, x)
            assert mittag_leffler(alpha, x) == pytest.approx(ref, rel=1e-10)

    def test_erfcx_identity_band(self):
        for x in np.linspace(0.0, 20.0, 81):
            ref = ml_erfcx_oracle(float(x))
            assert abs(mittag_leffler(0.5, float(x)) - ref) <= 1e-10 * ref

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
    def test_tail_normalization(self, alpha):
        # x * Gamma(1-alpha) * E_alpha(-x) -> 1
        for x in (1e4, 1e6):
            scaled = mittag_leffler(alpha, x) * x * gamma_fn(1.0 - alpha)
            assert scaled == pytest.approx(1.0, abs=2e-4)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
    def test_positive_and_strictly_decreasing(self, alpha):
        xs = np.logspace(-3, 6, 200)
        vals = np.array([mittag_leffler(alpha, float(x)) for x in xs])
        assert np.all(vals > 0.0) and np.all(vals <= 1.0)
        assert np.all(np.diff(vals) < 0.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            mittag_leffler(1.5, 1.0)
        with pytest.raises(DomainError):
            mittag_leffler(0.5, -1.0)

    def test_regime_validation(self):
        with pytest.raises(Exception):
            MLRegime(series_radius=60.0, asymptotic_threshold=50.0)

    def test_custom_regime_consistency(self):
        # pushing the band edges moves the route, not the value; the contour
        # route loses some accuracy outside its tuned band, hence the looser
        # bound at x=60
        wide = MLRegime(series_radius=2.0, asymptotic_threshold=80.0)
        a = mittag_leffler(0.5, 3.0)
        b = mittag_leffler(0.5, 3.0, regime=wide)
        assert a == pytest.approx(b, rel=1e-9)
        a = mittag_leffler(0.5, 60.0)
        b = mittag_leffler(0.5, 60.0, regime=wide)
        assert a == pytest.approx(b, rel=1e-6)


class TestWright:
    def test_at_zero(self):
        assert wright(-0.5, 0.5, 0.0) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-13)

    def test_half_gaussian_at_minus_one(self):
        ref = math.exp(-0.25) / math.sqrt(math.pi)  # 0.43939128946772243
        assert wright(-0.5, 0.5, -1.0) == pytest.approx(ref, rel=1e-12)

    def test_half_gaussian_at_minus_ten(self):
        ref = math.exp(-25.0) / math.sqrt(math.pi)
        assert wright(-0.5, 0.5, -10.0) == pytest.approx(ref, rel=1e-10)

    def test_closed_form_route_past_thirty(self):
        ref = math.exp(-35.0 ** 2 / 4.0) / math.sqrt(math.pi)
        assert wright(-0.5, 0.5, -35.0) == pytest.approx(ref, rel=1e-13)

    @pytest.mark.parametrize("mu,nu", [(-0.4, 0.6), (-0.6, 0.4), (-0.3, 0.7)])
    def test_general_orders_against_oracle(self, mu, nu):
        for z in (-0.5, -3.0, -8.0):
            ref = wright_series_oracle(mu, nu, z)
            assert wright(mu, nu, z) == pytest.approx(ref, rel=1e-11)

    def test_nonconvergence_signaled(self):
        # peak index far beyond the budget: decay cannot be established
        with pytest.raises(ConvergenceError):
            wright(-0.3, 0.7, -100.0)

    def test_budget_extends_convergence(self):
        ref = wright_series_oracle(-0.6, 0.4, -10.0, dps=200)
        with pytest.raises(ConvergenceError):
            wright(-0.6, 0.4, -10.0, budget=60)
        assert wright(-0.6, 0.4, -10.0, budget=400) == pytest.approx(ref, rel=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            wright(0.5, 0.5, -1.0)
        with pytest.raises(DomainError):
            wright(-0.5, 0.5, 1.0)


class TestInverseStableDensity:
    def test_matches_half_gaussian(self):
        for t in (0.5, 1.0, 4.0):
            for tau in (0.1, 1.0, 3.0):
                ref = half_gaussian_density(t, tau)
                assert inverse_stable_density(0.5, t, tau) == pytest.approx(ref, rel=1e-11)

    def test_zero_limit(self):
        # 1/sqrt(4 pi)
        assert inverse_stable_density(0.5, 4.0, 0.0) == pytest.approx(
            0.28209479177387814, rel=1e-12
        )

    @pytest.mark.parametrize("alpha", [0.4, 0.5, 0.6])
    @pytest.mark.parametrize("t", [0.5, 1.0, 10.0])
    def test_normalization(self, alpha, t):
        cutoff = density_tail_cutoff(alpha, t, floor=1e-10)
        total, _ = quad(lambda tau: inverse_stable_density(alpha, t, tau), 0.0, cutoff,
                        limit=200)
        assert total == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_laplace_transform_identity(self, lam, t):
        # integral of e^{-lam tau} against the density equals E_a(-lam t^a)
        alpha = 0.5
        cutoff = density_tail_cutoff(alpha, t, floor=1e-10)
        got, _ = quad(
            lambda tau: math.exp(-lam * tau) * inverse_stable_density(alpha, t, tau),
            0.0, cutoff, limit=200,
        )
        ref = ml_erfcx_oracle(lam * t ** alpha)
        assert got == pytest.approx(ref, abs=1e-6)

    def test_domain(self):
        with pytest.raises(DomainError):
            inverse_stable_density(1.2, 1.0, 1.0)
        with pytest.raises(DomainError):
            inverse_stable_density(0.5, 0.0, 1.0)
        with pytest.raises(DomainError):
            inverse_stable_density(0.5, 1.0, -0.5)


def test_thread_safety_of_precision_paths():
    # elevated-precision series run under a lock; concurrent evaluation must
    # reproduce serial values bit for bit
    import concurrent.futures

    from fractime.special import _wright_cached

    _wright_cached.cache_clear()
    args = [(0.5, 2.0 + 0.01 * k) for k in range(12)] + \
           [(0.45, 3.0 + 0.05 * k) for k in range(12)]
    serial_ml = [mittag_leffler(a, x) for a, x in args]
    zs = [-(0.3 + 0.2 * k) for k in range(20)]
    serial_w = [wright(-0.5, 0.5, z) for z in zs]
    _wright_cached.cache_clear()
    with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
        par_ml = list(pool.map(lambda ax: mittag_leffler(*ax), args))
        par_w = list(pool.map(lambda z: wright(-0.5, 0.5, z), zs))
    assert par_ml == serial_ml
    assert par_w == serial_w
