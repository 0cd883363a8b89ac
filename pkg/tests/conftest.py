"""Shared oracles for the test suite.

Everything here is computed by a route independent of the implementation
it checks: high-precision series/quadrature in mpmath, scipy's erfcx, or
plain closed-form arithmetic.
"""

import math

import mpmath as mp
import numpy as np
import pytest
from scipy.special import erfcx


def ml_series_oracle(alpha: float, x: float) -> float:
    """E_alpha(-x) by brute high-precision summation of the defining series.

    Working precision adapts to the largest term so cancellation never
    costs accuracy; impractical for small alpha at large x (term count
    blows up) -- use ml_spectral_oracle there.
    """
    peak_digits = 0.0
    if x > 1.0:
        n_peak = max(1, int(round(x ** (1.0 / alpha) / alpha)))
        for n in {max(1, n_peak // 2), n_peak, 2 * n_peak}:
            peak_digits = max(
                peak_digits, (n * math.log(x) - math.lgamma(alpha * n + 1)) / math.log(10)
            )
    dps = int(40 + peak_digits)
    with mp.workdps(dps):
        a = mp.mpf(alpha)
        total = mp.mpf(0)
        peak = mp.mpf(1)
        n = 0
        while True:
            term = mp.mpf(-x) ** n / mp.gamma(a * n + 1)
            total += term
            peak = max(peak, abs(term))
            if n > 4 and abs(term) < peak * mp.mpf(10) ** (-(dps - 5)):
                return float(total)
            n += 1


def ml_spectral_oracle(alpha: float, x: float, dps: int = 40) -> float:
    """E_alpha(-x) through its completely monotone spectral representation."""
    with mp.workdps(dps):
        a = mp.mpf(alpha)
        t = mp.mpf(x) ** (1 / a)
        sa, ca = mp.sin(a * mp.pi), mp.cos(a * mp.pi)

        def f(u):
            r = u / t
            ra = r ** a
            return mp.e ** (-u) * (r ** (a - 1) * sa / (ra * ra + 2 * ra * ca + 1)) / (mp.pi * t)

        knots = [0, mp.mpf("1e-10"), mp.mpf("1e-6"), mp.mpf("1e-3"),
                 mp.mpf("0.1"), 1, 5, 20, 100, mp.inf]
        return float(mp.quad(f, knots))


def ml_erfcx_oracle(x: float) -> float:
    """E_{1/2}(-x) = exp(x^2) erfc(x), scipy's scaled complementary error function."""
    return float(erfcx(x))


def wright_series_oracle(mu: float, nu: float, z: float, dps: int = 120) -> float:
    """W_{mu,nu}(z) by brute high-precision summation."""
    with mp.workdps(dps):
        mz, mmu, mnu = mp.mpf(z), mp.mpf(mu), mp.mpf(nu)
        total = mp.mpf(0)
        peak = mp.mpf(1)
        n = 0
        while True:
            term = mz ** n / mp.factorial(n) * mp.rgamma(mmu * n + mnu)
            total += term
            peak = max(peak, abs(term))
            if n > 8 and abs(term) < peak * mp.mpf(10) ** (-(dps - 10)):
                return float(total)
            n += 1


def half_gaussian_density(t: float, tau: float) -> float:
    """Closed-form inverse-stable density at index 1/2."""
    return math.exp(-tau * tau / (4.0 * t)) / math.sqrt(math.pi * t)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(987654321)
