"""Special functions for the closed-form routes.

Everything here is an evaluation of one of three entire/analytic families:

* ``gamma_fn``      -- the gamma function with explicit pole errors;
* ``mittag_leffler``-- E_a(-x) for 0 < a <= 1, x >= 0, the completely
  monotone relaxation function of the power-kernel time change;
* ``wright``        -- W_{mu,nu}(z) for -1 < mu < 0, z <= 0, whose
  (-a, 1-a) slice gives the inverse-stable marginal density.

Accuracy targets: gamma 1e-13 relative; mittag_leffler 1e-10 relative on the
parameter band the toolkit exercises (a in [0.3, 0.7], x <= 1e6); wright is
summed in adaptive-precision arithmetic and is exact to double roundoff
whenever it converges within its term budget.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import mpmath as mp
from functools import lru_cache
from scipy.special import gamma as _scipy_gamma, rgamma as _rgamma

from .errors import ConfigError, ConvergenceError, DomainError, PoleError
from .laplace import InversionConfig, talbot_invert

_LOG10 = math.log(10.0)

# mpmath working precision is process-global state; the elevated-precision
# series paths serialize on this lock so the module stays safe under
# concurrent use (fast double paths and cache hits never take it)
_MP_LOCK = threading.Lock()


def gamma_fn(x: float) -> float:
    """Gamma function on the reals, raising at its poles.

    Relative accuracy ~1e-15 (delegates to scipy's implementation after the
    pole check).
    """
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"gamma has a pole at {x}")
    return float(_scipy_gamma(x))


# ---------------------------------------------------------------------------
# Mittag-Leffler E_a(-x)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MLRegime:
    """Switchover control for E_a(-x) evaluation.

    The series is used up to series_radius, the divergent tail expansion
    from asymptotic_threshold on, and a Talbot contour integral of
    l^(a-1)/(l^a + x) in between.
    """

    series_radius: float = 5.0
    asymptotic_threshold: float = 50.0

    def __post_init__(self):
        if not (0.0 < self.series_radius < self.asymptotic_threshold):
            raise ConfigError("need 0 < series_radius < asymptotic_threshold")


_DEFAULT_REGIME = MLRegime()
# 24-term contour: truncation ~1e-12 and roundoff amplification e^(0.4*24)*eps
# ~3e-12; larger term counts lose more to roundoff than they gain.
_ML_TALBOT = InversionConfig(method="talbot", terms=24)


def _ml_series_cost(alpha: float, x: float):
    """(digits lost to cancellation, index of the largest series term)."""
    if x <= 1.0:
        return 0.0, 8
    n_peak = max(1, int(round(x ** (1.0 / alpha) / alpha)))
    worst = 0.0
    for n in {max(1, n_peak // 2), n_peak, 2 * n_peak}:
        worst = max(worst, (n * math.log(x) - math.lgamma(alpha * n + 1.0)) / _LOG10)
    return worst, n_peak


def _ml_series_double(alpha: float, x: float) -> float:
    terms = []
    n = 0
    while n < 600:
        v = (-x) ** n * _rgamma(alpha * n + 1.0)
        terms.append(v)
        if n > 3 and abs(v) < 1e-18:
            break
        n += 1
    return math.fsum(terms)


def _ml_series_mp(alpha: float, x: float, digits_lost: float) -> float:
    dps = int(30 + digits_lost)
    with _MP_LOCK, mp.workdps(dps):
        a = mp.mpf(alpha)
        xx = mp.mpf(x)
        total = mp.mpf(0)
        peak = mp.mpf(1)
        stop = mp.mpf(10) ** (-(digits_lost + 25))
        n = 0
        while True:
            term = (-xx) ** n / mp.gamma(a * n + 1)
            total += term
            peak = max(peak, abs(term))
            if n > 4 and abs(term) < peak * stop:
                return float(total)
            n += 1


def _ml_asymptotic(alpha: float, x: float) -> float:
    """Tail expansion sum_k (-1)^(k+1) x^-k / Gamma(1 - a k), optimally truncated."""
    total = 0.0
    prev = math.inf
    for k in range(1, 500):
        term = (-1) ** (k + 1) * x ** (-k) * _rgamma(1.0 - alpha * k)
        if abs(term) > prev:
            break
        total += term
        if term != 0.0:
            prev = abs(term)
        if k > 2 and abs(term) < 1e-18 * abs(total):
            break
    return total


def mittag_leffler(alpha: float, x: float, regime: MLRegime | None = None) -> float:
    """E_a(-x) for 0 < a <= 1 and x >= 0.

    Value lies in (0, 1] and decreases strictly in x.  Route selection:
    power series (compensated in double where cancellation allows, in
    elevated precision otherwise), Talbot inversion of l^(a-1)/(l^a + x)
    for the intermediate band, and the divergent tail expansion beyond
    ``regime.asymptotic_threshold``.  Within the series band the series is
    abandoned for the contour when its peak term index would make elevated
    precision more expensive than the contour (small a at the band edge).
    """
    alpha = float(alpha)
    x = float(x)
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"mittag_leffler requires 0 < alpha <= 1, got {alpha}")
    if x < 0.0:
        raise DomainError(f"mittag_leffler requires x >= 0, got {x}")
    regime = regime or _DEFAULT_REGIME
    if x == 0.0:
        return 1.0
    if alpha == 1.0:
        return math.exp(-x)
    if x >= regime.asymptotic_threshold:
        return _ml_asymptotic(alpha, x)
    if x <= regime.series_radius:
        digits_lost, n_peak = _ml_series_cost(alpha, x)
        if digits_lost <= 2.5:
            return _ml_series_double(alpha, x)
        if n_peak <= 300:
            return _ml_series_mp(alpha, x, digits_lost)
    return talbot_invert(
        lambda lam: lam ** (alpha - 1.0) / (lam ** alpha + x), 1.0, _ML_TALBOT
    )


# ---------------------------------------------------------------------------
# Wright function W_{mu,nu}(z), -1 < mu < 0, z <= 0
# ---------------------------------------------------------------------------

def _log10_abs_rgamma(arg: float) -> float:
    """log10 |1/Gamma(arg)|; -inf at the poles (where the term vanishes)."""
    if arg > 0.0:
        return -math.lgamma(arg) / _LOG10
    s = abs(math.sin(math.pi * arg))
    if s == 0.0:
        return -math.inf
    return (math.lgamma(1.0 - arg) + math.log(s) - math.log(math.pi)) / _LOG10


def _wright_peak(mu: float, nu: float, z: float, n_scan: int):
    """Largest log10 term magnitude and its index, scanned in cheap doubles."""
    best, n_best = -math.inf, 0
    lz = math.log10(-z)
    n = 0
    while n < n_scan:
        lg = _log10_abs_rgamma(mu * n + nu)
        if lg != -math.inf:
            v = n * lz - math.lgamma(n + 1.0) / _LOG10 + lg
            if v > best:
                best, n_best = v, n
            elif n > n_best + 60 and v < best - 40.0:
                break
        n += 1
    return best, n_best


def _half_gaussian(z: float) -> float:
    return math.exp(-z * z / 4.0) / math.sqrt(math.pi)


def wright(mu: float, nu: float, z: float, budget: int = 200) -> float:
    """Wright function W_{mu,nu}(z) = sum_n z^n / (n! Gamma(mu n + nu)).

    Restricted to -1 < mu < 0 and z <= 0 (the inverse-subordinator density
    slice).  Terms whose gamma argument hits a pole are exactly zero and do
    not count against the budget.  The term magnitudes must peak and start
    decaying within ``budget`` nonzero terms, otherwise ConvergenceError is
    raised; established decay is then summed to convergence.  For the
    density pair (mu, nu) = (-1/2, 1/2) the exact Gaussian closed form is
    used beyond |z| = 30 (and as fallback where the budget would fail),
    where the series cancellation is hopeless.

    Pure and memoized; quadratures against the density revisit arguments.
    """
    return _wright_cached(float(mu), float(nu), float(z), int(budget))


@lru_cache(maxsize=1 << 17)
def _wright_cached(mu: float, nu: float, z: float, budget: int) -> float:
    if not (-1.0 < mu < 0.0):
        raise DomainError(f"wright requires -1 < mu < 0, got {mu}")
    if z > 0.0:
        raise DomainError(f"wright requires z <= 0, got {z}")
    if budget < 8:
        raise ConfigError("wright term budget too small")
    if z == 0.0:
        return float(_rgamma(nu))
    is_density_pair = mu == -0.5 and nu == 0.5
    if is_density_pair and z < -30.0:
        return _half_gaussian(z)

    hard_cap = 8 * budget
    peak10, n_peak = _wright_peak(mu, nu, z, 4 * hard_cap)
    dps = int(30 + max(0.0, peak10))
    # Retry with more digits when the sum lands near the roundoff floor
    # (result many orders below the largest term).
    for _ in range(4):
        result, ok, nonzero = _wright_sum(mu, nu, z, n_peak, peak10, dps, budget, hard_cap)
        if not ok:
            if is_density_pair:
                return _half_gaussian(z)
            raise ConvergenceError(
                f"wright series failed to decay within {budget} nonzero terms "
                f"(mu={mu}, nu={nu}, z={z})"
            )
        if result is not None:
            return result
        dps += int(0.6 * dps) + 20
    raise ConvergenceError(f"wright series precision escalation failed (z={z})")


def _wright_sum(mu, nu, z, n_peak, peak10, dps, budget, hard_cap):
    """One fixed-precision pass.  Returns (value | None, decayed_ok, nonzero)."""
    with _MP_LOCK, mp.workdps(dps):
        mz, mmu, mnu = mp.mpf(z), mp.mpf(mu), mp.mpf(nu)
        noise_floor = mp.mpf(10) ** (-(dps - max(0.0, peak10) - 8))
        decay_mark = mp.mpf("1e-3")
        total = mp.mpf(0)
        peak = mp.mpf(0)
        n = nonzero = small_run = 0
        decayed = False
        while True:
            term = mz ** n / mp.factorial(n) * mp.rgamma(mmu * n + mnu)
            if term != 0:
                nonzero += 1
                total += term
                mag = abs(term)
                peak = max(peak, mag)
                if n > n_peak and mag <= peak * decay_mark:
                    decayed = True
                if not decayed and nonzero >= budget:
                    return None, False, nonzero
                if n > n_peak and mag <= abs(total) * noise_floor:
                    small_run += 1
                    if small_run >= 2:
                        # reject if the sum sits at the roundoff floor itself
                        if total != 0 and abs(total) > peak * mp.mpf(10) ** (-(dps - 12)):
                            return float(total), True, nonzero
                        return None, True, nonzero
                else:
                    small_run = 0
            n += 1
            if nonzero > hard_cap:
                return None, False, nonzero


# ---------------------------------------------------------------------------
# Inverse-stable density
# ---------------------------------------------------------------------------

def inverse_stable_density(alpha: float, t: float, tau: float) -> float:
    """Marginal density at tau of the inverse stable time change at time t.

    Equals t^(-a) W_{-a,1-a}(-tau t^(-a)); integrates to 1 over tau.  The
    tau=0 value is the (finite) limit t^(-a)/Gamma(1-a).
    """
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"inverse_stable_density requires 0 < alpha < 1, got {alpha}")
    if t <= 0.0:
        raise DomainError(f"inverse_stable_density requires t > 0, got {t}")
    if tau < 0.0:
        raise DomainError(f"inverse_stable_density requires tau >= 0, got {tau}")
    scale = t ** (-alpha)
    if tau == 0.0:
        return scale * float(_rgamma(1.0 - alpha))
    return scale * wright(-alpha, 1.0 - alpha, -tau * scale)


def density_tail_cutoff(alpha: float, t: float, floor: float = 1e-10) -> float:
    """Tau beyond which the density falls below ~floor (stretched-Gaussian bound).

    Uses |W_{-a,1-a}(-u)| <~ exp(-c u^(1/(1-a))) with c = (1-a) a^(a/(1-a)),
    the generalization of the a=1/2 Gaussian tail.
    """
    if not (0.0 < alpha < 1.0) or t <= 0.0 or not (0.0 < floor < 1.0):
        raise DomainError("bad arguments for density_tail_cutoff")
    c = (1.0 - alpha) * alpha ** (alpha / (1.0 - alpha))
    u = (-math.log(floor) / c) ** (1.0 - alpha)
    return u * t ** alpha
