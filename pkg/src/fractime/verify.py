"""Acceptance-style verification suites.

Each criterion function runs one bundle of checks against independent
references (closed forms, the erfcx identity, spectral quadrature, Monte
Carlo error bars) and returns a result object with one measured line per
check.  The command-line ``verify`` subcommand and the acceptance test
module both run these, so there is exactly one definition of pass/fail.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.special import erfcx

from .asymptotics import cesaro_curve, fit_rate, log_grid, rate_grid_for
from .laplace import gaver_stehfest_invert, talbot_invert
from .models import (
    DistributedOrderSubordinator,
    Exponential,
    Monomial,
    ParametricLogSubordinator,
    StableSubordinator,
    TwoStableSubordinator,
)
from .montecarlo import McConfig, estimate_ue
from .relaxation import RelaxationProblem, solve_relaxation
from .subordinate import (
    double_transform_residual,
    stable_closed_form,
    subordinated_curve,
    subordinated_value,
)


@dataclass(frozen=True)
class CheckLine:
    label: str
    measured: float
    tolerance: float
    ok: bool


@dataclass
class CriterionResult:
    key: str
    title: str
    lines: list = field(default_factory=list)
    seconds: float = 0.0
    runtime_budget: float | None = None

    @property
    def passed(self) -> bool:
        return all(line.ok for line in self.lines)

    def check(self, label: str, measured: float, tolerance: float, ok=None):
        if ok is None:
            ok = measured <= tolerance
        self.lines.append(CheckLine(label, float(measured), float(tolerance), bool(ok)))

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.key}: {self.title} ({len(self.lines)} checks, {self.seconds:.1f}s)"

    def report(self) -> str:
        out = [self.summary()]
        for line in self.lines:
            flag = "ok  " if line.ok else "FAIL"
            out.append(f"    {flag} {line.label}: measured {line.measured:.3e} vs {line.tolerance:.3e}")
        return "\n".join(out)


# ---------------------------------------------------------------------------
# Independent Mittag-Leffler reference (identity + spectral quadrature)
# ---------------------------------------------------------------------------

def ml_reference(alpha: float, x: float) -> float:
    """E_alpha(-x) by routes independent of the production evaluator.

    alpha = 1/2 uses the scaled complementary error function identity;
    other orders integrate the completely monotone spectral density
    exp(-r x^(1/alpha)) r^(alpha-1) sin(pi alpha) / (pi (r^2a + 2 r^a cos(pi alpha) + 1)).
    """
    if x == 0.0:
        return 1.0
    if alpha == 0.5:
        return float(erfcx(x))
    t = x ** (1.0 / alpha)
    sa, ca = math.sin(alpha * math.pi), math.cos(alpha * math.pi)

    def integrand(u: float) -> float:
        r = u / t
        ra = r ** alpha
        dens = r ** (alpha - 1.0) * sa / (math.pi * (ra * ra + 2.0 * ra * ca + 1.0))
        return math.exp(-u) * dens / t

    head, _ = quad(integrand, 0.0, 30.0, limit=400,
                   points=[1e-8, 1e-4, 1e-2, 0.1, 1.0, 10.0], epsabs=1e-12, epsrel=1e-11)
    tail, _ = quad(integrand, 30.0, np.inf, limit=200, epsabs=1e-13)
    return head + tail


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.seconds = time.perf_counter() - start
        if result.runtime_budget is not None:
            result.check("runtime seconds", result.seconds, result.runtime_budget)
        return result
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------

@_timed
def closed_form_monomials() -> CriterionResult:
    """Transform inversion reproduces the monomial closed forms."""
    res = CriterionResult("C1", "monomial closed forms, stable time change",
                          runtime_budget=5.0)
    ts = log_grid(0.1, 100.0, 20)
    for alpha in (0.3, 0.5, 0.7):
        model = StableSubordinator(alpha)
        for n in range(4):
            dyn = Monomial(n)
            worst = 0.0
            for t in ts:
                exact = stable_closed_form(alpha, dyn, t)
                got = subordinated_value(model, dyn, float(t))
                worst = max(worst, abs(got - exact) / (1.0 + abs(exact)))
            res.check(f"alpha={alpha} n={n} sup rel dev", worst, 1e-6)
    return res


@_timed
def subordinated_exponential() -> CriterionResult:
    """Transform inversion matches the relaxation function E_a(-a t^a)."""
    res = CriterionResult("C2", "exponential dynamic vs independent relaxation oracle")
    ts = log_grid(0.1, 100.0, 20)
    for alpha in (0.3, 0.5, 0.7):
        model = StableSubordinator(alpha)
        for a in (0.5, 1.0, 2.0):
            dyn = Exponential(a)
            worst = 0.0
            for t in ts:
                oracle = ml_reference(alpha, a * t ** alpha)
                got = subordinated_value(model, dyn, float(t))
                worst = max(worst, abs(got - oracle))
            res.check(f"alpha={alpha} a={a} sup abs dev", worst, 1e-6)
    return res


@_timed
def stable_rate_agreement(alpha: float = 0.5) -> CriterionResult:
    """Direct-curve and Cesaro-mean exponents agree with alpha-rates."""
    res = CriterionResult("C3", "stable rates: curve and running mean agree")
    model = StableSubordinator(alpha)
    grid = rate_grid_for(model)
    for n in range(4):
        dyn = Monomial(n)
        direct = fit_rate(subordinated_curve(model, dyn, grid).samples)
        mean = fit_rate(cesaro_curve(model, dyn, grid))
        res.check(f"mono n={n} |p_curve - {alpha}n|", abs(direct.p - alpha * n), 0.03)
        res.check(f"mono n={n} |p_mean - {alpha}n|", abs(mean.p - alpha * n), 0.03)
        res.check(f"mono n={n} |p_curve - p_mean|", abs(direct.p - mean.p), 0.02)
    dyn = Exponential(1.0)
    direct = fit_rate(subordinated_curve(model, dyn, grid).samples)
    mean = fit_rate(cesaro_curve(model, dyn, grid))
    res.check(f"exp |p_curve + {alpha}|", abs(direct.p + alpha), 0.03)
    res.check(f"exp |p_mean + {alpha}|", abs(mean.p + alpha), 0.03)
    res.check("exp |p_curve - p_mean|", abs(direct.p - mean.p), 0.02)
    return res


@_timed
def two_stable_rates() -> CriterionResult:
    """Two-stable model: the smaller index drives the Cesaro rates."""
    res = CriterionResult("C4", "two-stable Cesaro exponents")
    model = TwoStableSubordinator(0.5, 0.75)
    grid = rate_grid_for(model)
    for n in (1, 2):
        fit = fit_rate(cesaro_curve(model, Monomial(n), grid))
        res.check(f"mono n={n} |p - {0.5 * n}|", abs(fit.p - 0.5 * n), 0.05)
    return res


def _log_family_checks(res, model, grid, cases, tol):
    """Constrained fits plus top-decade ratio stabilization for log-family models."""
    for dyn, q_pred, label in cases:
        curve = cesaro_curve(model, dyn, grid)
        fit = fit_rate(curve, pin_p=0.0)
        res.check(f"{label} |q - ({q_pred})|", abs(fit.q - q_pred), tol)
        top = curve.restricted(curve.abscissae[-1] / 10.0)
        ratio = top.values * np.log(top.abscissae) ** (-q_pred)
        spread = (ratio.max() - ratio.min()) / ratio.mean()
        res.check(f"{label} top-decade ratio spread", spread, 0.10)


@_timed
def distributed_order_rates() -> CriterionResult:
    """Distributed-order model: log-power Cesaro rates."""
    res = CriterionResult("C5", "distributed-order Cesaro exponents")
    model = DistributedOrderSubordinator()
    grid = rate_grid_for(model)
    cases = [
        (Monomial(1), 1.0, "mono n=1"),
        (Monomial(2), 2.0, "mono n=2"),
        (Exponential(1.0), -1.0, "exp a=1"),
    ]
    _log_family_checks(res, model, grid, cases, tol=0.15)
    return res


@_timed
def parametric_log_rates() -> CriterionResult:
    """Parametric log-kernel model: stretched log-power Cesaro rates."""
    res = CriterionResult("C6", "parametric log-kernel Cesaro exponents")
    grid = rate_grid_for(ParametricLogSubordinator(1.0))
    for s in (0.5, 1.0):
        model = ParametricLogSubordinator(s)
        cases = [
            (Monomial(1), (1.0 + s), f"s={s} mono n=1"),
            (Monomial(2), 2.0 * (1.0 + s), f"s={s} mono n=2"),
            (Exponential(1.0), -(1.0 + s), f"s={s} exp a=1"),
        ]
        _log_family_checks(res, model, grid, cases, tol=0.2)
    return res


@_timed
def double_transform_identity() -> CriterionResult:
    """Nested quadrature of the density matches the double-transform formula."""
    res = CriterionResult("C7", "double Laplace transform of the density")
    for p in (0.5, 1.0, 2.0):
        for lam in (0.5, 1.0, 2.0):
            resid = double_transform_residual(0.5, p, lam)
            res.check(f"p={p} lam={lam} residual", resid, 1e-4)
    return res


@_timed
def relaxation_crosscheck() -> CriterionResult:
    """Convolution-quadrature solves match the transform/closed-form routes."""
    res = CriterionResult("C8", "relaxation equation vs subordinated exponential")
    stable = StableSubordinator(0.5)
    sol = solve_relaxation(RelaxationProblem(stable, a=1.0, h=1e-3, horizon=5.0))
    t = sol.abscissae
    exact = erfcx(np.sqrt(t))
    res.check("stable max error", float(np.max(np.abs(sol.values - exact))), 1e-3)

    dist = DistributedOrderSubordinator()
    sol2 = solve_relaxation(RelaxationProblem(dist, a=1.0, h=1e-3, horizon=5.0))
    idx = np.arange(10, sol2.abscissae.size, 10)
    worst = 0.0
    for i in idx:
        ref = subordinated_value(dist, Exponential(1.0), float(sol2.abscissae[i]))
        worst = max(worst, abs(sol2.values[i] - ref))
    res.check("distributed-order max error", worst, 2e-3)
    return res


@_timed
def mc_concordance() -> CriterionResult:
    """Monte Carlo estimates agree with inversion, deterministically."""
    res = CriterionResult("C9", "Monte Carlo concordance and reproducibility",
                          runtime_budget=30.0)
    model = StableSubordinator(0.5)
    base = McConfig(n_paths=100_000, seed=20260810, workers=1)
    for dyn, name in ((Monomial(1), "mono n=1"), (Exponential(1.0), "exp a=1")):
        for t in (1.0, 10.0):
            est = estimate_ue(model, dyn, t, base)
            ref = subordinated_value(model, dyn, t)
            dev = abs(est.mean - ref)
            res.check(f"{name} t={t} |mc - inversion| vs 3 SE", dev, 3.0 * est.std_error)
    runs = [
        estimate_ue(model, Exponential(1.0), 1.0,
                    McConfig(n_paths=100_000, seed=20260810, workers=w))
        for w in (1, 4, 8)
    ]
    identical = all(r.mean == runs[0].mean and r.std_error == runs[0].std_error for r in runs)
    res.check("bit-identical across workers 1/4/8", 0.0 if identical else 1.0, 0.0, ok=identical)
    return res


@_timed
def inversion_battery() -> CriterionResult:
    """Rational-transform unit battery and Talbot/Gaver-Stehfest agreement.

    Talbot is held to its 1e-10; the Gaver-Stehfest battery is held to the
    verified double-precision floor 1e-6 (the Salzer truncation at 16 terms
    is 2e-7..2.6e-7 at these very points in exact arithmetic, so tighter
    bounds are unattainable -- see the decisions ledger).
    """
    res = CriterionResult("C10", "inversion unit battery and cross-agreement")
    talbot_cases = [
        ("1/l @ t=3", lambda l: 1.0 / l, 3.0, 1.0),
        ("1/l^2 @ t=2.5", lambda l: 1.0 / l ** 2, 2.5, 2.5),
        ("1/(l+1) @ t=1", lambda l: 1.0 / (l + 1.0), 1.0, math.exp(-1.0)),
        ("2/l^3 @ t=2", lambda l: 2.0 / l ** 3, 2.0, 4.0),
    ]
    for label, transform, t, exact in talbot_cases:
        got = talbot_invert(transform, t)
        res.check(f"talbot {label}", abs(got - exact) / abs(exact), 1e-10)
    gs_cases = [
        ("1/l @ t=3", lambda l: 1.0 / l, 3.0, 1.0),
        ("1/(l+2) @ t=0.5", lambda l: 1.0 / (l + 2.0), 0.5, math.exp(-1.0)),
        ("2/l^3 @ t=2", lambda l: 2.0 / l ** 3, 2.0, 4.0),
    ]
    for label, transform, t, exact in gs_cases:
        got = gaver_stehfest_invert(transform, t)
        res.check(f"gaver-stehfest {label}", abs(got - exact) / abs(exact), 1e-6)

    model = StableSubordinator(0.5)

    def transform(l):
        kt = model.kernel_transform(l)
        return kt / (1.0 + l * kt)

    worst = 0.0
    for t in log_grid(0.1, 100.0, 40):
        vt = talbot_invert(transform, float(t))
        vg = gaver_stehfest_invert(transform, float(t))
        worst = max(worst, abs(vt - vg) / abs(vt))
    res.check("talbot vs gaver-stehfest on relaxation transform", worst, 1e-6)
    return res


ALL_CRITERIA = {
    "C1": closed_form_monomials,
    "C2": subordinated_exponential,
    "C3": stable_rate_agreement,
    "C4": two_stable_rates,
    "C5": distributed_order_rates,
    "C6": parametric_log_rates,
    "C7": double_transform_identity,
    "C8": relaxation_crosscheck,
    "C9": mc_concordance,
    "C10": inversion_battery,
}

SUITES = {
    "closed-form": ("C1", "C2"),
    "stable-rates": ("C3",),
    "c1": ("C3", "C4"),
    "c2": ("C5",),
    "c3": ("C6",),
    "double-transform": ("C7",),
    "gfde": ("C8",),
    "mc": ("C9",),
    "inversion": ("C10",),
    "all": tuple(ALL_CRITERIA),
}


def run_suite(name: str, alpha: float | None = None):
    """Run one named suite; returns the list of criterion results."""
    try:
        keys = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}") from None
    results = []
    for key in keys:
        fn = ALL_CRITERIA[key]
        if key == "C3" and alpha is not None:
            results.append(fn(alpha=alpha))
        else:
            results.append(fn())
    return results
