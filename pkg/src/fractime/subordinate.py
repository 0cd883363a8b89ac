"""Random-time-changed curves u^E(t) by three independent routes.

The workhorse route goes through the t-Laplace transform of u^E, which for
a kernel transform K and a dynamic with Laplace transform w reads
K(l) * w(l K(l)); it is inverted numerically and works for every model,
including the log-kernel families for which no density formula exists.
For stable models two independent routes exist besides: the closed forms
(monomials and the Mittag-Leffler relaxation) and direct quadrature of the
dynamic against the inverse-stable density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .errors import ConvergenceError, DomainError, UnsupportedDynamicError
from .grids import GridFunction
from .laplace import InversionConfig, invert, invert_on_grid
from .models import (
    Complex,
    Dynamic,
    Exponential,
    Monomial,
    SubordinatorModel,
    StableSubordinator,
    UserTransform,
)
from .special import (
    density_tail_cutoff,
    gamma_fn,
    inverse_stable_density,
    mittag_leffler,
    wright,
)

TRANSFORM_ROUTE = "transform"
CLOSED_FORM_ROUTE = "closed-form"
QUADRATURE_ROUTE = "quadrature"


@dataclass(frozen=True)
class SubordinatedCurve:
    """Samples of u^E over a grid, tagged with the route that produced them."""

    model: SubordinatorModel
    dynamic: Dynamic
    samples: GridFunction
    route: str


def subordinated_transform(model: SubordinatorModel, dynamic: Dynamic, lam: Complex) -> Complex:
    """t-Laplace transform of the subordinated dynamic at lam (Re lam > 0).

    Monomials reduce to n! lam^-(1+n) K(lam)^-n, exponentials to
    K(lam)/(a + lam K(lam)); degree 0 cancels algebraically to 1/lam.
    """
    if isinstance(dynamic, Monomial):
        if dynamic.n == 0:
            return 1.0 / lam
        kt = model.kernel_transform(lam)
        n = dynamic.n
        try:
            val = math.factorial(n) * lam ** (-(1 + n)) * kt ** (-n)
        except OverflowError:
            raise DomainError(f"transform overflowed for monomial degree {n} at {lam!r}") from None
        if isinstance(val, complex) and not (math.isfinite(val.real) and math.isfinite(val.imag)):
            raise DomainError(f"transform overflowed for monomial degree {n} at {lam!r}")
        return val
    if isinstance(dynamic, Exponential):
        kt = model.kernel_transform(lam)
        return kt / (dynamic.a + lam * kt)
    if isinstance(dynamic, UserTransform):
        kt = model.kernel_transform(lam)
        return kt * dynamic.transform(lam * kt)
    raise UnsupportedDynamicError(f"unknown dynamic {dynamic!r}")


def subordinated_value(
    model: SubordinatorModel,
    dynamic: Dynamic,
    t: float,
    cfg: InversionConfig | None = None,
) -> float:
    """u^E(t) through transform inversion; t > 0."""
    return invert(lambda lam: subordinated_transform(model, dynamic, lam), t, cfg)


def subordinated_curve(
    model: SubordinatorModel,
    dynamic: Dynamic,
    grid: Sequence[float],
    cfg: InversionConfig | None = None,
    route: str = TRANSFORM_ROUTE,
) -> SubordinatedCurve:
    """Sample u^E over a grid by the chosen route.

    The transform route works for every model; the closed-form and
    quadrature routes exist for stable models only and ignore cfg.
    """
    if route == TRANSFORM_ROUTE:
        samples = invert_on_grid(
            lambda lam: subordinated_transform(model, dynamic, lam), grid, cfg
        )
        return SubordinatedCurve(model, dynamic, samples, route)
    if not isinstance(model, StableSubordinator):
        raise UnsupportedDynamicError(
            f"route {route!r} needs a stable model; {type(model).__name__} has no density"
        )
    ts = np.asarray(grid, dtype=float)
    if route == CLOSED_FORM_ROUTE:
        vals = [stable_closed_form(model.alpha, dynamic, float(t)) for t in ts]
    elif route == QUADRATURE_ROUTE:
        vals = [stable_quadrature(model.alpha, dynamic, float(t)) for t in ts]
    else:
        raise DomainError(f"unknown route {route!r}")
    return SubordinatedCurve(model, dynamic, GridFunction(ts, np.array(vals)), route)


def stable_closed_form(alpha: float, dynamic: Dynamic, t: float) -> float:
    """Exact u^E(t) for the stable time change.

    Monomial(n) -> n! t^(alpha n)/Gamma(alpha n + 1); Exponential(a) ->
    E_alpha(-a t^alpha).  Defined for t >= 0.
    """
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"stable index must lie in (0,1), got {alpha}")
    if t < 0.0:
        raise DomainError(f"need t >= 0, got {t}")
    if isinstance(dynamic, Monomial):
        n = dynamic.n
        if n == 0:
            return 1.0
        return math.factorial(n) * t ** (alpha * n) / gamma_fn(alpha * n + 1.0)
    if isinstance(dynamic, Exponential):
        return mittag_leffler(alpha, dynamic.a * t ** alpha)
    raise UnsupportedDynamicError("closed forms exist for monomial and exponential dynamics only")


def stable_quadrature(
    alpha: float,
    dynamic: Dynamic,
    t: float,
    rel_tol: float = 1e-8,
) -> float:
    """u^E(t) by adaptive quadrature of the dynamic against the density.

    The upper limit is pushed until the stretched-Gaussian tail bound of the
    density (times the dynamic's growth) falls below rel_tol/100 of the
    running integral estimate.
    """
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"stable index must lie in (0,1), got {alpha}")
    if t <= 0.0:
        raise DomainError(f"need t > 0, got {t}")
    if not isinstance(dynamic, (Monomial, Exponential)):
        raise UnsupportedDynamicError("quadrature route supports monomial and exponential dynamics")

    def integrand(tau: float) -> float:
        u = float(dynamic.value(tau))
        return u * inverse_stable_density(alpha, t, tau)

    growth = dynamic.n if isinstance(dynamic, Monomial) else 0
    cutoff = density_tail_cutoff(alpha, t, floor=1e-8)
    estimate = None
    for _ in range(4):
        val, err = quad(integrand, 0.0, cutoff, limit=300,
                        epsrel=0.1 * rel_tol,
                        epsabs=0.1 * rel_tol * (estimate if estimate else 1.0))
        if not math.isfinite(val):
            raise ConvergenceError(f"quadrature returned non-finite value at t={t}")
        estimate = abs(val) if val != 0.0 else 1.0
        # tail estimate: density bound at the cutoff times remaining monomial weight
        floor_needed = 0.01 * rel_tol * estimate / (1.0 + cutoff ** growth) / (1.0 + cutoff)
        floor_needed = min(1e-8, max(floor_needed, 1e-250))
        new_cutoff = density_tail_cutoff(alpha, t, floor=floor_needed)
        if new_cutoff <= cutoff * 1.05:
            return val
        cutoff = new_cutoff
    return val


def double_transform_residual(
    alpha: float,
    p: float,
    lam: float,
    tail_floor: float = 1e-12,
) -> float:
    """Defect of the double (tau, t)-Laplace transform identity of the density.

    Computes |iint exp(-p tau - lam t) G_t(tau) dtau dt - K(lam)/(lam K(lam) + p)|
    numerically from the Wright-series density; stable models only (those
    are the ones with a density formula).  The inner integral uses the
    density's self-similarity: with u = tau t^-alpha it becomes
    int exp(-p t^alpha u) W(-u) du, so the Wright values live on one fixed
    grid (composite Gauss panels) shared by every outer abscissa.
    """
    alpha, p, lam = float(alpha), float(p), float(lam)
    if not (0.0 < alpha < 1.0) or p <= 0.0 or lam <= 0.0:
        raise DomainError("need 0 < alpha < 1 and p, lam > 0")

    u_max = density_tail_cutoff(alpha, 1.0, floor=tail_floor)
    nodes, weights = _composite_gauss(0.0, u_max, panels=12, order=32)
    wvals = np.array([wright(-alpha, 1.0 - alpha, -u) for u in nodes])
    wts = weights * wvals

    def inner(t: float) -> float:
        return float(np.dot(wts, np.exp(-p * t ** alpha * nodes)))

    t_max = 30.0 / lam
    outer, _ = quad(lambda t: math.exp(-lam * t) * inner(t), 0.0, t_max,
                    limit=200, epsabs=1e-8, epsrel=1e-8)
    model = StableSubordinator(alpha)
    kt = model.kernel_transform(lam)
    exact = kt / (lam * kt + p)
    return abs(outer - exact)


def _composite_gauss(lo: float, hi: float, panels: int, order: int):
    """Gauss-Legendre nodes/weights on geometrically refined panels of [lo, hi].

    Panels shrink toward lo, where the integrands peak.
    """
    base_x, base_w = np.polynomial.legendre.leggauss(order)
    edges = np.concatenate([[lo], lo + (hi - lo) * np.geomspace(1.0 / 2 ** (panels - 1), 1.0, panels)])
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        nodes.append(half * (base_x + 1.0) + a)
        weights.append(half * base_w)
    return np.concatenate(nodes), np.concatenate(weights)


def exact_double_transform(alpha: float, p: float, lam: float) -> float:
    """Right side K(lam)/(lam K(lam) + p) of the double-transform identity."""
    kt = StableSubordinator(float(alpha)).kernel_transform(float(lam))
    return kt / (lam * kt + p)
