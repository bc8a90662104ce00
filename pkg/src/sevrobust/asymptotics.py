"""Asymptotic variances and relative efficiencies for Pareto I tail estimators.

Every estimator here is asymptotically normal with variance
``variance_factor * alpha**2 / n``.  The factors are built from four integrals
over the retained probability window ``[a, 1-b]``:

    I_t = -int log(1 - v) dv
    J_t = int int (min(v, w) - v w) d[-log(1 - v)] d[-log(1 - w)]
    I_w = 1 - a - b - log(1 - a)
    J_w = J_t + a^2 (2 - a) / (1 - a) - b [1 - 2a - b + 2 log b - 2 log(1 - a)]

Closed forms are authoritative; the ``*_quadrature`` functions are
independent numerical routes kept for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import quadrature
from .errors import DomainError, FeasibilityError
from .moments import HTransform, TrimSpec, population_t_moment, population_w_moment

ESTIMATORS = ("MLE-Y", "MLE-Z", "T-Y", "T-Y2", "W-Y", "T-Z", "W-Z")


def _check_window(a, top):
    if not (0.0 <= a < top <= 1.0):
        raise DomainError(f"need 0 <= a < 1-b <= 1, got a={a}, 1-b={top}")


def _xlogx(x):
    return x * math.log(x) if x > 0.0 else 0.0


def i_t(a: float, one_minus_b: float) -> float:
    """``(1-a)(1 - log(1-a)) - b(1 - log b)``, with the b-term vanishing at b=0."""
    _check_window(a, one_minus_b)
    b = 1.0 - one_minus_b
    return (1.0 - a) - _xlogx(1.0 - a) - (b - _xlogx(b))


def _g(x):
    # antiderivative of v / (1 - v):  -v - log(1 - v)
    return -x - math.log1p(-x)


def _big_g(x):
    # antiderivative of _g
    return -0.5 * x * x + _xlogx(1.0 - x) + x


def j_t(a: float, one_minus_b: float) -> float:
    """Double integral of the Brownian-bridge kernel against ``d log(1-v)``.

    For ``v < w`` the integrand reduces to ``v / (1 - v)``, so by symmetry
    ``J_t = 2 * int_a^{1-b} [g(w) - g(a)] dw`` with ``g(x) = -x - log(1-x)``.
    """
    _check_window(a, one_minus_b)
    top = one_minus_b
    return 2.0 * (_big_g(top) - _big_g(a) - (top - a) * _g(a))


def i_w(a: float, one_minus_b: float) -> float:
    _check_window(a, one_minus_b)
    b = 1.0 - one_minus_b
    return 1.0 - a - b - math.log1p(-a)


def j_w(a: float, one_minus_b: float) -> float:
    _check_window(a, one_minus_b)
    b = 1.0 - one_minus_b
    tail = b * (1.0 - 2.0 * a - b - 2.0 * math.log1p(-a)) + 2.0 * _xlogx(b)
    return j_t(a, one_minus_b) + a * a * (2.0 - a) / (1.0 - a) - tail


# -- quadrature oracles -------------------------------------------------------

def i_t_quadrature(a: float, one_minus_b: float) -> float:
    _check_window(a, one_minus_b)
    return quadrature.integrate(lambda v: -np.log1p(-v), a, one_minus_b)


def _kernel(v, w):
    # (min - v w) / ((1 - v)(1 - w)) with the (1 - max) factor cancelled
    m = np.minimum(v, w)
    return m / (1.0 - m)


def j_t_quadrature(a: float, one_minus_b: float, swap: bool = False,
                   tol: float = 1e-11, max_level: int = 12) -> float:
    """Two-dimensional quadrature of the ``J_t`` kernel.

    The square is split along the diagonal (where the kernel has a kink) into
    two triangles, each integrated with nested graded Gauss-Legendre rules.
    ``swap`` exchanges the roles of the outer and inner variables.
    """
    _check_window(a, one_minus_b)
    lo, hi = a, one_minus_b
    prev = None
    for level in range(1, max_level + 1):
        outer, wo = quadrature.rule(lo, hi, level)
        t, wt, top = quadrature.unit_rule(level)
        total = 0.0
        for x_lo, x_hi in ((np.full_like(outer, lo), outer), (outer, np.full_like(outer, hi))):
            span = (x_hi - x_lo)[:, None]
            inner = np.where(top[None, :], x_hi[:, None] - span * t[None, :],
                             x_lo[:, None] + span * t[None, :])
            if swap:
                vals = _kernel(outer[:, None], inner)
            else:
                vals = _kernel(inner, outer[:, None])
            total += float(wo @ ((vals * wt[None, :]) * span).sum(axis=1))
        if prev is not None and abs(total - prev) < tol:
            return total
        prev = total
    return prev


def w_variance_terms_quadrature(a: float, one_minus_b: float) -> tuple[float, float, float, float]:
    """The four components of the winsorized-moment variance (times alpha^2).

    With ``H'(v) = 1 / (1 - v)`` and kernel ``K(v, w) = min(v, w) - v w``:
    the bulk double integral, the two cross terms linking each winsorized
    boundary to the bulk, and the boundary-boundary term.  Integrals are
    evaluated numerically; only the boundary-boundary term is a plain sum.
    """
    _check_window(a, one_minus_b)
    top = one_minus_b
    b = 1.0 - top

    def hprime(v):
        return 1.0 / (1.0 - v)

    bulk = j_t_quadrature(a, top)
    cross_lo = 0.0
    if a > 0.0:
        cross_lo = a * hprime(a) * quadrature.integrate(
            lambda w: (np.minimum(a, w) - a * w) * hprime(w), a, top)
    cross_hi = 0.0
    if b > 0.0:
        cross_hi = b * hprime(top) * quadrature.integrate(
            lambda w: (np.minimum(top, w) - top * w) * hprime(w), a, top)
    ends = 0.0
    if a > 0.0:
        ends += (a * hprime(a)) ** 2 * (a - a * a)
    if b > 0.0:
        ends += (b * hprime(top)) ** 2 * (top - top * top)
    if a > 0.0 and b > 0.0:
        ends += 2.0 * a * hprime(a) * b * hprime(top) * (a - a * top)
    return bulk, cross_lo, cross_hi, ends


def j_w_quadrature(a: float, one_minus_b: float) -> float:
    bulk, cross_lo, cross_hi, ends = w_variance_terms_quadrature(a, one_minus_b)
    return bulk + 2.0 * (cross_lo + cross_hi) + ends


# -- censoring proportions ----------------------------------------------------

def right_censoring_y(d: float, u: float, alpha: float) -> float:
    """``delta = (d/u)**alpha``: share of payment-Y data at the limit."""
    return 0.0 if math.isinf(u) else math.exp(alpha * math.log(d / u))


def censoring_z(x0: float, d: float, u: float, alpha: float) -> tuple[float, float]:
    """``(delta_l, delta_r) = (F(d), 1 - F(u))`` for payment-Z data."""
    delta_l = -math.expm1(alpha * math.log(x0 / d)) if d > x0 else 0.0
    delta_r = 0.0 if math.isinf(u) else math.exp(alpha * math.log(x0 / u))
    return delta_l, delta_r


def fisher_z(delta_l: float, delta_r: float) -> float:
    """``alpha^2`` times the Fisher information of one payment-Z observation."""
    keep = 1.0 - delta_l  # (x0/d)^alpha
    left = 0.0
    if delta_l > 0.0:
        left = keep / delta_l * math.log(keep) ** 2
    return left + keep - delta_r


# -- variance factors ---------------------------------------------------------

def t_variance_factor(a: float, one_minus_b: float) -> float:
    """``J_t / I_t**2`` over the window ``[a, 1-b]``."""
    return j_t(a, one_minus_b) / i_t(a, one_minus_b) ** 2


def w_variance_factor(a: float, one_minus_b: float) -> float:
    """``J_w / I_w**2`` over the window ``[a, 1-b]``."""
    return j_w(a, one_minus_b) / i_w(a, one_minus_b) ** 2


@dataclass(frozen=True)
class AsymptoticSpec:
    """``Var(alpha_hat) ~ variance_factor * alpha**2 / n``."""

    variance_factor: float
    estimator: str
    scenario: dict = field(default_factory=dict)

    def variance(self, alpha: float, n: int) -> float:
        return self.variance_factor * alpha * alpha / n


def _feasible_y(estimator, a, b, delta):
    top = 1.0 - b
    if estimator == "T-Y2":
        if not (a < 1.0 - delta <= top):
            raise FeasibilityError(
                f"{estimator}: need a < 1-delta <= 1-b, got a={a}, b={b}, delta={delta}")
    elif not (a < top <= 1.0 - delta):
        raise FeasibilityError(
            f"{estimator}: need a < 1-b <= 1-delta, got a={a}, b={b}, delta={delta}")


def _feasible_z(estimator, a, b, delta_l, delta_r):
    if not (delta_l <= a < 1.0 - b <= 1.0 - delta_r):
        raise FeasibilityError(
            f"{estimator}: need delta_l <= a < 1-b <= 1-delta_r, got "
            f"delta_l={delta_l}, a={a}, b={b}, delta_r={delta_r}")


def avar(estimator: str, a: float = 0.0, b: float = 0.0, delta: float = 0.0,
         delta_l: float = 0.0, delta_r: float = 0.0) -> AsymptoticSpec:
    """Variance factor of ``estimator`` in a censoring scenario.

    Args:
        estimator: One of ``MLE-Y``, ``MLE-Z``, ``T-Y`` (explicit formula,
            1-b within the uncensored share), ``T-Y2`` (numerically solved,
            1-b beyond it), ``W-Y``, ``T-Z``, ``W-Z``.
        a, b: Trimming or winsorizing proportions.
        delta: Payment-Y right-censoring proportion ``(d/u)**alpha``.
        delta_l, delta_r: Payment-Z zero and limit proportions.

    Raises:
        FeasibilityError: the proportions violate the estimator's arrangement.
    """
    scenario = {"a": a, "b": b}
    if estimator == "MLE-Y":
        if not 0.0 <= delta < 1.0:
            raise FeasibilityError(f"MLE-Y needs 0 <= delta < 1, got {delta}")
        factor = 1.0 / (1.0 - delta)
        scenario = {"delta": delta}
    elif estimator == "MLE-Z":
        info = fisher_z(delta_l, delta_r)
        if not info > 0.0:
            raise FeasibilityError(f"MLE-Z: zero information at delta_l={delta_l}, delta_r={delta_r}")
        factor = 1.0 / info
        scenario = {"delta_l": delta_l, "delta_r": delta_r}
    elif estimator in ("T-Y", "W-Y", "T-Y2"):
        _feasible_y(estimator, a, b, delta)
        scenario["delta"] = delta
        if estimator == "T-Y":
            factor = t_variance_factor(a, 1.0 - b)
        elif estimator == "T-Y2":
            # the upper trimming level is replaced by the uncensored share
            factor = t_variance_factor(a, 1.0 - delta)
        else:
            factor = w_variance_factor(a, 1.0 - b)
    elif estimator in ("T-Z", "W-Z"):
        _feasible_z(estimator, a, b, delta_l, delta_r)
        scenario.update(delta_l=delta_l, delta_r=delta_r)
        factor = (t_variance_factor if estimator == "T-Z" else w_variance_factor)(a, 1.0 - b)
    else:
        raise DomainError(f"unknown estimator {estimator!r}; expected one of {ESTIMATORS}")
    return AsymptoticSpec(factor, estimator, scenario)


def are(estimator: str, a: float = 0.0, b: float = 0.0, delta: float = 0.0,
        delta_l: float = 0.0, delta_r: float = 0.0) -> float:
    """Efficiency of ``estimator`` relative to the MLE of the same payment type."""
    spec = avar(estimator, a, b, delta, delta_l, delta_r)
    if estimator.endswith("-Y") or estimator == "T-Y2":
        mle = avar("MLE-Y", delta=delta)
    else:
        mle = avar("MLE-Z", delta_l=delta_l, delta_r=delta_r)
    return mle.variance_factor / spec.variance_factor


# -- ARE tables ----------------------------------------------------------------

_B_GRID = {0.01: (0.01, 0.05, 0.10, 0.15, 0.25),
           0.05: (0.05, 0.10, 0.15, 0.25),
           0.10: (0.10, 0.15, 0.25)}
_Z_ROWS = {0.50: (0.50, 0.60, 0.70, 0.80), 0.75: (0.75, 0.80, 0.85), 0.85: (0.85, 0.89)}

TABLE_PRESETS = {
    "4.1": {"estimator": "T-Y", "rows": (0.0, 0.05, 0.10, 0.15, 0.25), "cols": _B_GRID},
    "4.2": {"estimator": "T-Z", "rows": _Z_ROWS, "cols": _B_GRID},
    "4.3": {"estimator": "W-Y", "rows": (0.0, 0.05, 0.10, 0.15, 0.25), "cols": _B_GRID},
    "4.4": {"estimator": "W-Z", "rows": _Z_ROWS, "cols": _B_GRID},
}


@dataclass(frozen=True)
class AreCell:
    row: dict
    delta: float
    b: float
    value: float | None  # None marks an infeasible cell

    @property
    def feasible(self) -> bool:
        return self.value is not None


def are_grid(estimator: str, rows, cols) -> list[AreCell]:
    """Evaluate ARE over a grid.

    ``rows`` is a sequence of ``a`` values (payment-Y) or a mapping
    ``delta_l -> a values`` (payment-Z); ``cols`` maps the right-censoring
    proportion to its ``b`` values.
    """
    if isinstance(rows, dict):
        row_list = [{"delta_l": dl, "a": a} for dl, avals in rows.items() for a in avals]
    else:
        row_list = [{"a": a} for a in rows]
    cells = []
    for row in row_list:
        for delta, bs in cols.items():
            for b in bs:
                if estimator.endswith("Z"):
                    kw = dict(a=row["a"], b=b, delta_l=row["delta_l"], delta_r=delta)
                else:
                    kw = dict(a=row["a"], b=b, delta=delta)
                try:
                    value = are(estimator, **kw)
                except FeasibilityError:
                    value = None
                cells.append(AreCell(row, delta, b, value))
    return cells


def are_table(preset: str) -> list[AreCell]:
    spec = TABLE_PRESETS[preset]
    return are_grid(spec["estimator"], spec["rows"], spec["cols"])


def round_half_away(x: float, digits: int = 3) -> float:
    """Round half away from zero (the convention of printed tables)."""
    scale = 10.0 ** digits
    return math.copysign(math.floor(abs(x) * scale + 0.5), x) / scale


# -- generic single-parameter route -------------------------------------------

def _winsorized_h(dist, h, lo, hi):
    def hc(u):
        return h(dist.qf(np.clip(u, lo, hi)))
    return hc


def _bulk_variance(dist, h, t):
    """``Var[H(clip(U, a, 1-b))]``, which equals the double Stieltjes
    integral of ``min(v, w) - v w`` against ``dH(v) dH(w)`` over the window."""
    lo, hi = t.a, t.upper
    hc = _winsorized_h(dist, h, lo, hi)
    breaks = (lo, hi) + tuple(dist.qf_breaks)
    m1 = quadrature.integrate(hc, 0.0, 1.0, breaks=breaks)
    m2 = quadrature.integrate(lambda u: hc(u) ** 2, 0.0, 1.0, breaks=breaks)
    return m2 - m1 * m1


def _derivative(fun, theta, rel_step=1e-5):
    step = rel_step * max(abs(theta), 1.0)
    return (fun(theta + step) - fun(theta - step)) / (2.0 * step)


def t_avar_generic(family: Callable, theta: float, h: HTransform, t: TrimSpec) -> float:
    """Asymptotic variance (times n) of the one-parameter T-estimator.

    ``family(theta)`` must return the observed-data distribution.  The
    Jacobian is the inverse of a central difference of the population T
    moment; the bulk variance is a one-dimensional quadrature.
    """
    dist = family(theta)
    slope = _derivative(lambda th: population_t_moment(family(th), h, 1, t), theta)
    width = t.upper - t.a
    return _bulk_variance(dist, h, t) / (width * width * slope * slope)


def w_avar_generic(family: Callable, theta: float, h: HTransform, t: TrimSpec) -> float:
    """Asymptotic variance (times n) of the one-parameter W-estimator.

    The influence of each winsorized boundary enters through ``H'`` at that
    level (central difference in probability) on top of the bulk term.
    """
    dist = family(theta)
    lo, hi = t.a, t.upper
    slope = _derivative(lambda th: population_w_moment(family(th), h, 1, t), theta)

    def big_h(v):
        return float(h(dist.qf(v)))

    def h_prime(v):
        step = 1e-6 * min(v, 1.0 - v, 1.0)
        return (big_h(v + step) - big_h(v - step)) / (2.0 * step)

    coef_lo = lo * h_prime(lo) if lo > 0.0 else 0.0
    coef_hi = t.b * h_prime(hi) if t.b > 0.0 else 0.0
    hc = _winsorized_h(dist, h, lo, hi)
    breaks = (lo, hi) + tuple(dist.qf_breaks)
    mean_hc = quadrature.integrate(hc, 0.0, 1.0, breaks=breaks)

    def influence(u):
        return (coef_lo * (lo - (u <= lo)) + (hc(u) - mean_hc)
                + coef_hi * (hi - (u <= hi)))

    var = quadrature.integrate(lambda u: influence(u) ** 2, 0.0, 1.0, breaks=breaks)
    return var / (slope * slope)
