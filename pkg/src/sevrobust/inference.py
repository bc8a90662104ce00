"""Confidence intervals, KS goodness of fit and parametric-bootstrap p-values."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.stats import norm

from .asymptotics import AsymptoticSpec
from .distributions import ParetoI
from .errors import DomainError, SeverityError, SolverError
from .estimators import FitResult, PaymentSample, Status
from .transforms import ObservedDistribution, payment_y_dist, payment_z_dist, sample

MAX_FAILURE_SHARE = 0.05


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    style: str = "plain-normal"

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise DomainError(f"interval endpoints out of order: [{self.lower}, {self.upper}]")
        if self.style == "log-transformed" and not self.lower > 0.0:
            raise DomainError("log-transformed interval must have a positive lower end")

    def __iter__(self):
        return iter((self.lower, self.upper))


def z_quantile(level: float) -> float:
    if not 0.0 < level < 1.0:
        raise DomainError(f"confidence level must lie in (0, 1), got {level}")
    return float(norm.ppf(0.5 + level / 2.0))


def ci_normal(alpha_hat: float, spec: AsymptoticSpec, n: int, level: float = 0.90) -> ConfidenceInterval:
    """``alpha_hat -/+ z * alpha_hat * sqrt(variance_factor / n)``."""
    half = z_quantile(level) * alpha_hat * math.sqrt(spec.variance_factor / n)
    return ConfidenceInterval(alpha_hat - half, alpha_hat + half, level)


def ci_for_fit(fit: FitResult, level: float = 0.90) -> ConfidenceInterval:
    return ci_normal(fit.alpha_hat, fit.spec, fit.n, level)


# -- Kolmogorov-Smirnov ------------------------------------------------------------

def ks_statistic(values, cdf: Callable, cdf_left: Callable | None = None,
                 censored_mask=None) -> float:
    """Sup distance between the empirical and a fitted cdf.

    The distance is taken at each distinct observed point from both sides:
    ``|F_n(x) - F(x)|`` and ``|F_n(x-) - F(x-)|``.  Censored points (values
    recorded at a censoring limit) are compared from the left only, so the
    sup runs over the region below the limit.

    Args:
        values: Observations, any order.
        cdf: Fitted cdf, vectorised.
        cdf_left: Left limit of the fitted cdf; defaults to ``cdf``.
        censored_mask: Booleans marking right-censored observations.
    """
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        raise DomainError("KS statistic needs at least one observation")
    cens = np.zeros(x.size, bool) if censored_mask is None else np.asarray(censored_mask, bool).ravel()
    order = np.argsort(x, kind="stable")
    x, cens = x[order], cens[order]
    n = x.size
    pts, first = np.unique(x, return_index=True)
    upto = np.searchsorted(x, pts, side="right") / n
    below = first / n
    left = cdf_left if cdf_left is not None else cdf
    f_right = np.asarray(cdf(pts), dtype=float)
    f_left = np.asarray(left(pts), dtype=float)
    only_censored = np.array([cens[i:j].all() for i, j in zip(first, np.append(first[1:], n))])
    d_left = np.abs(below - f_left)
    d_right = np.where(only_censored, 0.0, np.abs(upto - f_right))
    return float(max(d_left.max(), d_right.max()))


def ks_right_censored(s: PaymentSample, fitted: ObservedDistribution) -> float:
    """KS distance between payments and a fitted observed-data law."""
    return ks_statistic(s.values, fitted.cdf, fitted.cdf_left, s.status == Status.LIMIT)


def fitted_distribution(s: PaymentSample, alpha: float, x0: float | None = None) -> ObservedDistribution:
    """Observed-data law of a Pareto I fit under the sample's coverage terms.

    For payment-Y data the law does not depend on ``x0`` (anything at or
    below ``d``), so ``x0`` defaults to ``d``.
    """
    if s.kind == "Y":
        return payment_y_dist(ParetoI(s.terms.d if x0 is None else x0, alpha), s.terms)
    if x0 is None:
        raise DomainError("payment-Z fits need the scale x0")
    return payment_z_dist(ParetoI(x0, alpha), s.terms)


@dataclass
class GofReport:
    ks_statistic: float
    p_value: float
    bootstrap_runs: int
    seed: int
    failures: int = 0
    replicate_stats: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise DomainError(f"p-value {self.p_value} outside [0, 1]")


def bootstrap_pvalue(s: PaymentSample, estimator: Callable[[PaymentSample], FitResult],
                     runs: int = 1000, seed: int = 0, x0: float | None = None) -> GofReport:
    """Parametric-bootstrap p-value of the KS statistic.

    Replicate ``i`` draws ``n`` payments from the fitted law with generator
    seed ``seed + i``, refits with ``estimator`` and recomputes KS against
    its own refit.  A failed refit is retried on seeds ``seed + runs``,
    ``seed + runs + 1``, ... in order.

    Raises:
        SolverError: more than 5% of replicates needed a retry.
    """
    if runs < 1:
        raise DomainError(f"runs must be >= 1, got {runs}")
    fit = estimator(s)
    observed = ks_right_censored(s, fitted_distribution(s, fit.alpha_hat, x0))
    law = fitted_distribution(s, fit.alpha_hat, x0)
    stats = np.empty(runs)
    failures = 0
    spare = seed + runs
    for i in range(runs):
        stream = seed + i
        while True:
            rep = PaymentSample.build(sample(law, s.n, stream), s.terms, s.kind)
            try:
                refit = estimator(rep)
                stats[i] = ks_right_censored(rep, fitted_distribution(rep, refit.alpha_hat, x0))
                break
            except SeverityError:
                failures += 1
                if failures > MAX_FAILURE_SHARE * runs:
                    raise SolverError(f"bootstrap: {failures} failed replicates out of {runs}")
                stream, spare = spare, spare + 1
    p = float(np.mean(stats >= observed))
    return GofReport(observed, p, runs, seed, failures, stats)
