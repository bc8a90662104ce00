"""Monte Carlo bias/variance study of the tail-parameter estimators."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import asymptotics
from .distributions import ParetoI
from .errors import DomainError, FeasibilityError, SeverityError
from .estimators import PaymentSample, fit
from .transforms import PolicyTerms, payment_y_dist, payment_z_dist, sample


@dataclass(frozen=True)
class Scenario:
    """A simulation design.

    ``estimators`` holds ``(name, a, b)`` triples as accepted by
    :func:`sevrobust.estimators.fit`.
    """

    alpha: float
    x0: float
    terms: PolicyTerms
    kind: str = "Y"
    n: int = 1000
    replicates: int = 100
    seed: int = 0
    estimators: tuple = (("MLE", 0.0, 0.0),)

    def __post_init__(self):
        if self.kind not in ("Y", "Z"):
            raise DomainError(f"kind must be 'Y' or 'Z', got {self.kind!r}")
        if self.n < 1 or self.replicates < 1:
            raise DomainError("n and replicates must be positive")

    @property
    def distribution(self):
        model = ParetoI(self.x0, self.alpha)
        ctor = payment_y_dist if self.kind == "Y" else payment_z_dist
        return ctor(model, self.terms)

    def asymptotic_factor(self, name: str, a: float, b: float) -> float:
        """Variance factor at the true alpha for this design."""
        d, u = self.terms.d, self.terms.u
        if self.kind == "Y":
            delta = asymptotics.right_censoring_y(d, u, self.alpha)
            tag = {"MLE": "MLE-Y", "T": "T-Y", "T2": "T-Y2", "W": "W-Y"}[name]
            return asymptotics.avar(tag, a, b, delta=delta).variance_factor
        delta_l, delta_r = asymptotics.censoring_z(self.x0, d, u, self.alpha)
        tag = {"MLE": "MLE-Z", "T": "T-Z", "W": "W-Z"}[name]
        return asymptotics.avar(tag, a, b, delta_l=delta_l, delta_r=delta_r).variance_factor


@dataclass
class EstimatorReport:
    estimator: str
    a: float
    b: float
    mean: float
    bias: float
    variance: float
    asymptotic_variance: float
    variance_ratio: float
    failures: int = 0


@dataclass
class SimulationReport:
    scenario: dict
    rows: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"scenario": self.scenario, "rows": [asdict(r) for r in self.rows]}


def _scenario_dict(sc: Scenario) -> dict:
    return {"alpha": sc.alpha, "x0": sc.x0, "c": sc.terms.c, "d": sc.terms.d,
            "u": None if math.isinf(sc.terms.u) else sc.terms.u, "kind": sc.kind,
            "n": sc.n, "replicates": sc.replicates, "seed": sc.seed,
            "estimators": [list(e) for e in sc.estimators]}


def simulate(sc: Scenario) -> SimulationReport:
    """Fit every estimator on ``replicates`` samples drawn with seeds ``seed + i``.

    Replicates where an estimator fails (for example an empirical
    arrangement that does not allow it) are counted and skipped for that
    estimator only.  With fewer than two successful fits the variance is
    reported as 0; an estimator infeasible for the design gets a NaN
    asymptotic variance.
    """
    dist = sc.distribution
    estimates = {e: [] for e in sc.estimators}
    failures = {e: 0 for e in sc.estimators}
    for i in range(sc.replicates):
        s = PaymentSample.build(sample(dist, sc.n, sc.seed + i), sc.terms, sc.kind)
        for e in sc.estimators:
            name, a, b = e
            try:
                estimates[e].append(fit(s, name, a, b, x0=sc.x0).alpha_hat)
            except SeverityError:
                failures[e] += 1
    report = SimulationReport(_scenario_dict(sc))
    for e in sc.estimators:
        name, a, b = e
        vals = np.asarray(estimates[e])
        mean = float(vals.mean()) if vals.size else math.nan
        var = float(vals.var(ddof=1)) if vals.size > 1 else 0.0
        try:
            avar = sc.asymptotic_factor(name, a, b) * sc.alpha ** 2 / sc.n
        except FeasibilityError:
            avar = math.nan  # the arrangement does not allow this estimator
        report.rows.append(EstimatorReport(name, a, b, mean, mean - sc.alpha, var, avar,
                                           var / avar, failures[e]))
    return report
