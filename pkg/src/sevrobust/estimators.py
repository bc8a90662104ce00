"""Estimators of the Pareto I tail parameter from insurance payments.

Payment-Y data (per payment) are left truncated at ``d`` and right censored
at ``c (u - d)``; payment-Z data (per loss) additionally carry zeros for
losses below ``d``.  Every estimator returns a :class:`FitResult` holding the
point estimate, its asymptotic variance factor and solver diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np
from scipy.optimize import brentq

from . import asymptotics
from .errors import CaseError, DataError, DegenerateError, NonIdentifiableError, SolverError
from .moments import (CaseArrangement, TrimSpec, classify_case, h_payment_y, h_payment_z,
                      sample_t_moment, sample_w_moment)
from .transforms import PolicyTerms

LIMIT_RTOL = 1e-9
INITIAL_BRACKET = (0.01, 100.0)
MAX_BRACKET = (1e-6, 1e3)
XTOL = 1e-10


class Status(IntEnum):
    EXACT = 0
    LIMIT = 1
    ZERO = 2


_STATUS_NAMES = {"exact": Status.EXACT, "limit": Status.LIMIT, "zero": Status.ZERO}


def parse_status(label) -> Status:
    if isinstance(label, Status):
        return label
    if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
        try:
            return Status(int(label))
        except ValueError:
            raise DataError(f"unknown status code {label}") from None
    try:
        return _STATUS_NAMES[str(label).strip().lower()]
    except KeyError:
        raise DataError(f"unknown status {label!r}; expected exact, limit or zero") from None


@dataclass(frozen=True, eq=False)
class PaymentSample:
    """Sorted payments with per-value status flags.

    Use :meth:`build` rather than the constructor; it sorts, infers missing
    flags and validates.

    Attributes:
        values: Payment amounts, ascending.
        status: :class:`Status` codes aligned with ``values``.
        terms: Coverage terms the payments were generated under.
        kind: ``"Y"`` (per payment) or ``"Z"`` (per loss).
    """

    values: np.ndarray
    status: np.ndarray
    terms: PolicyTerms
    kind: str = "Y"

    @classmethod
    def build(cls, values, terms: PolicyTerms, kind: str = "Y", status=None) -> "PaymentSample":
        """Validate and sort payments.

        Flags left as ``None`` are inferred: a value within ``1e-9`` relative
        of ``c (u - d)`` is at the limit, a zero is a zero (payment-Z only),
        anything else is exact.  Explicit flags win over inference.
        """
        if kind not in ("Y", "Z"):
            raise DataError(f"kind must be 'Y' or 'Z', got {kind!r}")
        v = np.asarray(values, dtype=float).ravel()
        if v.size == 0:
            raise DataError("no payments supplied")
        if not np.all(np.isfinite(v)):
            raise DataError("payments must be finite")
        cap = terms.max_payment
        inferred = np.full(v.size, Status.EXACT, dtype=np.int8)
        if math.isfinite(cap):
            inferred[np.abs(v - cap) <= LIMIT_RTOL * cap] = Status.LIMIT
        if kind == "Z":
            inferred[v == 0.0] = Status.ZERO
        if status is None:
            st = inferred
        else:
            given = list(status)
            if len(given) != v.size:
                raise DataError(f"{len(given)} status flags for {v.size} payments")
            st = np.array([inferred[i] if g is None else parse_status(g)
                           for i, g in enumerate(given)], dtype=np.int8)
        order = np.argsort(v, kind="stable")
        v, st = v[order], st[order]
        sample = cls(v, st, terms, kind)
        sample._validate()
        return sample

    def _validate(self):
        v, st, cap = self.values, self.status, self.terms.max_payment
        if np.any(v < 0.0):
            raise DataError("payments must be nonnegative")
        exact = st == Status.EXACT
        if np.any(v[exact] <= 0.0):
            raise DataError("uncensored payments must be strictly positive")
        if np.any(v[exact] > cap * (1.0 + LIMIT_RTOL)):
            raise DataError(f"payment above the maximum c(u-d)={cap}")
        at_limit = st == Status.LIMIT
        if np.any(at_limit):
            if not math.isfinite(cap):
                raise DataError("limit status without a finite policy limit")
            if np.any(np.abs(v[at_limit] - cap) > LIMIT_RTOL * cap):
                raise DataError(f"at-limit payments must equal c(u-d)={cap}")
        zeros = st == Status.ZERO
        if np.any(zeros):
            if self.kind != "Z":
                raise DataError("zero payments are only possible for payment-Z data")
            if np.any(v[zeros] != 0.0):
                raise DataError("zero status on a nonzero payment")

    @property
    def n(self) -> int:
        return int(self.values.size)

    def count(self, status: Status) -> int:
        return int(np.count_nonzero(self.status == status))

    @property
    def exact_values(self) -> np.ndarray:
        return self.values[self.status == Status.EXACT]

    def scaled(self, lam: float) -> "PaymentSample":
        """Payments and coinsurance both multiplied by ``lam``."""
        t = self.terms
        return PaymentSample(self.values * lam, self.status.copy(),
                             PolicyTerms(c=t.c * lam, d=t.d, u=t.u), self.kind)


@dataclass
class FitResult:
    """Fitted tail parameter with provenance.

    ``variance_factor`` is the multiplier of ``alpha**2 / n`` in the
    asymptotic variance, evaluated at ``alpha_hat`` where it depends on alpha.
    """

    alpha_hat: float
    estimator: str
    payment: str
    n: int
    n_used: int
    variance_factor: float
    a: float | None = None
    b: float | None = None
    case: int | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (math.isfinite(self.alpha_hat) and self.alpha_hat > 0.0):
            raise DegenerateError(f"{self.estimator}: estimate {self.alpha_hat} is not a positive number")

    @property
    def label(self) -> str:
        if self.a is None:
            return self.estimator
        return f"{self.estimator}(a={self.a:g}, b={self.b:g})"

    @property
    def spec(self) -> asymptotics.AsymptoticSpec:
        scenario = {"a": self.a, "b": self.b, **self.diagnostics.get("scenario", {})}
        return asymptotics.AsymptoticSpec(self.variance_factor, self.tag, scenario)

    @property
    def tag(self) -> str:
        if self.estimator == "T" and self.case == 2:
            return "T-Y2"
        return f"{self.estimator}-{self.payment}"

    def variance(self) -> float:
        return self.variance_factor * self.alpha_hat ** 2 / self.n


def _require_kind(s: PaymentSample, kind: str):
    if s.kind != kind:
        raise DataError(f"expected payment-{kind} data, got payment-{s.kind}")


def _solve(score, label: str):
    """Root of a decreasing ``score`` by bracket expansion and Brent's method."""
    lo, hi = INITIAL_BRACKET
    f_lo, f_hi = score(lo), score(hi)
    while f_lo * f_hi > 0.0 and (lo > MAX_BRACKET[0] or hi < MAX_BRACKET[1]):
        lo, hi = max(lo / 10.0, MAX_BRACKET[0]), min(hi * 10.0, MAX_BRACKET[1])
        f_lo, f_hi = score(lo), score(hi)
    if f_lo * f_hi > 0.0:
        raise SolverError(f"{label}: no sign change on [{lo:g}, {hi:g}] "
                          f"(score {f_lo:.3g}, {f_hi:.3g})", bracket=(lo, hi))
    root, info = brentq(score, lo, hi, xtol=XTOL, rtol=4 * np.finfo(float).eps,
                        full_output=True, disp=False)
    if not info.converged:
        raise SolverError(f"{label}: {info.flag}", bracket=(lo, hi))
    return root, {"bracket": (lo, hi), "iterations": info.iterations,
                  "residual": float(score(root))}


def _empirical_case_y(s: PaymentSample, t: TrimSpec) -> tuple[int, float]:
    """Payment-Y arrangement (1, 2 or 3) from the empirical uncensored share."""
    p_hat = s.count(Status.EXACT) / s.n
    general = classify_case(t, 0.0, p_hat)
    mapping = {CaseArrangement.CASE_4: 1, CaseArrangement.CASE_5: 2, CaseArrangement.CASE_6: 3}
    return mapping[general], p_hat


# -- payment Y -------------------------------------------------------------------

def mle_payment_y(s: PaymentSample) -> FitResult:
    """Closed-form MLE from payment-Y data.

    Raises:
        NonIdentifiableError: every payment is at the limit.
    """
    _require_kind(s, "Y")
    c, d, u = s.terms.c, s.terms.d, s.terms.u
    n_exact, n_limit = s.count(Status.EXACT), s.count(Status.LIMIT)
    if n_exact == 0:
        raise NonIdentifiableError("MLE-Y: no uncensored payments")
    total = float(np.sum(np.log1p(s.exact_values / (c * d))))
    if n_limit:
        total += n_limit * math.log(u / d)
    alpha = n_exact / total
    delta = asymptotics.right_censoring_y(d, u, alpha)
    return FitResult(alpha, "MLE", "Y", s.n, n_exact, 1.0 / (1.0 - delta),
                     diagnostics={"scenario": {"delta": delta}})


def _y_moment(s, t, kind):
    h = h_payment_y(s.terms.c, s.terms.d)
    fn = sample_t_moment if kind == "T" else sample_w_moment
    m = fn(s.values, h, 1, t)
    if not m > 0.0:
        raise DegenerateError(f"{kind}-Y: sample moment {m} is not positive")
    return m


def _case3_y(s, t, kind):
    case, p_hat = _empirical_case_y(s, t)
    if case == 1:
        raise NonIdentifiableError(
            f"{kind}-Y: 1-b={t.upper} above a={t.a} >= uncensored share {p_hat:.4g}; "
            "only censored values remain")
    if case == 2:
        raise CaseError(f"{kind}-Y: need 1-b <= uncensored share, got 1-b={t.upper} > {p_hat:.4g}")
    return p_hat


def t_estimator_payment_y(s: PaymentSample, t: TrimSpec) -> FitResult:
    """Explicit T-estimator; the retained window must avoid censored values."""
    _require_kind(s, "Y")
    p_hat = _case3_y(s, t, "T")
    moment = _y_moment(s, t, "T")
    alpha = asymptotics.i_t(t.a, t.upper) / ((t.upper - t.a) * moment)
    m_lo, m_hi = t.counts(s.n)
    return FitResult(alpha, "T", "Y", s.n, s.n - m_lo - m_hi,
                     asymptotics.t_variance_factor(t.a, t.upper), t.a, t.b, 3,
                     diagnostics={"uncensored_share": p_hat})


def w_estimator_payment_y(s: PaymentSample, t: TrimSpec) -> FitResult:
    _require_kind(s, "Y")
    p_hat = _case3_y(s, t, "W")
    moment = _y_moment(s, t, "W")
    alpha = asymptotics.i_w(t.a, t.upper) / moment
    m_lo, m_hi = t.counts(s.n)
    return FitResult(alpha, "W", "Y", s.n, s.n - m_lo - m_hi,
                     asymptotics.w_variance_factor(t.a, t.upper), t.a, t.b, 3,
                     diagnostics={"uncensored_share": p_hat})


def t_estimator_payment_y_case2(s: PaymentSample, t: TrimSpec) -> FitResult:
    """T-estimator whose retained window reaches into the censored values.

    Solves ``[(1-a)(1 - log(1-a)) - (d/u)^alpha] / alpha + b log(d/u)
    = (1-a-b) T_hat`` for alpha.
    """
    _require_kind(s, "Y")
    p_hat = s.count(Status.EXACT) / s.n
    if not (t.a < p_hat <= t.upper):
        raise CaseError(f"T-Y case 2: need a < uncensored share <= 1-b, got "
                        f"a={t.a}, share={p_hat:.6g}, 1-b={t.upper}")
    d, u = s.terms.d, s.terms.u
    log_ratio = math.log(d / u)
    moment = _y_moment(s, t, "T")
    head = (1.0 - t.a) * (1.0 - math.log1p(-t.a))
    target = (t.upper - t.a) * moment

    def score(alpha):
        return (head - math.exp(alpha * log_ratio)) / alpha + t.b * log_ratio - target

    alpha, diag = _solve(score, "T-Y case 2")
    delta = math.exp(alpha * log_ratio)
    m_lo, m_hi = t.counts(s.n)
    diag.update(uncensored_share=p_hat, scenario={"delta": delta})
    return FitResult(alpha, "T", "Y", s.n, s.n - m_lo - m_hi,
                     asymptotics.t_variance_factor(t.a, 1.0 - delta), t.a, t.b, 2, diag)


# -- payment Z -------------------------------------------------------------------

def _z_parts(s: PaymentSample):
    w = s.values[s.status == Status.EXACT] / s.terms.c + s.terms.d
    return s.count(Status.ZERO), s.count(Status.LIMIT), w


def mle_payment_z(s: PaymentSample, x0: float) -> FitResult:
    """Numerical MLE from payment-Z data by bracketing the score.

    Raises:
        NonIdentifiableError: no payment strictly between 0 and the limit.
        SolverError: the score keeps its sign over ``(1e-6, 1e3)``.
    """
    _require_kind(s, "Z")
    d, u = s.terms.d, s.terms.u
    n0, n_lim, w = _z_parts(s)
    if w.size == 0:
        raise NonIdentifiableError("MLE-Z: no payments strictly inside (0, c(u-d))")
    if n0 and not d > x0:
        raise DataError(f"zero payments need d > x0, got d={d}, x0={x0}")
    log_d = math.log(d / x0) if d > x0 else 0.0
    limit_term = n_lim * math.log(x0 / u) if n_lim else 0.0
    sum_log = float(np.sum(np.log(w / x0)))
    n_int = w.size

    def score(alpha):
        zero_term = 0.0
        if n0 and alpha * log_d < 700.0:
            # q/(1-q) * log(d/x0) with q = (x0/d)^alpha
            zero_term = n0 * log_d / math.expm1(alpha * log_d)
        return zero_term + limit_term + n_int / alpha - sum_log

    alpha, diag = _solve(score, "MLE-Z")
    delta_l, delta_r = asymptotics.censoring_z(x0, d, u, alpha)
    diag["scenario"] = {"delta_l": delta_l, "delta_r": delta_r}
    factor = 1.0 / asymptotics.fisher_z(delta_l, delta_r)
    return FitResult(alpha, "MLE", "Z", s.n, n_int, factor, diagnostics=diag)


def _z_arrangement(s: PaymentSample, t: TrimSpec, label: str):
    n = s.n
    f_d = s.count(Status.ZERO) / n
    f_u = 1.0 - s.count(Status.LIMIT) / n
    if not f_d <= t.a:
        raise CaseError(f"{label}: need F(d) <= a, got zero share {f_d:.6g} > a={t.a}")
    if not t.upper <= f_u:
        raise CaseError(f"{label}: need 1-b <= F(u), got 1-b={t.upper} > {f_u:.6g}")
    return f_d, f_u


def _z_moment(s, t, kind, x0):
    h = h_payment_z(s.terms.c, s.terms.d)
    fn = sample_t_moment if kind == "T" else sample_w_moment
    excess = fn(s.values, h, 1, t) - math.log(x0)
    if not excess > 0.0:
        raise DegenerateError(f"{kind}-Z: sample moment does not exceed log(x0)")
    return excess


def t_estimator_payment_z(s: PaymentSample, t: TrimSpec, x0: float) -> FitResult:
    """Explicit T-estimator for ``F(d) <= a < 1-b <= F(u)`` (empirical)."""
    _require_kind(s, "Z")
    f_d, f_u = _z_arrangement(s, t, "T-Z")
    excess = _z_moment(s, t, "T", x0)
    alpha = asymptotics.i_t(t.a, t.upper) / ((t.upper - t.a) * excess)
    m_lo, m_hi = t.counts(s.n)
    return FitResult(alpha, "T", "Z", s.n, s.n - m_lo - m_hi,
                     asymptotics.t_variance_factor(t.a, t.upper), t.a, t.b,
                     diagnostics={"zero_share": f_d, "below_limit_share": f_u})


def w_estimator_payment_z(s: PaymentSample, t: TrimSpec, x0: float) -> FitResult:
    _require_kind(s, "Z")
    f_d, f_u = _z_arrangement(s, t, "W-Z")
    excess = _z_moment(s, t, "W", x0)
    alpha = asymptotics.i_w(t.a, t.upper) / excess
    m_lo, m_hi = t.counts(s.n)
    return FitResult(alpha, "W", "Z", s.n, s.n - m_lo - m_hi,
                     asymptotics.w_variance_factor(t.a, t.upper), t.a, t.b,
                     diagnostics={"zero_share": f_d, "below_limit_share": f_u})


def fit_with_estimated_thresholds(s: PaymentSample, d_tilde: float, u_tilde: float,
                                  x0: float | None = None) -> FitResult:
    """Censored MLE after censoring losses at ``d_tilde`` (left) and ``u_tilde`` (right).

    Losses ``l = y/c + d`` at or below ``d_tilde`` count as left censored
    and those at or above ``u_tilde`` as right censored.  The resulting
    payment-Z likelihood is maximized with the thresholds treated as fixed.
    ``x0`` defaults to the deductible, the natural scale for truncated data.
    """
    _require_kind(s, "Y")
    c, d, u = s.terms.c, s.terms.d, s.terms.u
    x0 = d if x0 is None else x0
    if not x0 < d_tilde < u_tilde:
        raise DataError(f"need x0 < d_tilde < u_tilde, got {x0}, {d_tilde}, {u_tilde}")
    if u_tilde > u:
        raise DataError(f"u_tilde={u_tilde} exceeds the policy limit u={u}")
    losses = s.values / c + d
    terms = PolicyTerms(c=1.0, d=d_tilde, u=u_tilde)
    z = np.clip(losses - d_tilde, 0.0, u_tilde - d_tilde)
    status = np.where(losses <= d_tilde, Status.ZERO,
                      np.where((losses >= u_tilde) | (s.status == Status.LIMIT),
                               Status.LIMIT, Status.EXACT))
    z = np.where(status == Status.LIMIT, u_tilde - d_tilde, z)
    censored = PaymentSample.build(z, terms, "Z", status=list(status))
    fit = mle_payment_z(censored, x0)
    fit.estimator = "MLE-censored"
    fit.payment = "Y"
    fit.diagnostics.update(thresholds="assumed-fixed", d_tilde=d_tilde, u_tilde=u_tilde,
                           left_censored=censored.count(Status.ZERO),
                           right_censored=censored.count(Status.LIMIT))
    return fit


# -- dispatch ----------------------------------------------------------------------

ESTIMATOR_NAMES = ("MLE", "T", "T2", "W")


def fit(s: PaymentSample, name: str, a: float = 0.0, b: float = 0.0,
        x0: float | None = None) -> FitResult:
    """Run estimator ``name`` (``MLE``, ``T``, ``T2`` or ``W``) on ``s``.

    ``T2`` is the numerically solved payment-Y T-estimator; ``x0`` is needed
    for payment-Z data only.
    """
    name = name.upper()
    if name not in ESTIMATOR_NAMES:
        raise DataError(f"unknown estimator {name!r}; expected one of {ESTIMATOR_NAMES}")
    if s.kind == "Y":
        if name == "MLE":
            return mle_payment_y(s)
        t = TrimSpec(a, b)
        return {"T": t_estimator_payment_y, "T2": t_estimator_payment_y_case2,
                "W": w_estimator_payment_y}[name](s, t)
    if x0 is None:
        raise DataError("payment-Z estimators need x0")
    if name == "MLE":
        return mle_payment_z(s, x0)
    if name == "T2":
        raise CaseError("the numerically solved T-estimator exists for payment-Y data only")
    t = TrimSpec(a, b)
    return (t_estimator_payment_z if name == "T" else w_estimator_payment_z)(s, t, x0)
