"""Trimmed (T) and winsorized (W) moments, sample and population.

A single pair of proportions ``(a, b)`` and a single transformation ``h`` are
used for every moment order ``j``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import quadrature
from .errors import DegenerateError, DomainError
from .transforms import ObservedDistribution

# n*a is floored after adding this slack so that e.g. 100 * 0.29 gives 29
_COUNT_SLACK = 1e-9


@dataclass(frozen=True)
class TrimSpec:
    """Lower/upper trimming (or winsorizing) proportions."""

    a: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.a < 1.0 and 0.0 <= self.b < 1.0):
            raise DomainError(f"proportions must lie in [0, 1): a={self.a}, b={self.b}")
        if not self.a + self.b < 1.0:
            raise DomainError(f"need a + b < 1, got a={self.a}, b={self.b}")

    @property
    def upper(self) -> float:
        """``1 - b``, the upper probability level of the retained window."""
        return 1.0 - self.b

    def counts(self, n: int) -> tuple[int, int]:
        """``(m_n, m_n*)`` = ``(floor(n a), floor(n b))``.

        Raises:
            DegenerateError: fewer than one observation would remain.
        """
        m_lo = math.floor(n * self.a + _COUNT_SLACK)
        m_hi = math.floor(n * self.b + _COUNT_SLACK)
        if n - m_lo - m_hi < 1:
            raise DegenerateError(
                f"empty retained window: a={self.a}, b={self.b}, n={n} "
                f"(m_n={m_lo}, m_n*={m_hi})"
            )
        return m_lo, m_hi


@dataclass(frozen=True)
class HTransform:
    """A named nondecreasing transformation applied before averaging."""

    name: str
    func: Callable

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))


IDENTITY = HTransform("identity", lambda x: x)
LOG = HTransform("log", np.log)


def h_payment_y(c: float, d: float) -> HTransform:
    """``log(y / (c d) + 1)``: linearises payment-Y quantiles in 1/alpha."""
    return HTransform(f"h_Y(c={c}, d={d})", lambda y: np.log1p(y / (c * d)))


def h_payment_z(c: float, d: float) -> HTransform:
    """``log(z / c + d)``."""
    return HTransform(f"h_Z(c={c}, d={d})", lambda z: np.log(z / c + d))


def h_claims(d: float) -> HTransform:
    """``log(l / d)`` for raw claim amounts ``l`` above the deductible."""
    return HTransform(f"h_claims(d={d})", lambda x: np.log(x / d))


def _check_sorted(w):
    if __debug__ and w.size > 1 and np.any(w[1:] < w[:-1]):
        raise DomainError("data must be sorted ascending")


def sample_t_moment(sorted_data, h: HTransform, j: int, t: TrimSpec) -> float:
    """Mean of ``h(w_i)**j`` over the retained order statistics."""
    w = np.asarray(sorted_data, dtype=float)
    _check_sorted(w)
    n = w.size
    m_lo, m_hi = t.counts(n)
    core = h(w[m_lo:n - m_hi]) ** j
    return float(np.mean(core))


def sample_w_moment(sorted_data, h: HTransform, j: int, t: TrimSpec) -> float:
    """Winsorized analogue: the ``m_n`` lowest and ``m_n*`` highest values are
    replaced by the nearest retained order statistic before averaging."""
    w = np.asarray(sorted_data, dtype=float)
    _check_sorted(w)
    n = w.size
    m_lo, m_hi = t.counts(n)
    core = h(w[m_lo:n - m_hi]) ** j
    total = m_lo * core[0] + np.sum(core) + m_hi * core[-1]
    return float(total / n)


def _integrand(dist, h, j):
    def f(v):
        return h(dist.qf(v)) ** j
    return f


def population_t_moment(dist: ObservedDistribution, h: HTransform, j: int,
                        t: TrimSpec) -> float:
    """``(1 - a - b)^{-1} * integral_a^{1-b} h(qf(v))**j dv`` by quadrature.

    Raises:
        DegenerateError: the integrand is not finite on the window.
    """
    lo, hi = t.a, t.upper
    integral = quadrature.integrate(_integrand(dist, h, j), lo, hi, breaks=dist.qf_breaks)
    return integral / (hi - lo)


def population_w_moment(dist: ObservedDistribution, h: HTransform, j: int,
                        t: TrimSpec) -> float:
    """``a h(qf(a))**j + integral_a^{1-b} h(qf)**j + b h(qf(1-b))**j``.

    Raises:
        DegenerateError: ``h(qf(a))`` or ``h(qf(1-b))`` is not finite.
    """
    lo, hi = t.a, t.upper
    f = _integrand(dist, h, j)
    try:
        ends = np.array([f(lo), f(hi)], dtype=float)
    except ArithmeticError as exc:
        raise DegenerateError(f"winsorizing boundary quantile is not finite: {exc}") from exc
    if not np.all(np.isfinite(ends)):
        raise DegenerateError(f"winsorizing boundary values are not finite: {ends}")
    middle = quadrature.integrate(f, lo, hi, breaks=dist.qf_breaks)
    return float(lo * ends[0] + middle + t.b * ends[1])


class CaseArrangement(enum.IntEnum):
    """Position of ``a`` and ``1 - b`` relative to the censoring levels
    ``p1 = F(t1)`` and ``p2 = F(t2)``.

    1: a < 1-b <= p1            (censored data only, lower end)
    2: a <= p1 < 1-b <= p2
    3: a <= p1 <= p2 <= 1-b
    4: p1 <= p2 <= a < 1-b      (censored data only, upper end)
    5: p1 <= a < p2 <= 1-b
    6: p1 <= a < 1-b <= p2      (observed data only)
    """

    CASE_1 = 1
    CASE_2 = 2
    CASE_3 = 3
    CASE_4 = 4
    CASE_5 = 5
    CASE_6 = 6


def classify_case(t: TrimSpec, p1: float, p2: float) -> CaseArrangement:
    """Return the arrangement of ``(a, 1-b)`` against ``(p1, p2)``.

    Conditions are tested from case 6 down to case 1, so a tie on a boundary
    resolves to the higher-numbered case.
    """
    if not (0.0 <= p1 <= p2 <= 1.0):
        raise DomainError(f"need 0 <= p1 <= p2 <= 1, got p1={p1}, p2={p2}")
    a, top = t.a, t.upper
    checks = (
        (CaseArrangement.CASE_6, p1 <= a and top <= p2),
        (CaseArrangement.CASE_5, p1 <= a < p2 <= top),
        (CaseArrangement.CASE_4, p2 <= a),
        (CaseArrangement.CASE_3, a <= p1 and p2 <= top),
        (CaseArrangement.CASE_2, a <= p1 < top <= p2),
        (CaseArrangement.CASE_1, top <= p1),
    )
    for case, holds in checks:
        if holds:
            return case
    raise AssertionError("unreachable: arrangements cover every ordering")  # pragma: no cover
