"""Ground-up loss models.

Only the single-parameter Pareto law is instantiated, but every consumer in
the package talks to the :class:`GroundUpModel` protocol, so moment and
transform machinery stays model agnostic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from .errors import DomainError, InfiniteQuantileError


@runtime_checkable
class GroundUpModel(Protocol):
    """Capability every ground-up severity model exposes.

    ``cdf``, ``pdf`` and ``qf`` accept scalars or arrays and broadcast.
    ``qf`` must be nondecreasing on [0, 1] and ``cdf(qf(v)) == v`` wherever
    the cdf is continuous.
    """

    @property
    def params(self) -> Sequence[float]: ...

    @property
    def support_lower(self) -> float: ...

    def cdf(self, x): ...

    def survival(self, x): ...

    def pdf(self, x): ...

    def qf(self, v): ...

    def isf(self, s): ...

    def with_params(self, *params) -> "GroundUpModel": ...


def _as_float(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def check_probability(v):
    """Validate probability levels and return them as a float array."""
    arr = np.asarray(v, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"probability level outside [0, 1]: {v!r}")
    return arr


@dataclass(frozen=True)
class ParetoI:
    """Single-parameter Pareto law ``F(x) = 1 - (x0/x)**alpha`` for ``x > x0``.

    Args:
        x0: Known scale (lower support point), in currency units.
        alpha: Tail parameter.
    """

    x0: float
    alpha: float

    def __post_init__(self):
        if not (np.isfinite(self.x0) and self.x0 > 0):
            raise DomainError(f"x0 must be positive and finite, got {self.x0}")
        if not (np.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError(f"alpha must be positive and finite, got {self.alpha}")

    @property
    def params(self) -> tuple[float]:
        return (self.alpha,)

    @property
    def support_lower(self) -> float:
        return self.x0

    def with_params(self, alpha: float) -> "ParetoI":
        return ParetoI(self.x0, alpha)

    def survival(self, x):
        """``1 - F(x)``, evaluated without cancellation in the far tail."""
        x, scalar = _as_float(x)
        out = np.ones_like(x)
        above = x > self.x0
        # exp/log form keeps large alpha from overflowing
        with np.errstate(divide="ignore"):
            out[above] = np.exp(-self.alpha * np.log(x[above] / self.x0))
        return out[()] if scalar else out

    def cdf(self, x):
        return 1.0 - self.survival(x)

    def pdf(self, x):
        x, scalar = _as_float(x)
        out = np.zeros_like(x)
        above = x > self.x0
        with np.errstate(divide="ignore"):
            out[above] = (self.alpha / self.x0) * np.exp(
                -(self.alpha + 1.0) * np.log(x[above] / self.x0)
            )
        return out[()] if scalar else out

    def qf(self, v):
        """Quantile ``x0 * (1 - v)**(-1/alpha)``.

        Raises:
            DomainError: ``v`` outside [0, 1].
            InfiniteQuantileError: ``v == 1`` (the quantile is +inf).
        """
        v = check_probability(v)
        if np.any(v == 1.0):
            raise InfiniteQuantileError("Pareto quantile at level 1 is +inf")
        out = self.x0 * np.exp(-np.log1p(-v) / self.alpha)
        return out[()] if out.ndim == 0 else out

    def isf(self, s):
        """Inverse survival function, ``qf(1 - s)`` without forming ``1 - s``."""
        s = check_probability(s)
        if np.any(s == 0.0):
            raise InfiniteQuantileError("Pareto quantile at level 1 is +inf")
        out = self.x0 * np.exp(-np.log(s) / self.alpha)
        return out[()] if out.ndim == 0 else out


def pareto_cdf(x, m: ParetoI):
    return m.cdf(x)


def pareto_pdf(x, m: ParetoI):
    return m.pdf(x)


def pareto_qf(v, m: ParetoI):
    return m.qf(v)
