"""Layer premiums under a Pareto I severity, with delta-method intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .asymptotics import AsymptoticSpec
from .errors import DomainError
from .estimators import FitResult
from .inference import ConfidenceInterval, z_quantile

# below this distance from alpha = 1 the closed-form derivative loses digits
_NEAR_ONE = 1e-4
_FD_STEP = 1e-5


@dataclass(frozen=True)
class Layer:
    """Benefit ``min(max(L - d_star, 0), u_star - d_star)`` for loss ``L ~ Pareto(C, alpha)``.

    ``C`` is the deductible for observed losses or ``x0`` for ground-up losses.
    """

    d_star: float
    u_star: float
    C: float

    def __post_init__(self):
        if not (0.0 < self.C <= self.d_star <= self.u_star < math.inf):
            raise DomainError(f"need 0 < C <= d* <= u* < inf, got C={self.C}, "
                              f"d*={self.d_star}, u*={self.u_star}")


def _check_alpha(alpha):
    if not (math.isfinite(alpha) and alpha > 0.0):
        raise DomainError(f"alpha must be positive, got {alpha}")


def premium(layer: Layer, alpha: float) -> float:
    """Expected layer payment ``C [(u*/C)^(1-a) - (d*/C)^(1-a)] / (1-a)``.

    Written as ``C e^{sD} expm1(s (U - D)) / s`` with ``s = 1 - alpha``,
    which is accurate near ``alpha = 1`` and equals ``C log(u*/d*)`` there.
    """
    _check_alpha(alpha)
    s = 1.0 - alpha
    log_d = math.log(layer.d_star / layer.C)
    width = math.log(layer.u_star / layer.C) - log_d
    if s == 0.0:
        return layer.C * width
    return layer.C * math.exp(s * log_d) * math.expm1(s * width) / s


def premium_derivative(layer: Layer, alpha: float) -> float:
    """``d premium / d alpha``; central difference within 1e-4 of alpha = 1."""
    _check_alpha(alpha)
    s = 1.0 - alpha
    if abs(s) < _NEAR_ONE:
        h = _FD_STEP
        return (premium(layer, alpha + h) - premium(layer, alpha - h)) / (2.0 * h)
    rd, ru = layer.d_star / layer.C, layer.u_star / layer.C
    pd, pu = math.exp(s * math.log(rd)), math.exp(s * math.log(ru))
    inner = s * (pd * math.log(rd) - pu * math.log(ru)) + pu - pd
    return layer.C * inner / (s * s)


def premium_ci(layer: Layer, fit: FitResult, spec: AsymptoticSpec | None = None,
               n: int | None = None, level: float = 0.90) -> ConfidenceInterval:
    """Log-transformed delta-method interval ``[P / K, P K]``.

    ``K = exp(z * se / P)`` with ``se = sqrt(Var(alpha_hat)) |dP/dalpha|``.
    ``spec`` and ``n`` default to the fit's own.
    """
    alpha = fit.alpha_hat
    factor = fit.variance_factor if spec is None else spec.variance_factor
    n = fit.n if n is None else n
    point = premium(layer, alpha)
    if not point > 0.0:
        raise DomainError("log-transformed interval needs a positive premium")
    se = math.sqrt(factor * alpha * alpha / n) * abs(premium_derivative(layer, alpha))
    k = math.exp(z_quantile(level) * se / point)
    return ConfidenceInterval(point / k, point * k, level, "log-transformed")
