import math

import numpy as np
import pytest

from sevrobust.asymptotics import AsymptoticSpec
from sevrobust.errors import DomainError
from sevrobust.estimators import FitResult
from sevrobust.pricing import Layer, premium, premium_ci, premium_derivative

LAYER = Layer(7e6, 35e6, 5e5)


def _numeric_premium(layer, alpha):
    # E[min(max(L - d*, 0), u* - d*)] = int_{d*}^{u*} S(x) dx
    from scipy.integrate import quad
    val, _ = quad(lambda x: (layer.C / x) ** alpha, layer.d_star, layer.u_star, epsrel=1e-13)
    return val


@pytest.mark.parametrize("alpha", [0.6, 1.0, 1.22, 2.5])
def test_premium_matches_survival_integral(alpha):
    assert premium(LAYER, alpha) == pytest.approx(_numeric_premium(LAYER, alpha), rel=1e-10)


def test_premium_alpha_one_branch():
    layer = Layer(1e6, 5e6, 5e5)
    assert premium(layer, 1.0) == pytest.approx(5e5 * math.log(5.0), rel=1e-15)
    assert premium(layer, 1.0) == pytest.approx(8.047e5, rel=1e-4)


def test_empty_layer():
    layer = Layer(7e6, 7e6, 5e5)
    assert premium(layer, 1.3) == 0.0
    assert premium_derivative(layer, 1.3) == 0.0


def test_derivative_matches_finite_difference():
    for alpha in (0.5, 1.22, 1.8, 3.0):
        h = 1e-6
        fd = (premium(LAYER, alpha + h) - premium(LAYER, alpha - h)) / (2 * h)
        assert premium_derivative(LAYER, alpha) == pytest.approx(fd, rel=1e-4)


def test_derivative_near_one_is_the_limit():
    lu, ld = math.log(70.0), math.log(14.0)
    limit = -5e5 * (lu * lu - ld * ld) / 2.0
    assert premium_derivative(LAYER, 1.0) == pytest.approx(limit, rel=1e-6)
    assert premium_derivative(LAYER, 1.0 + 2e-4) == pytest.approx(limit, rel=1e-3)


def test_derivative_sign_and_monotone():
    alphas = np.linspace(1.01, 3.0, 60)
    values = [premium(LAYER, a) for a in alphas]
    assert all(premium_derivative(LAYER, a) < 0 for a in alphas)
    assert all(x > y for x, y in zip(values, values[1:]))


def test_continuity_at_one():
    base, slope = premium(LAYER, 1.0), premium_derivative(LAYER, 1.0)
    for eps in (1e-6, -1e-6):
        assert abs(premium(LAYER, 1.0 + eps) - base - eps * slope) / base < 1e-8


def _fit(alpha, n=142, factor=1.0):
    return FitResult(alpha, "MLE", "Y", n, n, factor)


def test_premium_ci_structure():
    ci = premium_ci(LAYER, _fit(1.22))
    point = premium(LAYER, 1.22)
    assert ci.upper / point == pytest.approx(point / ci.lower, rel=1e-14)
    assert ci.style == "log-transformed"
    se = 1.22 / math.sqrt(142) * abs(premium_derivative(LAYER, 1.22))
    from scipy.stats import norm
    assert ci.upper == pytest.approx(point * math.exp(norm.ppf(0.95) * se / point), rel=1e-14)


def test_premium_ci_zero_variance():
    ci = premium_ci(LAYER, _fit(1.22), spec=AsymptoticSpec(0.0, "MLE-Y"))
    assert ci.lower == ci.upper == premium(LAYER, 1.22)


def test_layer_validation():
    for args in [(7e6, 6e6, 5e5), (7e6, 35e6, 8e6), (7e6, math.inf, 5e5), (7e6, 35e6, 0.0)]:
        with pytest.raises(DomainError):
            Layer(*args)
    with pytest.raises(DomainError):
        premium(LAYER, 0.0)
    with pytest.raises(DomainError):
        premium_ci(Layer(7e6, 7e6, 5e5), _fit(1.2))
