import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sevrobust.distributions import GroundUpModel, ParetoI, pareto_cdf, pareto_pdf, pareto_qf
from sevrobust.errors import DomainError, InfiniteQuantileError


def test_cdf_examples():
    assert pareto_cdf(3.0, ParetoI(3.0, 2.0)) == 0.0
    assert pareto_cdf(2.0, ParetoI(1.0, 1.0)) == pytest.approx(0.5, abs=1e-15)
    assert pareto_cdf(10.0, ParetoI(1.0, 2.0)) == pytest.approx(0.99, abs=1e-15)
    assert pareto_cdf(0.5, ParetoI(1.0, 2.0)) == 0.0


def test_pdf_examples():
    assert pareto_pdf(0.5, ParetoI(1.0, 1.0)) == 0.0
    assert pareto_pdf(2.0, ParetoI(1.0, 1.0)) == pytest.approx(0.25)
    assert pareto_pdf(np.nextafter(2.0, 3.0), ParetoI(2.0, 3.0)) == pytest.approx(1.5)


def test_qf_examples():
    assert pareto_qf(0.0, ParetoI(4.0, 1.3)) == 4.0
    assert pareto_qf(0.75, ParetoI(1.0, 1.0)) == pytest.approx(4.0)
    assert pareto_qf(0.99, ParetoI(1.0, 2.0)) == pytest.approx(10.0)


def test_qf_errors_are_distinct():
    m = ParetoI(1.0, 1.0)
    with pytest.raises(InfiniteQuantileError):
        m.qf(1.0)
    for bad in (-0.1, 1.1, np.nan):
        with pytest.raises(DomainError):
            m.qf(bad)
    with pytest.raises(InfiniteQuantileError):
        m.isf(0.0)


@pytest.mark.parametrize("x0, alpha", [(0.0, 1.0), (1.0, 0.0), (-1, 2), (1.0, np.inf)])
def test_invalid_parameters(x0, alpha):
    with pytest.raises(DomainError):
        ParetoI(x0, alpha)


def test_round_trip_random_draws():
    rng = np.random.default_rng(0)
    x0 = rng.uniform(0.1, 1e6, 1000)
    alpha = rng.uniform(0.05, 50.0, 1000)
    v = rng.uniform(0.0, 1.0 - 1e-9, 1000)
    err = [abs(ParetoI(a, b).cdf(ParetoI(a, b).qf(w)) - w) for a, b, w in zip(x0, alpha, v)]
    assert max(err) < 1e-10


def test_large_alpha_is_finite():
    m = ParetoI(1.0, 50.0)
    assert np.isfinite(m.pdf(1e6)) and np.isfinite(m.cdf(1e300))
    assert m.qf(0.999999) == pytest.approx(0.000001 ** (-1 / 50))


def test_density_matches_cdf_derivative():
    m = ParetoI(2.0, 1.7)
    x = np.linspace(2.1, 60.0, 100)
    h = 1e-6 * x
    num = (m.cdf(x + h) - m.cdf(x - h)) / (2 * h)
    np.testing.assert_allclose(num, m.pdf(x), rtol=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 1e4), st.floats(0.05, 50.0))
def test_qf_monotone(x0, alpha):
    q = ParetoI(x0, alpha).qf(np.linspace(0.0, 1.0 - 1e-12, 10_000))
    assert np.all(np.diff(q) >= 0.0)


def test_protocol_and_with_params():
    m = ParetoI(1.0, 2.0)
    assert isinstance(m, GroundUpModel)
    assert m.with_params(3.0) == ParetoI(1.0, 3.0)
    assert m.params == (2.0,)
    assert m.isf(0.25) == pytest.approx(m.qf(0.75))
