import math

import numpy as np
import pytest

from sevrobust.distributions import ParetoI
from sevrobust.errors import DegenerateError, DomainError
from sevrobust.transforms import (Complete, IntervalCensored, PaymentY, PaymentZ, PolicyTerms,
                                  Truncated, censored_dist, complete_dist, observed,
                                  payment_y_dist, payment_z_dist, sample, truncated_dist)

M = ParetoI(1.0, 1.0)
TERMS = PolicyTerms(c=1.0, d=2.0, u=10.0)


class FixedUniform:
    def __init__(self, value):
        self.value = value

    def random(self, n):
        return np.full(n, self.value)


def _continuous_mass(dist, lo, hi):
    from sevrobust import quadrature
    return quadrature.integrate(dist.density, lo, hi)


def test_truncated():
    dist = truncated_dist(M, 2.0, 4.0)
    assert dist.cdf(3.0) == pytest.approx(2.0 / 3.0)
    assert dist.qf(0.0) == pytest.approx(2.0)
    assert dist.qf(1.0) == pytest.approx(4.0)
    assert dist.atoms == ()
    # interior limit at the truncation points
    assert dist.density(2.0) == pytest.approx(M.pdf(2.0 + 1e-12) / 0.25, rel=1e-9)


def test_truncated_without_truncation_is_ground_up():
    dist = truncated_dist(M, 1.0, math.inf)
    x = np.linspace(1.0, 50.0, 30)
    np.testing.assert_allclose(dist.cdf(x), M.cdf(x), atol=1e-15)


def test_truncated_degenerate():
    with pytest.raises(DegenerateError):
        truncated_dist(M, 0.2, 0.9)


def test_censored():
    dist = censored_dist(M, 2.0, 10.0)
    assert [a.mass for a in dist.atoms] == pytest.approx([0.5, 0.1])
    assert dist.qf(0.3) == 2.0 and dist.qf(0.49) == 2.0
    assert dist.qf(0.95) == 10.0
    assert dist.atom_total + _continuous_mass(dist, 2.0, 10.0) == pytest.approx(1.0, abs=1e-10)
    plain = censored_dist(M, 1.0, math.inf)
    assert plain.atoms == ()
    assert plain.cdf(3.0) == pytest.approx(M.cdf(3.0))


def test_payment_y():
    dist = payment_y_dist(M, TERMS)
    assert dist.qf(0.5) == pytest.approx(2.0)
    np.testing.assert_allclose(dist.qf(np.array([0.8, 0.9, 1.0])), 8.0)
    assert dist.atoms[0].location == 8.0 and dist.atoms[0].mass == pytest.approx(0.2)
    assert dist.atom_total + _continuous_mass(dist, 0.0, 8.0) == pytest.approx(1.0, abs=1e-10)
    open_ended = payment_y_dist(M, PolicyTerms(1.0, 2.0))
    assert open_ended.atoms == ()
    assert open_ended.atom_total + _continuous_mass(open_ended, 0.0, 1e12) == pytest.approx(1.0, abs=1e-9)


def test_payment_y_needs_mass_above_d():
    class Bounded(ParetoI):
        def survival(self, x):
            return np.where(np.asarray(x) >= 5.0, 0.0, super().survival(x))

    with pytest.raises(DegenerateError):
        payment_y_dist(Bounded(1.0, 1.0), PolicyTerms(1.0, 6.0, 10.0))


def test_payment_y_is_scaled_censored_truncated_composition():
    terms = PolicyTerms(0.6, 2.0, 10.0)
    dist = payment_y_dist(M, terms)
    inner = truncated_dist(M, 2.0)
    v = np.linspace(0.0, 0.999, 1000)
    composed = terms.c * (np.minimum(inner.qf(v), terms.u) - terms.d)
    np.testing.assert_allclose(dist.qf(v), composed, rtol=1e-12)


def test_payment_z():
    dist = payment_z_dist(M, TERMS)
    assert dist.qf(0.3) == 0.0
    assert dist.qf(0.75) == pytest.approx(2.0)
    assert dist.qf(0.95) == 8.0
    assert [a.mass for a in dist.atoms] == pytest.approx([0.5, 0.1])
    assert dist.atom_total + _continuous_mass(dist, 0.0, 8.0) == pytest.approx(1.0, abs=1e-10)


def test_mixed_density_reports_atoms():
    dist = payment_z_dist(M, TERMS)
    assert dist.mixed_density(0.0) == ("mass", 0.5)
    kind, value = dist.mixed_density(2.0)
    assert kind == "density" and value == pytest.approx(M.pdf(4.0))


def test_sample_with_forced_uniform():
    assert sample(payment_y_dist(M, TERMS), 1, FixedUniform(0.5))[0] == pytest.approx(2.0)


def test_sample_determinism_and_zero_share():
    dist = payment_z_dist(M, TERMS)
    a, b = sample(dist, 100_000, 7), sample(dist, 100_000, 7)
    np.testing.assert_array_equal(a, b)
    assert abs(np.mean(a == 0.0) - 0.5) < 0.01
    with pytest.raises(DomainError):
        sample(dist, 0, 1)


@pytest.mark.parametrize("scheme", [Complete(), Truncated(2.0, 8.0), IntervalCensored(2.0, 10.0),
                                    PaymentY(PolicyTerms(0.5, 2.0, 10.0)), PaymentZ(TERMS)])
def test_empirical_cdf_matches(scheme):
    dist = observed(ParetoI(1.0, 1.3), scheme)
    x = sample(dist, 100_000, 11)
    grid = np.unique(x)[::50]
    ecdf = np.searchsorted(x, grid, side="right") / x.size
    assert np.max(np.abs(ecdf - dist.cdf(grid))) < 0.01


def test_policy_terms_validation():
    with pytest.raises(DomainError):
        PolicyTerms(c=0.0)
    with pytest.raises(DomainError):
        PolicyTerms(c=1.0, d=5.0, u=5.0)
    assert math.isinf(PolicyTerms(1.0, 2.0).max_payment)


def test_complete():
    dist = complete_dist(M)
    assert dist.cdf(4.0) == pytest.approx(0.75)
