import math

import pytest

from sevrobust.errors import DomainError
from sevrobust.simulation import Scenario, simulate
from sevrobust.transforms import PolicyTerms

TERMS = PolicyTerms(1.0, 2.0, 2.0 * 0.05 ** (-1 / 1.5))


def test_smoke_small_design():
    report = simulate(Scenario(1.5, 1.0, TERMS, n=10, replicates=1, seed=3))
    row = report.rows[0]
    assert all(not (isinstance(v, float) and math.isnan(v)) for v in vars(row).values())
    assert row.variance == 0.0 and row.failures == 0


def test_fixed_seed_is_bit_identical():
    sc = Scenario(1.5, 1.0, TERMS, n=200, replicates=20, seed=9,
                  estimators=(("MLE", 0, 0), ("T", 0.1, 0.1), ("W", 0.1, 0.1)))
    assert simulate(sc).to_dict() == simulate(sc).to_dict()


def test_failures_are_counted_per_estimator():
    # 1-b = 0.99 exceeds the uncensored share of about 0.95
    sc = Scenario(1.5, 1.0, TERMS, n=200, replicates=5,
                  estimators=(("MLE", 0, 0), ("T", 0.1, 0.01), ("T2", 0.1, 0.01)))
    rows = {r.estimator: r for r in simulate(sc).rows}
    assert rows["MLE"].failures == 0
    assert rows["T"].failures == 5 and math.isnan(rows["T"].mean)
    assert math.isnan(rows["T"].asymptotic_variance)
    assert rows["T2"].failures == 0 and rows["T2"].mean == pytest.approx(1.5, abs=0.3)


def test_payment_z_report():
    terms = PolicyTerms(1.0, 2 ** (1 / 1.5), 20 ** (1 / 1.5))
    sc = Scenario(1.5, 1.0, terms, "Z", n=2000, replicates=10,
                  estimators=(("MLE", 0, 0), ("T", 0.6, 0.1), ("W", 0.6, 0.1)))
    report = simulate(sc).to_dict()
    assert report["scenario"]["kind"] == "Z"
    assert [r["failures"] for r in report["rows"]] == [0, 0, 0]


def test_scenario_validation():
    with pytest.raises(DomainError):
        Scenario(1.5, 1.0, TERMS, kind="X")
    with pytest.raises(DomainError):
        Scenario(1.5, 1.0, TERMS, n=0)
