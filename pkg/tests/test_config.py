import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from sevrobust.config import EstimatorChoice, LayerChoice, RunConfig
from sevrobust.errors import ConfigError


def test_defaults_round_trip():
    cfg = RunConfig()
    assert RunConfig.loads(cfg.dumps()) == cfg
    assert json.loads(cfg.dumps())["u"] is None


@settings(max_examples=60, deadline=None)
@given(scheme=st.sampled_from(["payment-Y", "payment-Z"]),
       c=st.floats(0.01, 1.0), d=st.floats(1e4, 1e6), ratio=st.one_of(st.just(math.inf), st.floats(1.5, 100.0)),
       level=st.floats(0.5, 0.99), runs=st.integers(0, 2000), seed=st.integers(0, 2**31),
       ests=st.lists(st.tuples(st.sampled_from(["MLE", "T", "W"]), st.floats(0, 0.4), st.floats(0, 0.4)),
                     min_size=1, max_size=4))
def test_round_trip_property(scheme, c, d, ratio, level, runs, seed, ests):
    cfg = RunConfig(scheme=scheme, c=c, d=d, u=d * ratio, x0=d / 10, level=level,
                    bootstrap_runs=runs, seed=seed,
                    estimators=tuple(EstimatorChoice(*e) for e in ests),
                    layers=(LayerChoice(2 * d, 10 * d, "observed"),))
    assert RunConfig.loads(cfg.dumps()) == cfg
    assert RunConfig.loads(RunConfig.loads(cfg.dumps()).dumps()) == cfg


def test_problems_are_aggregated():
    bad = {"c": 2.0, "level": 1.5, "scheme": "payment-X", "bogus": 1,
           "estimators": [{"name": "median"}, {"name": "T", "a": 0.6, "b": 0.5}]}
    with pytest.raises(ConfigError) as info:
        RunConfig.from_dict(bad)
    text = " | ".join(info.value.problems)
    for needle in ("c:", "level:", "scheme:", "bogus", "estimators[0]", "estimators[1]"):
        assert needle in text


def test_cross_field_checks():
    with pytest.raises(ConfigError, match="d: must be below u"):
        RunConfig.from_dict({"d": 5e5, "u": 4e5})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"scheme": "payment-Z", "x0": 6e5})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"layers": [{"d_star": 1e5, "u_star": 2e6, "basis": "observed"}]})


def test_override_and_load(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"u": 7e6, "bootstrap_runs": 10}))
    cfg = RunConfig.load(path)
    assert cfg.u == 7e6 and cfg.bootstrap_runs == 10
    assert cfg.override(u=math.inf, seed=None).u == math.inf
    with pytest.raises(ConfigError):
        RunConfig.loads("{not json")
    with pytest.raises(ConfigError):
        RunConfig.load(tmp_path / "missing.json")


def test_labels():
    assert EstimatorChoice("MLE").label == "MLE"
    assert EstimatorChoice("T", 0.1, 0.1).label == "T, a=0.1, b=0.1"
    assert RunConfig(scheme="payment-Z", x0=1.0).kind == "Z"
