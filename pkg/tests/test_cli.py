import io
import json
import math
from pathlib import Path

import pytest

from sevrobust import cli
from sevrobust.errors import SolverError

FIXTURE = str(Path(__file__).resolve().parent / "data" / "synthetic_fire_1975.csv")
FAST = ["--bootstrap-runs", "20", "--seed", "7"]


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out)
    return code, out.getvalue()


def read_records(path):
    return [json.loads(line) for line in Path(path).read_text().splitlines()]


def test_summarize():
    code, text = run("summarize", FIXTURE)
    assert code == 0
    assert text.startswith("n = 142")
    assert "[0.5; 1)  0.55" in text


def test_summarize_single_claim(tmp_path):
    p = tmp_path / "one.csv"
    p.write_text("amount\n600000\n")
    code, text = run("summarize", str(p))
    assert code == 0 and "[0.5; 1)  1.00" in text


def test_data_errors_exit_1(tmp_path, capsys):
    p = tmp_path / "empty.csv"
    p.write_text("amount\n")
    assert run("summarize", str(p))[0] == 1
    assert "n=0" in capsys.readouterr().err
    p.write_text("amount\n600000\nbad\n")
    assert run("fit", str(p))[0] == 1
    assert ":3:" in capsys.readouterr().err


def test_config_errors_exit_1(tmp_path, capsys):
    assert run("fit", FIXTURE, "--level", "1.5")[0] == 1
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"c": 3, "scheme": "nope"}))
    assert run("fit", FIXTURE, "--config", str(cfg))[0] == 1
    err = capsys.readouterr().err
    assert "c:" in err and "scheme:" in err
    assert run("simulate", "--alpha", "-1", "--x0", "1", "--d", "2")[0] == 1
    assert run("simulate", "--x0", "1", "--d", "2")[0] == 1
    assert run("are")[0] == 1


def test_numeric_failure_exit_2(monkeypatch):
    def boom(*args, **kwargs):
        raise SolverError("forced")

    monkeypatch.setattr(cli, "simulate", boom)
    assert run("simulate", "--alpha", "1.5", "--x0", "1", "--d", "2")[0] == 2


def test_fit_table_and_records_agree(tmp_path):
    rec_path = tmp_path / "fit.jsonl"
    code, text = run("fit", FIXTURE, *FAST, "--records", str(rec_path))
    assert code == 0
    records = read_records(rec_path)
    assert len(records) == 7
    lines = text.splitlines()[1:]
    for rec, line in zip(records, lines):
        assert f"{rec['alpha_hat']:.2f}" in line
        assert f"[{rec['ci_lo']:.2f}; {rec['ci_hi']:.2f}]" in line
        assert f"{rec['ks']:.2f}" in line and f"{rec['p_value']:.2f}" in line
    mle, t0, w0 = records[0], records[1], records[4]
    assert t0["alpha_hat"] == pytest.approx(mle["alpha_hat"], rel=1e-10)
    assert w0["alpha_hat"] == pytest.approx(mle["alpha_hat"], rel=1e-10)


def test_fit_is_deterministic():
    assert run("fit", FIXTURE, *FAST) == run("fit", FIXTURE, *FAST)


def test_fit_modified_marks_untrimmed_rows_unavailable(tmp_path):
    rec_path = tmp_path / "mod.jsonl"
    code, text = run("fit", FIXTURE, *FAST, "--u", "7e6", "--records", str(rec_path))
    assert code == 0
    records = read_records(rec_path)
    unavailable = [r for r in records if r["alpha_hat"] is None]
    assert {(r["estimator"], r["a"], r["b"]) for r in unavailable} == {("T", 0.0, 0.0), ("W", 0.0, 0.0)}
    assert all(r["error"] for r in unavailable)
    assert "T, a=0, b=0" in text and "--" in text


def test_records_output_mode():
    code, text = run("fit", FIXTURE, *FAST, "--output", "records")
    assert code == 0
    records = [json.loads(line) for line in text.splitlines()]
    assert set(cli.RECORD_FIELDS) <= set(records[0])


def test_price_rows(tmp_path):
    rec_path = tmp_path / "price.jsonl"
    code, text = run("price", FIXTURE, "--records", str(rec_path))
    assert code == 0
    records = read_records(rec_path)
    assert len(records) == 14
    assert {r["basis"] for r in records} == {"observed", "ground-up"}
    for r in records:
        assert r["premium_ci_lo"] < r["premium"] < r["premium_ci_hi"]
        assert r["premium"] / r["premium_ci_lo"] == pytest.approx(r["premium_ci_hi"] / r["premium"])
    assert f"{records[0]['premium'] / 1e5:.2f}e5" in text


def test_price_trimmed_rows_unchanged_by_modification(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run("price", FIXTURE, "--records", str(a))
    run("price", FIXTURE, "--u", "7e6", "--records", str(b))
    orig = [r for r in read_records(a) if r["estimator"] != "MLE" and r["b"] >= 0.1]
    mod = [r for r in read_records(b) if r["estimator"] != "MLE" and r["b"] >= 0.1]
    assert orig and [r["premium"] for r in orig] == [r["premium"] for r in mod]


def test_are_preset_and_single_cell(tmp_path):
    rec_path = tmp_path / "are.jsonl"
    code, text = run("are", "--preset", "4.4", "--records", str(rec_path))
    assert code == 0
    cells = read_records(rec_path)
    dashed = [c for c in cells if c["delta_l"] == 0.5 and c["a"] == 0.8 and c["b"] == 0.25]
    assert dashed and not any(c["feasible"] for c in dashed)
    code, text = run("are", "--estimator", "W-Y", "--a", "0.05", "--b", "0.05", "--delta", "0.05")
    assert code == 0 and text.strip().endswith("1.000")
    code, text = run("are", "--estimator", "T-Y", "--a", "0.1", "--b", "0.01", "--delta", "0.05")
    assert text.strip().endswith("--")


def test_simulate(tmp_path):
    scen = tmp_path / "s.json"
    scen.write_text(json.dumps({"alpha": 1.5, "x0": 1.0, "d": 2.0, "u": 30.0, "n": 300,
                                "replicates": 5, "seed": 1}))
    rec_path = tmp_path / "sim.jsonl"
    args = ("simulate", "--scenario", str(scen), "--estimator", "MLE", "--estimator", "W:0.1:0.1",
            "--records", str(rec_path))
    code, text = run(*args)
    assert code == 0
    rows = read_records(rec_path)
    assert [r["estimator"] for r in rows] == ["MLE", "W"]
    assert run(*args)[1] == text
    assert all(math.isfinite(r["variance_ratio"]) for r in rows)


def test_qq(tmp_path):
    code, text = run("qq", FIXTURE)
    assert code == 0
    assert text.startswith("line: y = ")
    assert len(text.splitlines()) == 143
    rec_path = tmp_path / "qq.jsonl"
    code, _ = run("qq", FIXTURE, "--limit", "7e6", "--records", str(rec_path))
    assert len(read_records(rec_path)) == 137
