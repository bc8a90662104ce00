"""Command-line front end.

Exit codes: 0 success, 1 configuration or data error, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import asymptotics
from .claims import pareto_qq, read_claims, summarize, to_payment_sample
from .config import EstimatorChoice, RunConfig
from .errors import ConfigError, DataError, SeverityError
from .estimators import fit
from .inference import bootstrap_pvalue, ci_for_fit, fitted_distribution, ks_right_censored
from .pricing import Layer, premium, premium_ci
from .simulation import Scenario, simulate
from .transforms import PolicyTerms

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2

RECORD_FIELDS = ("estimator", "a", "b", "alpha_hat", "ci_lo", "ci_hi", "ks", "p_value",
                 "premium", "premium_ci_lo", "premium_ci_hi")


def _fmt(x, digits=2):
    return "--" if x is None or (isinstance(x, float) and math.isnan(x)) else f"{x:.{digits}f}"


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _emit_records(records, path, out):
    lines = [json.dumps({k: _json_safe(v) for k, v in r.items()}) for r in records]
    if path:
        Path(path).write_text("".join(l + "\n" for l in lines), encoding="utf-8")
    else:
        out.write("".join(l + "\n" for l in lines))


def _record(choice: EstimatorChoice, **values):
    rec = {k: None for k in RECORD_FIELDS}
    rec.update(estimator=choice.name, a=choice.a, b=choice.b)
    rec.update(values)
    return rec


def _load_config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    u = args.u
    if isinstance(u, str) and u.lower() in ("inf", "none", "null"):
        u = math.inf
    elif u is not None:
        u = float(u)
    return cfg.override(scheme=args.scheme, c=args.c, d=args.d, u=u, x0=args.x0,
                        level=args.level, bootstrap_runs=args.bootstrap_runs,
                        seed=args.seed, output=args.output)


def _fit_rows(args, cfg: RunConfig, with_gof: bool):
    claims = read_claims(args.file)
    terms = PolicyTerms(cfg.c, cfg.d, cfg.u)
    s = to_payment_sample(claims, terms, cfg.kind)
    x0 = cfg.x0 if cfg.kind == "Z" else None
    rows = []
    for choice in cfg.estimators:
        row = {"choice": choice, "fit": None, "error": None, "ci": None, "ks": None, "p": None}
        try:
            result = fit(s, choice.name, choice.a, choice.b, x0=x0)
            row["fit"] = result
            row["ci"] = ci_for_fit(result, cfg.level)
            if with_gof:
                row["ks"] = ks_right_censored(s, fitted_distribution(s, result.alpha_hat, x0))
                if cfg.bootstrap_runs > 0:
                    def estimator(rep, c=choice):
                        return fit(rep, c.name, c.a, c.b, x0=x0)
                    row["p"] = bootstrap_pvalue(s, estimator, cfg.bootstrap_runs, cfg.seed, x0).p_value
        except SeverityError as exc:
            row["error"] = str(exc)
        rows.append(row)
    return s, rows


def cmd_summarize(args, out) -> int:
    claims = read_claims(args.file)
    summ = summarize(claims.amounts)
    if args.records:
        _emit_records([{"n": summ.n, "max": summ.maximum, "edges": [e if math.isfinite(e) else None for e in summ.edges],
                        "frequencies": list(summ.frequencies)}], args.records, out)
    out.write(f"n = {summ.n}, max = {summ.maximum:.6g}\n")
    for lo, hi, f in zip(summ.edges[:-1], summ.edges[1:], summ.frequencies):
        hi_s = "inf" if math.isinf(hi) else f"{hi / 1e6:g}"
        out.write(f"[{lo / 1e6:g}; {hi_s})  {f:.2f}\n")
    return EXIT_OK


def cmd_fit(args, out) -> int:
    cfg = _load_config(args)
    _, rows = _fit_rows(args, cfg, with_gof=True)
    records = []
    for r in rows:
        f, ci = r["fit"], r["ci"]
        records.append(_record(r["choice"], alpha_hat=f.alpha_hat if f else None,
                               ci_lo=ci.lower if ci else None, ci_hi=ci.upper if ci else None,
                               ks=r["ks"], p_value=r["p"], error=r["error"]))
    if cfg.output == "records" or args.records:
        _emit_records(records, args.records, out)
    if cfg.output == "table":
        out.write(f"{'Estimator':<22} {'alpha':>6} {'90% CI' if cfg.level == 0.9 else 'CI':>14} {'KS':>6} {'p':>6}\n")
        for rec, r in zip(records, rows):
            ci = f"[{_fmt(rec['ci_lo'])}; {_fmt(rec['ci_hi'])}]" if r["ci"] else "--"
            out.write(f"{r['choice'].label:<22} {_fmt(rec['alpha_hat']):>6} {ci:>14} "
                      f"{_fmt(rec['ks']):>6} {_fmt(rec['p_value']):>6}\n")
    return EXIT_OK


def cmd_price(args, out) -> int:
    cfg = _load_config(args)
    _, rows = _fit_rows(args, cfg, with_gof=False)
    records = []
    for r in rows:
        for lc in cfg.layers:
            scale = cfg.d if lc.basis == "observed" else cfg.x0
            rec = _record(r["choice"], basis=lc.basis, d_star=lc.d_star, u_star=lc.u_star,
                          error=r["error"])
            f = r["fit"]
            if f is not None:
                layer = Layer(lc.d_star, lc.u_star, scale)
                ci = premium_ci(layer, f, level=cfg.level)
                rec.update(alpha_hat=f.alpha_hat, ci_lo=r["ci"].lower, ci_hi=r["ci"].upper,
                           premium=premium(layer, f.alpha_hat),
                           premium_ci_lo=ci.lower, premium_ci_hi=ci.upper)
            records.append(rec)
    if cfg.output == "records" or args.records:
        _emit_records(records, args.records, out)
    if cfg.output == "table":
        out.write(f"{'Estimator':<22} {'basis':<10} {'layer':<16} {'premium':>12} {'CI':>26}\n")
        for rec in records:
            label = EstimatorChoice(rec["estimator"], rec["a"], rec["b"]).label
            layer = f"{rec['d_star']:.3g}-{rec['u_star']:.3g}"
            if rec["premium"] is None:
                out.write(f"{label:<22} {rec['basis']:<10} {layer:<16} {'--':>12} {'--':>26}\n")
                continue
            scale = 1e5 if rec["basis"] == "observed" else 1e3
            ci = f"[{rec['premium_ci_lo'] / scale:.2f}; {rec['premium_ci_hi'] / scale:.2f}]e{int(math.log10(scale))}"
            out.write(f"{label:<22} {rec['basis']:<10} {layer:<16} "
                      f"{rec['premium'] / scale:>9.2f}e{int(math.log10(scale))} {ci:>26}\n")
    return EXIT_OK


def cmd_are(args, out) -> int:
    if args.preset:
        spec = asymptotics.TABLE_PRESETS[args.preset]
        cells = asymptotics.are_table(args.preset)
        title = f"ARE of {spec['estimator']} relative to MLE"
    else:
        if not args.estimator:
            raise ConfigError(["are: give --preset or --estimator"])
        try:
            value = asymptotics.are(args.estimator, args.a, args.b, args.delta,
                                    args.delta_l, args.delta_r)
        except SeverityError:
            value = None
        row = {"a": args.a} if args.estimator.endswith("Y") or args.estimator == "T-Y2" \
            else {"delta_l": args.delta_l, "a": args.a}
        delta = args.delta if "delta_l" not in row else args.delta_r
        cells = [asymptotics.AreCell(row, delta, args.b, value)]
        title = f"ARE of {args.estimator} relative to MLE"
    records = [{**c.row, "delta": c.delta, "b": c.b, "are": c.value, "feasible": c.feasible}
               for c in cells]
    if args.records:
        _emit_records(records, args.records, out)
    out.write(title + "\n")
    for c in cells:
        row = ", ".join(f"{k}={v:g}" for k, v in c.row.items())
        value = f"{asymptotics.round_half_away(c.value):.3f}" if c.feasible else "--"
        out.write(f"{row}, delta={c.delta:g}, b={c.b:g}: {value}\n")
    return EXIT_OK


def _parse_estimator(text: str):
    parts = text.split(":")
    name = parts[0].upper()
    a = float(parts[1]) if len(parts) > 1 else 0.0
    b = float(parts[2]) if len(parts) > 2 else 0.0
    return (name, a, b)


def cmd_simulate(args, out) -> int:
    raw = {}
    if args.scenario:
        try:
            raw = json.loads(Path(args.scenario).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError([f"scenario: {exc}"]) from None
    for key in ("alpha", "x0", "c", "d", "u", "kind", "n", "replicates", "seed"):
        v = getattr(args, key, None)
        if v is not None:
            raw[key] = v
    if args.estimator:
        raw["estimators"] = [list(_parse_estimator(e)) for e in args.estimator]
    try:
        u = raw.get("u")
        u = math.inf if u is None or str(u).lower() == "inf" else float(u)
        terms = PolicyTerms(float(raw.get("c", 1.0)), float(raw["d"]), u)
        sc = Scenario(float(raw["alpha"]), float(raw["x0"]), terms, raw.get("kind", "Y"),
                      int(raw.get("n", 1000)), int(raw.get("replicates", 100)),
                      int(raw.get("seed", 0)),
                      tuple(tuple(e) for e in raw.get("estimators", [("MLE", 0.0, 0.0)])))
        sc.distribution  # validates alpha and x0
    except KeyError as exc:
        raise ConfigError([f"scenario: missing {exc.args[0]!r}"]) from None
    except (TypeError, ValueError) as exc:
        raise ConfigError([f"scenario: {exc}"]) from None
    report = simulate(sc)
    if args.records:
        _emit_records([r.__dict__ for r in report.rows], args.records, out)
    out.write(f"{'estimator':<16} {'mean':>9} {'bias':>10} {'variance':>11} {'avar':>11} {'ratio':>7} {'fail':>5}\n")
    for r in report.rows:
        label = r.estimator if r.estimator == "MLE" else f"{r.estimator}({r.a:g},{r.b:g})"
        out.write(f"{label:<16} {r.mean:>9.5f} {r.bias:>10.5f} {r.variance:>11.4e} "
                  f"{r.asymptotic_variance:>11.4e} {r.variance_ratio:>7.3f} {r.failures:>5d}\n")
    return EXIT_OK


def cmd_qq(args, out) -> int:
    claims = read_claims(args.file)
    limit = math.inf if args.limit is None else args.limit
    qq = pareto_qq(claims, limit)
    if args.records:
        _emit_records([{"theoretical": float(t), "empirical": float(e)}
                       for t, e in zip(qq.theoretical, qq.empirical)], args.records, out)
    out.write(f"line: y = {qq.intercept:.2f} + {qq.slope:.2f} x  ({qq.theoretical.size} pairs)\n")
    if not args.records:
        for t, e in zip(qq.theoretical, qq.empirical):
            out.write(f"{t:.6f}\t{e:.6f}\n")
    return EXIT_OK


def _add_config_flags(p):
    p.add_argument("file", help="claims file with header amount[,status]")
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--scheme", choices=("payment-Y", "payment-Z"))
    p.add_argument("--c", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--u", help="policy limit; 'inf' for none")
    p.add_argument("--x0", type=float)
    p.add_argument("--level", type=float)
    p.add_argument("--bootstrap-runs", dest="bootstrap_runs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--output", choices=("table", "records"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sevrobust", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="severity histogram, count and maximum")
    p.add_argument("file")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("fit", help="fit estimators with CIs and goodness of fit")
    _add_config_flags(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("price", help="layer premiums with log-transformed CIs")
    _add_config_flags(p)
    p.set_defaults(func=cmd_price)

    p = sub.add_parser("are", help="asymptotic relative efficiencies")
    p.add_argument("--preset", choices=sorted(asymptotics.TABLE_PRESETS))
    p.add_argument("--estimator", choices=[e for e in asymptotics.ESTIMATORS if not e.startswith("MLE")])
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--delta-l", dest="delta_l", type=float, default=0.0)
    p.add_argument("--delta-r", dest="delta_r", type=float, default=0.0)
    p.set_defaults(func=cmd_are)

    p = sub.add_parser("simulate", help="Monte Carlo bias and variance study")
    p.add_argument("--scenario", help="JSON scenario file; flags override its fields")
    p.add_argument("--alpha", type=float)
    p.add_argument("--x0", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--u")
    p.add_argument("--kind", choices=("Y", "Z"))
    p.add_argument("--n", type=int)
    p.add_argument("--replicates", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--estimator", action="append", help="NAME[:a[:b]], repeatable")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("qq", help="Pareto QQ pairs and least-squares line")
    p.add_argument("file")
    p.add_argument("--limit", type=float, help="drop claims at or above this value")
    p.set_defaults(func=cmd_qq)

    for name, p in sub.choices.items():
        p.add_argument("--records", help="write line-delimited JSON records here")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_INPUT
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SeverityError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
