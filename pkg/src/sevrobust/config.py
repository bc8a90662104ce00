"""Run configuration: JSON on disk, validated all at once."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import ConfigError
from .estimators import ESTIMATOR_NAMES

SCHEMES = ("payment-Y", "payment-Z")
OUTPUTS = ("table", "records")
BASES = ("observed", "ground-up")


@dataclass(frozen=True)
class EstimatorChoice:
    name: str
    a: float = 0.0
    b: float = 0.0

    @property
    def label(self) -> str:
        if self.name == "MLE":
            return "MLE"
        return f"{self.name}, a={self.a:g}, b={self.b:g}"


@dataclass(frozen=True)
class LayerChoice:
    d_star: float
    u_star: float
    basis: str = "observed"


def _default_estimators():
    return (EstimatorChoice("MLE"), EstimatorChoice("T", 0.0, 0.0), EstimatorChoice("T", 0.1, 0.1),
            EstimatorChoice("T", 0.05, 0.15), EstimatorChoice("W", 0.0, 0.0),
            EstimatorChoice("W", 0.1, 0.1), EstimatorChoice("W", 0.05, 0.15))


@dataclass(frozen=True)
class RunConfig:
    """Everything a ``fit`` or ``price`` run needs besides the claims file.

    ``u`` is ``math.inf`` for no limit; on disk it is written as ``null``.
    """

    scheme: str = "payment-Y"
    c: float = 1.0
    d: float = 5e5
    u: float = math.inf
    x0: float = 7e3
    estimators: tuple = field(default_factory=_default_estimators)
    level: float = 0.90
    bootstrap_runs: int = 1000
    seed: int = 20240101
    layers: tuple = (LayerChoice(7e6, 35e6, "observed"), LayerChoice(7e6, 35e6, "ground-up"))
    output: str = "table"

    @property
    def kind(self) -> str:
        return self.scheme[-1]

    def to_dict(self) -> dict:
        out = asdict(self)
        out["u"] = None if math.isinf(self.u) else self.u
        out["estimators"] = [asdict(e) for e in self.estimators]
        out["layers"] = [asdict(l) for l in self.layers]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        """Build and validate; every problem found is reported together."""
        problems = []
        known = set(cls.__dataclass_fields__)
        for key in raw:
            if key not in known:
                problems.append(f"unknown field {key!r}")
        vals = {k: v for k, v in raw.items() if k in known}

        def number(key, cond, msg):
            if key not in vals:
                return
            try:
                v = float(vals[key])
            except (TypeError, ValueError):
                problems.append(f"{key}: not a number ({vals[key]!r})")
                vals.pop(key)
                return
            if not cond(v):
                problems.append(f"{key}: {msg}, got {v:g}")
            vals[key] = v

        if "u" in vals and (vals["u"] is None or str(vals["u"]).lower() in ("inf", "infinity")):
            vals["u"] = math.inf
        number("c", lambda v: 0.0 < v <= 1.0, "must lie in (0, 1]")
        number("d", lambda v: math.isfinite(v) and v >= 0.0, "must be finite and >= 0")
        number("u", lambda v: v > 0.0, "must be positive")
        number("x0", lambda v: math.isfinite(v) and v > 0.0, "must be positive")
        number("level", lambda v: 0.0 < v < 1.0, "must lie in (0, 1)")
        if "scheme" in vals and vals["scheme"] not in SCHEMES:
            problems.append(f"scheme: expected one of {SCHEMES}, got {vals['scheme']!r}")
        if "output" in vals and vals["output"] not in OUTPUTS:
            problems.append(f"output: expected one of {OUTPUTS}, got {vals['output']!r}")
        for key in ("bootstrap_runs", "seed"):
            if key in vals:
                v = vals[key]
                if isinstance(v, bool) or not isinstance(v, int) or (key == "bootstrap_runs" and v < 0):
                    problems.append(f"{key}: expected a nonnegative integer, got {v!r}")
        if "estimators" in vals:
            ests = []
            for i, e in enumerate(vals["estimators"] or []):
                try:
                    choice = EstimatorChoice(str(e["name"]).upper(), float(e.get("a", 0.0)),
                                             float(e.get("b", 0.0)))
                except (TypeError, KeyError, ValueError, AttributeError):
                    problems.append(f"estimators[{i}]: expected {{name, a, b}}, got {e!r}")
                    continue
                if choice.name not in ESTIMATOR_NAMES:
                    problems.append(f"estimators[{i}]: unknown name {choice.name!r}")
                if not (0.0 <= choice.a < 1.0 and 0.0 <= choice.b < 1.0 and choice.a + choice.b < 1.0):
                    problems.append(f"estimators[{i}]: need 0 <= a, b and a + b < 1")
                ests.append(choice)
            vals["estimators"] = tuple(ests)
        if "layers" in vals:
            layers = []
            for i, l in enumerate(vals["layers"] or []):
                try:
                    choice = LayerChoice(float(l["d_star"]), float(l["u_star"]), l.get("basis", "observed"))
                except (TypeError, KeyError, ValueError, AttributeError):
                    problems.append(f"layers[{i}]: expected {{d_star, u_star, basis}}, got {l!r}")
                    continue
                if choice.basis not in BASES:
                    problems.append(f"layers[{i}]: basis must be one of {BASES}")
                if not 0.0 < choice.d_star <= choice.u_star < math.inf:
                    problems.append(f"layers[{i}]: need 0 < d_star <= u_star < inf")
                layers.append(choice)
            vals["layers"] = tuple(layers)
        if not problems:
            cfg = cls(**vals)
            if not cfg.d < cfg.u:
                problems.append(f"d: must be below u, got d={cfg.d:g}, u={cfg.u:g}")
            if cfg.kind == "Z" and not cfg.x0 < cfg.d:
                problems.append("x0: payment-Z needs x0 < d")
            for i, l in enumerate(cfg.layers):
                scale = cfg.d if l.basis == "observed" else cfg.x0
                if l.d_star < scale:
                    problems.append(f"layers[{i}]: d_star below the severity scale {scale:g}")
        if problems:
            raise ConfigError(problems)
        return cfg

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"invalid JSON: {exc}"]) from None
        if not isinstance(raw, dict):
            raise ConfigError(["top level must be an object"])
        return cls.from_dict(raw)

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError([f"{path}: {exc.strerror or exc}"]) from None
        return cls.loads(text)

    def override(self, **changes) -> "RunConfig":
        """Re-validated copy with ``changes`` applied (``None`` values skipped)."""
        raw = self.to_dict()
        raw.update({k: v for k, v in changes.items() if v is not None})
        return RunConfig.from_dict(raw)
