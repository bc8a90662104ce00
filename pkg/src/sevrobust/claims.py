"""Claim-file ingestion, frequency summaries and Pareto QQ pairs."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats

from .errors import DataError
from .estimators import PaymentSample, Status, parse_status
from .transforms import PolicyTerms

# severity buckets, currency units
SEVERITY_EDGES = (5e5, 1e6, 2e6, 5e6, 1e7, 2e7, math.inf)


@dataclass(frozen=True)
class Claims:
    """Raw claim amounts with optional status labels (one per amount)."""

    amounts: np.ndarray
    status: tuple | None = None
    source: str = "<memory>"

    @property
    def n(self) -> int:
        return int(self.amounts.size)


def read_claims(path) -> Claims:
    """Parse a delimited claims file with header ``amount[,status]``.

    Raises:
        DataError: unreadable file, missing header, or a bad row (the
            message names the 1-based line number).
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from exc
    lines = text.splitlines()
    sample = "\n".join(lines[:5])
    try:
        dialect = csv.Sniffer().sniff(sample, delimiters=",;\t ") if sample.strip() else csv.excel
    except csv.Error:
        dialect = csv.excel
    rows = csv.reader(lines, dialect)
    header = None
    amounts, status = [], []
    for lineno, row in enumerate(rows, start=1):
        cells = [c.strip() for c in row if c.strip() != ""]
        if not cells or cells[0].startswith("#"):
            continue
        if header is None:
            header = [c.lower() for c in cells]
            if header[0] != "amount" or header[1:] not in ([], ["status"]):
                raise DataError(f"{path}:{lineno}: header must be 'amount' or 'amount,status', got {cells}")
            continue
        if len(cells) != len(header):
            raise DataError(f"{path}:{lineno}: expected {len(header)} fields, got {len(cells)}")
        try:
            value = float(cells[0])
        except ValueError:
            raise DataError(f"{path}:{lineno}: amount {cells[0]!r} is not a number") from None
        if not (math.isfinite(value) and value >= 0.0):
            raise DataError(f"{path}:{lineno}: amount must be finite and >= 0, got {cells[0]}")
        amounts.append(value)
        if len(header) == 2:
            try:
                status.append(parse_status(cells[1]))
            except DataError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
    if header is None:
        raise DataError(f"{path}: missing header row")
    if not amounts:
        raise DataError(f"{path}: no claims (n=0)")
    return Claims(np.asarray(amounts, dtype=float), tuple(status) if len(header) == 2 else None, str(path))


@dataclass(frozen=True)
class Summary:
    n: int
    maximum: float
    edges: tuple
    counts: tuple

    @property
    def frequencies(self) -> tuple:
        return tuple(c / self.n for c in self.counts)


def summarize(amounts, edges=SEVERITY_EDGES) -> Summary:
    """Bucket counts over ``[e_k, e_{k+1})``; values below the first edge are rejected."""
    x = np.asarray(amounts, dtype=float)
    if x.size == 0:
        raise DataError("no claims (n=0)")
    if np.any(x < edges[0]):
        raise DataError(f"{int(np.sum(x < edges[0]))} claims below the first bucket edge {edges[0]:g}")
    idx = np.searchsorted(np.asarray(edges[1:-1]), x, side="right")
    counts = np.bincount(idx, minlength=len(edges) - 1)
    return Summary(int(x.size), float(x.max()), tuple(edges), tuple(int(c) for c in counts))


def to_payment_sample(claims: Claims, terms: PolicyTerms, kind: str = "Y") -> PaymentSample:
    """Map ground-up claim amounts ``l`` to payments.

    Payment-Y: ``y = c (min(l, u) - d)``, claims at or above ``u`` at the limit;
    every claim must exceed ``d``.  Payment-Z: claims at or below ``d``
    become zero payments.  Explicit status labels override inference.
    """
    c, d, u = terms.c, terms.d, terms.u
    l = claims.amounts
    if kind == "Y" and np.any(l <= d):
        bad = int(np.argmax(l <= d))
        raise DataError(f"claim #{bad + 1} ({l[bad]:g}) is not above the deductible d={d:g}; "
                        "payment-Y data need every claim above d")
    if kind == "Y" and np.any(l == 0.0):
        raise DataError("zero amounts require the payment-Z scheme")
    at_limit = l >= u
    status = np.where(at_limit, Status.LIMIT, Status.EXACT)
    if kind == "Z":
        status = np.where(l <= d, Status.ZERO, status)
    values = np.where(status == Status.ZERO, 0.0, c * (np.minimum(l, u) - d))
    values = np.where(status == Status.LIMIT, terms.max_payment, values)
    labels = list(status)
    if claims.status is not None:
        labels = [given if given is not None else inferred
                  for given, inferred in zip(claims.status, labels)]
    return PaymentSample.build(values, terms, kind, status=labels)


@dataclass(frozen=True)
class QQResult:
    theoretical: np.ndarray
    empirical: np.ndarray
    intercept: float
    slope: float


def pareto_qq(claims_or_amounts, limit: float = math.inf) -> QQResult:
    """Parameter-free Pareto QQ pairs ``(-log(1 - i/(n+1)), log l_(i))``.

    Plotting positions use all ``n`` ranks; claims at or above ``limit`` are
    dropped from the pairs since their actual values are unknown.  The line
    is an ordinary least-squares fit of the empirical on the theoretical.
    """
    amounts = getattr(claims_or_amounts, "amounts", claims_or_amounts)
    x = np.sort(np.asarray(amounts, dtype=float))
    n = x.size
    if n < 2:
        raise DataError("QQ pairs need at least two claims")
    if np.any(x <= 0.0):
        raise DataError("QQ pairs need positive claims")
    ranks = np.arange(1, n + 1)
    keep = x < limit
    theo = -np.log1p(-ranks[keep] / (n + 1.0))
    emp = np.log(x[keep])
    fit = stats.linregress(theo, emp)
    return QQResult(theo, emp, float(fit.intercept), float(fit.slope))
