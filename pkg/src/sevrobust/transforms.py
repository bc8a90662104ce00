"""Distributions of observed data under truncation, censoring and coverage terms.

Each constructor takes a ground-up model and returns an
:class:`ObservedDistribution` whose cdf, quantile function and mixed
density/point-mass description are built from the ground-up ones.  Atoms are
carried explicitly as ``(location, mass)`` pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Union

import numpy as np

from .distributions import GroundUpModel, check_probability
from .errors import DegenerateError, DomainError, InfiniteQuantileError

INF = math.inf


@dataclass(frozen=True)
class PolicyTerms:
    """Coverage modifications: coinsurance ``c``, deductible ``d``, limit ``u``."""

    c: float = 1.0
    d: float = 0.0
    u: float = INF

    def __post_init__(self):
        if not (0.0 < self.c <= 1.0):
            raise DomainError(f"coinsurance c must lie in (0, 1], got {self.c}")
        if not (math.isfinite(self.d) and self.d >= 0.0):
            raise DomainError(f"deductible d must be finite and >= 0, got {self.d}")
        if not self.d < self.u:
            raise DomainError(f"deductible d={self.d} must be below limit u={self.u}")

    @property
    def max_payment(self) -> float:
        """Payment at the policy limit, ``c (u - d)``; +inf when uncapped."""
        return self.c * (self.u - self.d)


# Observation schemes.  Plain value objects, dispatched on by ``observed``.

@dataclass(frozen=True)
class Complete:
    pass


@dataclass(frozen=True)
class Truncated:
    t1: float
    t2: float = INF

    def __post_init__(self):
        if not self.t1 < self.t2:
            raise DomainError(f"need t1 < t2, got ({self.t1}, {self.t2})")


@dataclass(frozen=True)
class IntervalCensored:
    t1: float
    t2: float = INF

    def __post_init__(self):
        if not self.t1 < self.t2:
            raise DomainError(f"need t1 < t2, got ({self.t1}, {self.t2})")


@dataclass(frozen=True)
class PaymentY:
    terms: PolicyTerms


@dataclass(frozen=True)
class PaymentZ:
    terms: PolicyTerms


ObservationScheme = Union[Complete, Truncated, IntervalCensored, PaymentY, PaymentZ]


class Atom(NamedTuple):
    location: float
    mass: float


class DensityValue(NamedTuple):
    """Result of :meth:`ObservedDistribution.mixed_density`.

    ``kind`` is ``"mass"`` at an atom (``value`` is its probability) and
    ``"density"`` elsewhere.
    """

    kind: str
    value: float


@dataclass(frozen=True, eq=False)
class ObservedDistribution:
    """Law of an observed variable.

    Attributes:
        scheme: The observation scheme that produced this law.
        model: Ground-up model it was derived from.
        cdf: Vectorised right-continuous cdf.
        qf: Vectorised quantile function on [0, 1].
        density: Density of the continuous part (zero at and outside atoms).
        atoms: Point masses, sorted by location; zero-mass atoms are dropped.
        qf_breaks: Probability levels in (0, 1) where ``qf`` switches branch.
        support: Closed hull ``(lower, upper)`` of the support.
    """

    scheme: ObservationScheme
    model: GroundUpModel
    cdf: Callable
    qf: Callable
    density: Callable
    atoms: tuple[Atom, ...] = ()
    qf_breaks: tuple[float, ...] = ()
    support: tuple[float, float] = (-INF, INF)
    _atom_lookup: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_atom_lookup", {a.location: a.mass for a in self.atoms})

    def atom_mass(self, x):
        """Point mass at ``x`` (vectorised); zero away from atoms."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for loc, mass in self.atoms:
            out = np.where(x == loc, mass, out)
        return out[()] if out.ndim == 0 else out

    def cdf_left(self, x):
        """Left limit ``P[V < x]``."""
        return self.cdf(x) - self.atom_mass(x)

    def mixed_density(self, x: float) -> DensityValue:
        x = float(x)
        if x in self._atom_lookup:
            return DensityValue("mass", self._atom_lookup[x])
        return DensityValue("density", float(self.density(x)))

    @property
    def atom_total(self) -> float:
        return float(sum(a.mass for a in self.atoms))


def _out(arr):
    return arr[()] if arr.ndim == 0 else arr


def _interior_density(model, lo, hi, scale):
    """Density ``f(x)/scale`` on (lo, hi), interior limit at the endpoints."""
    lo_in = math.nextafter(lo, INF) if math.isfinite(lo) else lo
    hi_in = math.nextafter(hi, -INF) if math.isfinite(hi) else hi

    def density(x):
        x = np.asarray(x, dtype=float)
        xe = np.where(x == lo, lo_in, np.where(x == hi, hi_in, x))
        inside = (x >= lo) & (x <= hi)
        vals = np.where(inside, model.pdf(np.where(inside, xe, lo_in)) / scale, 0.0)
        return _out(np.asarray(vals, dtype=float))

    return density


def complete_dist(m: GroundUpModel) -> ObservedDistribution:
    return ObservedDistribution(
        scheme=Complete(),
        model=m,
        cdf=m.cdf,
        qf=m.qf,
        density=m.pdf,
        support=(m.support_lower, INF),
    )


def truncated_dist(m: GroundUpModel, t1: float, t2: float = INF) -> ObservedDistribution:
    """Law of ``X | t1 < X < t2``.

    The density at ``t1`` and ``t2`` (undefined in theory) is reported as the
    interior limit.

    Raises:
        DegenerateError: ``F(t1) == F(t2)``.
    """
    scheme = Truncated(t1, t2)
    s1 = float(m.survival(t1))
    s2 = 0.0 if t2 == INF else float(m.survival(t2))
    width = s1 - s2
    if not width > 0.0:
        raise DegenerateError(f"F(t1) == F(t2) for t1={t1}, t2={t2}; nothing is observable")

    def cdf(x):
        x = np.asarray(x, dtype=float)
        inner = (s1 - m.survival(np.clip(x, t1, t2 if t2 < INF else None))) / width
        out = np.where(x <= t1, 0.0, np.where(x >= t2, 1.0, inner))
        return _out(np.asarray(out, dtype=float))

    def qf(v):
        v = check_probability(v)
        if t2 == INF and np.any(v == 1.0):
            raise InfiniteQuantileError("truncated quantile at level 1 is +inf")
        # v F(t2) + (1 - v) F(t1), expressed through survivals
        return _out(np.asarray(m.isf(v * s2 + (1.0 - v) * s1), dtype=float))

    return ObservedDistribution(
        scheme=scheme,
        model=m,
        cdf=cdf,
        qf=qf,
        density=_interior_density(m, t1, t2, width),
        support=(max(t1, m.support_lower), t2),
    )


def censored_dist(m: GroundUpModel, t1: float, t2: float = INF) -> ObservedDistribution:
    """Law of ``min(max(t1, X), t2)``: atoms at ``t1`` and ``t2``."""
    scheme = IntervalCensored(t1, t2)
    p1 = float(m.cdf(t1))
    s2 = 0.0 if t2 == INF else float(m.survival(t2))
    p2 = 1.0 - s2
    atoms = tuple(a for a in (Atom(float(t1), p1), Atom(float(t2), s2)) if a.mass > 0.0)

    def cdf(x):
        x = np.asarray(x, dtype=float)
        out = np.where(x < t1, 0.0, np.where(x >= t2, 1.0, m.cdf(x)))
        return _out(np.asarray(out, dtype=float))

    def density(x):
        x = np.asarray(x, dtype=float)
        out = np.where((x > t1) & (x < t2), m.pdf(x), 0.0)
        return _out(np.asarray(out, dtype=float))

    def qf(v):
        v = check_probability(v)
        mid = (v >= p1) & (v < p2)
        inner = m.qf(np.where(mid, v, min(max(p1, 0.0), 0.5)))
        out = np.where(v < p1, t1, np.where(mid, inner, t2))
        return _out(np.asarray(out, dtype=float))

    lower = t1 if p1 > 0.0 else max(t1, m.support_lower)
    return ObservedDistribution(
        scheme=scheme,
        model=m,
        cdf=cdf,
        qf=qf,
        density=density,
        atoms=atoms,
        qf_breaks=tuple(p for p in (p1, p2) if 0.0 < p < 1.0),
        support=(lower, t2),
    )


def payment_y_dist(m: GroundUpModel, terms: PolicyTerms) -> ObservedDistribution:
    """Payment-per-payment law: left truncated at ``d``, censored at ``u``, scaled by ``c``.

    Raises:
        DegenerateError: ``F(d) == 1``, so no payment is ever observed.
    """
    c, d, u = terms.c, terms.d, terms.u
    sd = float(m.survival(d))
    if not sd > 0.0:
        raise DegenerateError(f"F(d) = 1 at d={d}; no observable payments")
    su = 0.0 if u == INF else float(m.survival(u))
    limit_mass = su / sd
    p_cut = 1.0 - limit_mass
    ymax = terms.max_payment

    def cdf(y):
        y = np.asarray(y, dtype=float)
        x = np.clip(y / c + d, d, u if u < INF else None)
        inner = 1.0 - m.survival(x) / sd
        out = np.where(y <= 0.0, 0.0, np.where(y >= ymax, 1.0, inner))
        return _out(np.asarray(out, dtype=float))

    def density(y):
        y = np.asarray(y, dtype=float)
        inside = (y > 0.0) & (y < ymax)
        out = np.where(inside, m.pdf(np.where(inside, y / c + d, d)) / (c * sd), 0.0)
        return _out(np.asarray(out, dtype=float))

    def qf(v):
        v = check_probability(v)
        lower = v < p_cut
        if u == INF and np.any(v == 1.0):
            raise InfiniteQuantileError("payment quantile at level 1 is +inf without a limit")
        # F^{-1}(v + (1 - v) F(d)) through the survival (1 - v) S(d)
        x = m.isf(np.where(lower, (1.0 - v) * sd, sd))
        out = np.where(lower, c * (x - d), ymax)
        return _out(np.asarray(out, dtype=float))

    atoms = (Atom(ymax, limit_mass),) if limit_mass > 0.0 else ()
    return ObservedDistribution(
        scheme=PaymentY(terms),
        model=m,
        cdf=cdf,
        qf=qf,
        density=density,
        atoms=atoms,
        qf_breaks=(p_cut,) if 0.0 < p_cut < 1.0 else (),
        support=(c * max(m.support_lower - d, 0.0), ymax),
    )


def payment_z_dist(m: GroundUpModel, terms: PolicyTerms) -> ObservedDistribution:
    """Payment-per-loss law: zero below ``d``, capped at ``c (u - d)``."""
    c, d, u = terms.c, terms.d, terms.u
    fd = float(m.cdf(d))
    su = 0.0 if u == INF else float(m.survival(u))
    fu = 1.0 - su
    zmax = terms.max_payment

    def cdf(z):
        z = np.asarray(z, dtype=float)
        inner = m.cdf(z / c + d)
        out = np.where(z < 0.0, 0.0, np.where(z >= zmax, 1.0, inner))
        return _out(np.asarray(out, dtype=float))

    def density(z):
        z = np.asarray(z, dtype=float)
        inside = (z > 0.0) & (z < zmax)
        out = np.where(inside, m.pdf(np.where(inside, z / c + d, d)) / c, 0.0)
        return _out(np.asarray(out, dtype=float))

    def qf(v):
        v = check_probability(v)
        if u == INF and np.any(v == 1.0):
            raise InfiniteQuantileError("payment quantile at level 1 is +inf without a limit")
        mid = (v > fd) & (v < fu)
        x = m.isf(np.where(mid, 1.0 - v, 0.5))
        out = np.where(v <= fd, 0.0, np.where(mid, c * (x - d), zmax))
        return _out(np.asarray(out, dtype=float))

    atoms = tuple(a for a in (Atom(0.0, fd), Atom(zmax, su)) if a.mass > 0.0)
    return ObservedDistribution(
        scheme=PaymentZ(terms),
        model=m,
        cdf=cdf,
        qf=qf,
        density=density,
        atoms=atoms,
        qf_breaks=tuple(p for p in (fd, fu) if 0.0 < p < 1.0),
        support=(0.0 if fd > 0.0 else c * (m.support_lower - d), zmax),
    )


def observed(m: GroundUpModel, scheme: ObservationScheme) -> ObservedDistribution:
    """Dispatch to the constructor matching ``scheme``."""
    if isinstance(scheme, Complete):
        return complete_dist(m)
    if isinstance(scheme, Truncated):
        return truncated_dist(m, scheme.t1, scheme.t2)
    if isinstance(scheme, IntervalCensored):
        return censored_dist(m, scheme.t1, scheme.t2)
    if isinstance(scheme, PaymentY):
        return payment_y_dist(m, scheme.terms)
    if isinstance(scheme, PaymentZ):
        return payment_z_dist(m, scheme.terms)
    raise TypeError(f"unknown observation scheme {scheme!r}")


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator for an integer seed; generator-like objects pass through."""
    if hasattr(seed, "random"):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def sample(dist: ObservedDistribution, n: int, seed) -> np.ndarray:
    """Draw ``n`` values by quantile inversion and return them sorted.

    ``seed`` is an integer for a fresh PCG64 stream, or any object with a
    ``random(n)`` method returning uniforms in [0, 1).
    """
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    u = np.asarray(make_rng(seed).random(n), dtype=float)
    return np.sort(np.atleast_1d(dist.qf(u)))
