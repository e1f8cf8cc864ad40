"""Aggregate trials into rate estimates, range law, return and hitting probabilities.

Rates use the trial mean of (final checkpoint value) / n with a normal 99%
interval across trials.  Probabilities use Wilson intervals.  Truncation at
a finite horizon biases return and hitting probabilities downwards; the
reports say so in a ``caveat`` field instead of correcting silently.
"""
from __future__ import annotations

import logging
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from statistics import NormalDist
from typing import Mapping, Sequence

import numpy as np

from .groups import FreeProduct, Group, UsageError, as_fraction, format_fraction
from .walks import (
    STREAM_HITTING,
    STREAM_PROJECTION,
    StepMeasure,
    TrajectoryRecord,
    _mu0_items,
    make_rng,
    projection_walk,
    simulate,
    wilson_interval,
)

log = logging.getLogger(__name__)

LEVEL = 0.99


def z_value(level: float = LEVEL) -> float:
    return NormalDist().inv_cdf(0.5 + level / 2)


@dataclass(frozen=True)
class Estimate:
    """Point estimate with a two-sided confidence interval."""

    mean: float
    lo: float
    hi: float
    se: float
    n: int

    @classmethod
    def from_samples(cls, xs: Sequence[float], level: float = LEVEL) -> "Estimate":
        xs = [float(x) for x in xs]
        if not xs:
            raise UsageError("no samples")
        m = math.fsum(xs) / len(xs)
        se = statistics.stdev(xs) / math.sqrt(len(xs)) if len(xs) > 1 else math.inf
        h = z_value(level) * se
        return cls(m, m - h, m + h, se, len(xs))

    @property
    def half_width(self) -> float:
        return (self.hi - self.lo) / 2

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class Proportion:
    p: float
    lo: float
    hi: float
    successes: int
    trials: int
    caveat: str = ""

    @classmethod
    def from_counts(cls, k: int, n: int, caveat: str = "", level: float = LEVEL) -> "Proportion":
        lo, hi = wilson_interval(k, n, level)
        return cls(k / n if n else 0.0, lo, hi, k, n, caveat)

    @property
    def se(self) -> float:
        n = max(self.trials, 1)
        return math.sqrt(max(self.p * (1 - self.p), 0.25 / n) / n)


# ---------------------------------------------------------------------------
# running trials

def _run_one(args):
    measure, horizon, seed, trial, kw = args
    rec = simulate(measure, horizon, seed, trial=trial, **kw)
    return rec


def run_trials(
    measure: StepMeasure,
    horizon: int,
    trials: int,
    seed: int,
    jobs: int = 1,
    **kw,
) -> list[TrajectoryRecord]:
    """Independent trajectories 0..trials-1, returned in trial order.

    ``kw`` is passed to :func:`simulate`.  With ``jobs > 1`` trials run in
    worker processes; the result does not depend on ``jobs``.
    """
    tasks = [(measure, horizon, seed, t, kw) for t in range(trials)]
    if jobs > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            recs = list(pool.map(_run_one, tasks, chunksize=max(1, trials // (4 * jobs))))
    else:
        recs = [_run_one(t) for t in tasks]
    recs.sort(key=lambda r: r.trial)
    return recs


# ---------------------------------------------------------------------------
# rates

@dataclass
class RateEstimates:
    ell0: Estimate
    ell_supp: Estimate
    ell_ts: Estimate | None
    ell: Estimate | None
    ts_minus_0: Estimate | None
    range_rate: Estimate
    slopes: dict
    heuristic_fraction: float
    exact_grade: bool
    trials: int
    horizon: int
    seed: int
    c_lamp: str
    return_frequency: float
    measure_kind: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RateEstimates":
        d = dict(d)
        for k in ("ell0", "ell_supp", "ell_ts", "ell", "ts_minus_0", "range_rate"):
            if d.get(k) is not None:
                d[k] = Estimate(**d[k])
        return cls(**d)


def _slope(ns, ys):
    if len(ns) < 2:
        return None
    a = np.polyfit(np.asarray(ns, float), np.asarray(ys, float), 1)
    return float(a[0])


def summarize(records: Sequence[TrajectoryRecord], c_lamp=0, seed: int = 0, kind: str = "") -> RateEstimates:
    """Rate estimates from trajectories that share a horizon and schedule."""
    if len(records) < 2:
        raise UsageError("need at least two trials")
    n = records[0].horizon
    if any(r.horizon != n for r in records):
        raise UsageError("records do not share a horizon")
    if n == 0:
        raise UsageError("horizon must be positive")
    c = as_fraction(c_lamp)
    finals = [r.final for r in records]
    ell0 = Estimate.from_samples([f.distance / n for f in finals])
    supp = Estimate.from_samples([f.support / n for f in finals])
    rng_ = Estimate.from_samples([f.range / n for f in finals])
    have_ts = all(f.dts is not None for f in finals)
    ell_ts = ell = diff = None
    if have_ts:
        ts_vals = [f.dts / n for f in finals]
        ell_ts = Estimate.from_samples(ts_vals)
        per_trial = [t + c * f.support / n for t, f in zip(ts_vals, finals)]
        e = Estimate.from_samples(per_trial)
        # point value tied to the components so the identity is exact
        mean = ell_ts.mean + float(c) * supp.mean
        ell = Estimate(mean, mean - e.half_width, mean + e.half_width, e.se, e.n)
        diff = Estimate.from_samples([(f.dts - f.distance) / n for f in finals])
    all_cps = [c_ for r in records for c_ in r.checkpoints]
    heur = sum(1 for c_ in all_cps if c_.mode == "heuristic-upper")
    exact_grade = have_ts and all(f.mode != "heuristic-upper" for f in finals)

    slopes = {}
    ns = [c_.n for c_ in records[0].checkpoints if c_.n >= max(1, n // 8)]
    if len(ns) >= 2 and all([c_.n for c_ in r.checkpoints] == [c_.n for c_ in records[0].checkpoints] for r in records):
        idx = [i for i, c_ in enumerate(records[0].checkpoints) if c_.n >= max(1, n // 8)]

        def avg(attr):
            return [float(np.mean([float(getattr(r.checkpoints[i], attr)) for r in records])) for i in idx]

        slopes["ell0"] = _slope(ns, avg("distance"))
        slopes["ell_supp"] = _slope(ns, avg("support"))
        slopes["range"] = _slope(ns, avg("range"))
        if have_ts:
            slopes["ell_ts"] = _slope(ns, avg("dts"))
    returned = sum(1 for r in records if r.returned) / len(records)
    return RateEstimates(
        ell0=ell0,
        ell_supp=supp,
        ell_ts=ell_ts,
        ell=ell,
        ts_minus_0=diff,
        range_rate=rng_,
        slopes=slopes,
        heuristic_fraction=heur / len(all_cps) if all_cps else 0.0,
        exact_grade=exact_grade,
        trials=len(records),
        horizon=n,
        seed=seed,
        c_lamp=format_fraction(c),
        return_frequency=returned,
        measure_kind=kind,
    )


def estimate_rates(
    measure: StepMeasure,
    horizon: int,
    trials: int,
    seed: int,
    c_lamp=0,
    tsp_mode: str = "auto",
    tsp_cap: int | None = None,
    jobs: int = 1,
    checkpoints=None,
    return_records: bool = False,
):
    """Estimate l0, l_supp, l_TS and l = l_TS + c * l_supp.

    ``exact_grade`` is False as soon as one final checkpoint used the
    heuristic d_TS; l_TS is then only an upper estimate.
    """
    if horizon < 100:
        raise UsageError("horizon must be at least 100 for rate estimation")
    if trials < 2:
        raise UsageError("need at least two trials")
    log.info("estimating rates: %s, n=%d, trials=%d, seed=%d", measure.kind, horizon, trials, seed)
    recs = run_trials(
        measure, horizon, trials, seed, jobs=jobs,
        checkpoints=checkpoints, tsp_mode=tsp_mode, tsp_cap=tsp_cap, keep_lamps=False,
    )
    est = summarize(recs, c_lamp=c_lamp, seed=seed, kind=measure.kind)
    if not est.exact_grade and est.ell_ts is not None:
        log.warning("l_TS is heuristic (upper bound) at some final checkpoint")
    return (est, recs) if return_records else est


# ---------------------------------------------------------------------------
# projection statistics

def _projection(obj, mu0):
    if isinstance(obj, StepMeasure):
        return obj.group, dict(obj.projection)
    if mu0 is None:
        raise UsageError("pass a StepMeasure or a group together with mu0")
    return obj, mu0


TRUNCATION_NOTE = "lower bound: only events up to the horizon are observed"


def return_probability(obj, mu0: Mapping | None = None, horizon: int = 1000, trials: int = 1000,
                       seed: int = 0) -> Proportion:
    """Fraction of projected walks with X_m = e for some 1 <= m <= horizon."""
    group, mu0 = _projection(obj, mu0)
    k = 0
    for t in range(trials):
        ret, _, _ = projection_walk(group, mu0, horizon, seed, trial=t)
        k += ret is not None
    return Proportion.from_counts(k, trials, TRUNCATION_NOTE)


@dataclass(frozen=True)
class RangeLaw:
    rate: Estimate
    cross_check: float | None = None
    discrepancy: float | None = None


def range_law(records: Sequence[TrajectoryRecord], return_prob: Proportion | None = None) -> RangeLaw:
    """Mean and CI of |R_n|/n at the shared horizon, optionally against 1 - P[return]."""
    if not records:
        raise UsageError("no records")
    n = records[0].horizon
    if any(r.horizon != n for r in records):
        raise UsageError("records do not share a horizon")
    rate = Estimate.from_samples([r.final.range / max(n, 1) for r in records])
    if return_prob is None:
        return RangeLaw(rate)
    other = 1 - return_prob.p
    return RangeLaw(rate, other, rate.mean - other)


@dataclass(frozen=True)
class IdentityReport:
    lhs: float
    rhs: float
    discrepancy: float
    half_width: float
    return_probability: Proportion

    @property
    def consistent(self) -> bool:
        return abs(self.discrepancy) <= self.half_width


def walk_switch_identity_check(
    measure: StepMeasure,
    estimates: RateEstimates,
    return_trials: int | None = None,
    seed: int | None = None,
    return_prob: Proportion | None = None,
) -> IdentityReport:
    """Compare l_supp with (1 - P[return]) / 2, the latter from a separate projection run.

    Pass ``return_prob`` to reuse an existing projection estimate.
    """
    if measure.kind != "walk-switch":
        raise UsageError(f"identity holds for walk-switch measures, got {measure.kind!r}")
    seed = estimates.seed if seed is None else seed
    p = return_prob or return_probability(measure, horizon=estimates.horizon,
                                          trials=return_trials or estimates.trials, seed=seed)
    rhs = (1 - p.p) / 2
    lhs = estimates.ell_supp.mean
    hw = z_value() * math.sqrt(estimates.ell_supp.se ** 2 + (p.se / 2) ** 2)
    return IdentityReport(lhs, rhs, lhs - rhs, hw, p)


@dataclass(frozen=True)
class GreenEstimate:
    value: float
    censored: bool
    hit: Proportion

    def __str__(self):
        return (">= " if self.censored else "") + f"{self.value:.6g}"


def greenian_distance(obj, x, y, mu0: Mapping | None = None, horizon: int = 1000,
                      trials: int = 1000, seed: int = 0) -> GreenEstimate:
    """-ln P_x[T_y <= horizon]; an upper estimate of the Greenian distance.

    With no hits the value is censored at ln(trials).
    """
    group, mu0 = _projection(obj, mu0)
    x = group.parse(x) if not isinstance(x, tuple) else group.check(x)
    y = group.parse(y) if not isinstance(y, tuple) else group.check(y)
    if x == y:
        return GreenEstimate(0.0, False, Proportion(1.0, 1.0, 1.0, trials, trials))
    k = 0
    for t in range(trials):
        _, hit, _ = projection_walk(group, mu0, horizon, seed, trial=t,
                                    stream=STREAM_HITTING, target=y, start=x)
        k += hit is not None
    prop = Proportion.from_counts(k, trials, TRUNCATION_NOTE)
    if k == 0:
        return GreenEstimate(math.log(trials), True, prop)
    return GreenEstimate(-math.log(k / trials), False, prop)


# ---------------------------------------------------------------------------
# Z2 * Z2: the walk induced on the index-two subgroup <ab>

def dihedral_coords(word: tuple) -> tuple[int, int]:
    """(0, z) for (ab)^z and (1, j) for (ab)^j a, with a = letter 1, b = letter 2."""
    n = len(word)
    if n == 0:
        return 0, 0
    if n % 2 == 0:
        return 0, (n // 2 if word[0] == 1 else -(n // 2))
    k = n // 2
    return 1, (k if word[0] == 1 else -k - 1)


def irreducible_on_c2c2(coords) -> bool:
    """supp(mu0) generates Z2 * Z2 iff it holds a reflection and the translation lattice is Z."""
    refl = [j for p, j in coords if p == 1]
    if not refl:
        return False
    g = 0
    for p, j in coords:
        g = math.gcd(g, j - refl[0] if p == 1 else j)
    return g == 1


@dataclass(frozen=True)
class DriftEstimate:
    drift: Estimate | None
    visits: int
    steps: int
    censored: bool


def induced_walk_drift(
    group: Group,
    mu0: Mapping,
    visits: int = 100_000,
    seed: int = 0,
    max_steps: int | None = None,
) -> DriftEstimate:
    """Empirical mean of D_n = Y_n - Y_{n-1}, Y_n the n-th visit of X to <ab>.

    Runs one long trajectory until ``visits`` subgroup visits have been seen
    or ``max_steps`` (default 100 * visits) steps were taken.
    """
    if not (isinstance(group, FreeProduct) and group.rank == 0 and group.involutions == 2):
        raise UsageError("induced walk drift needs the Z2*Z2 backend")
    items = _mu0_items(group, mu0)
    coords = [dihedral_coords(x) for x, _ in items]
    if not irreducible_on_c2c2(coords):
        raise UsageError("mu0 is not irreducible on Z2*Z2: the walk never leaves a proper subgroup")
    cdf = np.cumsum([float(p) for _, p in items])
    cdf[-1] = 1.0
    max_steps = max_steps or 100 * visits
    rng = make_rng(seed, 0, STREAM_PROJECTION)
    par, j = 0, 0
    last = 0
    incs = []
    steps = 0
    block = 65536
    while len(incs) < visits and steps < max_steps:
        idx = np.minimum(np.searchsorted(cdf, rng.random(block), side="right"), len(cdf) - 1)
        for i in idx.tolist():
            p2, j2 = coords[i]
            if par == 0:
                par, j = p2, j + j2
            else:
                par, j = 1 - p2, j - j2
            steps += 1
            if par == 0:
                incs.append(j - last)
                last = j
                if len(incs) >= visits:
                    break
            if steps >= max_steps:
                break
    censored = len(incs) < visits
    est = Estimate.from_samples(incs) if len(incs) >= 2 else None
    return DriftEstimate(est, len(incs), steps, censored)


__all__ = [
    "Estimate",
    "Proportion",
    "RateEstimates",
    "RangeLaw",
    "IdentityReport",
    "GreenEstimate",
    "DriftEstimate",
    "z_value",
    "run_trials",
    "summarize",
    "estimate_rates",
    "return_probability",
    "range_law",
    "walk_switch_identity_check",
    "greenian_distance",
    "dihedral_coords",
    "irreducible_on_c2c2",
    "induced_walk_drift",
]
