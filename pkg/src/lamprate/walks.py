"""Step measures and seeded trajectories Z_n = Z_{n-1} i_n on the lamplighter group.

Randomness comes from numpy's Philox counter-based generator.  The 128-bit
key is ``seed | trial << 64 | stream << 96`` so every (seed, trial, stream)
triple owns an independent stream and trials can run in any order or in
parallel without changing results.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .groups import Group, IntegerLattice, UsageError, as_fraction, format_fraction
from .tsp import TspTooLarge, solve_tsp
from .wreath import Configuration, Lamplighter, WreathElement

STREAM_WALK = 0
STREAM_PROJECTION = 1
STREAM_HITTING = 2


class GenerationWarning(UserWarning):
    """The step measure may not generate the whole lamplighter group."""


class SimulationError(RuntimeError):
    def __init__(self, msg, trial=None, seed=None, checkpoint=None):
        super().__init__(msg)
        self.trial = trial
        self.seed = seed
        self.checkpoint = checkpoint


def make_rng(seed: int, trial: int = 0, stream: int = STREAM_WALK) -> np.random.Generator:
    if not (0 <= seed < 1 << 64 and 0 <= trial < 1 << 32 and 0 <= stream < 1 << 32):
        raise UsageError("seed must fit in 64 bits, trial and stream in 32 bits")
    key = seed | (trial << 64) | (stream << 96)
    return np.random.Generator(np.random.Philox(key=key))


# ---------------------------------------------------------------------------
# step measures

class StepMeasure:
    """Finite probability distribution over lamplighter increments.

    ``radius`` is the lamp radius R: the largest d(e, y) over lamps y of any
    atom.  ``projection`` is the image distribution on the base group.
    """

    def __init__(self, lamplighter: Lamplighter, atoms: Sequence, kind: str = "custom", meta=None):
        self.lamplighter = lamplighter
        self.group = lamplighter.base
        self.kind = kind
        self.meta = dict(meta or {})
        clean = []
        for u, p in atoms:
            p = as_fraction(p)
            if p <= 0:
                raise UsageError("atom probabilities must be positive")
            lamplighter._own(u)
            self.group.check(u.position)
            for x in u.config:
                self.group.check(x)
            clean.append((u, p))
        if not clean:
            raise UsageError("a step measure needs at least one atom")
        total = sum(p for _, p in clean)
        if total != 1:
            raise UsageError(f"atom probabilities sum to {format_fraction(total)}, not 1")
        self.atoms = tuple(clean)
        self.radius = max(
            (self.group.norm(y) for u, _ in clean for y in u.config), default=Fraction(0)
        )
        proj: dict = {}
        for u, p in clean:
            proj[u.position] = proj.get(u.position, 0) + p
        self.projection = proj

    @property
    def modulus(self) -> int:
        return self.lamplighter.modulus

    def __len__(self):
        return len(self.atoms)

    def first_moment(self) -> Fraction:
        return sum((p * self.group.norm(u.position) for u, p in self.atoms), Fraction(0))

    def compiled(self):
        """Atoms as plain tuples for the simulation loop, plus float CDF."""
        e = self.group.identity
        table = []
        for u, _ in self.atoms:
            lamps = []
            for y, s in u.config.items():
                where = 0 if y == e else (1 if y == u.position else 2)
                lamps.append((where, y, s))
            table.append((tuple(lamps), u.position))
        cdf = np.cumsum([float(p) for _, p in self.atoms])
        cdf[-1] = 1.0
        return table, cdf

    def describe(self) -> dict:
        L = self.lamplighter
        return {
            "kind": self.kind,
            "modulus": self.modulus,
            "atoms": [{**L.to_json(u), "p": format_fraction(p)} for u, p in self.atoms],
            **({"meta": self.meta} if self.meta else {}),
        }


def _mu0_items(group: Group, mu0: Mapping):
    out = []
    for x, p in mu0.items():
        x = group.parse(x) if not isinstance(x, tuple) else group.check(x)
        out.append((x, as_fraction(p)))
    total = sum(p for _, p in out)
    if not out or total != 1 or any(p <= 0 for _, p in out):
        raise UsageError(f"mu0 must be a probability vector with positive entries (sum={total})")
    return out


def make_walk_switch(group: Group, mu0: Mapping, modulus: int = 2) -> StepMeasure:
    """Move by x ~ mu0, then with probability 1/2 switch the lamp at the arrival point."""
    L = Lamplighter(group, modulus)
    atoms = []
    for x, p in _mu0_items(group, mu0):
        atoms.append((L.element({}, x), p / 2))
        atoms.append((L.element({x: 1}, x), p / 2))
    return StepMeasure(L, atoms, kind="walk-switch")


def make_switch_walk(group: Group, mu0: Mapping, p_switch, modulus: int = 2) -> StepMeasure:
    """With probability p_switch switch the lamp at the current point, then move by x ~ mu0."""
    q = as_fraction(p_switch)
    if not 0 < q < 1:
        raise UsageError("p_switch must lie strictly between 0 and 1")
    L = Lamplighter(group, modulus)
    e = group.identity
    atoms = []
    for x, p in _mu0_items(group, mu0):
        atoms.append((L.element({e: 1}, x), q * p))
        atoms.append((L.element({}, x), (1 - q) * p))
    return StepMeasure(L, atoms, kind="switch-walk", meta={"p_switch": format_fraction(q)})


def make_custom(group: Group, atoms: Sequence, modulus: int = 2) -> StepMeasure:
    """``atoms`` is a list of ``(lamps, move, p)``; lamps maps elements to states."""
    L = Lamplighter(group, modulus)
    built = [(L.element(lamps, move), p) for lamps, move, p in atoms]
    m = StepMeasure(L, built, kind="custom")
    problems = generation_problems(m)
    if problems:
        warnings.warn("; ".join(problems), GenerationWarning, stacklevel=2)
    return m


def generation_problems(measure: StepMeasure, explore_cap: int = 20000) -> list[str]:
    """Heuristic check that supp(mu) generates the lamplighter group."""
    out = []
    if not any(len(u.config) for u, _ in measure.atoms):
        out.append("no atom changes a lamp")
    group = measure.group
    moves = [x for x in measure.projection if x != group.identity]
    if isinstance(group, IntegerLattice):
        from .groups import lattice_contains

        units = [tuple(1 if j == i else 0 for j in range(group.dim)) for i in range(group.dim)]
        if not moves or not all(lattice_contains(moves, u, group.dim) for u in units):
            out.append("projected moves do not generate Z^%d" % group.dim)
    else:
        gens = set(group.generators.elements)
        steps = moves + [group._inv(x) for x in moves]
        bound = 2 * max((len(x) for x in moves), default=0) + 2
        seen = {group.identity}
        frontier = [group.identity]
        while frontier and len(seen) < explore_cap and not gens <= seen:
            nxt = []
            for v in frontier:
                for s in steps:
                    w = group._mul(v, s)
                    if len(w) <= bound and w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        if not gens <= seen:
            out.append("could not confirm that projected moves generate the base group")
    return out


# ---------------------------------------------------------------------------
# trajectories

@dataclass(frozen=True)
class Checkpoint:
    n: int
    distance: Fraction
    support: int
    range: int
    dts: Fraction | None
    mode: str | None

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "distance": format_fraction(self.distance),
            "support": self.support,
            "range": self.range,
            "dts": None if self.dts is None else format_fraction(self.dts),
            "mode": self.mode,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Checkpoint":
        return cls(
            int(d["n"]),
            Fraction(d["distance"]),
            int(d["support"]),
            int(d["range"]),
            None if d.get("dts") is None else Fraction(d["dts"]),
            d.get("mode"),
        )


@dataclass
class TrajectoryRecord:
    horizon: int
    seed: int
    trial: int
    checkpoints: list
    first_visit_times: list
    first_return: int | None
    final_position: tuple
    final_lamps: dict | None
    modulus: int
    path: list | None = None

    @property
    def final(self) -> Checkpoint:
        return self.checkpoints[-1]

    @property
    def returned(self) -> bool:
        return self.first_return is not None

    def final_element(self) -> WreathElement:
        return WreathElement(Configuration(self.final_lamps, self.modulus), self.final_position)

    def checkpoint_lines(self) -> list[dict]:
        return [{"trial": self.trial, "seed": self.seed, **c.as_dict()} for c in self.checkpoints]


def geometric_checkpoints(horizon: int) -> list[int]:
    pts = {horizon}
    k = horizon
    while k >= 1:
        pts.add(k)
        k //= 2
    return sorted(pts)


def sample_indices(measure: StepMeasure, horizon: int, seed: int, trial: int = 0,
                   stream: int = STREAM_WALK) -> np.ndarray:
    _, cdf = measure.compiled()
    rng = make_rng(seed, trial, stream)
    u = rng.random(horizon)
    return np.minimum(np.searchsorted(cdf, u, side="right"), len(cdf) - 1)


def simulate(
    measure: StepMeasure,
    horizon: int,
    seed: int,
    checkpoints: Iterable[int] | None = None,
    tsp_mode: str = "auto",
    tsp_cap: int | None = None,
    trial: int = 0,
    retain_path: bool = False,
    keep_lamps: bool = True,
) -> TrajectoryRecord:
    """Run one trajectory of length ``horizon``.

    Range and first-visit bookkeeping is exact at every step; d(e, X_n),
    |supp| and d_TS are recorded at the checkpoints only.  ``tsp_mode="none"``
    skips d_TS.  ``keep_lamps=False`` drops the final configuration, which
    matters for memory when many long trajectories are aggregated.  The record
    is a pure function of (measure, horizon, seed, trial).
    """
    if horizon < 0:
        raise UsageError("horizon must be >= 0")
    cps = sorted(set(geometric_checkpoints(horizon) if checkpoints is None else checkpoints))
    if horizon == 0:
        cps = [0]
    if any(c < 0 or c > horizon for c in cps):
        raise UsageError("checkpoints must lie in [0, horizon]")
    group = measure.group
    mul = group._mul
    e = group.identity
    r = measure.modulus
    table, _ = measure.compiled()
    idx = sample_indices(measure, horizon, seed, trial).tolist() if horizon else []

    pos = e
    lamps: dict = {}
    visited = {e}
    s_times = [0]
    first_return = None
    path = [e] if retain_path else None
    records = []
    scale = group.scale

    def record(m):
        dts = mode = None
        if tsp_mode != "none":
            try:
                res = solve_tsp(group, list(lamps), pos, mode=tsp_mode, cap=tsp_cap, want_order=False)
            except TspTooLarge as exc:
                raise SimulationError(
                    f"trial {trial} (seed {seed}), checkpoint n={m}: {exc}",
                    trial=trial, seed=seed, checkpoint=m,
                ) from exc
            dts, mode = res.value, res.mode
        records.append(
            Checkpoint(m, Fraction(group._norm_int(pos), scale), len(lamps), len(visited), dts, mode)
        )

    cp_iter = iter(cps)
    next_cp = next(cp_iter, None)
    if next_cp == 0:
        record(0)
        next_cp = next(cp_iter, None)
    for m in range(1, horizon + 1):
        lamp_list, move = table[idx[m - 1]]
        new_pos = mul(pos, move)
        for where, y, s in lamp_list:
            key = pos if where == 0 else (new_pos if where == 1 else mul(pos, y))
            v = (lamps.get(key, 0) + s) % r
            if v:
                lamps[key] = v
            else:
                lamps.pop(key, None)
        pos = new_pos
        if pos not in visited:
            visited.add(pos)
            s_times.append(m)
        elif first_return is None and pos == e:
            first_return = m
        if path is not None:
            path.append(pos)
        if m == next_cp:
            record(m)
            next_cp = next(cp_iter, None)
    return TrajectoryRecord(
        horizon=horizon,
        seed=seed,
        trial=trial,
        checkpoints=records,
        first_visit_times=s_times,
        first_return=first_return,
        final_position=pos,
        final_lamps=lamps if keep_lamps else None,
        modulus=r,
        path=path,
    )


def projection_walk(
    group: Group,
    mu0: Mapping,
    horizon: int,
    seed: int,
    trial: int = 0,
    stream: int = STREAM_PROJECTION,
    target=None,
    start=None,
):
    """Run the base-group walk alone.

    Returns ``(first_return, first_hit, final_position)`` where first_hit is
    the first m >= 0 with X_m = target (None if never, or if no target).
    """
    items = _mu0_items(group, mu0)
    moves = [x for x, _ in items]
    cdf = np.cumsum([float(p) for _, p in items])
    cdf[-1] = 1.0
    rng = make_rng(seed, trial, stream)
    idx = np.minimum(np.searchsorted(cdf, rng.random(horizon), side="right"), len(cdf) - 1).tolist()
    mul = group._mul
    e = group.identity
    pos = e if start is None else group.check(start)
    origin = pos
    first_return = None
    first_hit = 0 if target is not None and pos == target else None
    for m in range(1, horizon + 1):
        pos = mul(pos, moves[idx[m - 1]])
        if first_return is None and pos == origin:
            first_return = m
        if first_hit is None and target is not None and pos == target:
            first_hit = m
        if first_return is not None and (target is None or first_hit is not None):
            break
    return first_return, first_hit, pos


# ---------------------------------------------------------------------------
# skeleton and Delta statistics

def _need_path(record: TrajectoryRecord):
    if record.path is None:
        raise UsageError("this statistic needs the full path; simulate with retain_path=True")
    return record.path


def hitting_skeleton(record: TrajectoryRecord, group: Group, separation) -> list[tuple[int, tuple]]:
    """Times t(k) and points H(k): t(1)=0, then each first exit from the union of
    closed balls of radius ``separation`` around the earlier skeleton points."""
    path = _need_path(record)
    sep = getattr(separation, "separation", separation)
    ball = group.ball(group.identity, sep)
    mul = group._mul
    skel = [(0, path[0])]
    covered = {mul(path[0], b) for b in ball}
    for m in range(1, len(path)):
        x = path[m]
        if x not in covered:
            skel.append((m, x))
            covered.update(mul(x, b) for b in ball)
    return skel


def wilson_interval(successes: int, n: int, level: float = 0.99) -> tuple[float, float]:
    from statistics import NormalDist

    if n == 0:
        return 0.0, 1.0
    z = NormalDist().inv_cdf(0.5 + level / 2)
    phat = successes / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class DeltaStats:
    indicators: tuple
    skeleton: tuple
    mean: float
    ci: tuple

    @property
    def count(self) -> int:
        return sum(self.indicators)


def block_points(group: Group, h, sigmas) -> tuple:
    mul = group._mul
    return (h,) + tuple(mul(h, s) for s in sigmas)


def delta_statistics(record: TrajectoryRecord, group: Group, triple, level: float = 0.99) -> DeltaStats:
    """For each skeleton point H(k): is every lamp of {H, H s1, H s2, H s3} on at the horizon?"""
    skel = hitting_skeleton(record, group, triple.separation)
    lit = record.final_lamps
    ind = tuple(int(all(p in lit for p in block_points(group, h, triple.sigmas))) for _, h in skel)
    mean = sum(ind) / len(ind)
    return DeltaStats(ind, tuple(skel), mean, wilson_interval(sum(ind), len(ind), level))


def first_visit_lamp_count(record: TrajectoryRecord) -> int:
    """Sum over j <= |R_n| of [lamp at X_{s(j)} is on at the horizon]."""
    path = _need_path(record)
    lit = record.final_lamps
    return sum(1 for t in record.first_visit_times if path[t] in lit)


def dts_skeleton_bound(record: TrajectoryRecord, group: Group, triple) -> Fraction:
    """d(e, X_n) + increment * #{k : block k fully lit at the horizon}."""
    stats = delta_statistics(record, group, triple)
    return group.norm(record.final_position) + triple.increment * stats.count


__all__ = [
    "StepMeasure",
    "GenerationWarning",
    "SimulationError",
    "Checkpoint",
    "TrajectoryRecord",
    "DeltaStats",
    "make_rng",
    "make_walk_switch",
    "make_switch_walk",
    "make_custom",
    "generation_problems",
    "geometric_checkpoints",
    "sample_indices",
    "simulate",
    "projection_walk",
    "hitting_skeleton",
    "delta_statistics",
    "wilson_interval",
    "block_points",
    "first_visit_lamp_count",
    "dts_skeleton_bound",
]
