"""Travelling-salesman lengths d_TS(eta, x) on the group backends.

d_TS is the length of a shortest walk on G from e to x passing through every
lamp in the support.  Legs are geodesics, so it is an open-path TSP on the
metric closure with pinned start e and pinned end x.

Every result carries a ``mode``:

``exact-tree``   closed form on tree backends: 2 * (weight of the spanning subtree) - d(e, x)
``exact-line``   closed form on Z when the metric is r1 * |x - y| on the relevant range
``exact-dp``     subset dynamic programming (Held-Karp)
``exact-brute``  enumeration of visit orders (test oracle)
``heuristic-upper``  nearest neighbour + 2-opt, an upper bound only
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import kernels
from .groups import Group, IntegerLattice, UsageError

DEFAULT_DP_CAP = 18
BRUTEFORCE_CAP = 9

EXACT_MODES = ("exact-tree", "exact-line", "exact-dp", "exact-brute")


class TspTooLarge(UsageError):
    pass


@dataclass(frozen=True)
class TspResult:
    value: Fraction
    order: tuple
    mode: str

    @property
    def exact(self) -> bool:
        return self.mode in EXACT_MODES


def _required(group: Group, supp: Iterable, target):
    """Distinct support points other than e and target, in canonical order."""
    target = group.check(target)
    e = group.identity
    pts = {group.check(p) for p in supp}
    head = (e,) if e in pts else ()
    tail = (target,) if target in pts and target != e else ()
    pts.discard(e)
    pts.discard(target)
    return target, sorted(pts), head, tail


def tsp_exact_dp(group: Group, supp: Iterable, target, cap: int = DEFAULT_DP_CAP) -> TspResult:
    target, req, head, tail = _required(group, supp, target)
    if len(req) > cap:
        raise TspTooLarge(
            f"{len(req)} support points exceed the exact-dp cap of {cap}; use heuristic mode"
        )
    pts = [group.identity] + req + [target]
    cost, order = kernels.held_karp(group.scaled_matrix(pts))
    return TspResult(Fraction(cost, group.scale), head + tuple(pts[i] for i in order) + tail, "exact-dp")


def _tree_order(req, target):
    def key(w):
        k = 0
        n = min(len(w), len(target))
        while k < n and w[k] == target[k]:
            k += 1
        return tuple((1 if i < k else 0, a) for i, a in enumerate(w))

    return tuple(sorted(req, key=key))


def tsp_exact_tree(group: Group, supp: Iterable, target, want_order: bool = True) -> TspResult:
    if not group.is_tree:
        raise UsageError(f"exact-tree needs a tree backend, got {group.kind}")
    target, req, head, tail = _required(group, supp, target)
    words = sorted(set(req) | {target})
    span = kernels.prefix_span(words, group.letter_weights, group.letter_offset)
    value = Fraction(2 * span - group._norm_int(target), group.scale)
    order = head + _tree_order(req, target) + tail if want_order else ()
    return TspResult(value, order, "exact-tree")


def line_metric_ok(group: Group, points: Iterable) -> bool:
    """True when d(x, y) = r1 |x - y| for all x, y in the hull of ``points`` on Z.

    Requires +-1 to be a shortest generator; then d(0, z) <= r1 |z| always,
    and d(0, D) = r1 D for the hull width D forces equality for all |z| <= D
    by subadditivity.
    """
    if not isinstance(group, IntegerLattice) or group.dim != 1:
        return False
    gens = group.generators
    if (1,) not in gens.elements or gens.length_of((1,)) != group.r1:
        return False
    xs = [p[0] for p in points]
    width = max(xs) - min(xs)
    return group.distance((0,), (width,)) == group.r1 * width


def tsp_exact_line(group: Group, supp: Iterable, target) -> TspResult:
    target, req, head, tail = _required(group, supp, target)
    pts = req + [group.identity, target]
    if not line_metric_ok(group, pts):
        raise UsageError("exact-line needs Z with metric r1*|x-y| on the support hull")
    t = target[0]
    xs = [p[0] for p in pts]
    lo, hi = min(xs), max(xs)
    left_first = -lo + (hi - lo) + (hi - t)
    right_first = hi + (hi - lo) + (t - lo)
    vals = [p[0] for p in req]
    if left_first <= right_first:
        order = [x for x in sorted(vals, reverse=True) if x < 0] + [x for x in sorted(vals) if x >= 0]
        steps = left_first
    else:
        order = [x for x in sorted(vals) if x > 0] + [x for x in sorted(vals, reverse=True) if x <= 0]
        steps = right_first
    return TspResult(group.r1 * steps, head + tuple((x,) for x in order) + tail, "exact-line")


def tsp_heuristic(group: Group, supp: Iterable, target) -> TspResult:
    target, req, head, tail = _required(group, supp, target)
    pts = [group.identity] + req + [target]
    dist = group.scaled_matrix(pts)
    n = len(pts)
    todo = set(range(1, n - 1))
    seq = [0]
    while todo:
        cur = dist[seq[-1]]
        nxt = min(todo, key=lambda j: (cur[j], j))
        todo.remove(nxt)
        seq.append(nxt)
    seq.append(n - 1)
    cost, seq = kernels.two_opt(dist, seq)
    inner = tuple(pts[i] for i in seq[1:-1])
    return TspResult(Fraction(cost, group.scale), head + inner + tail, "heuristic-upper")


def tsp_bruteforce_oracle(group: Group, supp: Iterable, target) -> Fraction:
    """Minimum over all visit orders; independent of the DP and the closed forms."""
    target = group.check(target)
    pts = sorted({group.check(p) for p in supp})
    if len(pts) > BRUTEFORCE_CAP:
        raise TspTooLarge(f"brute force limited to {BRUTEFORCE_CAP} points")
    nodes = [group.identity] + pts + [target]
    # integer units of 1/scale keep the enumeration exact and fast
    D = [[int(group.distance(a, b) * group.scale) for b in nodes] for a in nodes]
    last = len(nodes) - 1
    best = None
    for perm in itertools.permutations(range(1, last)):
        route = (0,) + perm + (last,)
        total = sum(D[a][b] for a, b in zip(route, route[1:]))
        if best is None or total < best:
            best = total
    return Fraction(best, group.scale)


def solve_tsp(
    group: Group,
    supp: Iterable,
    target,
    mode: str = "auto",
    cap: int | None = None,
    want_order: bool = True,
) -> TspResult:
    """Dispatch on ``mode``: auto, exact, heuristic or one explicit method name."""
    cap = DEFAULT_DP_CAP if cap is None else cap
    supp = list(supp)
    if mode in ("auto", "exact"):
        if group.is_tree:
            return tsp_exact_tree(group, supp, target, want_order=want_order)
        if isinstance(group, IntegerLattice) and group.dim == 1:
            pts = supp + [group.identity, group.check(target)]
            if line_metric_ok(group, pts):
                return tsp_exact_line(group, supp, target)
        n_req = len(_required(group, supp, target)[1])
        if n_req <= cap:
            return tsp_exact_dp(group, supp, target, cap=cap)
        if mode == "exact":
            raise TspTooLarge(
                f"{n_req} support points exceed the exact-dp cap of {cap}; use heuristic mode"
            )
        return tsp_heuristic(group, supp, target)
    if mode == "heuristic":
        return tsp_heuristic(group, supp, target)
    if mode == "exact-tree":
        return tsp_exact_tree(group, supp, target, want_order=want_order)
    if mode == "exact-line":
        return tsp_exact_line(group, supp, target)
    if mode == "exact-dp":
        return tsp_exact_dp(group, supp, target, cap=cap)
    if mode == "exact-brute":
        val = tsp_bruteforce_oracle(group, supp, target)
        return TspResult(val, (), "exact-brute")
    raise UsageError(f"unknown tsp mode {mode!r}")


__all__ = [
    "TspResult",
    "TspTooLarge",
    "DEFAULT_DP_CAP",
    "tsp_exact_dp",
    "tsp_exact_tree",
    "tsp_exact_line",
    "tsp_heuristic",
    "tsp_bruteforce_oracle",
    "solve_tsp",
    "line_metric_ok",
]
