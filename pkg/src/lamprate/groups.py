"""Finitely generated groups with weighted generating sets.

Three backend families are supported, each with an exact word metric:

* :class:`IntegerLattice` -- ``Z^k`` with an arbitrary finite symmetric set of
  integer step vectors.  Elements are integer tuples.
* :class:`FreeProduct` -- free products of copies of ``Z`` and ``Z/2Z`` with
  the obvious generators.  Elements are freely reduced words (tuples of
  nonzero ints).  Free groups and ``Z2 * Z2`` are special cases and have their
  own constructors, :func:`FreeGroup` and :func:`FreeProductC2C2`.

Lengths are held as :class:`fractions.Fraction`.  Internally every metric runs
on integers obtained by multiplying all lengths by the common denominator
(``GeneratorSet.scale``), so all distances are exact.
"""
from __future__ import annotations

import heapq
import math
import string
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

GroupElement = tuple

DEFAULT_SEARCH_CAP = 1_000_000
DEFAULT_BALL_CAP = 200_000


class UsageError(ValueError):
    """Raised when elements or parameters do not belong to the backend."""


class MetricQueryTooLarge(RuntimeError):
    """A uniform-cost search hit its expansion cap before finishing."""


def as_fraction(value: Any) -> Fraction:
    """Convert ints, ``"p/q"`` strings, decimals and floats to an exact Fraction.

    Floats go through their shortest decimal repr, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise UsageError(f"not a length: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise UsageError(f"non-finite length {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"cannot parse rational {value!r}") from exc
    raise UsageError(f"cannot interpret {value!r} as a rational number")


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class GeneratorSet:
    """A finite symmetric generating set with positive lengths.

    ``elements[i]`` is a canonical group element and ``lengths[i]`` its length.
    """

    elements: tuple
    lengths: tuple
    labels: tuple
    scale: int = field(init=False)
    int_lengths: tuple = field(init=False)

    def __post_init__(self):
        if not self.elements:
            raise UsageError("empty generating set")
        if len(set(self.elements)) != len(self.elements):
            raise UsageError("duplicate generators")
        lengths = tuple(as_fraction(l) for l in self.lengths)
        if any(l <= 0 for l in lengths):
            raise UsageError("generator lengths must be strictly positive")
        object.__setattr__(self, "lengths", lengths)
        scale = 1
        for l in lengths:
            scale = scale * l.denominator // math.gcd(scale, l.denominator)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "int_lengths", tuple(int(l * scale) for l in lengths))

    @property
    def r1(self) -> Fraction:
        return min(self.lengths)

    def length_of(self, s) -> Fraction:
        return self.lengths[self.elements.index(s)]

    def __len__(self):
        return len(self.elements)

    def sorted_by_length(self) -> list[int]:
        """Generator indices ordered by length, ties broken by index."""
        return sorted(range(len(self.elements)), key=lambda i: (self.lengths[i], i))


class Group:
    """Common interface of the backends.  Elements are plain tuples."""

    kind: str = "abstract"
    is_tree: bool = False

    def __init__(self, generators: GeneratorSet):
        self.generators = generators
        self._check_generators()

    # -- to be provided by subclasses -------------------------------------
    identity: GroupElement = ()

    def _mul(self, x, y):
        raise NotImplementedError

    def _inv(self, x):
        raise NotImplementedError

    def _norm_int(self, x) -> int:
        raise NotImplementedError

    def check(self, x) -> GroupElement:
        raise NotImplementedError

    def parse(self, text) -> GroupElement:
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    # -- shared ------------------------------------------------------------
    def _check_generators(self):
        gens = self.generators
        for s, l in zip(gens.elements, gens.lengths):
            self.check(s)
            if s == self.identity:
                raise UsageError("the identity may not be a generator")
            si = self._inv(s)
            if si not in gens.elements:
                raise UsageError(f"generating set not symmetric: missing inverse of {self.format(s)}")
            if gens.length_of(si) != l:
                raise UsageError(f"l({self.format(s)}) != l({self.format(si)})")

    @property
    def r1(self) -> Fraction:
        return self.generators.r1

    @property
    def scale(self) -> int:
        return self.generators.scale

    def multiply(self, x, y) -> GroupElement:
        return self._mul(self.check(x), self.check(y))

    def inverse(self, x) -> GroupElement:
        return self._inv(self.check(x))

    def norm(self, x) -> Fraction:
        """d(e, x)."""
        return Fraction(self._norm_int(self.check(x)), self.scale)

    def distance(self, x, y) -> Fraction:
        x, y = self.check(x), self.check(y)
        return Fraction(self._dist_int(x, y), self.scale)

    def _dist_int(self, x, y) -> int:
        return self._norm_int(self._mul(self._inv(x), y))

    def ball(self, center, radius, cap: int = DEFAULT_BALL_CAP) -> set:
        """All y with d(center, y) <= radius, by bounded uniform-cost expansion."""
        center = self.check(center)
        radius = as_fraction(radius)
        if radius < 0:
            raise UsageError("negative radius")
        limit = math.floor(radius * self.scale)
        steps = list(zip(self.generators.elements, self.generators.int_lengths))
        best = {center: 0}
        heap = [(0, center)]
        done = set()
        while heap:
            c, v = heapq.heappop(heap)
            if v in done:
                continue
            done.add(v)
            if len(done) > cap:
                raise MetricQueryTooLarge(f"ball exceeds {cap} elements")
            for s, l in steps:
                nc = c + l
                if nc > limit:
                    continue
                w = self._mul(v, s)
                if nc < best.get(w, limit + 1):
                    best[w] = nc
                    heapq.heappush(heap, (nc, w))
        return done

    def pairwise_distances(self, points: Sequence) -> list[list[Fraction]]:
        if not points:
            raise UsageError("need at least one point")
        pts = [self.check(p) for p in points]
        return [[Fraction(v, self.scale) for v in row] for row in self.scaled_matrix(pts)]

    def scaled_matrix(self, pts: Sequence) -> list[list[int]]:
        """Distance matrix in integer units of ``1/scale`` (inputs assumed canonical)."""
        n = len(pts)
        out = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                out[i][j] = out[j][i] = self._dist_int(pts[i], pts[j])
        return out

    def generates_subgroup_containing(self, elements: Iterable, target) -> bool:
        """Exact membership of ``target`` in the subgroup generated by ``elements``."""
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.describe()}>"


def search_distance(group: Group, x, y, cap: int = DEFAULT_SEARCH_CAP) -> Fraction:
    """Plain Dijkstra over the Cayley graph from x to y.

    Backend independent; used as an oracle for the closed-form metrics.
    """
    x, y = group.check(x), group.check(y)
    steps = list(zip(group.generators.elements, group.generators.int_lengths))
    best = {x: 0}
    heap = [(0, x)]
    done = set()
    while heap:
        c, v = heapq.heappop(heap)
        if v == y:
            return Fraction(c, group.scale)
        if v in done:
            continue
        done.add(v)
        if len(done) > cap:
            raise MetricQueryTooLarge("search cap exceeded")
        for s, l in steps:
            w = group._mul(v, s)
            if c + l < best.get(w, c + l + 1):
                best[w] = c + l
                heapq.heappush(heap, (c + l, w))
    raise UsageError("target unreachable")


# ---------------------------------------------------------------------------
# integer lattices

def hermite_rows(vectors: Iterable[Sequence[int]], dim: int) -> list[list[int]]:
    """Row-echelon basis (over Z) of the lattice spanned by ``vectors``."""
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    col = 0
    while rows and col < dim:
        nz = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not nz:
            col += 1
            continue
        # Euclid on the pivot column
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            new = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col] != 0:
                    new.append(r)
                elif any(r):
                    rest.append(r)
            nz = new
        piv = nz[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        basis.append(piv)
        rows = rest
        col += 1
    return basis


def lattice_contains(vectors: Iterable[Sequence[int]], target: Sequence[int], dim: int) -> bool:
    basis = hermite_rows(vectors, dim)
    v = list(target)
    for row in basis:
        col = next(i for i, a in enumerate(row) if a != 0)
        if v[col] % row[col]:
            return False
        q = v[col] // row[col]
        v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


class IntegerLattice(Group):
    """``Z^k`` with a weighted symmetric set of integer step vectors.

    If the generators are exactly the signed unit vectors the metric is the
    weighted L1 norm; otherwise ``d(0, z)`` comes from one uniform-cost search
    from the origin that is resumed on demand and memoized (translation
    invariance makes one table enough).
    """

    kind = "lattice"

    def __init__(self, dim: int, generators: GeneratorSet, search_cap: int = DEFAULT_SEARCH_CAP):
        if dim < 1:
            raise UsageError("lattice dimension must be >= 1")
        self.dim = dim
        self.identity = (0,) * dim
        super().__init__(generators)
        if len(hermite_rows(generators.elements, dim)) != dim or not all(
            lattice_contains(generators.elements, e, dim) for e in _unit_vectors(dim)
        ):
            raise UsageError("generators do not generate Z^%d" % dim)
        self.search_cap = search_cap
        self._axis = self._axis_weights()
        self._settled: dict = {}
        self._best = {self.identity: 0}
        self._heap = [(0, self.identity)]
        self._lock = threading.Lock()
        self._steps = list(zip(generators.elements, generators.int_lengths))
        self._max_step = max(max(abs(a) for a in s) for s in generators.elements)
        if dim == 1:
            self._mul = _add1
        elif dim == 2:
            self._mul = _add2

    @classmethod
    def from_steps(cls, steps: dict, symmetrize: bool = True, **kw) -> "IntegerLattice":
        """``steps`` maps integer vectors (or ints for Z) to lengths."""
        elems, lens = [], []
        for v, l in steps.items():
            v = (v,) if isinstance(v, int) else tuple(v)
            for w in (v, tuple(-a for a in v)) if symmetrize else (v,):
                if w not in elems:
                    elems.append(w)
                    lens.append(l)
        dim = len(elems[0])
        labels = tuple(_format_vec(e) for e in elems)
        return cls(dim, GeneratorSet(tuple(elems), tuple(lens), labels), **kw)

    def __getstate__(self):
        state = self.__dict__.copy()
        del state["_lock"]
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._lock = threading.Lock()

    def _axis_weights(self):
        gens = self.generators
        if len(gens.elements) != 2 * self.dim:
            return None
        w = [None] * self.dim
        for s, l in zip(gens.elements, gens.int_lengths):
            nz = [i for i, a in enumerate(s) if a != 0]
            if len(nz) != 1 or abs(s[nz[0]]) != 1:
                return None
            w[nz[0]] = l
        return None if None in w else tuple(w)

    def _mul(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def _inv(self, x):
        return tuple(-a for a in x)

    def _norm_int(self, z) -> int:
        if self._axis is not None:
            return sum(w * abs(a) for w, a in zip(self._axis, z))
        got = self._settled.get(z)
        if got is not None:
            return got
        with self._lock:
            return self._expand_until(z)

    def _expand_until(self, z) -> int:
        settled, best, heap = self._settled, self._best, self._heap
        while z not in settled:
            if len(settled) >= self.search_cap:
                raise MetricQueryTooLarge(
                    f"metric query too large: d(0, {self.format(z)}) needs more than "
                    f"{self.search_cap} expanded states"
                )
            c, v = heapq.heappop(heap)
            if v in settled:
                continue
            settled[v] = c
            for s, l in self._steps:
                w = self._mul(v, s)
                nc = c + l
                if nc < best.get(w, nc + 1):
                    best[w] = nc
                    heapq.heappush(heap, (nc, w))
        return settled[z]

    def check(self, x):
        if isinstance(x, tuple) and len(x) == self.dim and all(type(a) is int for a in x):
            return x
        raise UsageError(f"{x!r} is not an element of Z^{self.dim}")

    def parse(self, text):
        if isinstance(text, int) and self.dim == 1:
            return (text,)
        if isinstance(text, (list, tuple)):
            return self.check(tuple(int(a) for a in text))
        t = str(text).strip()
        if t in ("e", ""):
            return self.identity
        t = t.strip("()[]")
        try:
            vec = tuple(int(a) for a in t.split(","))
        except ValueError as exc:
            raise UsageError(f"cannot parse lattice element {text!r}") from exc
        return self.check(vec)

    def format(self, x):
        return _format_vec(x)

    def describe(self):
        return {
            "kind": self.kind,
            "dim": self.dim,
            "generators": [
                {"vector": list(s), "length": format_fraction(l)}
                for s, l in zip(self.generators.elements, self.generators.lengths)
            ],
        }

    def generates_subgroup_containing(self, elements, target) -> bool:
        return lattice_contains(list(elements), target, self.dim)


def _add1(x, y):
    return (x[0] + y[0],)


def _add2(x, y):
    return (x[0] + y[0], x[1] + y[1])


def _unit_vectors(dim):
    for i in range(dim):
        yield tuple(1 if j == i else 0 for j in range(dim))


def _format_vec(x):
    return str(x[0]) if len(x) == 1 else ",".join(str(a) for a in x)


# ---------------------------------------------------------------------------
# free products of Z's and Z/2Z's (Cayley graphs are trees)

class FreeProduct(Group):
    """Free product of ``rank`` copies of Z and ``involutions`` copies of Z/2Z.

    Letters are nonzero ints: ``1..rank`` are free generators with inverses
    ``-1..-rank``; ``rank+1..rank+involutions`` are self-inverse.  Elements
    are reduced words, i.e. no letter is followed by its inverse.  Printed
    labels are ``a, b, c, ...`` in letter order, upper case for inverses.
    """

    kind = "free_product"
    is_tree = True

    def __init__(self, rank: int, involutions: int, lengths: Sequence):
        if rank < 0 or involutions < 0 or rank + involutions == 0:
            raise UsageError("need at least one factor")
        if rank + involutions > 26:
            raise UsageError("at most 26 factors")
        if len(lengths) != rank + involutions:
            raise UsageError("one length per factor required")
        self.rank = rank
        self.involutions = involutions
        self.identity = ()
        elems, lens, labels = [], [], []
        for i in range(1, rank + 1):
            for s in (i, -i):
                elems.append((s,))
                lens.append(lengths[i - 1])
                labels.append(self._label(s))
        for j in range(rank + 1, rank + involutions + 1):
            elems.append((j,))
            lens.append(lengths[j - 1])
            labels.append(self._label(j))
        super().__init__(GeneratorSet(tuple(elems), tuple(lens), tuple(labels)))
        # weight table indexed by letter + rank
        table = [0] * (2 * rank + involutions + 1)
        for (s,), l in zip(self.generators.elements, self.generators.int_lengths):
            table[s + rank] = l
        self.letter_weights = tuple(table)
        self.letter_offset = rank

    def _label(self, s: int) -> str:
        ch = string.ascii_lowercase[abs(s) - 1]
        return ch.upper() if s < 0 else ch

    def letter_inverse(self, s: int) -> int:
        return s if s > self.rank else -s

    def _mul(self, x, y):
        if not y:
            return x
        if not x:
            return y
        rank = self.rank
        k = 0
        nx, ny = len(x), len(y)
        while k < nx and k < ny:
            a, b = x[nx - 1 - k], y[k]
            if a > rank:
                if a != b:
                    break
            elif a != -b:
                break
            k += 1
        if k == 0:
            return x + y
        return x[: nx - k] + y[k:]

    def _inv(self, x):
        rank = self.rank
        return tuple(a if a > rank else -a for a in reversed(x))

    def _norm_int(self, x) -> int:
        w, off = self.letter_weights, self.letter_offset
        return sum(w[a + off] for a in x)

    def _dist_int(self, x, y) -> int:
        k = 0
        n = min(len(x), len(y))
        while k < n and x[k] == y[k]:
            k += 1
        w, off = self.letter_weights, self.letter_offset
        return sum(w[a + off] for a in x[k:]) + sum(w[a + off] for a in y[k:])

    def check(self, x):
        if not isinstance(x, tuple):
            raise UsageError(f"{x!r} is not a reduced word")
        top = self.rank + self.involutions
        prev = None
        for a in x:
            if type(a) is not int or a == 0 or a > top or (a < 0 and -a > self.rank):
                raise UsageError(f"{x!r}: invalid letter {a!r}")
            if prev is not None and (a == prev if a > self.rank else a == -prev):
                raise UsageError(f"{x!r} is not reduced")
            prev = a
        return x

    def parse(self, text):
        if isinstance(text, (list, tuple)):
            word = ()
            for a in text:
                word = self._mul(word, (int(a),))
            return self.check(word)
        t = str(text).strip()
        if t in ("e", ""):
            return ()
        word = ()
        for ch in t:
            idx = string.ascii_lowercase.find(ch.lower())
            if idx < 0 or idx >= self.rank + self.involutions:
                raise UsageError(f"unknown letter {ch!r} in {text!r}")
            s = idx + 1
            if ch.isupper():
                if s > self.rank:
                    raise UsageError(f"{ch!r}: involutions have no upper-case form")
                s = -s
            word = self._mul(word, (s,))
        return word

    def format(self, x):
        return "".join(self._label(a) for a in x) if x else "e"

    def describe(self):
        names = [string.ascii_lowercase[i] for i in range(self.rank + self.involutions)]
        lens = {}
        for n, i in zip(names, range(1, self.rank + self.involutions + 1)):
            lens[n] = format_fraction(self.generators.length_of((i,)))
        return {"kind": self.kind, "rank": self.rank, "involutions": self.involutions, "lengths": lens}

    def generates_subgroup_containing(self, elements, target) -> bool:
        # exact only for single letters, which is what the case analysis asks
        letters = set()
        for w in elements:
            if len(w) != 1:
                raise UsageError("membership test supports single letters only")
            letters.add(w[0])
            letters.add(self.letter_inverse(w[0]))
        if len(target) != 1:
            raise UsageError("membership test supports single letters only")
        return target[0] in letters


def FreeGroup(rank: int, lengths: Sequence | None = None) -> FreeProduct:
    """Free group on ``rank`` generators."""
    g = FreeProduct(rank, 0, lengths if lengths is not None else [1] * rank)
    g.kind = "free_group"
    return g


def FreeProductC2C2(la=1, lb=1) -> FreeProduct:
    """The infinite dihedral group ``<a, b | a^2 = b^2 = e>`` with S = {a, b}."""
    g = FreeProduct(0, 2, [la, lb])
    g.kind = "c2c2"
    return g


def c2c2_subgroup_index(word: tuple) -> int:
    """Map an even-length word of Z2*Z2 to z with word = (ab)^z."""
    if len(word) % 2:
        raise UsageError("odd word is not in the subgroup <ab>")
    if not word:
        return 0
    return len(word) // 2 if word[0] == 1 else -(len(word) // 2)


def build_group(spec: dict) -> Group:
    """Construct a backend from its ``describe()``-style dictionary."""
    kind = spec.get("kind")
    if kind == "lattice":
        gens = spec.get("generators")
        if not gens:
            raise UsageError("lattice backend needs 'generators'")
        steps = {}
        for g in gens:
            v = g["vector"]
            steps[tuple(v) if isinstance(v, (list, tuple)) else (int(v),)] = as_fraction(g["length"])
        kw = {}
        if "search_cap" in spec:
            kw["search_cap"] = int(spec["search_cap"])
        grp = IntegerLattice.from_steps(steps, symmetrize=spec.get("symmetrize", True), **kw)
        if "dim" in spec and spec["dim"] != grp.dim:
            raise UsageError("'dim' does not match generator vectors")
        return grp
    if kind in ("free_group", "free_product", "c2c2"):
        rank = int(spec.get("rank", 0 if kind == "c2c2" else 2))
        inv = int(spec.get("involutions", 2 if kind == "c2c2" else 0))
        if kind == "free_group" and inv:
            raise UsageError("free_group has no involutions")
        names = [string.ascii_lowercase[i] for i in range(rank + inv)]
        given = spec.get("lengths", {})
        if isinstance(given, (list, tuple)):
            lens = [as_fraction(l) for l in given]
        else:
            unknown = set(given) - set(names)
            if unknown:
                raise UsageError(f"unknown generator(s) {sorted(unknown)}")
            lens = [as_fraction(given.get(n, 1)) for n in names]
        grp = FreeProduct(rank, inv, lens)
        grp.kind = kind
        return grp
    raise UsageError(f"unknown backend kind {kind!r}")


def all_words(group: FreeProduct, max_len: int) -> Iterable[tuple]:
    """Enumerate every reduced word up to the given length (small sizes only)."""
    letters = [s for (s,) in group.generators.elements]
    frontier = [()]
    yield ()
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for s in letters:
                if w and group._mul(w[-1:], (s,)) != w[-1:] + (s,):
                    continue
                nxt.append(w + (s,))
        yield from nxt
        frontier = nxt


__all__ = [
    "GroupElement",
    "GeneratorSet",
    "Group",
    "IntegerLattice",
    "FreeProduct",
    "FreeGroup",
    "FreeProductC2C2",
    "UsageError",
    "MetricQueryTooLarge",
    "as_fraction",
    "format_fraction",
    "search_distance",
    "lattice_contains",
    "hermite_rows",
    "build_group",
    "c2c2_subgroup_index",
    "all_words",
]
