"""The lamplighter group Z_r wr G over one of the group backends."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .groups import Group, UsageError, as_fraction


class Configuration:
    """Finitely supported lamp configuration with states in Z/rZ.

    Only nonzero states are stored, so ``len(conf)`` is ``|supp(eta)|``.
    Instances are immutable and hashable.
    """

    __slots__ = ("modulus", "_lamps", "_hash")

    def __init__(self, lamps: Mapping | Iterable = (), modulus: int = 2):
        if int(modulus) != modulus or modulus < 2:
            raise UsageError("lamp modulus must be an integer >= 2")
        items = lamps.items() if isinstance(lamps, Mapping) else lamps
        clean = {}
        for x, v in items:
            v = int(v) % modulus
            if v:
                clean[x] = v
            else:
                clean.pop(x, None)
        self.modulus = int(modulus)
        self._lamps = clean
        self._hash = None

    @classmethod
    def zero(cls, modulus: int = 2) -> "Configuration":
        return cls({}, modulus)

    @classmethod
    def single(cls, x, state: int = 1, modulus: int = 2) -> "Configuration":
        return cls({x: state}, modulus)

    @property
    def support(self) -> frozenset:
        return frozenset(self._lamps)

    def __getitem__(self, x) -> int:
        return self._lamps.get(x, 0)

    def items(self):
        return self._lamps.items()

    def __len__(self):
        return len(self._lamps)

    def __iter__(self):
        return iter(self._lamps)

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.modulus == other.modulus and self._lamps == other._lamps

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.modulus, frozenset(self._lamps.items())))
        return self._hash

    def __repr__(self):
        return f"Configuration({dict(sorted(self._lamps.items()))!r}, modulus={self.modulus})"


@dataclass(frozen=True)
class WreathElement:
    config: Configuration
    position: tuple


class Lamplighter:
    """``Z_r wr G`` for a fixed base group ``G`` and lamp modulus ``r``."""

    def __init__(self, base: Group, modulus: int = 2):
        if int(modulus) != modulus or modulus < 2:
            raise UsageError("lamp modulus must be an integer >= 2")
        self.base = base
        self.modulus = int(modulus)

    @property
    def identity(self) -> WreathElement:
        return WreathElement(Configuration.zero(self.modulus), self.base.identity)

    def element(self, lamps: Mapping | Iterable = (), position=None) -> WreathElement:
        pos = self.base.identity if position is None else self.base.check(position)
        conf = Configuration(lamps, self.modulus)
        for x in conf:
            self.base.check(x)
        return WreathElement(conf, pos)

    def _own(self, u: WreathElement) -> WreathElement:
        if not isinstance(u, WreathElement):
            raise UsageError(f"{u!r} is not a lamplighter element")
        if u.config.modulus != self.modulus:
            raise UsageError(f"modulus mismatch: {u.config.modulus} != {self.modulus}")
        return u

    def translate(self, x, conf: Configuration) -> Configuration:
        """(x eta)(w) = eta(x^{-1} w): shift every lamp by left multiplication."""
        x = self.base.check(x)
        mul = self.base._mul
        return Configuration({mul(x, w): v for w, v in conf.items()}, conf.modulus)

    def multiply(self, u: WreathElement, v: WreathElement) -> WreathElement:
        u, v = self._own(u), self._own(v)
        mul, r = self.base._mul, self.modulus
        lamps = dict(u.config.items())
        x = u.position
        for w, s in v.config.items():
            key = mul(x, w)
            t = (lamps.get(key, 0) + s) % r
            if t:
                lamps[key] = t
            else:
                lamps.pop(key, None)
        return WreathElement(Configuration(lamps, r), mul(x, v.position))

    def inverse(self, u: WreathElement) -> WreathElement:
        u = self._own(u)
        xi = self.base._inv(u.position)
        mul, r = self.base._mul, self.modulus
        conf = Configuration({mul(xi, w): (-s) % r for w, s in u.config.items()}, r)
        return WreathElement(conf, xi)

    def generators(self) -> list[WreathElement]:
        """The natural generating set: toggle at the current position, or move by s."""
        e = self.base.identity
        out = [WreathElement(Configuration.single(e, 1, self.modulus), e)]
        if self.modulus > 2:
            out.append(WreathElement(Configuration.single(e, -1, self.modulus), e))
        for s in self.base.generators.elements:
            out.append(WreathElement(Configuration.zero(self.modulus), s))
        return out

    def length(self, u: WreathElement, c_lamp=0, mode: str = "auto", cap: int | None = None):
        """``d_TS(eta, x) + c_lamp * |supp(eta)|`` with the TSP result it was built on."""
        from .tsp import solve_tsp

        u = self._own(u)
        c = as_fraction(c_lamp)
        if c < 0:
            raise UsageError("lamp cost must be nonnegative")
        res = solve_tsp(self.base, list(u.config), u.position, mode=mode, cap=cap)
        return res.value + c * len(u.config), res

    def to_json(self, u: WreathElement) -> dict:
        fmt = self.base.format
        lamps = sorted((fmt(x), s) for x, s in u.config.items())
        return {"position": fmt(u.position), "support": [[x, s] for x, s in lamps]}

    def from_json(self, data: dict) -> WreathElement:
        parse = self.base.parse
        lamps = {parse(x): int(s) for x, s in data.get("support", [])}
        return self.element(lamps, parse(data["position"]))


__all__ = ["Configuration", "WreathElement", "Lamplighter"]
