"""Run configurations: JSON documents with exact rationals written as "p/q" strings.

Schema (all keys optional unless marked)::

    {
      "name": "f2-walk-switch",
      "backend": {...},                 # required, see groups.build_group
      "measure": {                      # required
        "type": "walk-switch" | "switch-walk" | "custom",
        "mu0": {"a": "1/4", ...} | "uniform",
        "p_switch": "1/2",              # switch-walk only
        "atoms": [{"lamps": {"0": 1}, "move": "1", "p": "1/8"}, ...]   # custom only
      },
      "modulus": 2,
      "c_lamp": "0",
      "horizon": 2000,
      "trials": 400,
      "seed": 1,
      "checkpoints": "geometric" | [n1, n2, ...],
      "tsp": {"mode": "auto", "cap": 18},   # mode "none" skips d_TS
      "return_trials": 0,               # > 0 adds the walk-switch identity check
      "drift_visits": 0,                # > 0 adds the induced-walk drift (Z2*Z2 only)
      "output": "lamprate-out"
    }
"""
from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .groups import Group, UsageError, as_fraction, build_group, format_fraction
from .walks import StepMeasure, make_custom, make_switch_walk, make_walk_switch

TSP_MODES = ("auto", "exact", "heuristic", "none")


class ConfigError(UsageError):
    def __init__(self, msg, field_name=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field_name:
            where.append(f"field '{field_name}'")
        super().__init__((", ".join(where) + ": " if where else "") + msg)
        self.field_name = field_name
        self.line = line


@dataclass
class RunConfig:
    name: str
    backend: dict
    measure_spec: dict
    group: Group
    measure: StepMeasure
    modulus: int = 2
    c_lamp: Fraction = Fraction(0)
    horizon: int = 1000
    trials: int = 100
    seed: int = 0
    checkpoints: list | None = None
    tsp_mode: str = "auto"
    tsp_cap: int | None = None
    return_trials: int = 0
    drift_visits: int = 0
    output: str = "lamprate-out"
    raw: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "backend": self.backend,
            "measure": self.measure_spec,
            "modulus": self.modulus,
            "c_lamp": format_fraction(self.c_lamp),
            "horizon": self.horizon,
            "trials": self.trials,
            "seed": self.seed,
            "checkpoints": "geometric" if self.checkpoints is None else list(self.checkpoints),
            "tsp": {"mode": self.tsp_mode, "cap": self.tsp_cap},
            "return_trials": self.return_trials,
            "drift_visits": self.drift_visits,
            "output": self.output,
        }


def _line_of(text: str | None, key: str) -> int | None:
    if not text:
        return None
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def parse_json(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"column {exc.colno}: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(data, dict):
        raise ConfigError("top level must be an object", line=1)
    return data


def _int(data, key, default, text, lo=None):
    v = data.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"expected an integer, got {v!r}", key, _line_of(text, key))
    if lo is not None and v < lo:
        raise ConfigError(f"must be >= {lo}", key, _line_of(text, key))
    return v


def _mu0(group: Group, spec, text):
    if spec == "uniform":
        elems = group.generators.elements
        return {x: Fraction(1, len(elems)) for x in elems}
    if not isinstance(spec, dict) or not spec:
        raise ConfigError("expected an object mapping elements to probabilities or 'uniform'",
                          "measure.mu0", _line_of(text, "mu0"))
    out = {}
    for k, p in spec.items():
        try:
            x = group.parse(k)
            out[x] = out.get(x, 0) + as_fraction(p)
        except UsageError as exc:
            raise ConfigError(str(exc), f"measure.mu0.{k}", _line_of(text, "mu0")) from exc
    return out


def build_measure(group: Group, spec: dict, modulus: int, text: str | None = None) -> StepMeasure:
    if not isinstance(spec, dict):
        raise ConfigError("expected an object", "measure", _line_of(text, "measure"))
    kind = spec.get("type")
    try:
        if kind == "walk-switch":
            return make_walk_switch(group, _mu0(group, spec.get("mu0", "uniform"), text), modulus)
        if kind == "switch-walk":
            if "p_switch" not in spec:
                raise ConfigError("missing", "measure.p_switch", _line_of(text, "measure"))
            return make_switch_walk(group, _mu0(group, spec.get("mu0", "uniform"), text),
                                    spec["p_switch"], modulus)
        if kind == "custom":
            atoms = []
            for i, a in enumerate(spec.get("atoms") or []):
                fname = f"measure.atoms[{i}]"
                if not isinstance(a, dict) or "p" not in a:
                    raise ConfigError("atom needs 'p' (and optionally 'lamps', 'move')", fname,
                                      _line_of(text, "atoms"))
                lamps = a.get("lamps", {})
                if isinstance(lamps, list):
                    lamps = {k: 1 for k in lamps}
                try:
                    lamp_map = {group.parse(k): int(v) for k, v in lamps.items()}
                    move = group.parse(a.get("move", "e"))
                except (UsageError, ValueError, TypeError) as exc:
                    raise ConfigError(str(exc), fname, _line_of(text, "atoms")) from exc
                atoms.append((lamp_map, move, a["p"]))
            if not atoms:
                raise ConfigError("custom measure needs a non-empty 'atoms' list", "measure.atoms",
                                  _line_of(text, "measure"))
            return make_custom(group, atoms, modulus)
    except ConfigError:
        raise
    except UsageError as exc:
        raise ConfigError(str(exc), "measure", _line_of(text, "measure")) from exc
    raise ConfigError(f"unknown measure type {kind!r}", "measure.type", _line_of(text, "type"))


def config_from_dict(data: dict, text: str | None = None) -> RunConfig:
    if "backend" not in data:
        raise ConfigError("missing", "backend")
    if "measure" not in data:
        raise ConfigError("missing", "measure")
    try:
        group = build_group(data["backend"])
    except UsageError as exc:
        raise ConfigError(str(exc), "backend", _line_of(text, "backend")) from exc
    modulus = _int(data, "modulus", 2, text, lo=2)
    measure = build_measure(group, data["measure"], modulus, text)
    try:
        c_lamp = as_fraction(data.get("c_lamp", 0))
    except UsageError as exc:
        raise ConfigError(str(exc), "c_lamp", _line_of(text, "c_lamp")) from exc
    if c_lamp < 0:
        raise ConfigError("must be >= 0", "c_lamp", _line_of(text, "c_lamp"))
    cps = data.get("checkpoints", "geometric")
    if cps == "geometric":
        cps = None
    elif not (isinstance(cps, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in cps)):
        raise ConfigError("expected 'geometric' or a list of integers", "checkpoints",
                          _line_of(text, "checkpoints"))
    tsp = data.get("tsp", {})
    if not isinstance(tsp, dict):
        raise ConfigError("expected an object", "tsp", _line_of(text, "tsp"))
    mode = tsp.get("mode", "auto")
    if mode not in TSP_MODES:
        raise ConfigError(f"must be one of {TSP_MODES}", "tsp.mode", _line_of(text, "mode"))
    cap = tsp.get("cap")
    if cap is not None and (not isinstance(cap, int) or cap < 0):
        raise ConfigError("expected a nonnegative integer", "tsp.cap", _line_of(text, "cap"))
    cfg = RunConfig(
        name=str(data.get("name", "run")),
        backend=data["backend"],
        measure_spec=data["measure"],
        group=group,
        measure=measure,
        modulus=modulus,
        c_lamp=c_lamp,
        horizon=_int(data, "horizon", 1000, text, lo=1),
        trials=_int(data, "trials", 100, text, lo=1),
        seed=_int(data, "seed", 0, text, lo=0),
        checkpoints=cps,
        tsp_mode=mode,
        tsp_cap=cap,
        return_trials=_int(data, "return_trials", 0, text, lo=0),
        drift_visits=_int(data, "drift_visits", 0, text, lo=0),
        output=str(data.get("output", "lamprate-out")),
        raw=data,
    )
    if cps is not None and any(c < 0 or c > cfg.horizon for c in cps):
        raise ConfigError("checkpoints must lie in [0, horizon]", "checkpoints", _line_of(text, "checkpoints"))
    return cfg


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    return config_from_dict(parse_json(text), text)


# ---------------------------------------------------------------------------
# presets

def _uniform_f2():
    return {k: "1/4" for k in ("a", "A", "b", "B")}


def _counterexample_atoms(p: Fraction):
    atoms = []
    for s in (1, 2, 3):
        for sign, w in ((1, p / 6), (-1, (1 - p) / 6)):
            move = str(sign * s)
            atoms.append({"lamps": {}, "move": move, "p": format_fraction(w)})
            atoms.append({"lamps": {"0": 1}, "move": move, "p": format_fraction(w)})
    return atoms


def _unit_lattice(dim):
    return {
        "kind": "lattice",
        "generators": [
            {"vector": [1 if j == i else 0 for j in range(dim)], "length": "1"} for i in range(dim)
        ],
    }


_PRESETS = {
    "f2-walk-switch": {
        "name": "f2-walk-switch",
        "description": "simple random walk on F2 (4-regular tree), walk-switch lamps",
        "backend": {"kind": "free_group", "rank": 2, "lengths": {"a": "1", "b": "1"}},
        "measure": {"type": "walk-switch", "mu0": _uniform_f2()},
        "c_lamp": "0",
        "horizon": 2000,
        "trials": 400,
        "seed": 20240917,
        "return_trials": 6000,
    },
    "z-counterexample-p075": {
        "name": "z-counterexample-p075",
        "description": "Z with S = {+-1,+-2,+-3}, l = (1,3,5), biased lamp walk with p = 3/4",
        "backend": {
            "kind": "lattice",
            "generators": [
                {"vector": [1], "length": "1"},
                {"vector": [2], "length": "3"},
                {"vector": [3], "length": "5"},
            ],
        },
        "measure": {"type": "custom", "atoms": _counterexample_atoms(Fraction(3, 4))},
        "c_lamp": "0",
        "horizon": 10000,
        "trials": 200,
        "seed": 20240918,
    },
    "z-srw-walk-switch": {
        "name": "z-srw-walk-switch",
        "description": "recurrent simple random walk on Z, walk-switch lamps",
        "backend": _unit_lattice(1),
        "measure": {"type": "walk-switch", "mu0": {"1": "1/2", "-1": "1/2"}},
        "c_lamp": "0",
        "horizon": 10000,
        "trials": 100,
        "seed": 20240919,
        "return_trials": 1000,
    },
    "z3-walk-switch": {
        "name": "z3-walk-switch",
        "description": "simple random walk on Z^3, walk-switch lamps",
        "backend": _unit_lattice(3),
        "measure": {"type": "walk-switch", "mu0": "uniform"},
        "c_lamp": "1",
        "horizon": 2000,
        "trials": 100,
        "seed": 20240920,
        "return_trials": 4000,
        "tsp": {"mode": "none"},
    },
    "c2c2-drift": {
        "name": "c2c2-drift",
        "description": "Z2*Z2 with an asymmetric step law; recurrent, induced drift 0",
        "backend": {"kind": "c2c2", "lengths": {"a": "1", "b": "1"}},
        "measure": {"type": "walk-switch", "mu0": {"a": "7/10", "b": "3/10"}},
        "c_lamp": "0",
        "horizon": 2000,
        "trials": 50,
        "seed": 20240921,
        "drift_visits": 100000,
    },
}


def preset_names() -> list[str]:
    return sorted(_PRESETS)


def preset(name: str) -> dict:
    """A fresh copy of a named preset document."""
    if name not in _PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(preset_names())}")
    return copy.deepcopy(_PRESETS[name])


def load_preset(name: str) -> RunConfig:
    doc = preset(name)
    doc.pop("description", None)
    return config_from_dict(doc)


__all__ = [
    "ConfigError",
    "RunConfig",
    "TSP_MODES",
    "parse_json",
    "build_measure",
    "config_from_dict",
    "load_config",
    "preset",
    "preset_names",
    "load_preset",
]
