"""Command line entry point: ``lamprate {simulate,verify-lemmas,tsp,presets}``.

Exit status: 0 on success, 1 when a simulation or a check fails, 2 on
configuration errors.  ``LAMPRATE_LOG`` sets the log level (DEBUG, INFO,
WARNING, ...; default WARNING).
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__, kernels
from .cases import (
    Degenerate,
    TABLES,
    mutate_table,
    phi_sweep,
    select_sigmas,
    validate_tables,
    verify_distance_bounds,
    verify_phi_inequality,
)
from .config import (
    ConfigError,
    load_config,
    load_preset,
    parse_json,
    preset,
    preset_names,
)
from .estimators import (
    induced_walk_drift,
    range_law,
    return_probability,
    summarize,
    run_trials,
    walk_switch_identity_check,
)
from .groups import MetricQueryTooLarge, UsageError, build_group, format_fraction
from .tsp import BRUTEFORCE_CAP, TspTooLarge, solve_tsp, tsp_bruteforce_oracle
from .walks import SimulationError

log = logging.getLogger("lamprate")


def setup_logging():
    level = os.environ.get("LAMPRATE_LOG", "WARNING").strip().upper()
    if level.isdigit():
        lvl = int(level)
    else:
        lvl = getattr(logging, level, None)
        if not isinstance(lvl, int):
            lvl = logging.WARNING
    logging.basicConfig(level=lvl, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


# ---------------------------------------------------------------------------
# simulate

def _apply_overrides(cfg, args):
    for key in ("seed", "trials", "horizon"):
        v = getattr(args, key, None)
        if v is not None:
            setattr(cfg, key, v)
    if getattr(args, "tsp_mode", None):
        cfg.tsp_mode = args.tsp_mode
    if getattr(args, "out", None):
        cfg.output = args.out
    if cfg.horizon < 100:
        raise ConfigError("must be >= 100 for rate estimation", "horizon")
    if cfg.trials < 2:
        raise ConfigError("must be >= 2", "trials")
    if cfg.checkpoints is not None and any(c > cfg.horizon for c in cfg.checkpoints):
        raise ConfigError("checkpoints must lie in [0, horizon]", "checkpoints")
    return cfg


def _estimate_row(name, est):
    row = {"name": name, "horizon": est.horizon, "trials": est.trials, "seed": est.seed,
           "c_lamp": est.c_lamp}
    for key in ("ell0", "ell_supp", "ell_ts", "ell", "range_rate"):
        e = getattr(est, key)
        row[key] = "" if e is None else repr(e.mean)
        row[key + "_lo"] = "" if e is None else repr(e.lo)
        row[key + "_hi"] = "" if e is None else repr(e.hi)
    row["heuristic_fraction"] = repr(est.heuristic_fraction)
    row["exact_grade"] = est.exact_grade
    return row


def cmd_simulate(args) -> int:
    if args.config and args.preset:
        raise ConfigError("use either --config or --preset")
    if args.config:
        cfg = load_config(args.config)
    elif args.preset:
        cfg = load_preset(args.preset)
    else:
        raise ConfigError("simulate needs --config PATH or --preset NAME")
    cfg = _apply_overrides(cfg, args)
    log.info("kernels: %s", kernels.IMPLEMENTATION)
    t0 = time.perf_counter()
    try:
        recs = run_trials(
            cfg.measure, cfg.horizon, cfg.trials, cfg.seed, jobs=args.jobs,
            checkpoints=cfg.checkpoints, tsp_mode=cfg.tsp_mode, tsp_cap=cfg.tsp_cap,
            keep_lamps=False,
        )
    except SimulationError as exc:
        print(f"simulation failed: {exc}", file=sys.stderr)
        return 1
    except MetricQueryTooLarge as exc:
        print(f"simulation failed: {exc}", file=sys.stderr)
        return 1
    est = summarize(recs, c_lamp=cfg.c_lamp, seed=cfg.seed, kind=cfg.measure.kind)
    diag = {"elapsed_seconds": round(time.perf_counter() - t0, 3), "kernels": kernels.IMPLEMENTATION}
    p_ret = None
    if cfg.return_trials:
        p_ret = return_probability(cfg.measure, horizon=cfg.horizon, trials=cfg.return_trials, seed=cfg.seed)
        diag["return_probability"] = {
            "p": p_ret.p, "lo": p_ret.lo, "hi": p_ret.hi, "successes": p_ret.successes,
            "trials": p_ret.trials, "caveat": p_ret.caveat,
        }
        if cfg.measure.kind == "walk-switch":
            rep = walk_switch_identity_check(cfg.measure, est, return_prob=p_ret)
            diag["walk_switch_identity"] = {
                "ell_supp": rep.lhs, "half_one_minus_return": rep.rhs,
                "discrepancy": rep.discrepancy, "half_width": rep.half_width,
            }
    rl = range_law(recs, p_ret)
    diag["range_law"] = {"mean": rl.rate.mean, "lo": rl.rate.lo, "hi": rl.rate.hi,
                         "one_minus_return": rl.cross_check, "discrepancy": rl.discrepancy}
    if cfg.drift_visits:
        try:
            dr = induced_walk_drift(cfg.group, dict(cfg.measure.projection), cfg.drift_visits, cfg.seed)
        except UsageError as exc:
            raise ConfigError(str(exc), "drift_visits") from exc
        diag["induced_drift"] = {
            "mean": dr.drift.mean if dr.drift else None,
            "lo": dr.drift.lo if dr.drift else None,
            "hi": dr.drift.hi if dr.drift else None,
            "visits": dr.visits, "steps": dr.steps, "censored": dr.censored,
        }
    est.extra = diag

    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "checkpoints.jsonl", "w", encoding="utf-8") as fh:
        for r in recs:
            for line in r.checkpoint_lines():
                fh.write(json.dumps(line) + "\n")
    doc = {"config": cfg.to_dict(), "estimates": est.to_dict(), "version": __version__}
    with open(out / "estimates.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
    row = _estimate_row(cfg.name, est)
    with open(out / "summary.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(row))
        w.writeheader()
        w.writerow(row)

    print(f"{cfg.name}: n={est.horizon} trials={est.trials} seed={est.seed}")
    for label, key in (("l0", "ell0"), ("l_supp", "ell_supp"), ("l_TS", "ell_ts"), ("l", "ell"),
                       ("|R_n|/n", "range_rate")):
        e = getattr(est, key)
        if e is not None:
            print(f"  {label:8s} {e.mean:.5f}  [{e.lo:.5f}, {e.hi:.5f}]")
    if est.ell_ts is not None and not est.exact_grade:
        print("  note: l_TS used heuristic tours at the horizon (upper estimate)")
    if "walk_switch_identity" in diag:
        w_ = diag["walk_switch_identity"]
        print(f"  identity l_supp - (1 - P[return])/2 = {w_['discrepancy']:+.5f} (+-{w_['half_width']:.5f})")
    if "induced_drift" in diag and diag["induced_drift"]["mean"] is not None:
        d_ = diag["induced_drift"]
        print(f"  induced drift {d_['mean']:+.5f}  [{d_['lo']:.5f}, {d_['hi']:.5f}]")
    print(f"  results in {out}/")
    return 0


# ---------------------------------------------------------------------------
# verify-lemmas

DEFAULT_ROSTER = [
    {"kind": "free_group", "rank": 2, "lengths": {"a": "1", "b": "1"}},
    {"kind": "free_group", "rank": 2, "lengths": {"a": "2", "b": "3/2"}},
    {"kind": "free_group", "rank": 3, "lengths": {"a": "1", "b": "2", "c": "5/2"}},
    {"kind": "lattice", "generators": [{"vector": [1, 0], "length": "1"}, {"vector": [0, 1], "length": "1"}]},
    {"kind": "lattice", "generators": [{"vector": [1, 0], "length": "1"}, {"vector": [0, 1], "length": "2"},
                                       {"vector": [1, 1], "length": "5/2"}]},
    {"kind": "free_product", "rank": 0, "involutions": 3, "lengths": {"a": "1", "b": "1", "c": "1"}},
    {"kind": "free_product", "rank": 1, "involutions": 1, "lengths": {"a": "2", "b": "1"}},
    {"kind": "lattice", "generators": [{"vector": [2], "length": "1"}, {"vector": [3], "length": "3/2"}]},
    {"kind": "lattice", "generators": [{"vector": [1], "length": "1"}, {"vector": [2], "length": "3/2"}]},
    {"kind": "lattice", "generators": [{"vector": [1], "length": "1"}, {"vector": [2], "length": "1/2"}]},
    {"kind": "lattice", "generators": [{"vector": [1], "length": "1"}, {"vector": [2], "length": "3"},
                                       {"vector": [3], "length": "5"}]},
    {"kind": "c2c2", "lengths": {"a": "1", "b": "1"}},
]


def cmd_verify_lemmas(args) -> int:
    doc = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                doc = parse_json(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc.strerror}") from exc
    roster = doc.get("backends", DEFAULT_ROSTER)
    assignments = int(doc.get("assignments", 100))
    seed = args.seed if args.seed is not None else int(doc.get("seed", 0))
    fault = doc.get("fault")
    failed = False

    print("== selected triples ==")
    for i, spec in enumerate(roster):
        try:
            group = build_group(spec)
        except UsageError as exc:
            raise ConfigError(str(exc), f"backends[{i}]") from exc
        tri = select_sigmas(group)
        name = json.dumps(group.describe(), sort_keys=True)
        if isinstance(tri, Degenerate):
            print(f"[degenerate] {name}\n  {tri.reason}: {tri.detail}")
            continue
        labels = ", ".join(tri.labels(group))
        extra = f", eps0={format_fraction(tri.epsilon0)}" if tri.epsilon0 is not None else ""
        print(f"case {tri.case}: sigma=({labels}), increment={format_fraction(tri.increment)}{extra}  {name}")
        if tri.note:
            print(f"  note: {tri.note}")
        for rep in (verify_distance_bounds(tri, group), verify_phi_inequality(tri, group)):
            lines = rep.lines()
            if args.verbose or not rep.ok:
                print("\n".join("  " + l for l in lines))
            else:
                print(f"  {lines[0]}  (min slack {format_fraction(rep.min_slack)})")
            failed |= not rep.ok

    print(f"== tour inequality sweeps ({assignments} random length assignments per case) ==")
    for case in ("I", "II", "III", "Z-I", "Z-II"):
        rep = phi_sweep(case, assignments, seed)
        print("\n".join(rep.lines()))
        failed |= not rep.ok

    print("== comparison tables ==")
    for case in TABLES:
        table = None
        if fault and fault.get("case") == case:
            try:
                table = mutate_table(case, int(fault["row"]) - 1, fault["column"], fault.get("scale", 2))
            except (KeyError, ValueError, IndexError, TypeError) as exc:
                raise ConfigError(f"bad fault description: {exc}", "fault") from exc
            print(f"  (fault injected: case {case}, row {fault['row']}, column {fault['column']})")
        rep = validate_tables(case, assignments, seed, table=table)
        print("\n".join(rep.lines()))
        failed |= not rep.ok

    print("RESULT:", "FAIL" if failed else "PASS")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# tsp

def cmd_tsp(args) -> int:
    path = args.config or args.instance
    if not path:
        raise ConfigError("tsp needs an instance file (positional or --config)")
    try:
        with open(path, encoding="utf-8") as fh:
            doc = parse_json(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        group = build_group(doc["backend"])
        supp = [group.parse(x) for x in doc.get("support", [])]
        target = group.parse(doc.get("target", "e"))
    except KeyError as exc:
        raise ConfigError("missing", str(exc.args[0])) from exc
    except UsageError as exc:
        raise ConfigError(str(exc), "backend/support/target") from exc
    mode = args.tsp_mode or doc.get("mode", "auto")
    cap = doc.get("cap")
    try:
        res = solve_tsp(group, supp, target, mode=mode, cap=cap)
    except TspTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("hint: rerun with --tsp-mode heuristic for an upper bound, or raise 'cap' in the instance",
              file=sys.stderr)
        return 1
    print(f"value: {format_fraction(res.value)}")
    print("order: " + (" -> ".join(group.format(x) for x in res.order) or "(none)"))
    print(f"mode: {res.mode}")
    if args.check:
        n = len(set(supp))
        if n > min(8, BRUTEFORCE_CAP):
            print(f"check skipped: {n} support points, the brute-force oracle handles at most 8")
            return 0
        oracle = tsp_bruteforce_oracle(group, supp, target)
        if res.exact and res.value == oracle:
            print(f"oracle agreement: brute force gives {format_fraction(oracle)}")
        elif not res.exact and res.value >= oracle:
            print(f"oracle comparison: heuristic {format_fraction(res.value)} >= exact {format_fraction(oracle)}")
        else:
            print(f"oracle DISAGREEMENT: brute force gives {format_fraction(oracle)}")
            return 1
    return 0


# ---------------------------------------------------------------------------
# presets

def cmd_presets(args) -> int:
    if args.dump:
        print(json.dumps(preset(args.dump), indent=2))
        return 0
    for name in preset_names():
        print(f"{name:24s} {preset(name).get('description', '')}")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lamprate", description="Rates of escape of lamplighter random walks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run trials and estimate rates")
    s.add_argument("--config", help="run configuration (JSON)")
    s.add_argument("--preset", help="use a named preset instead of --config")
    s.add_argument("--seed", type=int)
    s.add_argument("--trials", type=int)
    s.add_argument("--horizon", type=int)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--tsp-mode", choices=("auto", "exact", "heuristic"))
    s.add_argument("--out", help="output directory (overrides the config)")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify-lemmas", help="check sigma selection, distance bounds and tour inequalities")
    v.add_argument("--config", help="optional JSON with 'backends', 'assignments', 'seed', 'fault'")
    v.add_argument("--seed", type=int)
    v.add_argument("--verbose", "-v", action="store_true")
    v.set_defaults(func=cmd_verify_lemmas)

    t = sub.add_parser("tsp", help="solve one travelling-salesman instance")
    t.add_argument("instance", nargs="?", help="instance file (JSON)")
    t.add_argument("--config", help="instance file, same as the positional argument")
    t.add_argument("--tsp-mode", choices=("auto", "exact", "heuristic"))
    t.add_argument("--check", action="store_true", help="compare with the brute-force oracle")
    t.set_defaults(func=cmd_tsp)

    pr = sub.add_parser("presets", help="list or dump the built-in presets")
    pr.add_argument("--dump", metavar="NAME")
    pr.set_defaults(func=cmd_presets)
    return p


def main(argv=None) -> int:
    setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
