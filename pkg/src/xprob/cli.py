"""Batch command line: ``xprob <command> --config FILE --out DIR``.

Exit codes: 0 success, 2 validation failure, 3 restart required (an
observation fell outside the state space), 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path


from . import io
from .apps import OpinionConfig, SpeciesConfig, run_boomerang, run_species
from .coherence import bettable_family, dutch_book_for_prices, find_dutch_book, lower_dutch_book
from .credal import CredalSet, Envelope, core, validate_capacity
from .dynamics import DiscoveryProcess, Split, run_discovery
from .errors import RestartRequired, ValidationError
from .measure import ExtendedMeasure
from .space import StateSpace

EXIT_OK, EXIT_INVALID, EXIT_RESTART, EXIT_IO = 0, 2, 3, 4
COMMANDS = ("validate", "discover", "envelopes", "core", "species", "boomerang", "coherence")
LOG_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}

log = logging.getLogger("xprob")


@dataclass
class RunConfig:
    command: str
    input_path: Path
    output_dir: Path
    seed: int | None = None
    format: str = "csv"
    strict: bool = True


def _measure(data, strict):
    return io.measure_from_dict(data, strict=strict)[0]


def _credal(data, strict) -> CredalSet:
    space = StateSpace(tuple(data["labels"]))
    members = [ExtendedMeasure(space, m, strict=strict) for m in data["members"]]
    split = Split.initial(space, data["actual"]) if "actual" in data else None
    c = CredalSet(members, split)
    for label in data.get("observations", []):
        c = c.observe(label)
    return c


def _envelope(data, strict) -> Envelope:
    if isinstance(data, dict) and "members" in data:
        return Envelope.from_credal(_credal(data, strict))
    return io.envelope_from_json(data)


def cmd_validate(cfg: RunConfig, data) -> tuple:
    p, report = io.measure_from_dict(data, strict=False)
    io.save_report(cfg.output_dir / "validation.json", report, labels=list(p.space.labels))
    resid = report.get("iii* sum |a| = 1").residual
    summary = f"validate: {'ok' if report.ok else 'FAILED'}, iii* residual {resid:.3g}"
    if not report.ok:
        summary += "; " + "; ".join(c.name for c in report.failed())
        return (EXIT_INVALID if cfg.strict else EXIT_OK), summary
    return EXIT_OK, summary


def cmd_discover(cfg: RunConfig, data) -> tuple:
    space = StateSpace(tuple(data["labels"]))
    oracle = ExtendedMeasure(space, data["oracle"])
    split0 = Split.initial(space, data["actual"])
    true_space = space.event(data.get("true_space", space.labels))
    process = DiscoveryProcess(
        true_space=true_space,
        replacement=bool(data.get("replacement", False)),
        seed=cfg.seed if cfg.seed is not None else int(data.get("seed", 0)),
        schedule=data.get("schedule"),
        include_actual=bool(data.get("include_actual", False)),
    )
    traj = run_discovery(oracle, split0, process, int(data.get("max_steps", 1000)),
                         stop_when_discovered=bool(data.get("stop_when_discovered", process.replacement)))
    if cfg.format == "json":
        io.save_trajectory_json(cfg.output_dir / "trajectory.json", traj)
    else:
        io.save_trajectory_csv(cfg.output_dir / "trajectory.csv", traj)
    return EXIT_OK, (
        f"discover: {len(traj) - 1} steps, final d_etv={traj.d_etv[-1]!r}, scenario={traj.scenario}, "
        f"discovery_time={traj.discovery_time}"
    )


def cmd_envelopes(cfg: RunConfig, data) -> tuple:
    env = _envelope(data, cfg.strict)
    report = validate_capacity(env)
    rows = [{"event": " ".join(map(str, ev)), "lower": lo, "upper": up} for ev, lo, up in env.rows()]
    if cfg.format == "json":
        io.save_envelope(cfg.output_dir / "envelope.json", env)
    else:
        io.write_csv(cfg.output_dir / "envelope.csv", rows, ("event", "lower", "upper"))
    io.save_report(cfg.output_dir / "capacity.json", report, source=env.source)
    failed = [c.name for c in report.failed()]
    return EXIT_OK, f"envelopes: {len(rows)} events, capacity checks failed: {failed or 'none'}"


def cmd_core(cfg: RunConfig, data) -> tuple:
    env = _envelope(data, cfg.strict)
    rep = core(env)
    io.save_core_report(cfg.output_dir / "core.json", rep, env)
    return EXIT_OK, f"core: nonempty={rep.nonempty} ({rep.method}), coherent={rep.coherent}"


def cmd_species(cfg: RunConfig, data) -> tuple:
    if cfg.seed is not None:
        data = {**data, "seed": cfg.seed}
    res = run_species(SpeciesConfig.from_dict(data))
    if cfg.format == "json":
        io.write_json(cfg.output_dir / "intervals.json", res.table.to_rows())
        io.save_trajectory_json(cfg.output_dir / "trajectory.json", res.trajectory)
    else:
        io.save_intervals_csv(cfg.output_dir / "intervals.csv", res.table)
        io.save_trajectory_csv(cfg.output_dir / "trajectory.csv", res.trajectory)
    return EXIT_OK, (
        f"species: discovered {len(res.discovered)} species, scenario={res.trajectory.scenario}, "
        f"{len(res.table.rows)} interval rows"
    )


def cmd_boomerang(cfg: RunConfig, data) -> tuple:
    if cfg.seed is not None:
        data = {**data, "seed": cfg.seed}
    res = run_boomerang(OpinionConfig.from_dict(data))
    if cfg.format == "json":
        io.write_json(cfg.output_dir / "boomerang.json", res.rows())
    else:
        io.save_boomerang_csv(cfg.output_dir / "boomerang.csv", res)
    return EXIT_OK, f"boomerang: {len(res.steps)} steps, identity residual {res.identity_residual:.3g}"


def cmd_coherence(cfg: RunConfig, data) -> tuple:
    space = StateSpace(tuple(data["labels"]))
    if "atoms" in data:
        p = _measure(data, cfg.strict)
        book = find_dutch_book(p)
        extra = {"input": "measure", "bettable_atoms": space.labels_of(bettable_family(p))}
    elif "elicited" in data:
        env = io.envelope_from_json(data)
        book = lower_dutch_book(env.lower_values, space.size, sure_loss_only=bool(data.get("sure_loss_only")))
        extra = {"input": "lower"}
    elif "bets" in data:
        events = [space.event(b["event"]) for b in data["bets"]]
        book = dutch_book_for_prices(events, [b["value"] for b in data["bets"]], space.size)
        extra = {"input": "prices"}
    else:
        raise ValidationError('coherence input needs "atoms", "elicited" or "bets"')
    out = {"coherent": book is None, **extra, "dutch_book": None if book is None else book.to_dict(space)}
    io.write_json(cfg.output_dir / "coherence.json", out)
    if book is None:
        return EXIT_OK, "coherence: no Dutch book found"
    return EXIT_OK, f"coherence: Dutch book found ({book.kind}), worst payoff {book.worst_payoff!r}"


HANDLERS = {
    "validate": cmd_validate,
    "discover": cmd_discover,
    "envelopes": cmd_envelopes,
    "core": cmd_core,
    "species": cmd_species,
    "boomerang": cmd_boomerang,
    "coherence": cmd_coherence,
}


def dispatch(cfg: RunConfig) -> int:
    try:
        data = io.read_json(cfg.input_path)
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"{cfg.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        code, summary = HANDLERS[cfg.command](cfg, data)
    except RestartRequired as exc:
        print(f"{cfg.command}: restart required, observed label {exc.label!r} is outside the state space")
        return EXIT_RESTART
    except (ValidationError, ValueError, KeyError, TypeError) as exc:
        print(f"{cfg.command}: validation failure: {exc}")
        return EXIT_INVALID
    except OSError as exc:
        print(f"{cfg.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(summary)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xprob", description="Extended probability toolkit (batch mode).")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, help=f"run the {name} pipeline")
        sp.add_argument("--config", required=True, type=Path, help="input JSON file")
        sp.add_argument("--out", default=Path("."), type=Path, help="output directory")
        sp.add_argument("--seed", type=int, default=None, help="RNG seed (overrides the config)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        mode = sp.add_mutually_exclusive_group()
        mode.add_argument("--strict", dest="strict", action="store_true", default=True)
        mode.add_argument("--relaxed", dest="strict", action="store_false")
    return parser


def main(argv=None) -> int:
    level = os.environ.get("XPROB_LOG", "quiet").lower()
    logging.basicConfig(level=LOG_LEVELS.get(level, logging.ERROR), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, args.config, args.out, args.seed, args.format, args.strict)
    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
