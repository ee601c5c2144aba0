"""File formats: JSON for measures, envelopes, configs and reports; tidy CSV for tables.

Writers are deterministic (fixed key order, ``repr`` floats, ``\\n`` line
endings) so the same inputs always give byte-identical files, and every
writer has a loader that reads its output back without loss.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .credal import CoreReport, Envelope
from .dynamics import Trajectory
from .errors import ValidationError
from .measure import ExtendedMeasure, ValidationReport, validate
from .space import StateSpace

TRAJECTORY_COLUMNS = ("step", "observed_label", "flipped", "p_omega_total", "d_etv_to_limit")
INTERVAL_COLUMNS = ("event", "lower", "upper", "n_members_used")
BOOMERANG_COLUMNS = ("t", "atom", "p", "q", "epsilon", "influenced", "displacement")


def _clean(obj):
    """Numpy scalars/arrays to plain Python; NaN to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return None if math.isnan(x) else x
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps(obj), encoding="utf-8", newline="\n")
    return path


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return str(v)


def write_csv(path, rows, columns) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r[c]) for c in columns])
    return path


def read_csv(path) -> list:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def _labels(raw) -> tuple:
    out = []
    for x in raw:
        if isinstance(x, list):
            raise ValidationError(f"label {x!r} is not a scalar")
        out.append(x)
    return tuple(out)


# ---- measures

def measure_to_dict(p: ExtendedMeasure) -> dict:
    return {"labels": list(p.space.labels), "atoms": [float(a) for a in p.atoms]}


def measure_from_dict(d: dict, strict: bool = True) -> tuple:
    """Returns ``(measure, report)``; strict mode raises on a failed report."""
    if "labels" not in d or "atoms" not in d:
        raise ValidationError('measure JSON needs "labels" and "atoms"')
    space = StateSpace(_labels(d["labels"]))
    p = ExtendedMeasure(space, d["atoms"], strict=False)
    report = validate(p)
    if strict and not report.ok:
        raise ValidationError(
            "not an extended probability measure: " + "; ".join(str(c) for c in report.failed()), report
        )
    return p, report


def save_measure(path, p: ExtendedMeasure) -> Path:
    return write_json(path, measure_to_dict(p))


def load_measure(path, strict: bool = True) -> tuple:
    return measure_from_dict(read_json(path), strict)


# ---- elicited envelopes

def envelope_from_json(data) -> Envelope:
    """Either a bare array of ``{event, lower, upper}`` rows or ``{"labels", "elicited"}``."""
    if isinstance(data, dict):
        labels, rows = _labels(data["labels"]), data["elicited"]
    else:
        rows = data
        seen = []
        for r in rows:
            for x in r["event"]:
                if x not in seen:
                    seen.append(x)
        try:
            labels = tuple(sorted(seen))
        except TypeError:
            labels = tuple(seen)
    space = StateSpace(labels)
    return Envelope.elicited(space, [(r["event"], r["lower"], r["upper"]) for r in rows])


def envelope_to_json(env: Envelope, events=None) -> dict:
    """Rows for ``events`` (default: every event), with the labels so the space is explicit."""
    space = env.space
    lo, up = env.lower_values, env.upper_values
    evs = list(space.events()) if events is None else [space.event(e) for e in events]
    return {
        "labels": list(space.labels),
        "elicited": [
            {"event": space.labels_of(e), "lower": float(lo[e.mask]), "upper": float(up[e.mask])} for e in evs
        ],
    }


def load_envelope(path) -> Envelope:
    return envelope_from_json(read_json(path))


def save_envelope(path, env: Envelope, events=None) -> Path:
    return write_json(path, envelope_to_json(env, events))


# ---- trajectories

def save_trajectory_csv(path, traj: Trajectory) -> Path:
    return write_csv(path, traj.rows(), TRAJECTORY_COLUMNS)


def load_trajectory_csv(path) -> list:
    out = []
    for r in read_csv(path):
        out.append(
            {
                "step": int(r["step"]),
                "observed_label": r["observed_label"],
                "flipped": r["flipped"] == "true",
                "p_omega_total": float(r["p_omega_total"]),
                "d_etv_to_limit": float(r["d_etv_to_limit"]),
            }
        )
    return out


def trajectory_to_dict(traj: Trajectory) -> dict:
    space = traj.final.space
    return {
        "labels": list(space.labels),
        "scenario": traj.scenario,
        "agent_scenario": traj.agent_scenario,
        "discovery_time": traj.discovery_time,
        "target": space.labels_of(traj.target) if traj.target is not None else None,
        "limit": [float(a) for a in traj.limit.atoms],
        "steps": [
            {
                "step": t,
                "observed_label": obs,
                "flipped": fl,
                "actual": space.labels_of(s.actual),
                "atoms": [float(a) for a in p.atoms],
                "d_etv_to_limit": d,
            }
            for t, (s, p, obs, fl, d) in enumerate(
                zip(traj.splits, traj.measures, traj.observations, traj.flipped, traj.d_etv)
            )
        ],
    }


def save_trajectory_json(path, traj: Trajectory) -> Path:
    return write_json(path, trajectory_to_dict(traj))


def load_trajectory_json(path) -> dict:
    """Atom history as a dict; ``atoms`` become ``ExtendedMeasure`` objects."""
    d = read_json(path)
    space = StateSpace(_labels(d["labels"]))
    for s in d["steps"]:
        s["measure"] = ExtendedMeasure(space, s["atoms"])
    d["space"] = space
    return d


# ---- reports and tables

def save_core_report(path, report: CoreReport, env: Envelope) -> Path:
    return write_json(path, report.to_dict(env.space, env.lower_values))


def save_report(path, report: ValidationReport, **extra) -> Path:
    return write_json(path, {**report.to_dict(), **extra})


def save_intervals_csv(path, table) -> Path:
    return write_csv(path, table.to_rows(), INTERVAL_COLUMNS)


def load_intervals_csv(path) -> list:
    return [
        {
            "event": r["event"],
            "lower": float(r["lower"]),
            "upper": float(r["upper"]),
            "n_members_used": int(r["n_members_used"]),
        }
        for r in read_csv(path)
    ]


def save_boomerang_csv(path, result) -> Path:
    return write_csv(path, result.rows(), BOOMERANG_COLUMNS)


def load_boomerang_csv(path) -> list:
    return [
        {"t": int(r["t"]), "atom": r["atom"], **{c: float(r[c]) for c in BOOMERANG_COLUMNS[2:]}}
        for r in read_csv(path)
    ]
