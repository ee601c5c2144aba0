"""Species sampling with a family of geometric priors.

States are species counts ``1..N_max`` (a truncation of the naturals). The
agent starts believing ``{1..n}`` is the actual space, discovers the true
``{1..m}`` by sampling, maps each limiting extended measure to its induced
regular probability and reports [min, max] posterior intervals over the
prior family after conditioning on events.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ..dynamics import DiscoveryProcess, Split, Trajectory, induced_regular, run_discovery
from ..measure import ExtendedMeasure, evaluate
from ..space import StateSpace

log = logging.getLogger(__name__)


@dataclass
class SpeciesConfig:
    n_prior: int
    n_max: int
    prior_family: list
    true_m: int
    seed: int = 0
    replacement: bool = False
    schedule: list | None = None
    conditioning_events: list = field(default_factory=list)
    max_steps: int = 100_000

    def __post_init__(self):
        if not 1 <= self.n_prior <= self.true_m <= self.n_max:
            raise ValueError("need 1 <= n_prior <= true_m <= n_max")
        if not self.prior_family:
            raise ValueError("prior_family must hold at least one geometric parameter")
        for p in self.prior_family:
            if not 0 < p < 1:
                raise ValueError(f"geometric parameter {p} outside (0, 1)")

    @classmethod
    def from_dict(cls, d: dict) -> SpeciesConfig:
        return cls(
            n_prior=int(d["n_prior"]),
            n_max=int(d["n_max"]),
            prior_family=[float(p) for p in d["prior_family"]],
            true_m=int(d["true_m"]),
            seed=int(d.get("seed", 0)),
            replacement=bool(d.get("replacement", False)),
            schedule=d.get("schedule"),
            conditioning_events=[list(e) for e in d.get("conditioning_events", [])],
            max_steps=int(d.get("max_steps", 100_000)),
        )

    def to_dict(self) -> dict:
        return {
            "n_prior": self.n_prior,
            "n_max": self.n_max,
            "prior_family": list(self.prior_family),
            "true_m": self.true_m,
            "seed": self.seed,
            "replacement": self.replacement,
            "schedule": self.schedule,
            "conditioning_events": [list(e) for e in self.conditioning_events],
            "max_steps": self.max_steps,
        }


@dataclass(frozen=True)
class IntervalRow:
    state: int
    conditioning: tuple
    lower: float
    upper: float
    n_members_used: int

    @property
    def event(self) -> str:
        return f"{self.state}|{' '.join(str(x) for x in self.conditioning)}"


@dataclass
class IntervalTable:
    rows: list

    def lookup(self, state, conditioning) -> IntervalRow:
        key = tuple(conditioning)
        for r in self.rows:
            if r.state == state and r.conditioning == key:
                return r
        raise KeyError((state, key))

    def to_rows(self) -> list:
        return [
            {"event": r.event, "lower": r.lower, "upper": r.upper, "n_members_used": r.n_members_used}
            for r in self.rows
        ]


@dataclass
class SpeciesResult:
    space: StateSpace
    trajectories: list
    induced: list
    table: IntervalTable
    tail_mass: list
    discovered: list

    @property
    def trajectory(self) -> Trajectory:
        return self.trajectories[0]

    def __iter__(self):
        # unpacks as ``trajectory, table``
        yield self.trajectory
        yield self.table


def geometric_oracle(p: float, space: StateSpace) -> tuple:
    """Geom(p) on ``1..N_max`` renormalized; returns ``(measure, discarded tail mass)``."""
    k = np.asarray(space.labels, dtype=np.float64)
    pmf = p * (1.0 - p) ** (k - 1.0)
    total = math.fsum(pmf)
    return ExtendedMeasure(space, pmf / total), (1.0 - p) ** space.size


def run_species(cfg: SpeciesConfig) -> SpeciesResult:
    space = StateSpace.naturals(cfg.n_max)
    split0 = Split.initial(space, range(1, cfg.n_prior + 1))
    process = DiscoveryProcess(
        true_space=space.event(range(1, cfg.true_m + 1)),
        replacement=cfg.replacement,
        seed=cfg.seed,
        schedule=cfg.schedule,
    )
    trajectories, induced, tails = [], [], []
    for p in cfg.prior_family:
        oracle, tail = geometric_oracle(p, space)
        traj = run_discovery(oracle, split0, process, cfg.max_steps, stop_when_discovered=cfg.replacement)
        trajectories.append(traj)
        induced.append(induced_regular(traj.final, traj.final_split.actual))
        tails.append(tail)

    discovered = space.labels_of(trajectories[0].final_split.actual)
    conditioning = cfg.conditioning_events or [discovered]
    rows = []
    for cond in conditioning:
        b = space.event(cond)
        key = tuple(space.labels_of(b))
        posts = []
        for k, pt in enumerate(induced):
            pb = evaluate(pt, b)
            if pb == 0.0:
                log.warning("member %d (p=%s) gives the conditioning event %s probability 0; dropped",
                            k, cfg.prior_family[k], key)
                continue
            posts.append(pt.atoms / pb)
        for i in b.indices:
            label = space.labels[i]
            if label not in discovered:
                continue
            vals = [post[i] for post in posts]
            lo = float(min(vals)) if vals else float("nan")
            hi = float(max(vals)) if vals else float("nan")
            rows.append(IntervalRow(label, key, lo, hi, len(vals)))
    return SpeciesResult(space, trajectories, induced, IntervalTable(rows), tails, discovered)
