"""Opinion dynamics with a fixed persuader and the boomerang effect.

The persuaded agent holds an extended measure ``P`` that follows discovery
dynamics. At each step a persuader with a fixed regular opinion ``Q`` pulls
it to ``eps * P + (1 - eps) * Q`` atom by atom. ``eps < 1`` is an ordinary
convex pull toward ``Q``; ``eps > 1`` on an atom the agent has not seen
yet pushes ``P`` away from ``Q`` instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..dynamics import Split, init_extended, observe
from ..errors import ValidationError
from ..measure import EXACT_TOL, ExtendedMeasure, ValidationReport
from ..space import StateSpace


@dataclass
class EpsilonSchedule:
    """``eps[k, t]``: ``latent`` on unseen atoms, ``actual`` on seen ones, unless overridden."""

    latent: float = 1.5
    actual: float = 0.8
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        for v in (self.latent, self.actual, *self.overrides.values()):
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"epsilon {v!r} must be finite and >= 0")

    def values(self, space: StateSpace, split: Split, t: int) -> np.ndarray:
        eps = np.array([self.actual if i in split.actual else self.latent for i in range(space.size)])
        for (label, when), v in self.overrides.items():
            if when == t and label in space:
                eps[space.index(label)] = v
        return eps


@dataclass
class OpinionConfig:
    persuader: ExtendedMeasure
    persuaded_oracle: ExtendedMeasure
    split0: Split
    epsilon_schedule: EpsilonSchedule = field(default_factory=EpsilonSchedule)
    horizon: int = 10
    observations: list | None = None
    seed: int = 0

    def __post_init__(self):
        q = self.persuader.atoms
        if np.any(q < 0) or abs(math.fsum(q) - 1.0) > EXACT_TOL:
            raise ValidationError("persuader Q must be a regular probability")
        if self.persuader.space != self.persuaded_oracle.space:
            raise ValueError("persuader and persuaded oracle live on different spaces")
        if self.horizon < 0:
            raise ValueError("horizon must be >= 0")

    @property
    def space(self) -> StateSpace:
        return self.persuader.space

    @classmethod
    def from_dict(cls, d: dict) -> OpinionConfig:
        space = StateSpace(tuple(d["labels"]))
        eps = d.get("epsilon", {})
        overrides = {(o["atom"], int(o["t"])): float(o["epsilon"]) for o in eps.get("overrides", [])}
        return cls(
            persuader=ExtendedMeasure(space, d["persuader"]),
            persuaded_oracle=ExtendedMeasure(space, d["persuaded_oracle"]),
            split0=Split.initial(space, d["actual"]),
            epsilon_schedule=EpsilonSchedule(
                float(eps.get("latent", 1.5)), float(eps.get("actual", 0.8)), overrides
            ),
            horizon=int(d.get("horizon", 10)),
            observations=d.get("observations"),
            seed=int(d.get("seed", 0)),
        )

    def to_dict(self) -> dict:
        sched = self.epsilon_schedule
        return {
            "labels": list(self.space.labels),
            "persuader": self.persuader.atoms.tolist(),
            "persuaded_oracle": self.persuaded_oracle.atoms.tolist(),
            "actual": self.space.labels_of(self.split0.actual),
            "epsilon": {
                "latent": sched.latent,
                "actual": sched.actual,
                "overrides": [{"atom": k, "t": t, "epsilon": v} for (k, t), v in sched.overrides.items()],
            },
            "horizon": self.horizon,
            "observations": self.observations,
            "seed": self.seed,
        }


def relaxed_report(atoms: np.ndarray) -> ValidationReport:
    """Atoms in [-1, 1] and total <= 1; the absolute-sum residual is recorded, not enforced."""
    report = ValidationReport()
    bad = [i for i, a in enumerate(atoms) if not -1.0 <= a <= 1.0]
    report.add("atoms in [-1,1]", not bad, float(max((abs(atoms[i]) - 1 for i in bad), default=0.0)),
               "" if not bad else f"offending atoms {bad}")
    total = math.fsum(atoms)
    report.add("total <= 1", total <= 1.0 + EXACT_TOL, max(0.0, total - 1.0))
    report.add("sum |atoms| = 1 (recorded only)", True, abs(math.fsum(np.abs(atoms)) - 1.0))
    return report


def influence(p: ExtendedMeasure, q: ExtendedMeasure, eps) -> ExtendedMeasure:
    """``eps * P + (1 - eps) * Q`` per atom, checked in relaxed mode."""
    eps = np.asarray(eps, dtype=np.float64)
    atoms = eps * p.atoms + (1.0 - eps) * q.atoms
    report = relaxed_report(atoms)
    problems = []
    if not report.get("atoms in [-1,1]").passed:
        labels = [p.space.labels[i] for i, a in enumerate(atoms) if not -1.0 <= a <= 1.0]
        problems.append(f"atoms {labels} outside [-1,1]")
    if not report.get("total <= 1").passed:
        problems.append(f"total {math.fsum(atoms)!r} > 1")
    if problems:
        raise ValidationError("influenced measure is not valid: " + "; ".join(problems), report)
    return ExtendedMeasure(p.space, atoms, strict=False)


def influence_step(p: ExtendedMeasure, cfg: OpinionConfig, t: int, split: Split | None = None) -> ExtendedMeasure:
    """One persuasion step with ``eps`` taken from the config's schedule at ``(split, t)``."""
    split = cfg.split0 if split is None else split
    return influence(p, cfg.persuader, cfg.epsilon_schedule.values(cfg.space, split, t))


@dataclass
class BoomerangStep:
    t: int
    split: Split
    prior: ExtendedMeasure
    epsilon: np.ndarray
    influenced: ExtendedMeasure
    observed: object = None

    @property
    def displacement(self) -> np.ndarray:
        return self.influenced.atoms - self.prior.atoms


@dataclass
class BoomerangResult:
    config: OpinionConfig
    steps: list
    identity_residual: float

    @property
    def final(self) -> ExtendedMeasure:
        return self.steps[-1].influenced

    def rows(self) -> list:
        q = self.config.persuader.atoms
        labels = self.config.space.labels
        out = []
        for s in self.steps:
            disp = s.displacement
            for i, label in enumerate(labels):
                out.append(
                    {
                        "t": s.t,
                        "atom": label,
                        "p": float(s.prior.atoms[i]),
                        "q": float(q[i]),
                        "epsilon": float(s.epsilon[i]),
                        "influenced": float(s.influenced.atoms[i]),
                        "displacement": float(disp[i]),
                    }
                )
        return out


def _stream(cfg: OpinionConfig):
    if cfg.observations is not None:
        yield from cfg.observations
        return
    rng = np.random.default_rng(cfg.seed)
    urn = list(cfg.split0.latent.indices)
    while urn:
        yield cfg.space.labels[urn.pop(int(rng.integers(len(urn))))]


def run_boomerang(cfg: OpinionConfig) -> BoomerangResult:
    """Influence at ``t = 0``, then observe-and-influence for ``t = 1..horizon``.

    The persuaded belief ``P_t`` follows discovery only; the influenced
    ``P_hat_t`` is what the persuader's pull produces from it. Each step
    checks ``P_hat - P = (eps - 1)(P - Q)`` atom by atom.
    """
    q = cfg.persuader
    split = cfg.split0
    p = init_extended(cfg.persuaded_oracle, split)
    stream = _stream(cfg)
    steps, worst = [], 0.0
    for t in range(cfg.horizon + 1):
        label = None
        if t > 0:
            label = next(stream, None)
            if label is None:
                split = split.advance()
            else:
                p, split = observe(p, split, label)
        eps = cfg.epsilon_schedule.values(cfg.space, split, t)
        hat = influence(p, q, eps)
        resid = float(np.max(np.abs((hat.atoms - p.atoms) - (eps - 1.0) * (p.atoms - q.atoms))))
        worst = max(worst, resid)
        if resid > EXACT_TOL:
            raise ValidationError(f"boomerang identity off by {resid!r} at t={t}")
        steps.append(BoomerangStep(t, split, p, eps, hat, label))
    return BoomerangResult(cfg, steps, worst)
