"""Latent/actual splits and discovery-driven updating.

At time ``t`` the state space is split into the *actual* part (states seen
so far) and the *latent* part. Extended measures give actual atoms their
oracle mass and latent atoms the negated oracle mass. Observing a latent
state flips the sign of its atom and moves it to the actual part; observing
an actual state changes nothing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .errors import RestartRequired, SpaceTooLargeError, ValidationError
from .measure import EXACT_TOL, ExtendedMeasure, ValidationReport, conditional, evaluate, same_space
from .space import Event, StateSpace


@dataclass(frozen=True)
class Split:
    time: int
    actual: Event
    latent: Event

    def __post_init__(self):
        if self.time < 0:
            raise ValueError("time must be >= 0")
        if self.actual.size != self.latent.size:
            raise ValueError("actual and latent parts live on different spaces")
        if self.actual.mask & self.latent.mask:
            raise ValueError("actual and latent parts overlap")
        if (self.actual | self.latent).mask != (1 << self.actual.size) - 1:
            raise ValueError("actual and latent parts do not cover the space")
        if self.time == 0 and not self.actual:
            raise ValueError("the actual part must be nonempty at t=0")

    @classmethod
    def initial(cls, space: StateSpace, actual_labels: Iterable) -> Split:
        actual = space.event(actual_labels)
        return cls(0, actual, actual.complement())

    def advance(self, discovered_index: int | None = None) -> Split:
        if discovered_index is None or discovered_index in self.actual:
            return Split(self.time + 1, self.actual, self.latent)
        bit = Event(1 << discovered_index, self.actual.size)
        return Split(self.time + 1, self.actual | bit, self.latent - bit)


@dataclass(frozen=True)
class DiscoveryProcess:
    """Urn over the (hidden) true state space.

    Without replacement the urn holds the true states that are not yet
    actual, so every draw is a discovery; ``include_actual=True`` also
    puts the already-actual true states in the urn. With replacement the
    urn holds every true state. ``schedule`` replaces the urn with a fixed
    list of observed labels.
    """

    true_space: Event
    replacement: bool = False
    seed: int = 0
    schedule: tuple | None = None
    include_actual: bool = False

    def __post_init__(self):
        if not self.true_space:
            raise ValueError("true_space must be nonempty")
        if self.schedule is not None:
            object.__setattr__(self, "schedule", tuple(self.schedule))


@dataclass
class Trajectory:
    splits: list
    measures: list
    observations: list
    flipped: list
    d_etv: list
    limit: ExtendedMeasure
    discovery_time: int | None = None
    scenario: str = "undecided"
    agent_scenario: str = "undecided"
    target: Event | None = None

    def __len__(self):
        return len(self.measures)

    @property
    def final(self) -> ExtendedMeasure:
        return self.measures[-1]

    @property
    def final_split(self) -> Split:
        return self.splits[-1]

    def rows(self) -> list:
        """Tidy per-step rows: step, observed_label, flipped, p_omega_total, d_etv_to_limit."""
        out = []
        for t, (p, obs, fl, d) in enumerate(zip(self.measures, self.observations, self.flipped, self.d_etv)):
            out.append(
                {
                    "step": t,
                    "observed_label": "" if obs is None else obs,
                    "flipped": fl,
                    "p_omega_total": p.total,
                    "d_etv_to_limit": d,
                }
            )
        return out


def _check_oracle(oracle: ExtendedMeasure) -> None:
    if np.any(oracle.atoms < 0) or abs(math.fsum(oracle.atoms) - 1.0) > EXACT_TOL:
        raise ValidationError("oracle must be a regular probability (atoms >= 0, sum 1)")


def init_extended(oracle: ExtendedMeasure, split: Split) -> ExtendedMeasure:
    """Oracle mass on actual states, negated oracle mass on latent states."""
    _check_oracle(oracle)
    if split.actual.size != oracle.space.size:
        raise ValueError("split and oracle live on different spaces")
    sign = np.array([1.0 if i in split.actual else -1.0 for i in range(oracle.space.size)])
    return ExtendedMeasure(oracle.space, sign * oracle.atoms)


def observe(p: ExtendedMeasure, split: Split, label) -> tuple:
    """Update after observing ``label``; returns ``(measure, split)``.

    A latent observation flips that atom to ``|a|`` and makes it actual; an
    actual one leaves the measure as is. Labels outside the space raise
    :class:`RestartRequired`.
    """
    if label not in p.space:
        raise RestartRequired(label)
    i = p.space.index(label)
    if i in split.latent:
        atoms = p.atoms.copy()
        atoms[i] = abs(atoms[i])
        return p.with_atoms(atoms), split.advance(i)
    return p, split.advance()


def eval_by_partition(p: ExtendedMeasure, split: Split, event) -> float:
    """``P(A)`` rebuilt from conditionals on the nonzero singletons of each part."""
    a = p.space.event(event)
    terms = []
    for part in (split.actual, split.latent):
        for i in part.indices:
            e = Event(1 << i, a.size)
            pe = evaluate(p, e)
            if pe != 0.0 and abs(pe) > EXACT_TOL:
                terms.append(conditional(p, a, e) * pe)
            elif pe != 0.0:
                # below the conditioning threshold the conditional is 0 or 1 all the same
                terms.append(pe if i in a else 0.0)
    return math.fsum(terms)


def sign_conditions(p: ExtendedMeasure, split: Split, tol: float = EXACT_TOL) -> ValidationReport:
    """Events inside the actual part must be in [0,1], inside the latent part in [-1,0]."""
    report = ValidationReport()
    act = p.atoms[list(split.actual.indices)]
    lat = p.atoms[list(split.latent.indices)]
    bad_act = float(max(0.0, -act.min(initial=0.0), math.fsum(act) - 1.0))
    bad_lat = float(max(0.0, lat.max(initial=0.0), -1.0 - math.fsum(lat)))
    report.add("actual events in [0,1]", bad_act <= tol, bad_act)
    report.add("latent events in [-1,0]", bad_lat <= tol, bad_lat)
    return report


def critical_events(members: Iterable[ExtendedMeasure], split: Split, n_cap: int = 16) -> list:
    """Events whose latent part exactly offsets their actual part under every member."""
    members = list(members)
    n = members[0].space.size
    if n > n_cap:
        raise SpaceTooLargeError(f"N={n} exceeds the enumeration cap {n_cap}")
    keep = np.ones(1 << n, dtype=bool)
    act_mask = np.array([i in split.actual for i in range(n)])
    for p in members:
        plus = kernels.subset_sums(np.where(act_mask, p.atoms, 0.0))
        minus = kernels.subset_sums(np.where(act_mask, 0.0, p.atoms))
        keep &= np.abs(minus + plus) <= EXACT_TOL
    return [Event(int(m), n) for m in np.flatnonzero(keep)]


def d_etv(p: ExtendedMeasure, q: ExtendedMeasure) -> float:
    """Extended total variation ``sup_A |P(A) - Q(A)|``.

    The sup is attained on the set of positive differences or on the set of
    negative ones, so it is the larger of those two sums.
    """
    same_space(p, q)
    d = p.atoms - q.atoms
    return max(math.fsum(d[d > 0]), -math.fsum(d[d < 0]))


def d_etv_bruteforce(p: ExtendedMeasure, q: ExtendedMeasure) -> float:
    """The same distance by walking all ``2^N`` events."""
    same_space(p, q)
    return float(kernels.max_abs_subset_sum(np.ascontiguousarray(p.atoms - q.atoms)))


def limit_measure(oracle: ExtendedMeasure, split0: Split, true_space: Event) -> ExtendedMeasure:
    """Limit object: oracle mass on everything ever discovered, negated elsewhere."""
    return init_extended(oracle, Split(0, split0.actual | true_space, (split0.actual | true_space).complement()))


def induced_regular(p: ExtendedMeasure, discovered) -> ExtendedMeasure:
    """Ratio-preserving regular probability ``c * P`` on ``discovered``, ``c = 1 / P(discovered)``."""
    d = p.space.event(discovered)
    outside = [p.atoms[i] for i in d.complement().indices]
    if any(a > 0 for a in outside):
        raise ValidationError("atoms outside the discovered set must be <= 0")
    norm = evaluate(p, d)
    if not norm > 0:
        raise ValidationError(f"normalizer P(discovered) = {norm!r} is not positive")
    inside = np.array([i in d for i in range(p.space.size)])
    return ExtendedMeasure(p.space, np.where(inside, p.atoms / norm, 0.0))


def _observation_stream(process: DiscoveryProcess, space: StateSpace, split0: Split, max_steps: int):
    if process.schedule is not None:
        yield from process.schedule[:max_steps]
        return
    rng = np.random.default_rng(process.seed)
    if process.replacement:
        urn = list(process.true_space.indices)
        for _ in range(max_steps):
            yield space.labels[urn[int(rng.integers(len(urn)))]]
        return
    pool = process.true_space if process.include_actual else process.true_space - split0.actual
    urn = list(pool.indices)
    for _ in range(max_steps):
        if not urn:
            return
        yield space.labels[urn.pop(int(rng.integers(len(urn))))]


def run_discovery(
    oracle: ExtendedMeasure,
    split0: Split,
    process: DiscoveryProcess,
    max_steps: int = 1000,
    stop_when_discovered: bool = False,
) -> Trajectory:
    """Simulate discovery from ``split0`` and record the measure path.

    The hidden ``true_space`` only drives the urn and the diagnostics
    (limit measure, ``scenario``); the updates themselves see nothing but
    the observed labels. ``agent_scenario`` is what the agent can conclude
    from the observations alone.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    space = oracle.space
    p = init_extended(oracle, split0)
    limit = limit_measure(oracle, split0, process.true_space)
    target = split0.actual | process.true_space
    traj = Trajectory([split0], [p], [None], [False], [d_etv(p, limit)], limit, target=target)
    split = split0
    if split.actual == target:
        traj.discovery_time = 0
    exhausted = True
    for label in _observation_stream(process, space, split0, max_steps):
        was_latent = label in space and space.index(label) in split.latent
        p, split = observe(p, split, label)
        traj.splits.append(split)
        traj.measures.append(p)
        traj.observations.append(label)
        traj.flipped.append(was_latent)
        traj.d_etv.append(d_etv(p, limit))
        if traj.discovery_time is None and split.actual == target:
            traj.discovery_time = split.time
            if stop_when_discovered:
                exhausted = False
                break
    else:
        exhausted = process.schedule is not None or not process.replacement

    full = (1 << space.size) - 1
    if traj.discovery_time is not None:
        traj.scenario = "full_space" if target.mask == full else "proper_subset"
    if split.actual.mask == full:
        traj.agent_scenario = "full_space"
    elif exhausted and not process.replacement:
        traj.agent_scenario = "proper_subset"
    return traj
