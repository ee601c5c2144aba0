"""Credal sets of extended measures and their lower/upper envelopes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import kernels, lp
from .coherence import lower_dutch_book
from .dynamics import Split, d_etv, observe
from .errors import ConditioningOnNullError, SpaceMismatchError, SpaceTooLargeError, ValidationError
from .measure import EXACT_TOL, ExtendedMeasure, ValidationReport, evaluate
from .space import Event, StateSpace

LP_TOL = 1e-9
ELICITED_CAP = 16


class CredalSet:
    """Finite, nonempty collection of extended measures over one space."""

    def __init__(self, members: Iterable[ExtendedMeasure], split: Split | None = None):
        members = tuple(members)
        if not members:
            raise ValueError("a credal set needs at least one member")
        space = members[0].space
        for p in members[1:]:
            if p.space.labels != space.labels:
                raise SpaceMismatchError("credal set members live on different spaces")
        if split is not None and split.actual.size != space.size:
            raise SpaceMismatchError("split does not match the members' space")
        self.members = members
        self.space = space
        self.split = split

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __repr__(self):
        return f"CredalSet({len(self.members)} members, N={self.space.size})"

    def observe(self, label) -> CredalSet:
        """Member-wise update after observing ``label``."""
        if self.split is None:
            raise ValueError("observing needs a split")
        out, split = [], self.split
        for p in self.members:
            q, split = observe(p, self.split, label)
            out.append(q)
        return CredalSet(out, split)


def lower(c: CredalSet, event) -> float:
    a = c.space.event(event)
    return min(evaluate(p, a) for p in c)


def upper(c: CredalSet, event) -> float:
    a = c.space.event(event)
    return max(evaluate(p, a) for p in c)


def conjugate_upper(c: CredalSet, event) -> float:
    """``max_P P(Omega) - lower(A^c)``: the complement-based form of the upper value."""
    a = c.space.event(event)
    return max(p.total for p in c) - lower(c, a.complement())


def _check_cap(n, cap):
    if n > cap:
        raise SpaceTooLargeError(f"N={n} exceeds the enumeration cap {cap}")


class Envelope:
    """Lower/upper event values, derived from a credal set or elicited directly.

    Derived envelopes answer single queries from the members (correctly
    rounded) and build the full ``2^N`` tables only when an enumeration
    needs them; table entries may differ from single queries in the last bit. Elicited
    envelopes are stored as tables (N <= 16).
    """

    def __init__(self, space: StateSpace, source: str, credal: CredalSet | None = None,
                 lower_table=None, upper_table=None):
        self.space = space
        self.source = source
        self.credal = credal
        self._lower = lower_table
        self._upper = upper_table

    @classmethod
    def from_credal(cls, c: CredalSet) -> Envelope:
        return cls(c.space, "derived", credal=c)

    @classmethod
    def elicited(cls, space: StateSpace, rows: Iterable) -> Envelope:
        """Build from ``(event, lower, upper)`` rows; unlisted events get ``[-1, 1]``.

        The empty event is pinned to 0 unless listed.
        """
        _check_cap(space.size, ELICITED_CAP)
        size = 1 << space.size
        lo = np.full(size, -1.0)
        up = np.full(size, 1.0)
        lo[0] = up[0] = 0.0
        for ev, l_val, u_val in rows:
            m = space.event(ev).mask
            lo[m] = float(l_val)
            up[m] = float(u_val)
        lo.setflags(write=False)
        up.setflags(write=False)
        return cls(space, "elicited", lower_table=lo, upper_table=up)

    def _build(self):
        _check_cap(self.space.size, ELICITED_CAP)
        tables = np.array([kernels.subset_sums(np.ascontiguousarray(p.atoms)) for p in self.credal])
        self._lower = tables.min(axis=0)
        self._upper = tables.max(axis=0)
        self._lower.setflags(write=False)
        self._upper.setflags(write=False)

    @property
    def lower_values(self) -> np.ndarray:
        if self._lower is None:
            self._build()
        return self._lower

    @property
    def upper_values(self) -> np.ndarray:
        if self._upper is None:
            self._build()
        return self._upper

    def lower(self, event) -> float:
        a = self.space.event(event)
        if self.credal is not None:
            return lower(self.credal, a)
        return float(self.lower_values[a.mask])

    def upper(self, event) -> float:
        a = self.space.event(event)
        if self.credal is not None:
            return upper(self.credal, a)
        return float(self.upper_values[a.mask])

    def rows(self) -> list:
        """``(labels, lower, upper)`` for every event, mask order."""
        lo, up = self.lower_values, self.upper_values
        return [(self.space.labels_of(e), float(lo[e.mask]), float(up[e.mask])) for e in self.space.events()]


def _pair_detail(space, a, b):
    return f"A={space.labels_of(Event(int(a), space.size))}, B={space.labels_of(Event(int(b), space.size))}"


def validate_capacity(env: Envelope, n_cap: int = 16, tol: float = EXACT_TOL) -> ValidationReport:
    """Check EC1-EC3 on both envelopes plus super/subadditivity and ordering.

    Derived envelopes also get the complement-form check of the upper
    value; elicited ones have no member set to anchor it, so it is skipped.
    """
    space = env.space
    _check_cap(space.size, n_cap)
    lo, up = env.lower_values, env.upper_values
    report = ValidationReport()
    report.add("EC1 empty event", lo[0] == 0.0 and up[0] == 0.0, max(abs(lo[0]), abs(up[0])))
    over = float(max(0.0, np.abs(lo).max() - 1.0, np.abs(up).max() - 1.0))
    report.add("EC2 values in [-1,1]", over <= tol, over)
    for name, table in (("lower", lo), ("upper", up)):
        n_pos, a_pos, b_pos, n_neg, a_neg, b_neg = (int(x) for x in kernels.ec3_violations(table, tol))
        detail = []
        if n_pos:
            detail.append(f"{n_pos} nonneg-clause pairs, first {_pair_detail(space, a_pos, b_pos)}")
        if n_neg:
            detail.append(f"{n_neg} nonpos-clause pairs, first {_pair_detail(space, a_neg, b_neg)}")
        report.add(f"EC3 {name}", n_pos + n_neg == 0, n_pos + n_neg, "; ".join(detail))
    count, a, b = (int(x) for x in kernels.disjoint_violations(lo, 1, tol))
    report.add("superadditive lower", count == 0, count, _pair_detail(space, a, b) if count else "")
    count, a, b = (int(x) for x in kernels.disjoint_violations(up, -1, tol))
    report.add("subadditive upper", count == 0, count, _pair_detail(space, a, b) if count else "")
    gap = float(max(0.0, (lo - up).max()))
    report.add("lower <= upper", gap <= tol, gap)
    if env.source == "derived":
        top = max(p.total for p in env.credal)
        full = lo.shape[0] - 1
        conj = top - lo[full ^ np.arange(lo.shape[0])]
        resid = float(np.abs(up - conj).max())
        report.add("conjugacy upper = max P(Omega) - lower(A^c)", resid <= tol, resid)
    return report


def geometric_conditional(c: CredalSet, a, b) -> float:
    """``lower(A & B) / lower(B)``; raises if ``|lower(B)| <= 1e-12``."""
    a = c.space.event(a)
    b = c.space.event(b)
    lb = lower(c, b)
    if abs(lb) <= EXACT_TOL:
        raise ConditioningOnNullError(f"lower(B) = {lb!r} is null")
    return lower(c, a & b) / lb


def singleton_envelope(c: CredalSet) -> tuple:
    """Per-state lower and upper values as two arrays."""
    atoms = np.array([p.atoms for p in c])
    return atoms.min(axis=0), atoms.max(axis=0)


def update_envelope(lower_atoms, upper_atoms, split: Split, index: int) -> tuple:
    """Singleton envelope update after observing state ``index``.

    A latent state becomes actual with its bounds swapped and made
    positive, ``lower' = |upper|`` and ``upper' = |lower|``; an actual state
    leaves everything unchanged. Returns ``(lower', upper', split')``.
    """
    lo = np.array(lower_atoms, dtype=np.float64)
    up = np.array(upper_atoms, dtype=np.float64)
    if index in split.latent:
        lo[index], up[index] = abs(upper_atoms[index]), abs(lower_atoms[index])
        return lo, up, split.advance(index)
    return lo, up, split.advance()


def event_bounds(c: CredalSet, event) -> tuple:
    """``(sum of singleton lowers, sum of singleton uppers)`` over ``A``.

    The first bounds ``lower(A)`` from below, the second bounds ``upper(A)``
    from above.
    """
    a = c.space.event(event)
    lo, up = singleton_envelope(c)
    idx = list(a.indices)
    lb = math.fsum(lo[idx])
    ub = math.fsum(up[idx])
    exact_lo, exact_up = lower(c, a), upper(c, a)
    if lb > exact_lo + EXACT_TOL or ub < exact_up - EXACT_TOL:
        raise ValidationError(
            f"bound violated: {lb} <= {exact_lo} and {exact_up} <= {ub} expected"
        )
    return lb, ub


def hausdorff(c1: CredalSet, c2: CredalSet) -> float:
    """Hausdorff distance under ``d_etv`` between two finite credal sets."""
    if c1.space.labels != c2.space.labels:
        raise SpaceMismatchError("credal sets live on different spaces")
    d = np.array([[d_etv(p, q) for q in c2] for p in c1])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


@dataclass
class CoreReport:
    nonempty: bool
    witness: ExtendedMeasure | None
    coherent: bool
    certificate: dict = field(default_factory=dict)
    slack: np.ndarray | None = None
    method: str = ""
    patterns_tried: int = 0

    def to_dict(self, space: StateSpace, lower_values=None) -> dict:
        out = {
            "nonempty": self.nonempty,
            "coherent": self.coherent,
            "method": self.method,
            "patterns_tried": self.patterns_tried,
            "witness": None if self.witness is None else [float(x) for x in self.witness.atoms],
            "certificate": self.certificate,
        }
        if self.slack is not None:
            out["constraints"] = [
                {
                    "event": space.labels_of(Event(m, space.size)),
                    "lower": None if lower_values is None else float(lower_values[m]),
                    "slack": float(self.slack[m]),
                }
                for m in range(self.slack.shape[0])
            ]
        return out


def core_slack(p: ExtendedMeasure, lower_values: np.ndarray) -> np.ndarray:
    """``P(A) - lower(A)`` for every event, mask order."""
    return kernels.subset_sums(np.ascontiguousarray(p.atoms)) - lower_values


def in_core(p: ExtendedMeasure, env: Envelope, tol: float = LP_TOL) -> bool:
    """Dominates the lower envelope everywhere and matches it on the whole space."""
    lo = env.lower_values
    slack = core_slack(p, lo)
    return bool(slack.min() >= -tol and abs(p.total - lo[-1]) <= tol)


def _pattern_lp(sigma, lo, events):
    n = sigma.shape[0]
    size = lo.shape[0]
    # variables b_0..b_{n-1} >= 0 with a = sigma * b, then r (free): min slack
    A_ub = np.zeros((len(events) + 1, n + 1))
    b_ub = np.zeros(len(events) + 1)
    for k, m in enumerate(events):
        bits = np.array([(m >> i) & 1 for i in range(n)], dtype=float)
        A_ub[k, :n] = -sigma * bits
        A_ub[k, n] = 1.0
        b_ub[k] = -lo[m]
    A_ub[-1, n] = 1.0
    b_ub[-1] = 1.0
    A_eq = np.zeros((2, n + 1))
    A_eq[0, :n] = 1.0
    A_eq[1, :n] = sigma
    b_eq = np.array([1.0, lo[size - 1]])
    c = np.zeros(n + 1)
    c[n] = -1.0
    free = np.zeros(n + 1, dtype=bool)
    free[n] = True
    return lp.solve(c, A_ub, b_ub, A_eq, b_eq, free=free)


def _search_pattern(sigma, lo, batch=16):
    n = sigma.shape[0]
    full = lo.shape[0] - 1
    events = [1 << i for i in range(n)]
    seen = set(events) | {0, full}
    while True:
        res = _pattern_lp(sigma, lo, events)
        if not res.success or -res.fun < -LP_TOL:
            return None
        b = np.clip(res.x[:n], 0.0, None)
        atoms = sigma * b / math.fsum(b)
        slack = kernels.subset_sums(atoms) - lo
        if slack.min() >= -LP_TOL:
            return atoms, res, events
        order = np.argsort(slack, kind="stable")
        new = [int(m) for m in order[:batch * 4] if slack[m] < -LP_TOL and int(m) not in seen][:batch]
        if not new:
            return None
        events.extend(new)
        seen.update(new)


def core(env: Envelope, n_cap: int = 12, max_events: int | None = 64) -> CoreReport:
    """Search the core of the lower envelope and certify coherence.

    Members of a generating credal set whose whole-space value equals
    ``lower(Omega)`` are checked first. Otherwise each sign pattern
    ``sigma`` of the atoms turns ``sum |a| = 1`` into the linear
    ``sum sigma*a = 1`` and one LP (with constraint generation over the
    ``2^N`` events) decides feasibility. Coherence is always checked with
    the Dutch-book LP on the lower table.
    """
    space = env.space
    n = space.size
    _check_cap(n, n_cap)
    lo = env.lower_values
    witness, method, cert, tried = None, "", {}, 0

    if env.credal is not None:
        for k, p in enumerate(env.credal):
            if in_core(p, env):
                witness, method = p, "member"
                cert = {"member_index": k}
                break

    if witness is None:
        forced = np.array([lo[1 << i] > 0 for i in range(n)])
        free_idx = [i for i in range(n) if not forced[i]]
        up = env.upper_values
        guess = np.array([lo[1 << i] + up[1 << i] >= 0 for i in range(n)])
        start = sum(1 << k for k, i in enumerate(free_idx) if guess[i])
        count = 1 << len(free_idx)
        for step in range(count):
            pat = start ^ step
            sigma = np.ones(n)
            for k, i in enumerate(free_idx):
                if not pat >> k & 1:
                    sigma[i] = -1.0
            tried += 1
            found = _search_pattern(sigma, lo)
            if found is not None:
                atoms, res, events = found
                witness = ExtendedMeasure(space, atoms)
                method = "lp"
                binding = [m for m, y in zip(events, res.duals_ub[:-1]) if abs(y) > 1e-12]
                cert = {
                    "sign_pattern": ["+" if s > 0 else "-" for s in sigma],
                    "min_slack": float(-res.fun),
                    "binding_events": [space.labels_of(Event(m, n)) for m in binding],
                    "duals": [float(y) for y in res.duals_ub[:-1] if abs(y) > 1e-12],
                    "duals_eq": [float(y) for y in res.duals_eq],
                    "lp_iterations": res.iterations,
                }
                break

    book = lower_dutch_book(lo, n, max_events=max_events)
    if witness is None:
        cert = {"patterns_infeasible": tried}
    if book is not None:
        cert = {**cert, "dutch_book": book.to_dict(space)}
    slack = core_slack(witness, lo) if witness is not None else None
    return CoreReport(
        nonempty=witness is not None,
        witness=witness,
        coherent=book is None,
        certificate=cert,
        slack=slack,
        method=method or "none",
        patterns_tried=tried,
    )
