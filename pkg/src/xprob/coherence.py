"""Bettable events and Dutch-book search.

A bet on ``B`` at price ``v`` with stake ``s`` pays ``s * (1_B(w) - v)``. A
Dutch book is a finite set of such bets whose total payoff is negative in
every state. Only events that avoid every negatively valued event can be
bet on, so the search runs over events built from *bettable* atoms.

Each search is one small linear program::

    min t   s.t.   sum_j s_j (1_{B_j}(w) - v_j) <= t  for every state w,
                   sum_j |s_j| <= 1,

and a book exists iff the optimum is below ``-BOOK_TOL``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import lp
from .measure import ExtendedMeasure, evaluate
from .space import Event, StateSpace

BOOK_TOL = 1e-9


@dataclass
class DutchBookCandidate:
    events: list
    stakes: np.ndarray
    prices: np.ndarray
    worst_payoff: float
    kind: str = "precise"
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.events) != len(self.stakes) or len(self.events) < 1:
            raise ValueError("events and stakes must have equal, nonzero length")

    def payoff(self) -> np.ndarray:
        """Payoff ``f(w)`` in every state, recomputed from the stakes."""
        n = self.events[0].size
        ind = _indicators(self.events, n)
        return self.stakes @ (ind - self.prices[:, None])

    def to_dict(self, space: StateSpace | None = None) -> dict:
        fmt = (lambda e: space.labels_of(e)) if space is not None else (lambda e: list(e.indices))
        return {
            "kind": self.kind,
            "events": [fmt(e) for e in self.events],
            "stakes": [float(s) for s in self.stakes],
            "prices": [float(v) for v in self.prices],
            "worst_payoff": float(self.worst_payoff),
            "payoff": [float(x) for x in self.payoff()],
            **self.detail,
        }


def _indicators(events, n) -> np.ndarray:
    ind = np.zeros((len(events), n))
    for j, e in enumerate(events):
        ind[j, list(e.indices)] = 1.0
    return ind


def bettable_family(p: ExtendedMeasure) -> Event:
    """Atoms that lie in no negatively valued event.

    The most negative event containing a nonnegative atom ``w`` is ``{w}``
    plus every negative atom, so ``w`` is bettable iff ``a_w >= 0`` and
    ``a_w + sum of negative atoms >= 0``. Every subset of the returned
    atoms is a bettable event.
    """
    negs = [a for a in p.atoms if a < 0]
    idx = [i for i, a in enumerate(p.atoms) if a >= 0 and math.fsum([a, *negs]) >= 0]
    return Event.from_indices(idx, p.space.size)


def bettable_family_bruteforce(p: ExtendedMeasure) -> Event:
    """Enumerate every event with negative value and drop the atoms they touch."""
    n = p.space.size
    touched = 0
    for m in range(1 << n):
        if math.fsum(p.atoms[i] for i in range(n) if m >> i & 1) < 0:
            touched |= m
    return Event(((1 << n) - 1) & ~touched, n)


def _book_lp(ind, prices, sold=None, nonneg=False):
    """Optimal (t, stakes) for the Dutch-book program.

    ``nonneg`` restricts every stake to be >= 0 except the one at index
    ``sold``, which is forced <= 0.
    """
    k, n = ind.shape
    gain = ind - prices[:, None]  # k x n
    if nonneg:
        # variables: s_0..s_{k-1} >= 0 (buys), r >= 0 (sale of event `sold`), t free
        cols = k + 1 if sold is not None else k
        A = np.zeros((n + 1, cols + 1))
        A[:n, :k] = gain.T
        if sold is not None:
            A[:n, k] = -gain[sold]
        A[:n, -1] = -1.0
        A[n, :cols] = 1.0
        free = np.zeros(cols + 1, dtype=bool)
        free[-1] = True
        c = np.zeros(cols + 1)
        c[-1] = 1.0
        b = np.zeros(n + 1)
        b[n] = 1.0
        res = lp.solve(c, A, b, free=free)
        stakes = res.x[:k].copy()
        if sold is not None:
            stakes[sold] -= res.x[k]
        return res.fun, stakes
    # unrestricted stakes s = u - w with u, w >= 0, t free
    A = np.zeros((n + 1, 2 * k + 1))
    A[:n, :k] = gain.T
    A[:n, k:2 * k] = -gain.T
    A[:n, -1] = -1.0
    A[n, :2 * k] = 1.0
    b = np.zeros(n + 1)
    b[n] = 1.0
    c = np.zeros(2 * k + 1)
    c[-1] = 1.0
    free = np.zeros(2 * k + 1, dtype=bool)
    free[-1] = True
    res = lp.solve(c, A, b, free=free)
    return res.fun, res.x[:k] - res.x[k:2 * k]


def _candidate(events, stakes, prices, kind, **detail):
    keep = np.flatnonzero(np.abs(stakes) > 1e-12)
    events = [events[j] for j in keep]
    stakes = stakes[keep]
    prices = prices[keep]
    n = events[0].size
    f = stakes @ (_indicators(events, n) - prices[:, None])
    return DutchBookCandidate(events, stakes, prices, float(f.max()), kind, detail)


def dutch_book_for_prices(events, prices, n_states: int | None = None):
    """Search a book against precise prices on the given (assumed bettable) events.

    This is the raw table path: it does not check that ``prices`` come from
    an extended measure, which makes it the way to probe tampered tables.
    """
    events = list(events)
    if not events:
        return None
    n = events[0].size if n_states is None else n_states
    prices = np.asarray(prices, dtype=np.float64)
    t, s = _book_lp(_indicators(events, n), prices)
    if t < -BOOK_TOL:
        return _candidate(events, s, prices, "precise", lp_optimum=float(t))
    return None


def generator_events(p: ExtendedMeasure, max_events: int = 64) -> list:
    """Singletons of bettable atoms, then their unions by increasing size, capped."""
    atoms = bettable_family(p).indices
    n = p.space.size
    out = []
    for r in range(1, len(atoms) + 1):
        for combo in itertools.combinations(atoms, r):
            if len(out) >= max_events:
                return out
            out.append(Event.from_indices(combo, n))
    return out


def find_dutch_book(p: ExtendedMeasure, max_events: int = 64):
    """Dutch book against ``p`` on its bettable events, or ``None``.

    For every valid extended measure the answer is ``None``; a returned
    candidate therefore signals a broken measure or a numerical failure.
    """
    if max_events < 1:
        raise ValueError("max_events must be >= 1")
    events = generator_events(p, max_events)
    if not events:
        return None
    prices = np.array([evaluate(p, e) for e in events])
    return dutch_book_for_prices(events, prices, p.space.size)


def lower_generator_events(lower: np.ndarray, n: int, max_events: int | None = None) -> list:
    """Bettable events for a lower probability table indexed by event mask.

    Atoms touching any event with negative lower value are excluded; the
    generators are the nonempty events over the remaining atoms whose
    lower value is nonnegative, ordered by size then mask.
    """
    touched = 0
    for m in np.flatnonzero(lower < 0):
        touched |= int(m)
    free = ((1 << n) - 1) & ~touched
    masks = []
    sub = free
    while sub:
        if lower[sub] >= 0:
            masks.append(sub)
        sub = (sub - 1) & free
    masks.sort(key=lambda m: (bin(m).count("1"), m))
    if max_events is not None:
        masks = masks[:max_events]
    return [Event(m, n) for m in masks]


def lower_dutch_book(lower: np.ndarray, n: int, max_events: int | None = None, sure_loss_only: bool = False):
    """Dutch book against a lower probability table, or ``None``.

    Lower prices are buying prices, so stakes are nonnegative except for at
    most one event, which may be sold at its lower price. That one sale is
    what exposes a superadditivity failure ``L(A|B) < L(A) + L(B)``.
    With ``sure_loss_only`` every stake must be nonnegative.
    """
    lower = np.asarray(lower, dtype=np.float64)
    events = lower_generator_events(lower, n, max_events)
    if not events:
        return None
    ind = _indicators(events, n)
    prices = np.array([lower[e.mask] for e in events])
    best = None
    choices = [None] if sure_loss_only else [None, *range(len(events))]
    for sold in choices:
        t, s = _book_lp(ind, prices, sold=sold, nonneg=True)
        if t < -BOOK_TOL and (best is None or t < best[0] - 1e-12):
            best = (t, s, sold)
    if best is None:
        return None
    t, s, sold = best
    kind = "sure_loss" if sold is None else "incoherent"
    return _candidate(events, s, prices, kind, lp_optimum=float(t))
