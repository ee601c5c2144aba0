"""Finite state spaces and events.

A :class:`StateSpace` is an ordered tuple of distinct labels; its finest
partition is the list of singletons in label order. An :class:`Event` is a
subset of state indices stored as a bitmask, so set algebra is integer
arithmetic and events double as indices into power-set tables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import InvalidEventError, SpaceMismatchError


@dataclass(frozen=True)
class Event:
    mask: int
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise InvalidEventError("event needs a state space with at least one state")
        if self.mask < 0 or self.mask >> self.size:
            raise InvalidEventError(f"event mask {self.mask:#x} has indices >= {self.size}")

    @classmethod
    def from_indices(cls, indices: Iterable[int], size: int) -> Event:
        mask = 0
        for i in indices:
            if not 0 <= i < size:
                raise InvalidEventError(f"state index {i} out of range for N={size}")
            mask |= 1 << i
        return cls(mask, size)

    @cached_property
    def indices(self) -> tuple[int, ...]:
        out, m = [], self.mask
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return tuple(out)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, index) -> bool:
        return isinstance(index, int) and 0 <= index < self.size and bool(self.mask >> index & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def _check(self, other: Event) -> None:
        if not isinstance(other, Event):
            raise TypeError(f"expected Event, got {type(other).__name__}")
        if other.size != self.size:
            raise SpaceMismatchError(f"events over N={self.size} and N={other.size}")

    def __or__(self, other: Event) -> Event:
        self._check(other)
        return Event(self.mask | other.mask, self.size)

    def __and__(self, other: Event) -> Event:
        self._check(other)
        return Event(self.mask & other.mask, self.size)

    def __sub__(self, other: Event) -> Event:
        self._check(other)
        return Event(self.mask & ~other.mask, self.size)

    def __xor__(self, other: Event) -> Event:
        self._check(other)
        return Event(self.mask ^ other.mask, self.size)

    def complement(self) -> Event:
        return Event(((1 << self.size) - 1) ^ self.mask, self.size)

    def issubset(self, other: Event) -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: Event) -> bool:
        self._check(other)
        return self.mask & other.mask == 0


@dataclass(frozen=True)
class StateSpace:
    """Ordered finite universe of labelled states.

    ``origin`` records how the space was obtained: ``"explicit"`` or a
    truncation of a countable number type (``"naturals"``, ``"integers"``,
    ``"rationals"``) with its parameters in ``origin_params``.
    """

    labels: tuple
    origin: str = "explicit"
    origin_params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise ValueError("a state space needs at least one state")
        if len(set(labels)) != len(labels):
            raise ValueError("state labels must be pairwise distinct")
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label) -> bool:
        return label in self._index

    def index(self, label) -> int:
        try:
            return self._index[label]
        except (KeyError, TypeError):
            raise InvalidEventError(f"label {label!r} is not a state of this space") from None

    def event(self, labels: Iterable = ()) -> Event:
        """Event made of the given labels; ``Event`` instances pass through after a size check."""
        if isinstance(labels, Event):
            if labels.size != self.size:
                raise InvalidEventError(f"event over N={labels.size} used with a space of N={self.size}")
            return labels
        mask = 0
        for lab in labels:
            mask |= 1 << self.index(lab)
        return Event(mask, self.size)

    @property
    def empty(self) -> Event:
        return Event(0, self.size)

    @property
    def omega(self) -> Event:
        return Event((1 << self.size) - 1, self.size)

    def singleton(self, label) -> Event:
        return Event(1 << self.index(label), self.size)

    def labels_of(self, event: Event) -> list:
        return [self.labels[i] for i in self.event(event).indices]

    def events(self) -> Iterator[Event]:
        """All 2^N events in mask order."""
        for m in range(1 << self.size):
            yield Event(m, self.size)

    def extended_with(self, label) -> StateSpace:
        """Richer space ``Omega | {label}``, one remedy after a foreign observation."""
        if label in self:
            return self
        return StateSpace(self.labels + (label,))

    # Truncations of countable number types. The discarded tail is every
    # state beyond the bound; measures built on these spaces assign it no mass.

    @classmethod
    def naturals(cls, n_max: int) -> StateSpace:
        """``{1, ..., n_max}``; the tail ``n_max+1, n_max+2, ...`` is dropped."""
        if n_max < 1:
            raise ValueError("n_max must be >= 1")
        return cls(tuple(range(1, n_max + 1)), "naturals", {"n_max": n_max})

    @classmethod
    def integers(cls, n_max: int) -> StateSpace:
        """``{-n_max, ..., n_max}``; integers with ``|k| > n_max`` are dropped."""
        if n_max < 0:
            raise ValueError("n_max must be >= 0")
        return cls(tuple(range(-n_max, n_max + 1)), "integers", {"n_max": n_max})

    @classmethod
    def rationals(cls, max_denominator: int, bound: int = 1) -> StateSpace:
        """Reduced fractions ``p/q`` with ``q <= max_denominator`` and ``|p/q| <= bound``.

        Labels are strings such as ``"-1/2"`` so they serialize cleanly;
        every rational with a larger denominator or magnitude is dropped.
        """
        if max_denominator < 1 or bound < 0:
            raise ValueError("need max_denominator >= 1 and bound >= 0")
        values = sorted(
            {Fraction(p, q) for q in range(1, max_denominator + 1) for p in range(-bound * q, bound * q + 1)}
        )
        return cls(
            tuple(str(v) for v in values),
            "rationals",
            {"max_denominator": max_denominator, "bound": bound},
        )
