"""Extended probability measures on a finite state space.

An extended measure is stored by its atoms ``a[w] = P({w})``. Additivity
over disjoint events then holds by construction, and the remaining axioms
are: every event value lies in ``[-1, 1]`` and the absolute atom values sum
to one. Event values are correctly rounded sums (``math.fsum``) so identities
such as ``P(A^c) == P(Omega) - P(A)`` hold bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import compress
from typing import Iterable

import numpy as np

from .errors import ConditioningOnNullError, SpaceMismatchError, ValidationError
from .space import Event, StateSpace

EXACT_TOL = 1e-12


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    residual: float = 0.0
    detail: str = ""

    def __str__(self):
        flag = "pass" if self.passed else "FAIL"
        text = f"{flag} {self.name} residual {self.residual:.3g}"
        return f"{text} ({self.detail})" if self.detail else text


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def add(self, name, passed, residual=0.0, detail=""):
        self.checks.append(Check(name, bool(passed), float(residual), detail))

    def __str__(self):
        return "\n".join(str(c) for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "residual": c.residual, "detail": c.detail}
                for c in self.checks
            ],
        }


class ExtendedMeasure:
    """Signed, absolutely normalized set function given by its atoms.

    With ``strict=True`` (the default) the constructor raises
    :class:`ValidationError` unless :func:`validate` passes. ``strict=False``
    keeps whatever atoms it is given; the relaxed opinion-dynamics path and
    deliberately broken test inputs use it.
    """

    __slots__ = ("space", "atoms", "strict", "_values")

    def __init__(self, space: StateSpace | Iterable, atoms, strict: bool = True):
        if not isinstance(space, StateSpace):
            space = StateSpace(tuple(space))
        arr = np.array(atoms, dtype=np.float64)
        if arr.shape != (space.size,):
            raise ValueError(f"expected {space.size} atoms, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "atoms", arr)
        object.__setattr__(self, "_values", arr.tolist())
        object.__setattr__(self, "strict", strict)
        if strict:
            report = validate(self)
            if not report.ok:
                raise ValidationError(
                    "not an extended probability measure: " + "; ".join(str(c) for c in report.failed()),
                    report,
                )

    def __setattr__(self, name, value):
        raise AttributeError("ExtendedMeasure is immutable")

    @classmethod
    def from_labels(cls, labels, atoms, strict=True):
        return cls(StateSpace(tuple(labels)), atoms, strict=strict)

    def __call__(self, event) -> float:
        return evaluate(self, event)

    def __repr__(self):
        return f"ExtendedMeasure(labels={list(self.space.labels)!r}, atoms={self.atoms.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, ExtendedMeasure):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.atoms, other.atoms)

    def __hash__(self):
        return hash((self.space.labels, self.atoms.tobytes()))

    def event(self, labels) -> Event:
        return self.space.event(labels)

    def with_atoms(self, atoms, strict=None) -> ExtendedMeasure:
        return ExtendedMeasure(self.space, atoms, self.strict if strict is None else strict)

    @property
    def total(self) -> float:
        """Value of the whole space, ``P(Omega)``."""
        return math.fsum(self.atoms)

    def is_regular(self, tol: float = EXACT_TOL) -> bool:
        return bool(np.all(self.atoms >= 0)) and abs(self.total - 1.0) <= tol


def same_space(p: ExtendedMeasure, q: ExtendedMeasure) -> None:
    if p.space.labels != q.space.labels:
        raise SpaceMismatchError("measures live on different state spaces")


_BIT_TABLE = bytes.maketrans(b"01", b"\x00\x01")


def _bits(mask: int) -> bytes:
    """Membership flags of a mask, lowest index first."""
    return bin(mask)[:1:-1].encode().translate(_BIT_TABLE)


def evaluate(p: ExtendedMeasure, event, exact: bool = False):
    """``P(A)``: sum of the atoms in ``A``. ``exact=True`` returns a Fraction."""
    a = p.space.event(event)
    if exact:
        return sum((Fraction(p._values[i]) for i in a.indices), Fraction(0))
    return math.fsum(compress(p._values, _bits(a.mask)))


def complement(p: ExtendedMeasure, event) -> float:
    """``P(Omega) - P(A)``, rounded once so it equals ``P(A^c)`` exactly."""
    a = p.space.event(event)
    v = p._values
    return math.fsum([*v, *(-x for x in compress(v, _bits(a.mask)))])


def conditional(p: ExtendedMeasure, a, b) -> float:
    """``P(A | B) = P(A & B) / P(B)``; raises if ``|P(B)| <= 1e-12``."""
    a = p.space.event(a)
    b = p.space.event(b)
    pb = evaluate(p, b)
    if abs(pb) <= EXACT_TOL:
        raise ConditioningOnNullError(f"P(B) = {pb!r} is null; conditioning undefined")
    value = evaluate(p, a & b) / pb
    if not -1.0 - EXACT_TOL <= value <= 1.0 + EXACT_TOL:
        # ratio leaves [-1, 1] only for measures that fail the axioms
        raise ValidationError(f"conditional value {value} outside [-1, 1]")
    return value


def is_independent(p: ExtendedMeasure, a, b, tol: float = EXACT_TOL) -> bool:
    """Sign-blind independence: ``|P(A & B)| == |P(A) * P(B)|`` within ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = p.space.event(a)
    b = p.space.event(b)
    return abs(abs(evaluate(p, a & b)) - abs(evaluate(p, a) * evaluate(p, b))) <= tol


def validate(p: ExtendedMeasure, n_pairs: int = 32, seed: int = 0, tol: float = EXACT_TOL) -> ValidationReport:
    """Per-axiom report with measured residuals.

    Inclusion-exclusion is spot-checked on ``n_pairs`` seeded random event pairs.
    """
    atoms = p.atoms
    report = ValidationReport()
    finite = bool(np.all(np.isfinite(atoms)))
    report.add("finite", finite)
    if not finite:
        return report
    over = float(max(0.0, np.abs(atoms).max() - 1.0))
    report.add("atom range [-1,1]", over <= tol, over)
    pos = math.fsum(atoms[atoms > 0])
    neg = math.fsum(atoms[atoms < 0])
    range_res = max(0.0, pos - 1.0, -1.0 - neg)
    report.add("i* event values in [-1,1]", range_res <= tol, range_res, f"max {pos:.6g}, min {neg:.6g}")
    norm_res = abs(math.fsum(np.abs(atoms)) - 1.0)
    report.add("iii* sum |a| = 1", norm_res <= tol, norm_res)

    n = p.space.size
    rng = np.random.default_rng(seed)
    worst = 0.0
    weights = 1 << np.arange(n, dtype=object)
    for _ in range(n_pairs):
        bits = rng.integers(0, 2, size=(2, n))
        a, b = Event(int(bits[0] @ weights), n), Event(int(bits[1] @ weights), n)
        lhs = evaluate(p, a | b)
        rhs = evaluate(p, a) + evaluate(p, b) - evaluate(p, a & b)
        worst = max(worst, abs(lhs - rhs))
    report.add("inclusion-exclusion", worst <= tol, worst, f"{n_pairs} sampled pairs")
    return report
