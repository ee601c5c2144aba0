"""Random instance generators shared by the test modules."""
import numpy as np

from xprob import CredalSet, ExtendedMeasure, Split, StateSpace, init_extended


def space(n):
    return StateSpace(tuple(range(1, n + 1)))


def random_atoms(rng, n, p_neg=0.5, zeros=0.1):
    w = rng.dirichlet(np.ones(n))
    w[rng.random(n) < zeros] = 0.0
    if w.sum() == 0:
        w[rng.integers(n)] = 1.0
    w = w / w.sum()
    sign = np.where(rng.random(n) < p_neg, -1.0, 1.0)
    return sign * w


def random_measure(rng, n):
    while True:
        atoms = random_atoms(rng, n)
        try:
            return ExtendedMeasure(space(n), atoms)
        except ValueError:
            continue


def random_oracle(rng, n):
    w = rng.dirichlet(np.ones(n))
    return ExtendedMeasure(space(n), w / w.sum())


def dyadic_oracle(rng, n, bits=20):
    """Regular measure whose atoms and all their partial sums are exact binary fractions."""
    total = 1 << bits
    cuts = np.sort(rng.choice(np.arange(1, total), size=n - 1, replace=False))
    w = np.diff(np.concatenate([[0], cuts, [total]])) / total
    return ExtendedMeasure(space(n), w)


def random_split(rng, n):
    k = int(rng.integers(1, n + 1))
    actual = rng.choice(np.arange(1, n + 1), size=k, replace=False)
    return Split.initial(space(n), actual.tolist())


def random_credal(rng, n, max_members=5, dyadic=False):
    """Members share one split, each built from its own oracle."""
    split = random_split(rng, n)
    k = int(rng.integers(1, max_members + 1))
    make = dyadic_oracle if dyadic else random_oracle
    members = [init_extended(make(rng, n), split) for _ in range(k)]
    return CredalSet(members, split)
