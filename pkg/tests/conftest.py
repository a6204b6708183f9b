"""Shared randomized-data builders for the test suite.

Everything takes an explicit random.Random so failures reproduce; seeds
are fixed in the tests themselves.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from parflow import CharacterSystem, CurveShape, ParabolicShape, WeightSystem

LABELS = ("D1", "D2", "D3", "D4")


def random_weight_system(rng: random.Random, N: int | None = None, max_punctures: int = 3,
                         max_entries: int = 3, max_mult: int = 3) -> WeightSystem:
    if N is None:
        N = rng.randrange(1, 61)
    data = {}
    for label in LABELS[: rng.randrange(1, max_punctures + 1)]:
        count = rng.randrange(1, max_entries + 1)
        data[label] = [(Fraction(rng.randrange(N), N), rng.randrange(1, max_mult + 1))
                       for _ in range(count)]
    return WeightSystem(N, data)


def random_character_system(rng: random.Random, N: int | None = None, max_punctures: int = 3,
                            max_entries: int = 3, max_mult: int = 3) -> CharacterSystem:
    if N is None:
        N = rng.randrange(1, 61)
    data = {}
    for label in LABELS[: rng.randrange(1, max_punctures + 1)]:
        count = rng.randrange(1, max_entries + 1)
        data[label] = [(rng.randrange(N), rng.randrange(1, max_mult + 1)) for _ in range(count)]
    return CharacterSystem(N, data)


def random_shape(rng: random.Random, N: int | None = None, max_rank: int = 3) -> ParabolicShape:
    """A valid shape with random weights; pardeg is whatever it comes out to be."""
    if N is None:
        N = rng.randrange(1, 31)
    rank = rng.randrange(1, max_rank + 1)
    punctures = LABELS[: rng.randrange(1, 4)]
    data = {}
    for label in punctures:
        remaining = rank
        entries = []
        while remaining > 0:
            mult = rng.randrange(1, remaining + 1)
            entries.append((Fraction(rng.randrange(N), N), mult))
            remaining -= mult
        data[label] = entries
    curve = CurveShape(rng.randrange(0, 3), punctures, N)
    return ParabolicShape(rank, rng.randrange(-5, 6), WeightSystem(N, data), curve)


def random_zero_pardeg_line_shape(rng: random.Random, N: int | None = None) -> ParabolicShape:
    """Rank-one shape with pardeg zero: weights summing to an integer."""
    if N is None:
        N = rng.randrange(2, 31)
    numerators = []
    while True:
        numerators = [rng.randrange(N) for _ in range(rng.randrange(1, 5))]
        if sum(numerators) % N == 0:
            break
    punctures = tuple(f"P{i}" for i in range(len(numerators)))
    data = {label: [(Fraction(m, N), 1)] for label, m in zip(punctures, numerators)}
    deg0 = -sum(numerators) // N
    curve = CurveShape(0, punctures, N)
    return ParabolicShape(1, deg0, WeightSystem(N, data), curve)


def units_below(N: int, limit: int) -> list[int]:
    return [p for p in range(2, limit) if math.gcd(p, N) == 1]
