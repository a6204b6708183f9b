"""Discrete invariants of parabolic bundles on punctured curves.

A parabolic bundle is tracked here only through the data that survives at
invariant level: the rank, the degree of the zeroth filtration piece, and
per puncture the multiset of filtration-jump weights with multiplicities.
The weight action of the Cartier and inverse Cartier transforms, the
induced flow step, and the parabolic degree are all exact computations on
this data; no sheaves, connections or filtrations are modelled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .arith import frac_part, mod_inverse

WeightEntries = tuple[tuple[Fraction, int], ...]
PunctureWeights = tuple[tuple[str, WeightEntries], ...]


def _canonical_entries(raw: Iterable[tuple[Fraction | int | str, int]], N: int, what: str) -> WeightEntries:
    """Merge duplicates, sort by weight, and validate 0 <= w < 1 with N*w integral."""
    merged: dict[Fraction, int] = {}
    for weight, mult in raw:
        w = weight if type(weight) is Fraction else Fraction(weight)
        if not isinstance(mult, int) or mult < 1:
            raise ValueError(f"{what}: multiplicity must be a positive integer, got {mult!r}")
        if w < 0 or w >= 1:
            raise ValueError(f"{what}: weight {w} outside [0, 1)")
        if N % w.denominator != 0:
            raise ValueError(f"{what}: weight {w} has denominator not dividing N={N}")
        merged[w] = merged.get(w, 0) + mult
    return tuple(sorted(merged.items()))


@dataclass(frozen=True)
class CurveShape:
    """A punctured curve reduced to (genus, puncture labels, weight denominator N)."""

    genus: int
    punctures: tuple[str, ...]
    N: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "punctures", tuple(self.punctures))
        if self.genus < 0:
            raise ValueError(f"genus must be non-negative, got {self.genus}")
        if self.N < 1:
            raise ValueError(f"N must be positive, got {self.N}")
        if len(set(self.punctures)) != len(self.punctures):
            raise ValueError(f"puncture labels must be distinct: {self.punctures}")
        for label in self.punctures:
            if not isinstance(label, str) or not label:
                raise ValueError(f"puncture labels must be nonempty strings, got {label!r}")


@dataclass(frozen=True)
class WeightSystem:
    """Per-puncture multisets of parabolic weights, stored in canonical form.

    Every weight lies in [0, 1) with denominator dividing N.  Entries are
    kept sorted by weight with equal weights merged, and punctures sorted
    by label, so equality of WeightSystems is multiset equality.
    Weight-zero entries are stored explicitly: they carry the rank
    bookkeeping of a trivial local structure.
    """

    N: int
    entries: PunctureWeights

    def __init__(self, N: int, entries: Mapping[str, Iterable[tuple[Fraction | int | str, int]]] | PunctureWeights) -> None:
        if N < 1:
            raise ValueError(f"N must be positive, got {N}")
        items = entries.items() if isinstance(entries, Mapping) else entries
        canonical = []
        seen: set[str] = set()
        for label, raw in items:
            if label in seen:
                raise ValueError(f"duplicate puncture label {label!r}")
            seen.add(label)
            canonical.append((label, _canonical_entries(raw, N, f"puncture {label!r}")))
        canonical.sort(key=lambda kv: kv[0])
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "entries", tuple(canonical))

    @property
    def punctures(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.entries)

    def weights_at(self, label: str) -> WeightEntries:
        for name, pairs in self.entries:
            if name == label:
                return pairs
        raise KeyError(label)

    def multiplicity_at(self, label: str) -> int:
        return sum(mult for _, mult in self.weights_at(label))

    @classmethod
    def _from_canonical(cls, N: int, entries: PunctureWeights) -> "WeightSystem":
        # Internal fast path: entries must already be canonical and valid.
        self = object.__new__(cls)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "entries", entries)
        return self

    def map_weights(self, fn) -> "WeightSystem":
        """Apply fn elementwise to every weight, preserving multiplicities.

        fn must send weights to weights: values in [0, 1) with denominator
        dividing N.  Images are re-merged and re-sorted per puncture.
        """
        N = self.N
        out = []
        for label, pairs in self.entries:
            # Merge and sort on integer numerators over the common
            # denominator N; Fraction hashing is far more expensive.
            merged: dict[int, int] = {}
            values: dict[int, Fraction] = {}
            for w, mult in pairs:
                nw = fn(w)
                num, den = nw.numerator, nw.denominator
                if num < 0 or num >= den or N % den != 0:
                    raise ValueError(f"mapped weight {nw} at {label!r} is not a level-{N} weight")
                key = num * (N // den)
                if key in merged:
                    merged[key] += mult
                else:
                    merged[key] = mult
                    values[key] = nw
            out.append((label, tuple((values[k], merged[k]) for k in sorted(merged))))
        return WeightSystem._from_canonical(N, tuple(out))

    def to_json_dict(self) -> dict:
        return {
            "N": self.N,
            "weights": {label: [[str(w), m] for w, m in pairs] for label, pairs in self.entries},
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "WeightSystem":
        return cls(
            int(data["N"]),
            {label: [(Fraction(w), int(m)) for w, m in pairs] for label, pairs in data["weights"].items()},
        )


@dataclass(frozen=True)
class ParabolicShape:
    """(rank, degree of the zeroth piece, weight system) on a fixed curve.

    Punctures of the curve absent from the given weight system are filled
    with the trivial entry (weight 0, multiplicity = rank); after filling,
    the multiplicities at every puncture must sum to the rank.
    """

    rank: int
    deg0: int
    weights: WeightSystem
    curve: CurveShape

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError(f"rank must be positive, got {self.rank}")
        if not isinstance(self.deg0, int):
            raise ValueError(f"deg0 must be an integer, got {self.deg0!r}")
        if self.weights.N != self.curve.N:
            raise ValueError(f"weight denominator N={self.weights.N} differs from curve N={self.curve.N}")
        extra = set(self.weights.punctures) - set(self.curve.punctures)
        if extra:
            raise ValueError(f"weights listed at labels absent from the curve: {sorted(extra)}")
        filled = dict(self.weights.entries)
        for label in self.curve.punctures:
            if label not in filled:
                filled[label] = ((Fraction(0), self.rank),)
        ws = WeightSystem(self.weights.N, filled)
        for label in self.curve.punctures:
            total = ws.multiplicity_at(label)
            if total != self.rank:
                raise ValueError(f"multiplicities at {label!r} sum to {total}, expected rank {self.rank}")
        object.__setattr__(self, "weights", ws)

    def to_json_dict(self) -> dict:
        return {
            "rank": self.rank,
            "deg0": self.deg0,
            "genus": self.curve.genus,
            "N": self.curve.N,
            "punctures": list(self.curve.punctures),
            "weights": self.weights.to_json_dict()["weights"],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "ParabolicShape":
        curve = CurveShape(int(data.get("genus", 0)), tuple(data["punctures"]), int(data["N"]))
        ws = WeightSystem.from_json_dict({"N": data["N"], "weights": data["weights"]})
        return cls(int(data["rank"]), int(data["deg0"]), ws, curve)


@dataclass(frozen=True)
class ParabolicLineBundleSpec:
    """A line bundle twisted by rational multiples of the punctures.

    The twist exponent gamma at a puncture means the rational divisor
    twist by gamma * D there; any rational gamma is legal.
    """

    underlying_degree: int
    twists: tuple[tuple[str, Fraction], ...]

    def __init__(self, underlying_degree: int, twists: Mapping[str, Fraction | int | str] | Iterable[tuple[str, Fraction]]) -> None:
        items = twists.items() if isinstance(twists, Mapping) else twists
        canonical = tuple(sorted((label, Fraction(g)) for label, g in items))
        labels = [label for label, _ in canonical]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate twist labels: {labels}")
        object.__setattr__(self, "underlying_degree", int(underlying_degree))
        object.__setattr__(self, "twists", canonical)

    def twist_at(self, label: str) -> Fraction:
        for name, g in self.twists:
            if name == label:
                return g
        return Fraction(0)


def pardeg(shape: ParabolicShape) -> Fraction:
    """Parabolic degree: deg0 plus the weighted multiplicity sum over all punctures."""
    total = Fraction(shape.deg0)
    for _, pairs in shape.weights.entries:
        for w, mult in pairs:
            total += w * mult
    return total


def pullback_degree(shape: ParabolicShape, N: int) -> int:
    """Degree of the bundle pulled back along a totally ramified cyclic cover of order N.

    Equals N * pardeg(shape) and must be an integer; a fractional value
    would mean the weight system does not actually live at level N.
    """
    if N != shape.curve.N:
        raise ValueError(f"cover order {N} differs from the shape's denominator {shape.curve.N}")
    value = N * pardeg(shape)
    if value.denominator != 1:
        raise ValueError(f"pullback degree {value} is not an integer; invalid weight system")
    return int(value)


def line_bundle_shape(lb: ParabolicLineBundleSpec, curve: CurveShape) -> ParabolicShape:
    """Invariant shape of a rational-divisor twist of a line bundle.

    With twist exponent gamma at a puncture, the zeroth piece picks up
    floor(gamma) and the filtration jumps at the fractional part of gamma,
    so deg0 = underlying_degree + sum(floor(gamma_i)) and the single
    weight at each puncture is <gamma_i> with multiplicity one.
    """
    extra = {label for label, _ in lb.twists} - set(curve.punctures)
    if extra:
        raise ValueError(f"twists at labels absent from the curve: {sorted(extra)}")
    deg0 = lb.underlying_degree
    weights = {}
    for label in curve.punctures:
        gamma = lb.twist_at(label)
        w = frac_part(gamma)
        if curve.N % w.denominator != 0:
            raise ValueError(f"twist {gamma} at {label!r} needs denominator dividing N={curve.N}")
        deg0 += math.floor(gamma)
        weights[label] = ((w, 1),)
    ws = WeightSystem(curve.N, weights)
    return ParabolicShape(1, deg0, ws, curve)


def _check_unit(p: int, N: int) -> None:
    if p < 1:
        raise ValueError(f"p must be a positive integer, got {p}")
    if math.gcd(p, N) != 1:
        raise ValueError(f"p={p} is not a unit modulo N={N}")


def inverse_cartier_weights(ws: WeightSystem, p: int) -> WeightSystem:
    """Weight action of the inverse Cartier transform: m/N maps to <p*m/N>."""
    _check_unit(p, ws.N)
    # <p * m/d> = (p*m mod d) / d for the reduced weight m/d with d | N.
    return ws.map_weights(lambda w: Fraction(p * w.numerator % w.denominator, w.denominator))


def cartier_weights(ws: WeightSystem, p: int) -> WeightSystem:
    """Weight action of the Cartier transform: multiply by the inverse of p mod N."""
    _check_unit(p, ws.N)
    delta = mod_inverse(p, ws.N)
    return ws.map_weights(lambda w: Fraction(delta * w.numerator % w.denominator, w.denominator))


def flow_step_shape(shape: ParabolicShape, p: int) -> ParabolicShape:
    """One flow step on invariants: inverse Cartier on weights, then regrade.

    Grading preserves weights, so the weight system just transforms by
    the inverse Cartier law.  The zeroth-piece degree moves by
    deg0' = p*deg0 + sum(floor(p*w) * mult), the unique integer law that
    makes pardeg scale exactly by p (matching the degree law on the
    order-N cyclic cover, where Frobenius pullback multiplies degrees by
    p).  Requires p >= 2: the p = 1 step would be the identity, which is
    not a Frobenius twist.
    """
    if p < 2:
        raise ValueError(f"flow step requires p >= 2, got {p}")
    _check_unit(p, shape.curve.N)
    shift = 0
    for _, pairs in shape.weights.entries:
        for w, mult in pairs:
            shift += math.floor(p * w) * mult
    new_ws = inverse_cartier_weights(shape.weights, p)
    return ParabolicShape(shape.rank, p * shape.deg0 + shift, new_ws, shape.curve)


def is_periodicity_candidate(shape: ParabolicShape) -> bool:
    """True exactly when pardeg is zero.

    Each flow step multiplies pardeg by p >= 2, so a nonzero parabolic
    degree can never return to itself and the shape is never periodic.
    """
    return pardeg(shape) == 0
