"""The local dictionary at a branch point of a cyclic cover.

On an order-N cyclic cover, an equivariant bundle decomposes near a fixed
point into character eigenlines for the group generator; downstairs the
same data reads as parabolic weights.  This module implements that
dictionary (character -c mod N  <->  weight m/N), the Frobenius action on
characters, and the exact residue eigenvalue laws for the assembled
pushforward and pullback connection matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import exactlinalg as xl
from .parabolic import WeightSystem

CharEntries = tuple[tuple[int, int], ...]
PunctureChars = tuple[tuple[str, CharEntries], ...]


def _canonical_chars(raw: Iterable[tuple[int, int]], N: int, what: str) -> CharEntries:
    merged: dict[int, int] = {}
    for c, mult in raw:
        if not isinstance(c, int) or not 0 <= c < N:
            raise ValueError(f"{what}: character {c!r} outside [0, {N})")
        if not isinstance(mult, int) or mult < 1:
            raise ValueError(f"{what}: multiplicity must be a positive integer, got {mult!r}")
        merged[c] = merged.get(c, 0) + mult
    return tuple(sorted(merged.items()))


@dataclass(frozen=True)
class CharacterSystem:
    """Per-branch-point multisets of Z/N characters, in canonical sorted form."""

    N: int
    entries: PunctureChars

    def __init__(self, N: int, entries: Mapping[str, Iterable[tuple[int, int]]] | PunctureChars) -> None:
        if N < 1:
            raise ValueError(f"N must be positive, got {N}")
        items = entries.items() if isinstance(entries, Mapping) else entries
        canonical = []
        seen: set[str] = set()
        for label, raw in items:
            if label in seen:
                raise ValueError(f"duplicate branch-point label {label!r}")
            seen.add(label)
            canonical.append((label, _canonical_chars(raw, N, f"branch point {label!r}")))
        canonical.sort(key=lambda kv: kv[0])
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "entries", tuple(canonical))

    @property
    def punctures(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.entries)

    def map_chars(self, fn) -> "CharacterSystem":
        return CharacterSystem(
            self.N,
            tuple((label, tuple((fn(c), m) for c, m in pairs)) for label, pairs in self.entries),
        )

    def to_json_dict(self) -> dict:
        return {
            "N": self.N,
            "characters": {label: [[c, m] for c, m in pairs] for label, pairs in self.entries},
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "CharacterSystem":
        return cls(
            int(data["N"]),
            {label: [(int(c), int(m)) for c, m in pairs] for label, pairs in data["characters"].items()},
        )


def chars_to_weights(cs: CharacterSystem) -> WeightSystem:
    """Character c corresponds to parabolic weight <-c/N>; multiplicities carry over."""
    N = cs.N
    return WeightSystem(
        N,
        tuple((label, tuple((Fraction((-c) % N, N), m) for c, m in pairs)) for label, pairs in cs.entries),
    )


def weights_to_chars(ws: WeightSystem) -> CharacterSystem:
    """Inverse dictionary: weight m/N corresponds to character (-m) mod N."""
    N = ws.N
    out = []
    for label, pairs in ws.entries:
        chars = []
        for w, m in pairs:
            if N % w.denominator != 0:
                raise ValueError(f"weight {w} at {label!r} has denominator not dividing N={N}")
            numerator = w.numerator * (N // w.denominator)
            chars.append(((-numerator) % N, m))
        out.append((label, tuple(chars)))
    return CharacterSystem(N, tuple(out))


def frobenius_on_chars(cs: CharacterSystem, p: int) -> CharacterSystem:
    """Frobenius pullback multiplies every character by p modulo N."""
    if p < 1:
        raise ValueError(f"p must be a positive integer, got {p}")
    if math.gcd(p, cs.N) != 1:
        raise ValueError(f"p={p} is not a unit modulo N={cs.N}")
    return cs.map_chars(lambda c: (p * c) % cs.N)


@dataclass(frozen=True)
class ResidueBlock:
    """One level of the pushforward residue: character level m, block size s,
    and the nilpotent part of the diagonal residue block."""

    level: int
    size: int
    residue: xl.Matrix

    def __init__(self, level: int, size: int, residue) -> None:
        mat = xl.as_matrix(residue)
        if len(mat) != size or any(len(row) != size for row in mat):
            raise ValueError(f"residue block at level {level} must be {size}x{size}")
        if size < 1:
            raise ValueError(f"block size must be positive, got {size}")
        if not xl.is_nilpotent(mat):
            raise ValueError(f"diagonal residue at level {level} is not nilpotent")
        object.__setattr__(self, "level", int(level))
        object.__setattr__(self, "size", int(size))
        object.__setattr__(self, "residue", mat)


@dataclass(frozen=True)
class ResidueBlockAssembly:
    """Block data for the residue of a pushforward lambda-connection.

    Levels must be strictly increasing within [0, N-1]; each diagonal
    block is nilpotent; lower blocks (i > j, zero-based positions) are
    arbitrary rational matrices of the matching size.
    """

    N: int
    lam: Fraction
    blocks: tuple[ResidueBlock, ...]
    lower: tuple[tuple[tuple[int, int], xl.Matrix], ...]

    def __init__(
        self,
        N: int,
        lam: Fraction | int | str,
        blocks: Sequence[ResidueBlock | tuple],
        lower: Mapping[tuple[int, int], Iterable] | Iterable[tuple[tuple[int, int], Iterable]] = (),
    ) -> None:
        if N < 1:
            raise ValueError(f"N must be positive, got {N}")
        built = tuple(b if isinstance(b, ResidueBlock) else ResidueBlock(*b) for b in blocks)
        if not built:
            raise ValueError("assembly needs at least one block")
        levels = [b.level for b in built]
        if any(not 0 <= m <= N - 1 for m in levels):
            raise ValueError(f"levels {levels} must lie in [0, {N - 1}]")
        if any(levels[i] >= levels[i + 1] for i in range(len(levels) - 1)):
            raise ValueError(f"levels must be strictly increasing, got {levels}")
        items = lower.items() if isinstance(lower, Mapping) else lower
        canon = []
        seen: set[tuple[int, int]] = set()
        for (i, j), mat in items:
            if not (0 <= j < i < len(built)):
                raise ValueError(f"lower block position ({i}, {j}) is not below the diagonal")
            if (i, j) in seen:
                raise ValueError(f"duplicate lower block at ({i}, {j})")
            seen.add((i, j))
            m = xl.as_matrix(mat)
            if len(m) != built[i].size or any(len(row) != built[j].size for row in m):
                raise ValueError(f"lower block ({i}, {j}) must be {built[i].size}x{built[j].size}")
            canon.append(((i, j), m))
        canon.sort(key=lambda kv: kv[0])
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "lam", Fraction(lam))
        object.__setattr__(self, "blocks", built)
        object.__setattr__(self, "lower", tuple(canon))

    @property
    def total_size(self) -> int:
        return sum(b.size for b in self.blocks)

    def to_json_dict(self) -> dict:
        return {
            "N": self.N,
            "lambda": str(self.lam),
            "blocks": [
                {"level": b.level, "size": b.size, "residue": [[str(v) for v in row] for row in b.residue]}
                for b in self.blocks
            ],
            "lower": [
                {"i": i, "j": j, "block": [[str(v) for v in row] for row in mat]}
                for (i, j), mat in self.lower
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "ResidueBlockAssembly":
        blocks = [(int(b["level"]), int(b.get("size", len(b["residue"]))), b["residue"]) for b in data["blocks"]]
        lower = [((int(e["i"]), int(e["j"])), e["block"]) for e in data.get("lower", [])]
        return cls(int(data["N"]), Fraction(data["lambda"]), blocks, lower)


def assemble_pushforward_residue(asm: ResidueBlockAssembly) -> tuple[xl.Matrix, tuple[Fraction, ...]]:
    """Build the residue matrix of the pushforward connection and its eigenvalues.

    The matrix is block lower triangular with diagonal blocks
    residue_i + (lam * m_i / N) * I, so its eigenvalue multiset is exactly
    {lam * m_i / N with multiplicity s_i}.  The closed form is cross
    checked on every call against the exact characteristic polynomial of
    the assembled matrix.
    """
    n = asm.total_size
    offsets = []
    pos = 0
    for b in asm.blocks:
        offsets.append(pos)
        pos += b.size
    rows = [[Fraction(0)] * n for _ in range(n)]
    for bi, b in enumerate(asm.blocks):
        shift = asm.lam * Fraction(b.level, asm.N)
        o = offsets[bi]
        for r in range(b.size):
            for c in range(b.size):
                rows[o + r][o + c] = b.residue[r][c] + (shift if r == c else 0)
    for (i, j), mat in asm.lower:
        oi, oj = offsets[i], offsets[j]
        for r in range(len(mat)):
            for c in range(len(mat[0])):
                rows[oi + r][oj + c] = mat[r][c]
    matrix = tuple(tuple(row) for row in rows)

    closed = [(asm.lam * Fraction(b.level, asm.N), b.size) for b in asm.blocks]
    if xl.charpoly(matrix) != xl.poly_from_eigenvalues(closed):
        raise RuntimeError("eigenvalue law failed its characteristic-polynomial cross-check")
    eigenvalues = tuple(sorted(mu for mu, mult in closed for _ in range(mult)))
    return matrix, eigenvalues


def pullback_residue_eigenvalues(
    levels: Sequence[tuple[int, int]], lam: Fraction | int | str, N: int
) -> tuple[Fraction, ...]:
    """Residue eigenvalues of the pullback connection: -lam*m + N*lam*(m/N) per level.

    The two terms cancel identically, so the returned multiset is all
    zeros; the cancellation is still evaluated literally and checked.
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    lam = Fraction(lam)
    out = []
    for m, s in levels:
        if not 0 <= m <= N - 1:
            raise ValueError(f"level {m} outside [0, {N - 1}]")
        if s < 1:
            raise ValueError(f"level multiplicity must be positive, got {s}")
        value = -lam * m + N * lam * Fraction(m, N)
        if value != 0:
            raise RuntimeError(f"pullback residue eigenvalue {value} is nonzero; cancellation law broken")
        out.extend([value] * s)
    return tuple(out)


def check_adjusted(
    claimed: Mapping[str, Sequence[tuple[Fraction, Fraction]]], lam: Fraction | int | str
) -> tuple[bool, list[tuple[str, Fraction, Fraction, Fraction]]]:
    """Verify the residue acts on each weight-w graded level with eigenvalue lam*w.

    Returns (ok, violations); each violation is
    (puncture, weight, claimed eigenvalue, expected eigenvalue).
    """
    lam = Fraction(lam)
    violations = []
    for label in sorted(claimed):
        for weight, eigenvalue in claimed[label]:
            w = Fraction(weight)
            if w < 0 or w >= 1:
                raise ValueError(f"weight {w} at {label!r} outside [0, 1)")
            expected = lam * w
            if Fraction(eigenvalue) != expected:
                violations.append((label, w, Fraction(eigenvalue), expected))
    return (not violations, violations)
