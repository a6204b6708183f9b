"""Inline text grammar and canonical emission helpers for the CLI.

Weight systems read as ``D1:1/5x2,2/5x1;D2:0x3`` (punctures joined by
``;``, entries ``weight x mult`` joined by ``,``; whitespace anywhere is
ignored; a missing ``xmult`` means multiplicity one).  Character systems
use the same grammar with integer characters.  All emission is
deterministic: fractions as exact strings, keys sorted, no floats.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping, Sequence

from .characters import CharacterSystem
from .parabolic import WeightSystem


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.replace(" ", ""))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse {text!r} as an exact rational") from exc


def _split_groups(text: str, what: str) -> list[tuple[str, list[str]]]:
    compact = "".join(text.split())
    if not compact:
        raise ValueError(f"empty {what}")
    groups = []
    seen: set[str] = set()
    for chunk in compact.split(";"):
        if not chunk:
            continue
        label, sep, body = chunk.partition(":")
        if not sep or not label:
            raise ValueError(f"malformed {what} group {chunk!r}: expected 'label:entries'")
        if label in seen:
            raise ValueError(f"duplicate {what} label {label!r}")
        seen.add(label)
        entries = [e for e in body.split(",") if e]
        if not entries:
            raise ValueError(f"no entries for {what} label {label!r}")
        groups.append((label, entries))
    if not groups:
        raise ValueError(f"empty {what}")
    return groups


def _split_mult(entry: str) -> tuple[str, int]:
    head, sep, tail = entry.rpartition("x")
    if not sep:
        return entry, 1
    try:
        mult = int(tail)
    except ValueError as exc:
        raise ValueError(f"bad multiplicity in entry {entry!r}") from exc
    return head, mult


def parse_weight_system(text: str, N: int) -> WeightSystem:
    mapping = {}
    for label, entries in _split_groups(text, "weight system"):
        mapping[label] = [(parse_fraction(v), m) for v, m in map(_split_mult, entries)]
    return WeightSystem(N, mapping)


def format_weight_system(ws: WeightSystem) -> str:
    return ";".join(
        f"{label}:" + ",".join(f"{w}x{m}" for w, m in pairs) for label, pairs in ws.entries
    )


def parse_character_system(text: str, N: int) -> CharacterSystem:
    mapping = {}
    for label, entries in _split_groups(text, "character system"):
        parsed = []
        for value, mult in map(_split_mult, entries):
            try:
                c = int(value)
            except ValueError as exc:
                raise ValueError(f"bad character {value!r} (integers in [0, N) expected)") from exc
            parsed.append((c, mult))
        mapping[label] = parsed
    return CharacterSystem(N, mapping)


def format_character_system(cs: CharacterSystem) -> str:
    return ";".join(
        f"{label}:" + ",".join(f"{c}x{m}" for c, m in pairs) for label, pairs in cs.entries
    )


def parse_levels(text: str) -> tuple[tuple[int, int], ...]:
    """Residue levels as ``2x1,4x3`` meaning (level, block size) pairs."""
    compact = "".join(text.split())
    out = []
    for entry in compact.split(","):
        if not entry:
            continue
        value, mult = _split_mult(entry)
        try:
            out.append((int(value), mult))
        except ValueError as exc:
            raise ValueError(f"bad level entry {entry!r}") from exc
    if not out:
        raise ValueError("empty level list")
    return tuple(out)


def parse_defects(text: str) -> tuple[int, ...]:
    compact = "".join(text.split())
    try:
        return tuple(int(v) for v in compact.split(",") if v)
    except ValueError as exc:
        raise ValueError(f"bad defect list {text!r}") from exc


def parse_adjusted_data(text: str) -> dict[str, list[tuple[Fraction, Fraction]]]:
    """Graded residue data as ``D:1/3=1/3,2/3=2/3;E:0=0`` (weight=eigenvalue)."""
    out: dict[str, list[tuple[Fraction, Fraction]]] = {}
    for label, entries in _split_groups(text, "adjusted data"):
        rows = []
        for entry in entries:
            weight, sep, eigen = entry.partition("=")
            if not sep:
                raise ValueError(f"malformed entry {entry!r}: expected 'weight=eigenvalue'")
            rows.append((parse_fraction(weight), parse_fraction(eigen)))
        out[label] = rows
    return out


def parse_twists(text: str) -> dict[str, Fraction]:
    """Line-bundle twists as ``D:3/2;E:-1/4``."""
    out = {}
    for label, entries in _split_groups(text, "twist list"):
        if len(entries) != 1:
            raise ValueError(f"exactly one twist per puncture, got {entries} at {label!r}")
        out[label] = parse_fraction(entries[0])
    return out


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def flatten_for_csv(payload, prefix: str = "") -> list[tuple[str, str]]:
    """Deterministic key,value rows for payloads that are not naturally tabular."""
    rows: list[tuple[str, str]] = []
    if isinstance(payload, Mapping):
        for key in sorted(payload):
            rows.extend(flatten_for_csv(payload[key], f"{prefix}.{key}" if prefix else str(key)))
    elif isinstance(payload, Sequence) and not isinstance(payload, str):
        for i, item in enumerate(payload):
            rows.extend(flatten_for_csv(item, f"{prefix}[{i}]"))
    else:
        rows.append((prefix, json.dumps(payload)))
    return rows
