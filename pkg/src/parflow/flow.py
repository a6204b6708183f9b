"""Orbits, periods and explicit period bounds for the weight-level flow.

The flow step multiplies weight numerators by p modulo N and scales the
parabolic degree by p.  Everything here is an exact computation with the
derived descent machinery: the minimal f with N | l*(1 + p + ... +
p**(f-1)) governs when a flow isomorphism on the cyclic cover descends,
and the bound phi(N * d**(k+1)) makes that f explicit.

Periods computed from invariants are lower bounds for full-bundle flow
periods: filtration choices are not modelled, only the data they cannot
change.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

from .arith import (
    euler_phi,
    factorize,
    geometric_sum_mod,
    mult_order,
    phi_from_factorization,
    primes_upto,
)
from .parabolic import (
    ParabolicShape,
    WeightSystem,
    flow_step_shape,
    is_periodicity_candidate,
)


class TerminationReason(Enum):
    PERIOD_FOUND = "period found"
    CAP_REACHED = "cap reached"
    NEVER_PERIODIC = "never periodic"


@dataclass(frozen=True)
class FlowTrajectory:
    """An orbit under the flow with its detected period.

    states[preperiod + period] == states[preperiod] when a period was
    found; for weight-level flows the map is a bijection, so the
    preperiod is always zero.
    """

    states: tuple
    preperiod: int
    period: int | None
    p: int
    terminated: TerminationReason

    @property
    def found(self) -> bool:
        return self.terminated is TerminationReason.PERIOD_FOUND


@dataclass(frozen=True)
class PeriodBoundParams:
    """The integers entering the explicit period bound.

    q is p reduced into [1, N]; d = gcd(N, q-1); N = d*nprime;
    q - 1 = d*qprime; k is the largest exponent with d**k dividing qprime
    (taken as 0 when d == 1 or q == 1, where the tower is degenerate);
    f is the resulting bound.
    """

    N: int
    p: int
    q: int
    d: int
    nprime: int
    qprime: int
    k: int
    f: int


@dataclass(frozen=True)
class EquivarianceDefects:
    """Characters by which the group generator scales the flow isomorphisms."""

    N: int
    defects: tuple[int, ...]

    def __init__(self, N: int, defects: Sequence[int]) -> None:
        if N < 1:
            raise ValueError(f"N must be positive, got {N}")
        out = tuple(int(l) for l in defects)
        for l in out:
            if not 0 <= l < N:
                raise ValueError(f"defect {l} outside [0, {N})")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "defects", out)


@dataclass(frozen=True)
class ScanRow:
    p: int
    period: int
    bound: int
    sum_mod_n: int


def _check_unit(p: int, N: int) -> None:
    if p < 1:
        raise ValueError(f"p must be a positive integer, got {p}")
    if math.gcd(p, N) != 1:
        raise ValueError(f"p={p} is not a unit modulo N={N}")


def weight_orbit(ws: WeightSystem, p: int, cap: int = 10_000) -> FlowTrajectory:
    """Iterate the inverse Cartier weight map and detect the period.

    The period counts the first return of every weight elementwise (each
    graded piece is transported individually by the flow), which is the
    minimal f with p**f * m == m mod N for every stored numerator m.  A
    multiset of weights may coincide with the start earlier when it packs
    several orbits; that coincidence does not close the elementwise flow
    and is not reported as the period.
    """
    _check_unit(p, ws.N)
    if cap < 1:
        raise ValueError(f"cap must be positive, got {cap}")
    N = ws.N
    labelled = []
    for label, pairs in ws.entries:
        for w, mult in pairs:
            labelled.append(w.numerator * (N // w.denominator))
    start = tuple(labelled)

    def materialize(nums: tuple[int, ...]) -> WeightSystem:
        out = []
        idx = 0
        for label, pairs in ws.entries:
            merged: dict[Fraction, int] = {}
            for _, mult in pairs:
                w = Fraction(nums[idx], N)
                merged[w] = merged.get(w, 0) + mult
                idx += 1
            out.append((label, tuple(sorted(merged.items()))))
        return WeightSystem._from_canonical(N, tuple(out))

    states = [ws]
    current = start
    for step in range(1, cap + 1):
        current = tuple(p * m % N for m in current)
        states.append(materialize(current))
        if current == start:
            return FlowTrajectory(tuple(states), 0, step, p, TerminationReason.PERIOD_FOUND)
    return FlowTrajectory(tuple(states), 0, None, p, TerminationReason.CAP_REACHED)


def weight_period_closed_form(ws: WeightSystem, p: int) -> int:
    """Closed form for the weight-orbit period.

    The numerator m returns after ord(p mod N/gcd(N, m)) steps, so the
    period is the lcm of those orders over the distinct nonzero weights;
    an all-zero system has period one.
    """
    _check_unit(p, ws.N)
    N = ws.N
    period = 1
    seen: set[int] = set()
    for _, pairs in ws.entries:
        for w, _ in pairs:
            m = w.numerator * (N // w.denominator)
            if m == 0 or m in seen:
                continue
            seen.add(m)
            period = math.lcm(period, mult_order(p, N // math.gcd(N, m)))
    return period


def katz_period_params(N: int, p: int) -> PeriodBoundParams:
    """All intermediate integers of the explicit bound computation."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    _check_unit(p, N)
    q = p % N
    if q == 0:
        q = N  # only possible when N == 1
    if q == 1:
        # p == 1 mod N makes every geometric sum term 1, so S_f == f mod N
        # and f = N is the minimal guaranteed value; the d-tower degenerates.
        return PeriodBoundParams(N, p, q, N, 1, 0, 0, N)
    d = math.gcd(N, q - 1)
    nprime = N // d
    qprime = (q - 1) // d
    if d == 1:
        k = 0
    else:
        k = 0
        while qprime % d ** (k + 1) == 0:
            k += 1
    f = euler_phi(N * d ** (k + 1))
    return PeriodBoundParams(N, p, q, d, nprime, qprime, k, f)


def katz_period_bound(N: int, p: int) -> int:
    """An f with N dividing 1 + p + ... + p**(f-1), from the gcd tower of (N, p).

    The divisibility is re-verified on every call; a failure would
    falsify the bound itself and raises instead of returning.
    """
    f = katz_period_params(N, p).f
    if geometric_sum_mod(p, f, N) != 0:
        raise RuntimeError(f"period bound f={f} failed its divisibility check for N={N}, p={p}")
    return f


def minimal_geometric_period(N: int, p: int, l: int) -> int:
    """Minimal f >= 1 with N dividing l * (1 + p + ... + p**(f-1)).

    Equivalently the minimal f with N/gcd(N, l) dividing the geometric
    sum.  The search is capped by the explicit bound for that modulus,
    within which a solution is guaranteed; exhausting the cap would
    falsify the bound and is a hard error.
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    _check_unit(p, N)
    if not 0 <= l < N:
        raise ValueError(f"defect l={l} outside [0, {N})")
    if l == 0:
        return 1
    modulus = N // math.gcd(N, l)
    return _minimal_sum_period(modulus, p)


def _minimal_sum_period(modulus: int, p: int) -> int:
    if modulus == 1:
        return 1
    cap = katz_period_bound(modulus, p) + 1
    total = 0
    power = 1 % modulus
    for f in range(1, cap + 1):
        total = (total + power) % modulus
        if total == 0:
            return f
        power = power * p % modulus
    raise RuntimeError(f"no geometric period below the guaranteed bound for modulus {modulus}, p={p}")


def minimal_equivariance_period(defects: EquivarianceDefects, p: int) -> int:
    """Minimal f making every defect's obstruction vanish simultaneously.

    N | l * S_f must hold for each defect l, i.e. L | S_f for L the lcm
    of the reduced moduli N/gcd(N, l).  An empty or all-zero defect list
    needs no descent correction and returns 1.
    """
    _check_unit(p, defects.N)
    L = 1
    for l in defects.defects:
        if l != 0:
            L = math.lcm(L, defects.N // math.gcd(defects.N, l))
    return _minimal_sum_period(L, p)


def global_period_bound(N: int) -> int:
    """phi(N * (N-2)!), the p-independent period bound for denominator N.

    The factorial is factored by Legendre's formula, so the totient is
    exact for any N without factoring a huge integer.
    """
    if N < 2:
        raise ValueError(f"global bound needs N >= 2, got {N}")
    factors = factorize(N)
    for prime in primes_upto(N - 2):
        exp = 0
        power = prime
        while power <= N - 2:
            exp += (N - 2) // power
            power *= prime
        factors[prime] = factors.get(prime, 0) + exp
    return phi_from_factorization(factors)


def rank_one_period(m: int, p: int) -> int:
    """Flow period of a torsion line bundle of order m.

    With zero Higgs field the flow step is Frobenius pullback, so the
    bundle moves by L -> L**p inside the m-torsion and returns after the
    multiplicative order of p mod m.  Primes dividing m are excluded,
    mirroring the almost-all-p setting.
    """
    if m < 1:
        raise ValueError(f"torsion order must be positive, got {m}")
    if math.gcd(m, p) != 1:
        raise ValueError(f"p={p} is not a unit modulo the torsion order {m}")
    return mult_order(p, m)


def prime_scan(ws_or_shape: Union[WeightSystem, ParabolicShape], p_max: int) -> tuple[ScanRow, ...]:
    """Weight period, explicit bound and divisibility witness for each prime.

    One row per prime p <= p_max coprime to N, in increasing order of p.
    Every row is checked against the p-independent global bound when
    N >= 2.  Rows are independent computations; the output is identical
    however they are scheduled.
    """
    if p_max < 2:
        raise ValueError(f"p_max must be at least 2, got {p_max}")
    ws = ws_or_shape.weights if isinstance(ws_or_shape, ParabolicShape) else ws_or_shape
    N = ws.N
    global_bound = global_period_bound(N) if N >= 2 else None
    rows = []
    for p in primes_upto(p_max):
        if math.gcd(p, N) != 1:
            continue
        period = weight_period_closed_form(ws, p)
        bound = katz_period_bound(N, p)
        witness = geometric_sum_mod(p, bound, N)
        if witness != 0:
            raise RuntimeError(f"divisibility witness failed at p={p}, N={N}")
        if global_bound is not None and period > global_bound:
            raise RuntimeError(f"period {period} at p={p} exceeds the global bound {global_bound}")
        rows.append(ScanRow(p, period, bound, witness))
    return tuple(rows)


def flow_trajectory(shape: ParabolicShape, p: int, cap: int = 10_000) -> FlowTrajectory:
    """Iterate the shape-level flow step and detect exact state repetition.

    A shape of nonzero parabolic degree is reported never periodic
    immediately: pardeg scales by p every step.  For pardeg zero the
    zeroth degree is determined by the weights, the state map is a
    bijection, and the period arrives within the weight period.
    """
    if p < 2:
        raise ValueError(f"flow requires p >= 2, got {p}")
    _check_unit(p, shape.curve.N)
    if cap < 1:
        raise ValueError(f"cap must be positive, got {cap}")
    if not is_periodicity_candidate(shape):
        return FlowTrajectory((shape,), 0, None, p, TerminationReason.NEVER_PERIODIC)
    seen = {shape: 0}
    states = [shape]
    current = shape
    for step in range(1, cap + 1):
        current = flow_step_shape(current, p)
        states.append(current)
        if current in seen:
            start = seen[current]
            return FlowTrajectory(tuple(states), start, step - start, p, TerminationReason.PERIOD_FOUND)
        seen[current] = step
    return FlowTrajectory(tuple(states), 0, None, p, TerminationReason.CAP_REACHED)
