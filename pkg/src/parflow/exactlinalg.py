"""Exact rational matrices and characteristic polynomials.

Just enough linear algebra for the residue computations: everything is a
tuple-of-tuples of Fractions, and the characteristic polynomial is exact.
No floating point anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Matrix = tuple[tuple[Fraction, ...], ...]
Poly = tuple[Fraction, ...]  # coefficients of x**n + c1*x**(n-1) + ... + cn, leading first


def as_matrix(rows: Iterable[Iterable[Fraction | int | str]]) -> Matrix:
    out = tuple(tuple(Fraction(v) for v in row) for row in rows)
    if out and any(len(row) != len(out[0]) for row in out):
        raise ValueError("ragged matrix rows")
    return out


def zero_matrix(rows: int, cols: int) -> Matrix:
    return tuple((Fraction(0),) * cols for _ in range(rows))


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if len(a[0]) != len(b):
        raise ValueError(f"shape mismatch: {len(a)}x{len(a[0])} times {len(b)}x{len(b[0])}")
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def is_zero_matrix(a: Matrix) -> bool:
    return all(v == 0 for row in a for v in row)


def is_nilpotent(a: Matrix) -> bool:
    """Exact nilpotence check: some power up to the size is the zero matrix."""
    n = len(a)
    if n == 0:
        return True
    if any(len(row) != n for row in a):
        raise ValueError("nilpotence is only defined for square matrices")
    power = a
    for _ in range(n):
        if is_zero_matrix(power):
            return True
        power = mat_mul(power, a)
    return is_zero_matrix(power)


def charpoly(a: Matrix) -> Poly:
    """Coefficients of det(x*I - A), monic, exact over the rationals.

    Clears denominators and runs the Faddeev-LeVerrier recursion over the
    integers, where every division by the step index is exact, then
    restores the scaling.  O(n**4) integer work.
    """
    n = len(a)
    if n == 0:
        return (Fraction(1),)
    if any(len(row) != n for row in a):
        raise ValueError("characteristic polynomial needs a square matrix")
    scale = 1
    for row in a:
        for v in row:
            scale = scale * v.denominator // math.gcd(scale, v.denominator)
    b = [[int(v * scale) for v in row] for row in a]
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    coeffs = [1]
    for k in range(1, n + 1):
        am = [[sum(b[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        trace = sum(am[i][i] for i in range(n))
        if trace % k != 0:
            raise RuntimeError("Faddeev-LeVerrier division was not exact; matrix arithmetic is broken")
        c = -trace // k
        coeffs.append(c)
        for i in range(n):
            am[i][i] += c
        m = am
    return tuple(Fraction(coeffs[k], scale**k) for k in range(n + 1))


def poly_mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, pv in enumerate(p):
        if pv:
            for j, qv in enumerate(q):
                out[i + j] += pv * qv
    return tuple(out)


def poly_from_eigenvalues(eigenvalues: Iterable[tuple[Fraction, int]]) -> Poly:
    """Expand prod (x - mu)**mult as a monic coefficient tuple."""
    poly: Poly = (Fraction(1),)
    for mu, mult in eigenvalues:
        factor = (Fraction(1), -Fraction(mu))
        for _ in range(mult):
            poly = poly_mul(poly, factor)
    return poly
