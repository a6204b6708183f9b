import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_character_system, random_weight_system, units_below
from parflow import (
    CharacterSystem,
    ResidueBlockAssembly,
    WeightSystem,
    assemble_pushforward_residue,
    chars_to_weights,
    check_adjusted,
    frobenius_on_chars,
    inverse_cartier_weights,
    pullback_residue_eigenvalues,
    weights_to_chars,
)
from parflow import exactlinalg as xl

F = Fraction


# ---------------------------------------------------------------- exact linalg


def det_gauss(matrix) -> Fraction:
    """Exact determinant by Gaussian elimination with pivoting (test oracle)."""
    m = [list(row) for row in matrix]
    n = len(m)
    det = F(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return F(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            if factor:
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return det


def poly_eval(coeffs, x: Fraction) -> Fraction:
    acc = F(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def charpoly_point_check(matrix, coeffs) -> bool:
    """det(xI - A) and the claimed coefficients agree at n+1 points."""
    n = len(matrix)
    for t in range(n + 1):
        x = F(t)
        shifted = tuple(
            tuple((x if i == j else F(0)) - matrix[i][j] for j in range(n)) for i in range(n)
        )
        if det_gauss(shifted) != poly_eval(coeffs, x):
            return False
    return True


def test_charpoly_small_cases():
    a = xl.as_matrix([[F(1, 2), 1], [0, F(1, 3)]])
    # det(xI - A) = (x - 1/2)(x - 1/3) = x^2 - 5/6 x + 1/6
    assert xl.charpoly(a) == (F(1), F(-5, 6), F(1, 6))
    assert xl.charpoly(xl.identity(3)) == (F(1), F(-3), F(3), F(-1))
    assert xl.charpoly(()) == (F(1),)


def test_charpoly_against_determinant_evaluation():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randrange(1, 6)
        a = tuple(
            tuple(F(rng.randrange(-6, 7), rng.randrange(1, 4)) for _ in range(n)) for _ in range(n)
        )
        assert charpoly_point_check(a, xl.charpoly(a))


def test_nilpotence_check():
    assert xl.is_nilpotent(xl.as_matrix([[0, 1], [0, 0]]))
    assert xl.is_nilpotent(xl.as_matrix([[2, -4], [1, -2]]))
    assert not xl.is_nilpotent(xl.as_matrix([[0, 1], [1, 0]]))


# ------------------------------------------------------------ the dictionary


@pytest.mark.parametrize(
    "N,c,expected",
    [(7, 0, F(0)), (4, 3, F(1, 4)), (5, 1, F(4, 5)), (5, 3, F(2, 5))],
)
def test_chars_to_weights_single(N, c, expected):
    cs = CharacterSystem(N, {"D": [(c, 1)]})
    assert chars_to_weights(cs) == WeightSystem(N, {"D": [(expected, 1)]})


def test_chars_to_weights_multiset_example():
    cs = CharacterSystem(5, {"D": [(1, 2), (3, 1)]})
    expected = WeightSystem(5, {"D": [(F(4, 5), 2), (F(2, 5), 1)]})
    assert chars_to_weights(cs) == expected


@pytest.mark.parametrize("N,w,expected", [(9, F(0), 0), (4, F(1, 4), 3)])
def test_weights_to_chars_single(N, w, expected):
    ws = WeightSystem(N, {"D": [(w, 1)]})
    assert weights_to_chars(ws) == CharacterSystem(N, {"D": [(expected, 1)]})


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32))
def test_dictionary_round_trip(seed):
    rng = random.Random(seed)
    cs = random_character_system(rng)
    assert weights_to_chars(chars_to_weights(cs)) == cs
    ws = random_weight_system(rng)
    assert chars_to_weights(weights_to_chars(ws)) == ws


def test_dictionary_round_trip_bulk():
    rng = random.Random(61)
    for _ in range(10_000):
        cs = random_character_system(rng)
        assert weights_to_chars(chars_to_weights(cs)) == cs
        ws = random_weight_system(rng)
        assert chars_to_weights(weights_to_chars(ws)) == ws


def test_frobenius_examples():
    cs = CharacterSystem(5, {"D": [(0, 1), (3, 2)]})
    out = frobenius_on_chars(cs, 2)
    assert out == CharacterSystem(5, {"D": [(0, 1), (1, 2)]})
    with pytest.raises(ValueError):
        frobenius_on_chars(cs, 5)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32))
def test_commuting_square(seed):
    # Frobenius on characters matches inverse Cartier on the dictionary image.
    rng = random.Random(seed)
    cs = random_character_system(rng)
    units = units_below(cs.N, 100) or [1]
    p = rng.choice(units)
    left = chars_to_weights(frobenius_on_chars(cs, p))
    right = inverse_cartier_weights(chars_to_weights(cs), p)
    assert left == right


# ------------------------------------------------------------ residue assembly


def test_assemble_trivial_example():
    asm = ResidueBlockAssembly(4, 1, [(1, 2, [[0, 0], [0, 0]]), (3, 1, [[0]])])
    matrix, eigenvalues = assemble_pushforward_residue(asm)
    assert eigenvalues == (F(1, 4), F(1, 4), F(3, 4))
    assert matrix == xl.as_matrix([[F(1, 4), 0, 0], [0, F(1, 4), 0], [0, 0, F(3, 4)]])


def test_assemble_higgs_case_all_zero():
    asm = ResidueBlockAssembly(
        6, 0, [(0, 2, [[0, 1], [0, 0]]), (4, 1, [[0]])], {(1, 0): [[2, 3]]}
    )
    _, eigenvalues = assemble_pushforward_residue(asm)
    assert eigenvalues == (F(0), F(0), F(0))


def test_assemble_derived_example_with_charpoly_oracle():
    asm = ResidueBlockAssembly(
        3,
        1,
        [(0, 2, [[0, 1], [0, 0]]), (2, 2, [[0, 5], [0, 0]])],
        {(1, 0): [[7, F(1, 2)], [-3, 4]]},
    )
    matrix, eigenvalues = assemble_pushforward_residue(asm)
    assert eigenvalues == (F(0), F(0), F(2, 3), F(2, 3))
    expected_poly = xl.poly_from_eigenvalues([(F(0), 2), (F(2, 3), 2)])
    assert charpoly_point_check(matrix, expected_poly)


def test_assemble_rejects_non_nilpotent_diagonal():
    with pytest.raises(ValueError, match="not nilpotent"):
        ResidueBlockAssembly(4, 1, [(1, 2, [[1, 0], [0, 1]])])


def test_assembly_rejects_bad_levels():
    with pytest.raises(ValueError, match="strictly increasing"):
        ResidueBlockAssembly(4, 1, [(2, 1, [[0]]), (1, 1, [[0]])])
    with pytest.raises(ValueError):
        ResidueBlockAssembly(4, 1, [(4, 1, [[0]])])


def random_nilpotent(rng: random.Random, s: int):
    """Strictly triangular matrix, optionally conjugated to look dense."""
    upper = rng.random() < 0.5
    m = [[F(0)] * s for _ in range(s)]
    for i in range(s):
        for j in range(i + 1, s):
            value = F(rng.randrange(-5, 6), rng.randrange(1, 3))
            if upper:
                m[i][j] = value
            else:
                m[j][i] = value
    mat = tuple(tuple(row) for row in m)
    if s > 1 and rng.random() < 0.5:
        i, j = rng.sample(range(s), 2)
        c = F(rng.randrange(-3, 4))
        e = tuple(tuple(F(1 if r == t else 0) + (c if (r, t) == (i, j) else 0) for t in range(s)) for r in range(s))
        e_inv = tuple(tuple(F(1 if r == t else 0) - (c if (r, t) == (i, j) else 0) for t in range(s)) for r in range(s))
        mat = xl.mat_mul(e, xl.mat_mul(mat, e_inv))
    return mat


def random_assembly(rng: random.Random, levels, sizes, lam, N):
    blocks = [(m, s, random_nilpotent(rng, s)) for m, s in zip(levels, sizes)]
    lower = {}
    for i in range(len(sizes)):
        for j in range(i):
            if rng.random() < 0.7:
                lower[(i, j)] = [
                    [F(rng.randrange(-4, 5), rng.randrange(1, 3)) for _ in range(sizes[j])]
                    for _ in range(sizes[i])
                ]
    return ResidueBlockAssembly(N, lam, blocks, lower)


def test_eigenvalues_do_not_depend_on_nilpotent_or_lower_choices():
    rng = random.Random(99)
    for _ in range(60):
        N = rng.randrange(2, 13)
        count = rng.randrange(1, min(4, N) + 1)
        levels = sorted(rng.sample(range(N), count))
        sizes = [rng.randrange(1, 4) for _ in levels]
        lam = F(rng.randrange(-3, 4), rng.randrange(1, 4))
        reference = None
        for _ in range(3):
            asm = random_assembly(rng, levels, sizes, lam, N)
            _, eigenvalues = assemble_pushforward_residue(asm)
            if reference is None:
                reference = eigenvalues
            assert eigenvalues == reference
        closed = sorted(lam * F(m, N) for m, s in zip(levels, sizes) for _ in range(s))
        assert list(reference) == closed


# ------------------------------------------------------------------- pullback


def test_pullback_eigenvalues_examples():
    assert pullback_residue_eigenvalues([(2, 1), (4, 3)], 1, 5) == (F(0),) * 4
    assert pullback_residue_eigenvalues([(8, 2)], F(7, 3), 9) == (F(0), F(0))
    assert pullback_residue_eigenvalues([(0, 1)], F(-2, 7), 3) == (F(0),)


def test_pullback_eigenvalues_exhaustive_small():
    rng = random.Random(3)
    for N in range(1, 31):
        for m in range(N):
            lam = F(rng.randrange(-9, 10), rng.randrange(1, 5))
            values = pullback_residue_eigenvalues([(m, rng.randrange(1, 4))], lam, N)
            assert all(v == 0 for v in values)


def test_pullback_rejects_out_of_range_level():
    with pytest.raises(ValueError):
        pullback_residue_eigenvalues([(9, 1)], 1, 9)


# ------------------------------------------------------------------- adjusted


def test_check_adjusted_examples():
    ok, violations = check_adjusted({"D": [(F(1, 4), F(0)), (F(2, 4), F(0))]}, 0)
    assert ok and violations == []
    ok, violations = check_adjusted({"D": [(F(1, 3), F(1, 3))]}, 1)
    assert ok
    ok, violations = check_adjusted({"D": [(F(1, 3), F(2, 3))]}, 1)
    assert not ok
    assert violations == [("D", F(1, 3), F(2, 3), F(1, 3))]


def test_check_adjusted_rejects_out_of_range_weight():
    with pytest.raises(ValueError):
        check_adjusted({"D": [(F(5, 4), F(0))]}, 1)
