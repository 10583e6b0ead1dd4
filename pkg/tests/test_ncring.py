import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qvieta.ncring import (DimensionMismatch, GenericityError, Matrix, NotInvertible,
                           det, format_rat, mat_add, mat_inv, mat_mul, mat_sub, random_tuple,
                           rank, rat, solve_consistent, solve_square, trace)

from oracles import leibniz_det

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=7)


def matrices(dim):
    return st.lists(st.lists(fractions, min_size=dim, max_size=dim),
                    min_size=dim, max_size=dim).map(Matrix)


pairs = st.integers(1, 3).flatmap(lambda d: st.tuples(matrices(d), matrices(d)))


def rand_matrix(rng, d, bound=5):
    return Matrix([[rng.randint(-bound, bound) for _ in range(d)] for _ in range(d)])


# -- rationals --------------------------------------------------------------

def test_rational_arithmetic():
    assert rat(1) / 2 + Fraction(1, 3) == Fraction(5, 6)
    assert rat("2/4") == Fraction(1, 2)
    assert format_rat(rat("2/4")) == "1/2"
    assert format_rat(rat("-6/3")) == "-2"
    with pytest.raises(ZeroDivisionError):
        Fraction(1, 3) / 0


def test_rat_rejects_float():
    with pytest.raises(TypeError):
        rat(0.5)


@given(fractions, fractions)
def test_add_sub_roundtrip(a, b):
    assert (a + b) - b == a


# -- matrices ---------------------------------------------------------------

def test_identity_product():
    a = Matrix([[1, 2], [3, 4]])
    assert mat_mul(Matrix.identity(2), a) == a
    assert mat_mul(a, Matrix.identity(2)) == a


def test_canonical_noncommuting_pair():
    a = Matrix([[0, 1], [0, 0]])
    b = Matrix([[0, 0], [1, 0]])
    assert mat_mul(a, b) != mat_mul(b, a)
    assert mat_mul(a, b) == Matrix([[1, 0], [0, 0]])


def test_add_sub():
    a, b = Matrix([[1, 2], [3, 4]]), Matrix([["1/2", 0], [0, -1]])
    assert mat_add(a, b) == Matrix([["3/2", 2], [3, 3]])
    assert mat_sub(mat_add(a, b), b) == a


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        Matrix.identity(2) * Matrix.identity(3)
    with pytest.raises(DimensionMismatch):
        Matrix([[1, 2]])


def test_associativity_random():
    rng = random.Random(3)
    for _ in range(50):
        a, b, c = (rand_matrix(rng, 2) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_inverse_examples():
    assert mat_inv(Matrix.identity(3)) == Matrix.identity(3)
    assert mat_inv(Matrix([[1, 1], [0, 1]])) == Matrix([[1, -1], [0, 1]])
    with pytest.raises(NotInvertible):
        mat_inv(Matrix([[1, 2], [2, 4]]))


def test_inverse_needs_row_swap():
    a = Matrix([[0, 1], [1, 0]])
    assert mat_inv(a) == a


@settings(max_examples=60)
@given(st.integers(1, 4).flatmap(matrices))
def test_inverse_both_sides(a):
    if det(a) == 0:
        with pytest.raises(NotInvertible):
            mat_inv(a)
        return
    i = Matrix.identity(a.dim)
    assert a * mat_inv(a) == i
    assert mat_inv(a) * a == i


def test_trace_det_examples():
    assert trace(Matrix.identity(2)) == 2
    assert det(Matrix([[1, 2], [3, 4]])) == -2
    assert det(Matrix([[0, 1], [1, 0]])) == -1


@settings(max_examples=60)
@given(st.integers(1, 4).flatmap(matrices))
def test_det_matches_leibniz(a):
    assert det(a) == leibniz_det(a.rows)


@given(pairs)
def test_trace_cyclic_det_multiplicative(pair):
    a, b = pair
    assert trace(a * b) == trace(b * a)
    assert det(a * b) == det(a) * det(b)


def test_power():
    x = Matrix([[1, 1], [0, 1]])
    assert x ** 0 == Matrix.identity(2)
    assert x ** 3 == Matrix([[1, 3], [0, 1]])


def test_json_roundtrip():
    a = Matrix([["1/2", -3], [0, "7/9"]])
    data = a.to_json()
    assert data == {"dim": 2, "entries": [["1/2", "-3"], ["0", "7/9"]]}
    assert Matrix.from_json(json.loads(json.dumps(data))) == a
    with pytest.raises(DimensionMismatch):
        Matrix.from_json({"dim": 3, "entries": [["1"]]})


# -- scalar solvers ---------------------------------------------------------

def test_solve_square_against_inverse():
    rng = random.Random(11)
    for _ in range(30):
        a = rand_matrix(rng, 4, 9)
        b = [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(2)] for _ in range(4)]
        if det(a) == 0:
            continue
        x = solve_square([[e / 3 for e in r] for r in a.rows], b)
        inv = mat_inv(a)
        expected = [[3 * sum(inv.rows[i][k] * b[k][j] for k in range(4)) for j in range(2)]
                    for i in range(4)]
        assert x == expected


def test_solve_square_singular():
    with pytest.raises(NotInvertible):
        solve_square([[1, 2], [2, 4]], [[1], [2]])


def test_rank_and_consistent_solve():
    assert rank([[1, 2, 3], [2, 4, 6], [0, 1, 1]]) == 2
    assert solve_consistent([[1, 1], [2, 2]], [1, 3]) is None
    assert solve_consistent([[1, 1], [2, 2]], [1, 2]) == [1, 0]


# -- random tuples ----------------------------------------------------------

def test_random_tuple_deterministic():
    a = random_tuple(3, 2, seed=99, entry_bound=10)
    b = random_tuple(3, 2, seed=99, entry_bound=10)
    assert a == b
    assert a.attempts == b.attempts
    assert random_tuple(3, 2, seed=100) != a


def test_random_tuple_entries_in_bound():
    t = random_tuple(4, 3, seed=5, entry_bound=2)
    assert all(abs(e) <= 2 and e.denominator == 1 for x in t for r in x.rows for e in r)


def test_n1_always_generic():
    for seed in range(20):
        assert random_tuple(1, 2, seed).attempts == 0


def test_n2_generic_iff_difference_invertible():
    t = random_tuple(2, 2, seed=42, entry_bound=5)
    assert det(t[1] - t[0]) != 0


def test_rejections_counted():
    calls = []

    def certify(xs):
        calls.append(xs)
        return None if len(calls) == 3 else "nope"

    t = random_tuple(2, 2, seed=1, certify=certify)
    assert t.attempts == 2


def test_retry_cap_error_names_first_failure():
    # bound 0 draws only zero matrices, so v_2 = 0 on every draw
    with pytest.raises(GenericityError, match="v_2 not invertible") as info:
        random_tuple(2, 2, seed=1, entry_bound=0, max_draws=5)
    assert "after 5 draws" in str(info.value)


def test_attempts_usually_small():
    assert sum(random_tuple(3, 2, s).attempts for s in range(50)) <= 50
