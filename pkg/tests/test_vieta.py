from itertools import combinations
from math import comb, prod

import pytest

from qvieta.ncring import GenericityError, Matrix, det, random_tuple, trace
from qvieta.quasidet import commutative_reduction_check
from qvieta.vieta import (
    all_permutations_check, certify_generic, closed_form_n2, coeffs_linear_oracle,
    coeffs_theorem2, coeffs_theorem3, conjugated_roots, nonsymmetry_witness, power_block,
    residual_left, residual_right, symmetry_check, theorem1_check, theorem2_terms,
    theorem4_check, two_sided_identity, vandermonde_quasidet, vandermonde_system)

from oracles import sympy_vieta

X1 = Matrix([[1, 2], [3, 4]])
X2 = Matrix([[0, 1], [1, 1]])


def scalars(*vals):
    return [Matrix.scalar(v) for v in vals]


def values(cv):
    return [m.rows[0][0] for m in cv.coeffs]


# -- Vandermonde quasideterminants ------------------------------------------

def test_v1_is_identity():
    assert vandermonde_quasidet([X1, X2], 1) == Matrix.identity(2)


def test_v2_is_difference():
    assert vandermonde_quasidet([X1, X2], 2) == X2 - X1
    t = random_tuple(3, 3, seed=4)
    assert vandermonde_quasidet(t, 2) == t[1] - t[0]


def test_v3_scalar():
    # (x1 - x3)(x2 - x3) at (1, 2, 3), from a symbolic determinant ratio
    assert vandermonde_quasidet(scalars(1, 2, 3), 3) == Matrix.scalar(2)
    assert commutative_reduction_check(power_block(scalars(1, 2, 3), [2, 1, 0]), 1, 3)


def test_vandermonde_system_invariants():
    t = random_tuple(4, 2, seed=8)
    vs = vandermonde_system(t)
    assert vs.vs[0] == Matrix.identity(2)
    for v, x, y in zip(vs.vs, vs.xs, vs.ys):
        assert y * v == v * x


# -- conjugated roots -------------------------------------------------------

def test_y1_is_x1():
    for seed in range(5):
        t = random_tuple(3, 2, seed)
        assert conjugated_roots(t)[0] == t[0]


def test_commuting_scalars_fixed():
    assert conjugated_roots(scalars(1, 2, 5)) == scalars(1, 2, 5)


def test_y2_closed_form():
    y1, y2 = conjugated_roots([X1, X2])
    d = X2 - X1
    assert y2 == d * X2 * d.inverse()
    assert y2 == Matrix([[-1, 1], [-1, 2]])


@pytest.mark.parametrize("seed", range(5))
def test_conjugation_preserves_spectrum_invariants(seed):
    t = random_tuple(3, 3, seed)
    for x, y in zip(t, conjugated_roots(t)):
        assert trace(x) == trace(y) and det(x) == det(y)


# -- coefficient constructions ----------------------------------------------

def test_scalar_vieta_n2():
    xs = scalars(1, 2)
    assert values(coeffs_theorem2(conjugated_roots(xs))) == [-3, 2]
    assert values(coeffs_theorem3(xs)) == [-3, 2]
    assert values(coeffs_linear_oracle(xs)) == [-3, 2]


def test_frozen_matrix_pair():
    # a_1, a_2 solved independently with sympy for X1, X2
    a1 = Matrix([[0, -3], [-2, -6]])
    a2 = Matrix([[2, 2], [5, 6]])
    for cv in (coeffs_theorem2(conjugated_roots([X1, X2])), coeffs_theorem3([X1, X2]),
               coeffs_linear_oracle([X1, X2])):
        assert cv.coeffs == (a1, a2)
    assert closed_form_n2(X1, X2) == (a1, a2)


def test_n3_a2_explicit():
    t = random_tuple(3, 2, seed=12)
    y1, y2, y3 = conjugated_roots(t)
    cv = coeffs_theorem2([y1, y2, y3])
    assert cv[1] == -(y1 + y2 + y3)
    assert cv[2] == y2 * y1 + y3 * y2 + y3 * y1
    assert cv[3] == -(y3 * y2 * y1)


@pytest.mark.parametrize("n", range(1, 6))
def test_term_count(n):
    for k in range(1, n + 1):
        terms = theorem2_terms(n, k)
        assert len(terms) == comb(n, k)
        assert all(list(w) == sorted(w, reverse=True) for w in terms)


def test_n1_edge():
    x = Matrix([[2, 1], [0, 3]])
    for cv in (coeffs_theorem2(conjugated_roots([x])), coeffs_theorem3([x]),
               coeffs_linear_oracle([x])):
        assert cv.coeffs == (-x,)


@pytest.mark.parametrize("n,d", [(2, 2), (2, 3), (3, 2)])
def test_linear_oracle_matches_sympy(n, d):
    t = random_tuple(n, d, seed=n * d, entry_bound=4)
    assert list(coeffs_linear_oracle(t).coeffs) == sympy_vieta(list(t))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_cross_method_agreement(n, d):
    for seed in range(2):
        t = random_tuple(n, d, seed=1000 * n + 10 * d + seed)
        t2 = coeffs_theorem2(conjugated_roots(t))
        assert t2.same_as(coeffs_linear_oracle(t))
        assert t2.same_as(coeffs_theorem3(t))
        assert all(r.is_zero() for r in residual_left(t, t2))


@pytest.mark.parametrize("vals", [(1, 2, 3), (2, -1, 5, 7), (-3, 4)])
def test_commutative_collapse(vals):
    cv = coeffs_theorem2(conjugated_roots(scalars(*vals)))
    for k in range(1, len(vals) + 1):
        e_k = sum(prod(c) for c in combinations(vals, k))
        assert cv[k] == Matrix.scalar((-1) ** k * e_k)


# -- residuals --------------------------------------------------------------

def test_residual_left_oracle_zero_and_perturbed():
    t = random_tuple(3, 2, seed=21)
    a = list(coeffs_linear_oracle(t).coeffs)
    assert all(r.is_zero() for r in residual_left(t, a))
    a[-1] = a[-1] + Matrix.identity(2)
    assert residual_left(t, a) == [Matrix.identity(2)] * 3


def test_residual_right_commuting_matches_left():
    xs = scalars(2, 3)
    a = [Matrix.scalar(5), Matrix.scalar(-7)]
    for x, left in zip(xs, residual_left(xs, a)):
        assert residual_right(x, a) == left


def test_residual_right_nilpotent():
    x = Matrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert residual_right(x, [Matrix.zero(3)] * 3).is_zero()


def test_residual_right_orientation():
    x, a = X1, [X2]
    assert residual_right(x, a) == x + X2
    x2, a2 = X1, [X2, Matrix.zero(2)]
    assert residual_right(x2, a2) == X1 * X1 + X1 * X2
    assert residual_left([x2, X2], a2)[0] == X1 * X1 + X2 * X1


@pytest.mark.parametrize("n,d", [(2, 2), (3, 3), (4, 2)])
def test_theorem4(n, d):
    assert theorem4_check(random_tuple(n, d, seed=7 * n + d))


def test_theorem4_scalars():
    assert theorem4_check(scalars(1, 2, 3, 4))


def test_left_roots_are_not_right_roots():
    # the right equation is genuinely different: x_n itself is not a right root
    t = random_tuple(2, 2, seed=3)
    cv = coeffs_theorem2(conjugated_roots(t))
    assert not residual_right(t[1], cv).is_zero()


# -- symmetry ---------------------------------------------------------------

def test_swap_n2_and_identity_permutation():
    assert symmetry_check([X1, X2], (1, 0))
    assert symmetry_check([X1, X2], (0, 1))


def test_two_sided_identity_frozen():
    a, b, c = two_sided_identity(X1, X2)
    assert a == b == c


def test_all_permutations_n3_n4():
    assert all_permutations_check(random_tuple(3, 2, seed=31))
    assert all_permutations_check(random_tuple(4, 2, seed=32))


def test_symmetry_rejects_bad_permutation():
    with pytest.raises(ValueError):
        symmetry_check([X1, X2], (0, 0))


def test_nonsymmetry_witness():
    w = nonsymmetry_witness([X1, X2])
    assert w.product_differs and w.reversed_agrees and w


def test_nonsymmetry_commuting_scalars_coincide():
    w = nonsymmetry_witness(scalars(1, 2))
    assert not w.product_differs and w.reversed_agrees and not w


# -- Theorem 1 corollary ----------------------------------------------------

def test_theorem1_scalars():
    cv = coeffs_theorem2(conjugated_roots(scalars(1, 2)))
    assert trace(cv[1]) == -3 and det(cv[2]) == 2
    assert theorem1_check(scalars(1, 2))


@pytest.mark.parametrize("seed", range(3))
def test_theorem1_random(seed):
    assert theorem1_check(random_tuple(3, 2, seed))


def test_theorem1_detects_wrong_coefficients():
    t = random_tuple(3, 2, seed=0)
    a = list(coeffs_theorem2(conjugated_roots(t)).coeffs)
    a[0] = a[0] + Matrix.identity(2)
    assert not theorem1_check(t, a)


# -- genericity -------------------------------------------------------------

def test_certify_fails_at_v2():
    x1 = Matrix([[1, 0], [0, 1]])
    x2 = Matrix([[2, 0], [0, 1]])  # x2 - x1 singular
    g = certify_generic([x1, x2])
    assert not g.ok and "v_2" in g.failure


def test_certify_distinct_scalars():
    assert certify_generic(scalars(1, 2, 3, 4)).ok
    assert certify_generic(scalars(1, 2, 3)).ok


def test_conjugated_roots_raise_when_not_generic():
    with pytest.raises(GenericityError):
        conjugated_roots(scalars(1, 1))


def test_certify_flags_singular_root_for_theorem3():
    # x1 = 0 keeps v_2 invertible but |W|_{22} = 1 - x1^{-1} x2 is undefined
    g = certify_generic(scalars(0, 2))
    assert not g.ok and "theorem-3" in g.failure
