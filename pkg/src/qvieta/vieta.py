"""Noncommutative Vieta formulas over generic matrix roots.

Given an ordered tuple ``x_1, ..., x_n`` of roots of the left equation::

    x^n + a_1 x^(n-1) + ... + a_n = 0        (coefficients on the left)

the coefficients are recovered three independent ways:

* :func:`coeffs_theorem2` -- signed sums of reversed products of the
  conjugated roots ``y_k = v_k x_k v_k^{-1}``;
* :func:`coeffs_theorem3` -- a ratio of two Vandermonde-type
  quasideterminants;
* :func:`coeffs_linear_oracle` -- a direct exact linear solve, used as the
  reference the other two are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import NamedTuple, Sequence

from .ncring import GenericityError, Matrix, NotInvertible, det, solve_square, trace
from .quasidet import BlockMatrix, FailureSite, quasidet


@dataclass(frozen=True)
class CoefficientVector:
    coeffs: tuple[Matrix, ...]
    method: str

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k: int) -> Matrix:
        """1-based access: ``cv[k]`` is ``a_k``."""
        if not 1 <= k <= len(self.coeffs):
            raise IndexError(k)
        return self.coeffs[k - 1]

    def same_as(self, other: "CoefficientVector") -> bool:
        return self.coeffs == other.coeffs


@dataclass(frozen=True)
class VandermondeSystem:
    xs: tuple[Matrix, ...]
    vs: tuple[Matrix, ...]
    ys: tuple[Matrix, ...]


class Genericity(NamedTuple):
    failure: str | None = None
    site: FailureSite | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None


def _as_list(xs) -> list[Matrix]:
    xs = list(xs)
    if not xs:
        raise ValueError("need at least one root")
    d = xs[0].dim
    if any(x.dim != d for x in xs):
        raise ValueError("roots have mixed dimensions")
    return xs


def _powers(x: Matrix, top: int) -> list[Matrix]:
    out = [Matrix.identity(x.dim)]
    for _ in range(top):
        out.append(out[-1] * x)
    return out


def power_block(xs: Sequence[Matrix], exponents: Sequence[int]) -> BlockMatrix:
    """Block matrix with row ``r`` holding ``x_c ** exponents[r-1]`` in column ``c``."""
    top = max(exponents)
    pw = [_powers(x, top) for x in xs]
    return BlockMatrix.from_rows([[pw[c][e] for c in range(len(xs))] for e in exponents])


def _qd_or_raise(a: BlockMatrix, p: int, q: int, what: str) -> Matrix:
    res = quasidet(a, p, q)
    if not res.defined:
        raise GenericityError(f"{what} undefined: {res.failure_site}", res.failure_site)
    return res.value


def _inv_or_raise(m: Matrix, what: str) -> Matrix:
    try:
        return m.inverse()
    except NotInvertible:
        raise GenericityError(f"{what} not invertible") from None


def vandermonde_quasidet(xs: Sequence[Matrix], k: int) -> Matrix:
    """``v_k``: quasideterminant at (1, k) of the k x k matrix of rows
    ``x^(k-1), ..., x, 1`` over ``x_1 .. x_k``. ``v_1`` is the identity."""
    xs = _as_list(xs)
    if not 1 <= k <= len(xs):
        raise ValueError(f"k={k} out of range 1..{len(xs)}")
    if k == 1:
        return Matrix.identity(xs[0].dim)
    a = power_block(xs[:k], range(k - 1, -1, -1))
    return _qd_or_raise(a, 1, k, f"v_{k}")


def vandermonde_system(xs) -> VandermondeSystem:
    xs = _as_list(xs)
    vs, ys = [], []
    for k, x in enumerate(xs, start=1):
        v = vandermonde_quasidet(xs, k)
        v_inv = _inv_or_raise(v, f"v_{k}")
        vs.append(v)
        ys.append(v * x * v_inv)
    return VandermondeSystem(tuple(xs), tuple(vs), tuple(ys))


def conjugated_roots(xs) -> list[Matrix]:
    """``y_k = v_k x_k v_k^{-1}`` for k = 1..n."""
    return list(vandermonde_system(xs).ys)


def _reversed_product(ys, idx, dim):
    out = Matrix.identity(dim)
    for i in reversed(idx):
        out = out * ys[i]
    return out


def coeffs_theorem2(ys: Sequence[Matrix]) -> CoefficientVector:
    """``a_k = (-1)^k * sum_{i_1<...<i_k} y_{i_k} ... y_{i_1}``.

    Takes the conjugated roots, not the raw roots.
    """
    ys = _as_list(ys)
    n, dim = len(ys), ys[0].dim
    out = []
    for k in range(1, n + 1):
        total = Matrix.zero(dim)
        for idx in combinations(range(n), k):
            total = total + _reversed_product(ys, idx, dim)
        out.append(-total if k % 2 else total)
    return CoefficientVector(tuple(out), "theorem2")


def theorem2_terms(n: int, k: int) -> list[tuple[int, ...]]:
    """Index words (1-based, as multiplied left to right) summed in ``a_k``."""
    return [tuple(i + 1 for i in reversed(idx)) for idx in combinations(range(n), k)]


def theorem3_blocks(xs: Sequence[Matrix], k: int) -> tuple[BlockMatrix, BlockMatrix]:
    """The numerator (power ``n-k`` skipped) and full Vandermonde block matrices."""
    n = len(xs)
    skipped = [e for e in range(n, -1, -1) if e != n - k]
    return power_block(xs, skipped), power_block(xs, range(n - 1, -1, -1))


def coeffs_theorem3(xs) -> CoefficientVector:
    """``a_k = -|V'_k|_(1,n) * |W|_(k,n)^{-1}``."""
    xs = _as_list(xs)
    n = len(xs)
    out = []
    for k in range(1, n + 1):
        num_block, den_block = theorem3_blocks(xs, k)
        num = _qd_or_raise(num_block, 1, n, f"theorem-3 numerator k={k}")
        den = _qd_or_raise(den_block, k, n, f"theorem-3 denominator k={k}")
        out.append(-(num * _inv_or_raise(den, f"theorem-3 denominator k={k}")))
    return CoefficientVector(tuple(out), "theorem3")


def coeffs_linear_oracle(xs) -> CoefficientVector:
    """Solve ``sum_j a_j x_i^(n-j) = -x_i^n`` (i = 1..n) as one exact linear system.

    Writing ``A = [a_1 ... a_n]`` (d x nd) and ``W`` for the block matrix with
    ``W[j, i] = x_i^(n-j)``, the equations read ``A W = -[x_1^n ... x_n^n]``;
    transposed, this is an nd x nd system with d right-hand sides.
    """
    xs = _as_list(xs)
    n, d = len(xs), xs[0].dim
    pw = [_powers(x, n) for x in xs]
    # W^T: block row i holds (x_i^(n-j))^T for j = 1..n
    wt = []
    rhs = []
    for i in range(n):
        for r in range(d):
            wt.append([pw[i][n - j].rows[c][r] for j in range(1, n + 1) for c in range(d)])
            rhs.append([-pw[i][n].rows[c][r] for c in range(d)])
    try:
        sol = solve_square(wt, rhs)
    except NotInvertible:
        raise GenericityError("roots are not independent (block Vandermonde singular)") from None
    # sol rows j*d .. j*d+d-1 form a_j^T
    coeffs = tuple(Matrix._raw(tuple(zip(*sol[j * d:(j + 1) * d]))) for j in range(n))
    return CoefficientVector(coeffs, "linear_oracle")


def _coeff_list(coeffs) -> list[Matrix]:
    return list(coeffs.coeffs if isinstance(coeffs, CoefficientVector) else coeffs)


def residual_left(xs, coeffs) -> list[Matrix]:
    """``x_i^n + a_1 x_i^(n-1) + ... + a_n`` for every root."""
    xs, a = _as_list(xs), _coeff_list(coeffs)
    n = len(a)
    if len(xs) != n:
        raise ValueError("need as many roots as coefficients")
    out = []
    for x in xs:
        pw = _powers(x, n)
        r = pw[n]
        for k in range(1, n + 1):
            r = r + a[k - 1] * pw[n - k]
        out.append(r)
    return out


def residual_right(x: Matrix, coeffs) -> Matrix:
    """``x^n + x^(n-1) a_1 + x^(n-2) a_2 + ... + a_n``."""
    a = _coeff_list(coeffs)
    n = len(a)
    pw = _powers(x, n)
    r = pw[n]
    for k in range(1, n + 1):
        r = r + pw[n - k] * a[k - 1]
    return r


def theorem2_from_roots(xs) -> CoefficientVector:
    return coeffs_theorem2(conjugated_roots(xs))


def theorem4_check(xs) -> bool:
    """The last conjugated root solves the right equation."""
    ys = conjugated_roots(xs)
    return residual_right(ys[-1], coeffs_theorem2(ys)).is_zero()


def symmetry_check(xs, perm: Sequence[int]) -> bool:
    """Coefficients are unchanged when the roots are reordered by ``perm``
    (0-based positions). Raises GenericityError if the reordering is not
    generic, which callers treat as a skip."""
    xs = _as_list(xs)
    if sorted(perm) != list(range(len(xs))):
        raise ValueError(f"{perm} is not a permutation of 0..{len(xs) - 1}")
    base = theorem2_from_roots(xs)
    return theorem2_from_roots([xs[i] for i in perm]).same_as(base)


def all_permutations_check(xs) -> bool:
    xs = _as_list(xs)
    base = theorem2_from_roots(xs)
    return all(theorem2_from_roots([xs[i] for i in p]).same_as(base)
               for p in permutations(range(len(xs))))


class Witness(NamedTuple):
    product_differs: bool   # y1*y2 changes when x1, x2 are swapped
    reversed_agrees: bool   # y2*y1 does not

    def __bool__(self):
        return self.product_differs and self.reversed_agrees


def nonsymmetry_witness(xs) -> Witness:
    x1, x2 = _as_list(xs)[:2]
    y1, y2 = conjugated_roots([x1, x2])
    z1, z2 = conjugated_roots([x2, x1])
    return Witness(y1 * y2 != z1 * z2, y2 * y1 == z2 * z1)


def theorem1_check(xs, coeffs: CoefficientVector | None = None) -> bool:
    """``tr a_1 = -sum tr x_i`` and ``det a_n = prod det(-x_i)``."""
    xs = _as_list(xs)
    a = _coeff_list(coeffs if coeffs is not None else theorem2_from_roots(xs))
    trace_ok = trace(a[0]) == -sum((trace(x) for x in xs), Fraction(0))
    prod = Fraction(1)
    for x in xs:
        prod *= det(-x)
    return trace_ok and det(a[-1]) == prod


def certify_generic(xs) -> Genericity:
    """First obstruction to genericity, or an all-clear.

    Checks every ``v_k`` (k >= 2) is defined and invertible, then the
    quasideterminants used by :func:`coeffs_theorem3`, then solvability of
    the linear oracle.
    """
    xs = _as_list(xs)
    n = len(xs)
    for k in range(2, n + 1):
        res = quasidet(power_block(xs[:k], range(k - 1, -1, -1)), 1, k)
        if not res.defined:
            return Genericity(f"v_{k} undefined: {res.failure_site}", res.failure_site)
        try:
            res.value.inverse()
        except NotInvertible:
            return Genericity(f"v_{k} not invertible")
    try:
        coeffs_theorem3(xs)
        coeffs_linear_oracle(xs)
    except GenericityError as exc:
        return Genericity(str(exc), exc.site)
    return Genericity()


# -- closed forms printed for n = 2 ------------------------------------------

def closed_form_n2(x1: Matrix, x2: Matrix) -> tuple[Matrix, Matrix]:
    """``a_1 = -(x2^2 - x1^2)(x2 - x1)^{-1}``, ``a_2 = -(x2 - x1)(x2^{-1} - x1^{-1})^{-1}``."""
    d_inv = (x2 - x1).inverse()
    a1 = -((x2 * x2 - x1 * x1) * d_inv)
    a2 = -((x2 - x1) * (x2.inverse() - x1.inverse()).inverse())
    return a1, a2


def two_sided_identity(x1: Matrix, x2: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """The three expressions ``x2 (x2-x1)^{-1} x1``, ``(x1^{-1} - x2^{-1})^{-1}``
    and ``x1 (x2-x1)^{-1} x2``, which coincide whenever all are defined."""
    d_inv = (x2 - x1).inverse()
    return (x2 * d_inv * x1,
            (x1.inverse() - x2.inverse()).inverse(),
            x1 * d_inv * x2)
