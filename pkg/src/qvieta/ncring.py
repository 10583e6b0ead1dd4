"""Exact rational matrices used as stand-ins for skew-field elements.

Every quantity in the Vieta computations (roots, coefficients, Vandermonde
quasideterminants) is a square matrix over ``fractions.Fraction``. Matrices
are immutable; all operations return new values and never round.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

RETRY_CAP = 100


class NotInvertible(ArithmeticError):
    """Raised when an exact inverse or linear solve does not exist."""


class DimensionMismatch(ValueError):
    pass


class GenericityError(ArithmeticError):
    """A tuple of roots failed genericity certification."""

    def __init__(self, message, site=None):
        super().__init__(message)
        self.site = site


def rat(value) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int or 'p/q' string")
    return Fraction(value)


def format_rat(value: Fraction) -> str:
    return str(Fraction(value))


class Matrix:
    """Square matrix of Fractions with value semantics."""

    __slots__ = ("rows", "dim", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(rat(e) for e in row) for row in rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise DimensionMismatch("matrix must be square and non-empty")
        self._set(rows)

    def _set(self, rows):
        self.rows = rows
        self.dim = len(rows)
        self._hash = None

    @classmethod
    def _raw(cls, rows) -> "Matrix":
        # rows must already be a square tuple of tuples of Fraction/int
        m = cls.__new__(cls)
        m._set(rows)
        return m

    @classmethod
    def identity(cls, dim: int) -> "Matrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(dim))
                              for i in range(dim)))

    @classmethod
    def zero(cls, dim: int) -> "Matrix":
        return cls._raw(tuple((Fraction(0),) * dim for _ in range(dim)))

    @classmethod
    def scalar(cls, value, dim: int = 1) -> "Matrix":
        return cls.identity(dim) * rat(value)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.rows)
        return f"Matrix([{body}])"

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionMismatch(f"dim {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._check(other)
        if self.dim == 1:
            return Matrix._raw(((self.rows[0][0] + other.rows[0][0],),))
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s))
                                 for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other):
        self._check(other)
        if self.dim == 1:
            return Matrix._raw(((self.rows[0][0] - other.rows[0][0],),))
        return Matrix._raw(tuple(tuple(a - b for a, b in zip(r, s))
                                 for r, s in zip(self.rows, other.rows)))

    def __neg__(self):
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.rows))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Matrix._raw(tuple(tuple(a * other for a in r) for r in self.rows))
        self._check(other)
        if self.dim == 1:
            return Matrix._raw(((self.rows[0][0] * other.rows[0][0],),))
        cols = [[(e.numerator, e.denominator) for e in c] for c in zip(*other.rows)]
        out = []
        for r in self.rows:
            r = [(e.numerator, e.denominator) for e in r]
            row = []
            for c in cols:
                # accumulate in ints, normalise once per entry
                num, den = 0, 1
                for (an, ad), (bn, bd) in zip(r, c):
                    if an and bn:
                        td = ad * bd
                        num = num * td + an * bn * den
                        den *= td
                row.append(Fraction(num, den))
            out.append(tuple(row))
        return Matrix._raw(tuple(out))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        return power(self, k)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def inverse(self) -> "Matrix":
        return mat_inv(self)

    def trace(self) -> Fraction:
        return trace(self)

    def det(self) -> Fraction:
        return det(self)

    def to_json(self) -> dict:
        return {"dim": self.dim, "entries": [[format_rat(e) for e in r] for r in self.rows]}

    @classmethod
    def from_json(cls, data) -> "Matrix":
        if isinstance(data, dict):
            m = cls(data["entries"])
            if "dim" in data and data["dim"] != m.dim:
                raise DimensionMismatch(f"declared dim {data['dim']} but got {m.dim}")
            return m
        return cls(data)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return a * b


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return a + b


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return a - b


def power(x: Matrix, k: int) -> Matrix:
    """x**k by iterated multiplication; x**0 is the identity."""
    if k < 0:
        raise ValueError("negative powers are not supported; invert first")
    result = Matrix.identity(x.dim)
    for _ in range(k):
        result = result * x
    return result


def mat_inv(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse, taking the first nonzero pivot in each column."""
    n = a.dim
    if n == 1:
        if a.rows[0][0] == 0:
            raise NotInvertible("matrix is singular")
        return Matrix._raw(((1 / a.rows[0][0],),))
    m = [list(r) for r in a.rows]
    inv = [list(r) for r in Matrix.identity(n).rows]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise NotInvertible("matrix is singular")
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
        p = m[col][col]
        m[col] = [e / p for e in m[col]]
        inv[col] = [e / p for e in inv[col]]
        for r in range(n):
            f = m[r][col]
            if r != col and f != 0:
                m[r] = [e - f * g for e, g in zip(m[r], m[col])]
                inv[r] = [e - f * g for e, g in zip(inv[r], inv[col])]
    return Matrix._raw(tuple(tuple(r) for r in inv))


def trace(a: Matrix) -> Fraction:
    return sum((a.rows[i][i] for i in range(a.dim)), Fraction(0))


def det(a: Matrix) -> Fraction:
    """Product of elimination pivots, with the sign of the row swaps."""
    n = a.dim
    m = [list(r) for r in a.rows]
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                m[r] = [e - f * g for e, g in zip(m[r], m[col])]
    return result


# -- scalar linear algebra on plain lists of Fractions ----------------------

def solve_square(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    """Solve ``a @ X = b`` exactly with fraction-free (Bareiss) elimination.

    ``a`` is N x N and ``b`` is N x K. Each row of the augmented system is
    first scaled to integers, elimination then runs entirely in Python ints,
    and only back substitution introduces fractions.
    """
    n = len(a)
    k = len(b[0]) if n else 0
    aug = []
    for row_a, row_b in zip(a, b):
        row = [rat(e) for e in row_a] + [rat(e) for e in row_b]
        lcm = 1
        for e in row:
            lcm = lcm * e.denominator // _gcd(lcm, e.denominator)
        aug.append([int(e * lcm) for e in row])

    prev = 1
    for c in range(n):
        pivot = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if pivot is None:
            raise NotInvertible("linear system is singular")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        p = aug[c][c]
        for r in range(c + 1, n):
            rc = aug[r][c]
            aug[r] = [(p * e - rc * f) // prev for e, f in zip(aug[r], aug[c])]
            aug[r][c] = 0
        prev = p

    x = [[Fraction(0)] * k for _ in range(n)]
    for r in range(n - 1, -1, -1):
        for col in range(k):
            s = Fraction(aug[r][n + col])
            for j in range(r + 1, n):
                if aug[r][j]:
                    s -= aug[r][j] * x[j][col]
            x[r][col] = s / aug[r][r]
    return x


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns of a rectangular matrix."""
    m = [[rat(e) for e in r] for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][c]
        m[r] = [e / p for e in m[r]]
        for i in range(len(m)):
            f = m[i][c]
            if i != r and f != 0:
                m[i] = [e - f * g for e, g in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def solve_consistent(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One exact solution of ``a @ x = b`` (free variables set to 0), or None."""
    ncols = len(a[0]) if a else 0
    m, pivots = rref([list(row) + [rhs] for row, rhs in zip(a, b)])
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = m[i][ncols]
    return x


# -- random generic tuples ---------------------------------------------------

@dataclass(frozen=True)
class GenericTuple:
    """A certified generic ordered tuple of roots.

    ``attempts`` counts the random draws that were rejected before this one.
    """
    n: int
    elements: tuple[Matrix, ...]
    seed: int
    attempts: int = 0

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]


def random_matrix(rng: random.Random, dim: int, entry_bound: int) -> Matrix:
    return Matrix._raw(tuple(tuple(Fraction(rng.randint(-entry_bound, entry_bound))
                                   for _ in range(dim)) for _ in range(dim)))


def random_tuple(n: int, dim: int, seed: int, entry_bound: int = 10,
                 certify: Callable | None = None,
                 max_draws: int = RETRY_CAP) -> GenericTuple:
    """Draw ``n`` integer matrices until ``certify`` accepts them.

    ``certify`` takes a list of matrices and returns ``None`` on success or a
    failure description; it defaults to :func:`qvieta.vieta.certify_generic`.
    """
    if n < 1 or dim < 1:
        raise ValueError("n and dim must be positive")
    if certify is None:
        from .vieta import certify_generic

        def certify(xs):
            return certify_generic(xs).failure

    rng = random.Random(seed)
    first_failure = None
    for rejected in range(max_draws):
        xs = [random_matrix(rng, dim, entry_bound) for _ in range(n)]
        failure = certify(xs)
        if failure is None:
            return GenericTuple(n, tuple(xs), seed, rejected)
        if first_failure is None:
            first_failure = failure
    raise GenericityError(
        f"no generic tuple after {max_draws} draws (n={n}, dim={dim}, seed={seed}); "
        f"first failure: {first_failure}", first_failure)


def dumps_matrix(m: Matrix) -> str:
    return json.dumps(m.to_json())
