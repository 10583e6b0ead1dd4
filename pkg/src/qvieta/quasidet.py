"""Quasideterminants of block matrices with matrix entries.

The quasideterminant at row label ``p`` and column label ``q`` is defined
recursively::

    |A|_pq = a_pq - sum_{i != p, j != q} a_pj * |A^pq|_ij^{-1} * a_iq

where ``A^pq`` drops row ``p`` and column ``q``. Row and column indices are
opaque labels that survive submatrix extraction, so the recursion is keyed on
label sets rather than positions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .ncring import DimensionMismatch, Matrix, NotInvertible, det


class DegenerateMinor(ArithmeticError):
    """A scalar check was skipped because a needed minor vanished."""


@dataclass(frozen=True)
class FailureSite:
    """Where an inverse did not exist: the inner quasideterminant
    ``|A[rows, cols]|_position`` was singular."""
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    position: tuple[int, int]

    def __str__(self):
        i, j = self.position
        return f"|A[rows={list(self.rows)}, cols={list(self.cols)}]|_({i},{j}) not invertible"

    def to_json(self):
        return {"rows": list(self.rows), "cols": list(self.cols),
                "position": list(self.position)}


@dataclass(frozen=True)
class QuasidetResult:
    value: Matrix | None
    failure_site: FailureSite | None = None

    @property
    def defined(self) -> bool:
        return self.failure_site is None


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    entries: Mapping[tuple[int, int], Matrix] = field(repr=False)

    def __post_init__(self):
        if len(self.rows) != len(self.cols):
            raise DimensionMismatch("block matrix must be square")
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            raise ValueError("duplicate index labels")
        dims = {self.entries[i, j].dim for i in self.rows for j in self.cols}
        if len(dims) != 1:
            raise DimensionMismatch(f"entries have mixed dimensions {sorted(dims)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Matrix]],
                  row_labels: Sequence[int] | None = None,
                  col_labels: Sequence[int] | None = None) -> "BlockMatrix":
        n = len(rows)
        row_labels = tuple(row_labels or range(1, n + 1))
        col_labels = tuple(col_labels or range(1, n + 1))
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("block matrix must be square")
        entries = {}
        for i, row in zip(row_labels, rows):
            for j, e in zip(col_labels, row):
                entries[i, j] = e if isinstance(e, Matrix) else Matrix.scalar(e)
        return cls(row_labels, col_labels, entries)

    @property
    def order(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        return self.entries[self.rows[0], self.cols[0]].dim

    def __getitem__(self, key) -> Matrix:
        return self.entries[key]

    def __eq__(self, other):
        if not isinstance(other, BlockMatrix):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and all(self[i, j] == other[i, j] for i in self.rows for j in self.cols))

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "dim": self.dim,
            "rows": list(self.rows),
            "cols": list(self.cols),
            "entries": [[self[i, j].to_json()["entries"] for j in self.cols] for i in self.rows],
        }

    @classmethod
    def from_json(cls, data: dict) -> "BlockMatrix":
        try:
            order = data["order"]
            raw = data["entries"]
        except KeyError as exc:
            raise ValueError(f"block matrix JSON missing field {exc}") from None
        if len(raw) != order:
            raise ValueError(f"'entries' has {len(raw)} rows, expected order {order}")
        rows = []
        for r, row in enumerate(raw):
            if len(row) != order:
                raise ValueError(f"entries[{r}] has {len(row)} items, expected {order}")
            parsed = []
            for c, e in enumerate(row):
                try:
                    parsed.append(Matrix.from_json(e) if isinstance(e, (list, dict))
                                  else Matrix.scalar(e))
                except (ValueError, TypeError, ZeroDivisionError) as exc:
                    raise ValueError(f"entries[{r}][{c}]: {exc}") from None
            rows.append(parsed)
        bm = cls.from_rows(rows, data.get("rows"), data.get("cols"))
        if "dim" in data and data["dim"] != bm.dim:
            raise ValueError(f"declared dim {data['dim']} but entries have dim {bm.dim}")
        return bm

    @classmethod
    def loads(cls, text: str) -> "BlockMatrix":
        return cls.from_json(json.loads(text))


def submatrix(a: BlockMatrix, p: int, q: int) -> BlockMatrix:
    """Drop row label ``p`` and column label ``q``; other labels are kept."""
    if p not in a.rows:
        raise KeyError(f"row label {p} not in {a.rows}")
    if q not in a.cols:
        raise KeyError(f"column label {q} not in {a.cols}")
    rows = tuple(i for i in a.rows if i != p)
    cols = tuple(j for j in a.cols if j != q)
    return BlockMatrix(rows, cols, {(i, j): a[i, j] for i in rows for j in cols})


class _Evaluator:
    """One memo table shared by every quasideterminant of one block matrix."""

    def __init__(self, a: BlockMatrix, memoize: bool = True):
        self.a = a
        self.memoize = memoize
        self.memo: dict = {}
        self.inverses: dict = {}
        self._order_cache: dict = {}
        # canonical label order for iteration and diagnostics
        self.row_rank = {r: k for k, r in enumerate(a.rows)}
        self.col_rank = {c: k for k, c in enumerate(a.cols)}

    def _ordered(self, labels, rank):
        key = (labels, rank is self.row_rank)
        out = self._order_cache.get(key)
        if out is None:
            out = self._order_cache[key] = tuple(sorted(labels, key=rank.__getitem__))
        return out

    def __call__(self, rows: frozenset, cols: frozenset, p: int, q: int) -> QuasidetResult:
        key = (rows, cols, p, q)
        if self.memoize and key in self.memo:
            return self.memo[key]
        a = self.a
        if len(rows) == 1:
            result = QuasidetResult(a[p, q])
        else:
            sub_rows, sub_cols = rows - {p}, cols - {q}
            acc = a[p, q]
            result = None
            for j in self._ordered(sub_cols, self.col_rank):
                for i in self._ordered(sub_rows, self.row_rank):
                    inner = self(sub_rows, sub_cols, i, j)
                    if not inner.defined:
                        result = inner
                        break
                    inv = self._inverse((sub_rows, sub_cols, i, j), inner.value)
                    if inv is None:
                        result = QuasidetResult(None, FailureSite(
                            self._ordered(sub_rows, self.row_rank),
                            self._ordered(sub_cols, self.col_rank), (i, j)))
                        break
                    acc = acc - a[p, j] * inv * a[i, q]
                if result is not None:
                    break
            if result is None:
                result = QuasidetResult(acc)
        if self.memoize:
            self.memo[key] = result
        return result

    def _inverse(self, key, value: Matrix) -> Matrix | None:
        if self.memoize and key in self.inverses:
            return self.inverses[key]
        try:
            inv = value.inverse()
        except NotInvertible:
            inv = None
        if self.memoize:
            self.inverses[key] = inv
        return inv

    def at(self, p: int, q: int) -> QuasidetResult:
        if p not in self.row_rank:
            raise KeyError(f"row label {p} not in {self.a.rows}")
        if q not in self.col_rank:
            raise KeyError(f"column label {q} not in {self.a.cols}")
        return self(frozenset(self.a.rows), frozenset(self.a.cols), p, q)


def quasidet(a: BlockMatrix, p: int, q: int, memoize: bool = True) -> QuasidetResult:
    """Quasideterminant ``|a|_pq``.

    Never raises on singular inner terms; instead returns a result with
    ``defined == False`` and the first failure site in evaluation order
    (column-major over the inner double sum).
    """
    return _Evaluator(a, memoize).at(p, q)


def all_quasidets(a: BlockMatrix) -> dict[tuple[int, int], QuasidetResult]:
    ev = _Evaluator(a)
    return {(p, q): ev.at(p, q) for p in a.rows for q in a.cols}


def memo_size(a: BlockMatrix, positions=None) -> int:
    """Number of distinct memo entries used to evaluate ``positions``."""
    ev = _Evaluator(a)
    for p, q in positions or [(p, q) for p in a.rows for q in a.cols]:
        ev.at(p, q)
    return len(ev.memo)


def scalar_matrix(a: BlockMatrix) -> Matrix:
    """The ordinary scalar matrix of a block matrix whose entries are 1x1."""
    if a.dim != 1:
        raise DimensionMismatch("scalar view needs 1x1 entries")
    return Matrix._raw(tuple(tuple(a[i, j].rows[0][0] for j in a.cols) for i in a.rows))


def signed_det_ratio(a: BlockMatrix, p: int, q: int) -> Fraction:
    """(-1)^(p+q) det A / det A^pq, with p, q taken as 1-based ranks."""
    minor = det(scalar_matrix(submatrix(a, p, q))) if a.order > 1 else Fraction(1)
    if minor == 0:
        raise DegenerateMinor(f"det A^({p},{q}) = 0")
    sign = -1 if (a.rows.index(p) + a.cols.index(q)) % 2 else 1
    return sign * det(scalar_matrix(a)) / minor


def commutative_reduction_check(a: BlockMatrix, p: int, q: int) -> bool:
    """Check ``|A|_pq == (-1)^(p+q) det A / det A^pq`` for commuting scalars.

    Raises DegenerateMinor (a skip, not a failure) when the determinant
    ratio or some inner inverse is not defined.
    """
    expected = signed_det_ratio(a, p, q)
    result = quasidet(a, p, q)
    if not result.defined:
        raise DegenerateMinor(str(result.failure_site))
    return result.value.rows[0][0] == expected
