"""Free associative algebra on letters y1..yn and noncommutative symmetric functions.

Words are tuples of 1-based letter indices. A :class:`FreePolynomial` maps
words to Fraction coefficients. The text form is ``"3/2*y2.y1 + y1.y1"``:
letters joined by dots, ``1`` for the empty word.
"""

from __future__ import annotations

import os
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Mapping, NamedTuple, Sequence

from .ncring import GenericityError, Matrix, rank, rat, solve_consistent

Word = tuple[int, ...]
Composition = tuple[int, ...]

DEFAULT_DEGREE_BOUND = 5


def degree_bound() -> int:
    """Membership degree cap; ``QVIETA_DEGREE_BOUND`` overrides the default."""
    raw = os.environ.get("QVIETA_DEGREE_BOUND")
    if raw is None:
        return DEFAULT_DEGREE_BOUND
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"QVIETA_DEGREE_BOUND must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError("QVIETA_DEGREE_BOUND must be non-negative")
    return value


class DegreeBoundExceeded(ValueError):
    pass


def word_key(w: Word):
    """Length-lexicographic order used for printing and vector indexing."""
    return (len(w), w)


class FreePolynomial:
    __slots__ = ("terms", "alphabet")

    def __init__(self, terms: Mapping[Word, object] | None = None, alphabet: int = 1):
        if alphabet < 1:
            raise ValueError("alphabet must be at least 1")
        clean = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            if any(not 1 <= i <= alphabet for i in w):
                raise ValueError(f"word {w} uses letters outside y1..y{alphabet}")
            c = rat(c)
            if c:
                clean[w] = clean.get(w, Fraction(0)) + c
        self.terms = {w: c for w, c in clean.items() if c}
        self.alphabet = alphabet

    @classmethod
    def word(cls, w: Iterable[int], alphabet: int, coeff=1) -> "FreePolynomial":
        return cls({tuple(w): coeff}, alphabet)

    @classmethod
    def one(cls, alphabet: int) -> "FreePolynomial":
        return cls({(): 1}, alphabet)

    @classmethod
    def zero(cls, alphabet: int) -> "FreePolynomial":
        return cls({}, alphabet)

    def _check(self, other):
        if not isinstance(other, FreePolynomial):
            raise TypeError(f"expected FreePolynomial, got {type(other).__name__}")
        if other.alphabet != self.alphabet:
            raise ValueError(f"alphabet mismatch: {self.alphabet} vs {other.alphabet}")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, 0) + c
        return FreePolynomial(terms, self.alphabet)

    def __neg__(self):
        return FreePolynomial({w: -c for w, c in self.terms.items()}, self.alphabet)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FreePolynomial({w: c * other for w, c in self.terms.items()}, self.alphabet)
        self._check(other)
        terms: dict[Word, Fraction] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                terms[u + v] = terms.get(u + v, 0) + a * b
        return FreePolynomial(terms, self.alphabet)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        out = FreePolynomial.one(self.alphabet)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, FreePolynomial):
            return NotImplemented
        return self.alphabet == other.alphabet and self.terms == other.terms

    def __hash__(self):
        return hash((self.alphabet, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"FreePolynomial({str(self)!r}, alphabet={self.alphabet})"

    def __str__(self):
        return format_poly(self)

    def degrees(self) -> list[int]:
        return sorted({len(w) for w in self.terms})

    def homogeneous_part(self, d: int) -> "FreePolynomial":
        return FreePolynomial({w: c for w, c in self.terms.items() if len(w) == d}, self.alphabet)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1


# -- text form ---------------------------------------------------------------


def format_poly(p: FreePolynomial, letter: str = "y", key=word_key) -> str:
    if not p.terms:
        return "0"
    parts = []
    for w in sorted(p.terms, key=key):
        c = p.terms[w]
        body = ".".join(f"{letter}{i}" for i in w) if w else ""
        mag = abs(c)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if not parts:
            parts.append(text if c > 0 else "-" + text)
        else:
            parts.append((" + " if c > 0 else " - ") + text)
    return "".join(parts)


_TERM = re.compile(r"""
    \s*(?P<sign>[+-])?\s*
    (?:(?P<coef>\d+(?:/\d+)?)\s*(?P<star>\*)?\s*)?
    (?P<word>[A-Za-z]\w*(?:\s*\.\s*[A-Za-z]\w*)*)?\s*
""", re.VERBOSE)


def parse_poly(text: str, alphabet: int | None = None, letter: str = "y") -> FreePolynomial:
    """Parse the text form; ``alphabet`` defaults to the largest letter used."""
    terms: dict[Word, Fraction] = {}
    pos, first = 0, True
    text = text.strip()
    if text == "0":
        return FreePolynomial({}, alphabet or 1)
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at offset {pos}: {text[pos:]!r}")
        sign, coef, star, word = m.group("sign", "coef", "star", "word")
        if sign is None and not first:
            raise ValueError(f"missing '+' or '-' at offset {m.start()}")
        if coef is None and word is None:
            raise ValueError(f"empty term at offset {m.start()}")
        if star and word is None:
            raise ValueError(f"dangling '*' at offset {m.start()}")
        if coef is not None and word is not None and not star:
            raise ValueError(f"expected '*' between coefficient and word at offset {m.start()}")
        c = Fraction(coef) if coef else Fraction(1)
        if sign == "-":
            c = -c
        w: Word = ()
        if word:
            letters = [s.strip() for s in word.split(".")]
            try:
                w = tuple(_parse_letter(s, letter) for s in letters)
            except ValueError as exc:
                raise ValueError(f"{exc} at offset {m.start()}") from None
        terms[w] = terms.get(w, 0) + c
        pos, first = m.end(), False
    used = max((max(w) for w in terms if w), default=1)
    return FreePolynomial(terms, alphabet or used)


def _parse_letter(s: str, letter: str) -> int:
    if not s.startswith(letter) or not s[len(letter):].isdigit() or int(s[len(letter):]) < 1:
        raise ValueError(f"bad letter {s!r}, expected {letter}1, {letter}2, ...")
    return int(s[len(letter):])


# -- combinatorics -----------------------------------------------------------

def descents(w: Sequence[int]) -> set[int]:
    """Positions k (1-based) with ``w[k] > w[k+1]``."""
    return {k for k in range(1, len(w)) if w[k - 1] > w[k]}


def compositions(d: int) -> list[Composition]:
    """All compositions of ``d`` in lexicographic order.

    There are ``2^(d-1)`` of them for d >= 1; ``d = 0`` has only the empty one.
    """
    if d == 0:
        return [()]
    out = []
    for mask in range(2 ** (d - 1)):
        cuts = [k for k in range(1, d) if mask >> (k - 1) & 1]
        bounds = [0] + cuts + [d]
        out.append(tuple(b - a for a, b in zip(bounds, bounds[1:])))
    return sorted(out)


def descent_set(j: Composition) -> set[int]:
    """Partial sums ``j1, j1+j2, ...`` excluding the total."""
    if any(p < 1 for p in j):
        raise ValueError(f"composition parts must be positive: {j}")
    out, s = set(), 0
    for p in j[:-1]:
        s += p
        out.add(s)
    return out


def words(m: int, n: int):
    return product(range(1, n + 1), repeat=m)


def ribbon(j: Sequence[int], n: int) -> FreePolynomial:
    """Ribbon Schur function R_J: every word whose descent set is exactly
    the partial sums of ``J``."""
    j = tuple(j)
    target = descent_set(j)
    return FreePolynomial({w: 1 for w in words(sum(j), n) if descents(w) == target}, n)


def complete_s(k: int, n: int) -> FreePolynomial:
    """S_k: sum of weakly increasing words of length k."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    return FreePolynomial({w: 1 for w in words(k, n)
                           if all(a <= b for a, b in zip(w, w[1:]))}, n)


def elementary_lambda(k: int, n: int) -> FreePolynomial:
    """Lambda_k: sum of strictly decreasing words ``y_{i_k} ... y_{i_1}``, i_1 < ... < i_k."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    return FreePolynomial({w: 1 for w in words(k, n)
                           if all(a > b for a, b in zip(w, w[1:]))}, n)


def lambda_product(j: Sequence[int], n: int) -> FreePolynomial:
    out = FreePolynomial.one(n)
    for part in j:
        out = out * elementary_lambda(part, n)
    return out


def lambda_compositions(d: int, n: int) -> list[Composition]:
    """Compositions of d with every part at most n (the Lambda-products that survive)."""
    return [j for j in compositions(d) if all(p <= n for p in j)]


# -- evaluation --------------------------------------------------------------

def evaluate(p: FreePolynomial, assignment: Sequence[Matrix]) -> Matrix:
    """Substitute ``assignment[i-1]`` for ``y_i``; the empty word maps to the identity."""
    if len(assignment) != p.alphabet:
        raise ValueError(f"need {p.alphabet} matrices, got {len(assignment)}")
    dim = assignment[0].dim
    if any(m.dim != dim for m in assignment):
        raise ValueError("assignment has mixed dimensions")
    total = Matrix.zero(dim)
    cache: dict[Word, Matrix] = {(): Matrix.identity(dim)}
    for w in sorted(p.terms, key=word_key):
        # prefixes are evaluated first thanks to length-lex order
        if w not in cache:
            cache[w] = _eval_word(w, assignment, cache)
        total = total + cache[w] * p.terms[w]
    return total


def _eval_word(w, assignment, cache):
    if w[:-1] in cache:
        return cache[w[:-1]] * assignment[w[-1] - 1]
    out = cache[()]
    for i in w:
        out = out * assignment[i - 1]
    return out


def _trial_seed(seed: int, trial: int) -> int:
    return (seed * 1_000_003 + trial) % 2**64


def is_symmetric_numeric(p: FreePolynomial, trials: int = 20, seed: int = 0,
                         dim: int = 3, entry_bound: int = 10) -> bool:
    """Evaluate ``p`` at the conjugated roots of every reordering of random
    generic tuples; symmetric iff all values agree in every trial.

    Tuples whose reorderings are not all generic are redrawn.
    """
    from .ncring import random_tuple
    from .vieta import conjugated_roots

    n = p.alphabet
    for t in range(trials):
        values = None
        for redraw in range(100):
            xs = list(random_tuple(n, dim, _trial_seed(seed, t) + redraw * 7919, entry_bound))
            try:
                values = [evaluate(p, conjugated_roots([xs[i] for i in perm]))
                          for perm in permutations(range(n))]
                break
            except GenericityError:
                continue
        if values is None:
            raise GenericityError(f"no fully generic tuple for trial {t}")
        if any(v != values[0] for v in values[1:]):
            return False
    return True


# -- membership in the algebra generated by the Lambda_k ---------------------

@dataclass(frozen=True)
class Membership:
    member: bool
    certificate: dict[Composition, Fraction] | None = None

    def __bool__(self):
        return self.member

    def certificate_text(self) -> str:
        if self.certificate is None:
            return ""
        return format_lambda_combination(self.certificate)


def format_lambda_combination(cert: Mapping[Composition, Fraction]) -> str:
    # encode each composition as a word over "L" letters, then reuse the printer
    terms = {tuple(j): c for j, c in cert.items()}
    if not terms:
        return "0"
    top = max((max(j) for j in terms if j), default=1)
    return format_poly(FreePolynomial(terms, top), letter="L", key=None)


def _basis_vectors(polys: Sequence[FreePolynomial], d: int, n: int) -> list[list[Fraction]]:
    index = sorted(words(d, n), key=word_key)
    return [[q.terms.get(w, Fraction(0)) for w in index] for q in polys]


@lru_cache(maxsize=None)
def _lambda_span(d: int, n: int):
    comps = lambda_compositions(d, n)
    return comps, [lambda_product(j, n) for j in comps]


def symm_membership(p: FreePolynomial, max_degree: int | None = None) -> Membership:
    """Decide whether ``p`` is a rational combination of Lambda-products.

    Each homogeneous component is handled separately. The certificate maps
    compositions ``J`` to the coefficient of ``Lambda_{j1} ... Lambda_{jr}``.
    """
    bound = degree_bound() if max_degree is None else max_degree
    n = p.alphabet
    degs = p.degrees()
    if degs and degs[-1] > bound:
        raise DegreeBoundExceeded(f"degree {degs[-1]} exceeds membership bound {bound}")
    cert: dict[Composition, Fraction] = {}
    for d in degs:
        part = p.homogeneous_part(d)
        comps, prods = _lambda_span(d, n)
        if not comps:
            return Membership(False)
        # columns are Lambda-products, rows are words
        cols = _basis_vectors(prods, d, n)
        a = [list(r) for r in zip(*cols)]
        b = _basis_vectors([part], d, n)[0]
        x = solve_consistent(a, b)
        if x is None:
            return Membership(False)
        cert.update({j: c for j, c in zip(comps, x) if c})
    return Membership(True, cert)


class RibbonBase(NamedTuple):
    independent: bool
    same_span: bool
    partition: bool

    def __bool__(self):
        return self.independent and self.same_span and self.partition


def ribbon_base_check(d: int, n: int) -> RibbonBase:
    """Ribbons of degree d are independent, span the Lambda-products of
    degree d, and sum to ``(y1 + ... + yn)^d``."""
    if n < d:
        raise ValueError(f"need n >= d, got n={n}, d={d}")
    comps = compositions(d)
    ribbons = [ribbon(j, n) for j in comps]
    _, prods = _lambda_span(d, n)
    rv, pv = _basis_vectors(ribbons, d, n), _basis_vectors(prods, d, n)
    r_rank, p_rank, joint = rank(rv), rank(pv), rank(rv + pv)
    independent = r_rank == len(comps) == 2 ** max(d - 1, 0)
    same_span = r_rank == p_rank == joint
    total = FreePolynomial.zero(n)
    for r in ribbons:
        total = total + r
    power_sum = elementary_lambda(1, n) ** d
    return RibbonBase(independent, same_span, total == power_sum)


def random_combination(polys: Sequence[FreePolynomial], rng: random.Random,
                       bound: int = 5) -> FreePolynomial:
    """A random rational combination of ``polys`` (nonzero coefficients)."""
    out = FreePolynomial.zero(polys[0].alphabet)
    for q in polys:
        c = Fraction(rng.choice([i for i in range(-bound, bound + 1) if i]),
                     rng.randint(1, bound))
        out = out + q * c
    return out
