"""Matrices with form-valued entries.

Two representations are used.  A :class:`FormMatrix` is an explicit grid of
``AlgebraElement`` entries (the so(4) case, entries built from ``ent``
generators).  For GL(n) a whole matrix is a single noncommutative letter and
a matrix-valued form is a :class:`~nerveforms.algebra.MatrixElement`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence, Tuple

from .algebra import AlgebraElement, MatrixElement, differentiate, ent, trace

__all__ = [
    "FormMatrix",
    "mat_mul",
    "graded_bracket",
    "pfaffian",
    "pfaffian_polarized",
    "tr_power",
    "entry_matrix",
    "permutation_sign",
]


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        j, length = start, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class FormMatrix:
    entries: Tuple[Tuple[AlgebraElement, ...], ...]
    antisymmetric: bool = False

    def __post_init__(self):
        n = len(self.entries)
        if any(len(row) != n for row in self.entries):
            raise ValueError("FormMatrix must be square")
        if self.antisymmetric:
            for a in range(n):
                if self.entries[a][a]:
                    raise ValueError("antisymmetric matrix with nonzero diagonal")
                for b in range(a + 1, n):
                    if self.entries[a][b] != -self.entries[b][a]:
                        raise ValueError(f"entries ({a},{b}) and ({b},{a}) are not opposite")

    @classmethod
    def build(cls, n: int, fn: Callable[[int, int], AlgebraElement], antisymmetric: bool = False):
        return cls(tuple(tuple(_as_element(fn(a, b)) for b in range(n)) for a in range(n)), antisymmetric)

    @classmethod
    def zero(cls, n: int) -> "FormMatrix":
        return cls.build(n, lambda a, b: AlgebraElement.zero(), antisymmetric=True)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ab):
        a, b = ab
        return self.entries[a][b]

    def degree(self) -> int:
        degs = set()
        for row in self.entries:
            for x in row:
                if x:
                    degs |= x.degrees()
        if len(degs) > 1:
            raise ValueError(f"entries of mixed degree {sorted(degs)}")
        return degs.pop() if degs else 0

    def map(self, fn, antisymmetric=None) -> "FormMatrix":
        keep = self.antisymmetric if antisymmetric is None else antisymmetric
        return FormMatrix.build(self.n, lambda a, b: fn(self.entries[a][b]), keep)

    def _check(self, other: "FormMatrix"):
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "FormMatrix") -> "FormMatrix":
        self._check(other)
        return FormMatrix.build(self.n, lambda a, b: self[a, b] + other[a, b],
                                self.antisymmetric and other.antisymmetric)

    def __neg__(self) -> "FormMatrix":
        return self.map(lambda x: -x)

    def __sub__(self, other: "FormMatrix") -> "FormMatrix":
        return self + (-other)

    def __rmul__(self, c) -> "FormMatrix":
        return self.map(lambda x: c * x)

    def __mul__(self, other):
        if isinstance(other, FormMatrix):
            return mat_mul(self, other)
        return self.map(lambda x: x * other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def d(self) -> "FormMatrix":
        return self.map(differentiate)


def _as_element(x) -> AlgebraElement:
    if isinstance(x, AlgebraElement):
        return x
    return AlgebraElement.const(x)


def entry_matrix(slot: int, n: int = 4) -> FormMatrix:
    """The Maurer-Cartan matrix of slot ``slot`` in so(n), entries ``ent(slot, a, b)``."""
    return FormMatrix.build(n, lambda a, b: ent(slot, a + 1, b + 1), antisymmetric=True)


def mat_mul(A: FormMatrix, B: FormMatrix) -> FormMatrix:
    A._check(B)
    n = A.n

    def entry(a, b):
        out = AlgebraElement.zero()
        for c in range(n):
            out = out + A[a, c] * B[c, b]
        return out

    return FormMatrix.build(n, entry)


def graded_bracket(A: FormMatrix, B: FormMatrix) -> FormMatrix:
    """``AB - (-1)^(|A||B|) BA``."""
    sign = -1 if (A.degree() * B.degree()) % 2 else 1
    return mat_mul(A, B) - sign * mat_mul(B, A)


def _pairings(size: int):
    for perm in itertools.permutations(range(size)):
        yield permutation_sign(perm), perm


def _check_pf_input(M) -> int:
    n = len(M) if not isinstance(M, FormMatrix) else M.n
    if n % 2:
        raise ValueError("Pfaffian needs an even-sized matrix")
    return n


def _entry(M, a, b):
    return M[a, b] if isinstance(M, FormMatrix) else M[a][b]


def _check_antisymmetric(M, n):
    if isinstance(M, FormMatrix):
        if not M.antisymmetric:
            raise ValueError("Pfaffian needs an antisymmetric matrix")
        return
    for a in range(n):
        for b in range(n):
            if _entry(M, a, b) != -_entry(M, b, a):
                raise ValueError("Pfaffian needs an antisymmetric matrix")


def pfaffian(M):
    """Pfaffian by the full permutation sum.

    ``M`` is an antisymmetric :class:`FormMatrix` or a nested sequence of
    numbers (ints, Fractions); the result has the matching type.
    """
    n = _check_pf_input(M)
    _check_antisymmetric(M, n)
    m = n // 2
    norm = Fraction(1, 2 ** m * factorial(m))
    total = AlgebraElement.zero() if isinstance(M, FormMatrix) else Fraction(0)
    for sign, perm in _pairings(n):
        term = None
        for k in range(m):
            x = _entry(M, perm[2 * k], perm[2 * k + 1])
            term = x if term is None else term * x
        total = total + sign * term
    return norm * total


def pfaffian_polarized(A: FormMatrix, B: FormMatrix) -> AlgebraElement:
    """Symmetric bilinear form with ``P(X, X) = pfaffian(X)`` on 4x4 matrices."""
    if A.n != 4 or B.n != 4:
        raise ValueError("polarized Pfaffian is implemented for 4x4 matrices")
    if not (A.antisymmetric and B.antisymmetric):
        raise ValueError("polarized Pfaffian needs antisymmetric matrices")
    total = AlgebraElement.zero()
    for sign, s in _pairings(4):
        total = total + sign * (A[s[0], s[1]] * B[s[2], s[3]] + B[s[0], s[1]] * A[s[2], s[3]])
    return Fraction(1, 16) * total


def tr_power(M: MatrixElement, k: int) -> AlgebraElement:
    """``tr(M^k)`` for a matrix-valued form given as a sum of words."""
    if k < 1:
        raise ValueError("tr(M^0) would need the matrix size; k must be at least 1")
    P = M
    for _ in range(k - 1):
        P = P * M
    return trace(P)
