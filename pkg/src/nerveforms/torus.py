"""Cocycles and Chern-Simons forms of the universal torus bundle on PT^n.

All forms here are polynomials in the odd generators ``dth(s, k)`` (slot
``s``, coordinate ``k``) with constant coefficients.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from typing import Callable, List, Sequence

from .algebra import AlgebraElement, dth
from .report import VerificationReport
from .scalars import Scalar
from .simplicial import PT, Cochain, d_doubleprime, d_prime, total_D

__all__ = [
    "odd_det",
    "torus_bss_ch",
    "torus_cs_ch",
    "torus_bss_c",
    "torus_cs_c",
    "torus_cs_c_square",
    "verify_torus",
]


def _prefactor(p: int, sign_exp: int) -> Scalar:
    sign = -1 if sign_exp % 2 else 1
    return Scalar(Fraction(sign, factorial(p)), -p, 0)


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def odd_det(entry: Callable[[int, int], AlgebraElement], p: int) -> AlgebraElement:
    """Leibniz determinant ``sum sgn(s) prod_t A[t][s(t)]``, product taken in row order.

    With odd entries this is alternating in the columns (a repeated column
    gives zero), which is what column reduction needs.
    """
    out = AlgebraElement.zero()
    for perm in itertools.permutations(range(p)):
        term = AlgebraElement.const(_perm_sign(perm))
        for t in range(p):
            term = term * entry(t, perm[t])
        out = out + term
    return out


def torus_bss_ch(p: int, n: int) -> AlgebraElement:
    """``p``-th Chern character cocycle on PT^n(p)."""
    total = AlgebraElement.zero()
    for k in range(1, n + 1):
        prod = AlgebraElement.one()
        for s in range(p):
            prod = prod * (dth(s, k) - dth(s + 1, k))
        total = total + prod
    return (_prefactor(p, p * (p - 1) // 2) * total).with_meta(p, PT)


def torus_cs_ch(p: int, n: int) -> AlgebraElement:
    """Its Chern-Simons form on PT^n(p-1)."""
    total = AlgebraElement.zero()
    for k in range(1, n + 1):
        prod = AlgebraElement.one()
        for s in range(p):
            prod = prod * dth(s, k)
        total = total + prod
    return (_prefactor(p, p * (p + 1) // 2) * total).with_meta(p - 1, PT)


def torus_bss_c(p: int, n: int) -> AlgebraElement:
    """``p``-th Chern class cocycle on PT^n(p); zero when ``p > n``."""
    total = AlgebraElement.zero()
    for ks in itertools.combinations(range(1, n + 1), p):
        total = total + odd_det(lambda t, s: dth(s, ks[t]) - dth(s + 1, ks[t]), p)
    return (_prefactor(p, p * (p - 1) // 2) * total).with_meta(p, PT)


def torus_cs_c(p: int, n: int) -> AlgebraElement:
    total = AlgebraElement.zero()
    for ks in itertools.combinations(range(1, n + 1), p):
        total = total + odd_det(lambda t, s: dth(s, ks[t]), p)
    return (_prefactor(p, p * (p + 1) // 2) * total).with_meta(p - 1, PT)


def torus_cs_c_square(p: int) -> AlgebraElement:
    """The single-determinant form for ``n == p``, built independently of the index-set sum."""
    det = odd_det(lambda t, s: dth(s, t + 1), p)
    return (_prefactor(p, p * (p + 1) // 2) * det).with_meta(p - 1, PT)


def verify_torus(p: int, n: int) -> VerificationReport:
    rep = VerificationReport(f"torus p={p} n={n}")
    for fam, bss, cs in (("ch", torus_bss_ch, torus_cs_ch), ("c", torus_bss_c, torus_cs_c)):
        T = cs(p, n)
        target = bss(p, n)
        rep.check_equal(f"{fam}{p}: D(T) = cocycle", total_D(Cochain(PT, {p - 1: T})),
                        Cochain(PT, {p: target}))
        rep.check_equal(f"{fam}{p}: d'' T = 0", d_doubleprime(T, p - 1), AlgebraElement.zero())
        rep.check_equal(f"{fam}{p}: d'' cocycle = 0", d_doubleprime(target, p), AlgebraElement.zero())
        rep.check_equal(f"{fam}{p}: d' cocycle = 0", d_prime(target, PT, p), AlgebraElement.zero())
    if p == n:
        rep.check_equal(f"c{p}: n = p closed form", torus_cs_c(p, n), torus_cs_c_square(p))
    return rep
