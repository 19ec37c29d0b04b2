"""Universal Chern-Weil and transgression on prisms Delta^p x PG(p).

On level ``p`` the canonical connection is ``theta = sum_i t_i theta_i`` (with
``t_0 = 1 - t_1 - ... - t_p``), its curvature is ``Omega = d theta + theta^2``
and ``I_Delta`` integrates the ``dt_1 ... dt_p`` component over the simplex.

GL(n) computations keep whole matrices as letters (``theta_i`` is the letter
``th{i}``); the so(4) computations use explicit 4x4 grids of ``ent``
generators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra import (
    AlgebraElement,
    MatrixElement,
    differentiate,
    mc_reduce,
    theta,
    trace,
)
from .matrices import FormMatrix, entry_matrix, mat_mul, pfaffian, pfaffian_polarized, permutation_sign
from .scalars import Scalar, dirichlet_integral, simplex_integrate
from .simplicial import NG, PG, Cochain, section_pullback

__all__ = [
    "InvariantPoly",
    "canonical_connection",
    "curvature",
    "integrate_prism",
    "split_by_dt",
    "bss_generate",
    "bss_cochain",
    "bss_cochain_ng",
    "cs_transgress",
    "cs_cochain",
    "theta_diff",
    "ch_cocycle_thm36",
    "ch_cocycle_total",
]

ConnForm = Union[MatrixElement, FormMatrix]


def _minus_over_2pi_i() -> Scalar:
    return Scalar(Fraction(-1)) * Scalar.two_pi_i(-1)


@dataclass(frozen=True)
class InvariantPoly:
    """An ad-invariant polynomial in a matrix variable ``X``.

    ``kind == "trace"``: ``sum coef * prod_j tr(X^{k_j})`` with ``terms`` a
    tuple of ``(Scalar, (k_1, k_2, ...))``.  ``kind == "pf"``: the Euler
    polynomial ``Pf(X / 2pi)`` on so(4).
    """

    kind: str
    terms: Tuple[Tuple[Scalar, Tuple[int, ...]], ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("trace", "pf"):
            raise ValueError(f"unknown invariant polynomial kind {self.kind!r}")
        if self.kind == "trace":
            degs = {sum(ks) for _, ks in self.terms}
            if len(degs) > 1:
                raise ValueError("inhomogeneous invariant polynomial")

    @property
    def degree(self) -> int:
        if self.kind == "pf":
            return 2
        return sum(self.terms[0][1]) if self.terms else 0

    @classmethod
    def ch(cls, k: int) -> "InvariantPoly":
        """``(1/k!) tr((-X/2 pi i)^k)``."""
        if k < 1:
            raise ValueError("ch_k needs k >= 1")
        coef = Fraction(1, factorial(k)) * _minus_over_2pi_i() ** k
        return cls("trace", ((coef, (k,)),), f"ch{k}")

    @classmethod
    def power_sum(cls, k: int) -> "InvariantPoly":
        """``tr((-X/2 pi i)^k)``."""
        return cls("trace", ((_minus_over_2pi_i() ** k, (k,)),), f"p{k}")

    @classmethod
    def chern_class(cls, k: int) -> "InvariantPoly":
        """``c_k`` from the power sums by Newton's identities."""
        if k < 1:
            raise ValueError("c_k needs k >= 1")
        # e_k as a polynomial in power sums: {sorted tuple of indices: coefficient}
        e: List[Dict[Tuple[int, ...], Fraction]] = [{(): Fraction(1)}]
        for m in range(1, k + 1):
            acc: Dict[Tuple[int, ...], Fraction] = {}
            for j in range(1, m + 1):
                sign = 1 if j % 2 else -1
                for mono, c in e[m - j].items():
                    key = tuple(sorted(mono + (j,), reverse=True))
                    acc[key] = acc.get(key, 0) + Fraction(sign, m) * c
            e.append({kk: v for kk, v in acc.items() if v})
        terms = []
        for mono, c in sorted(e[k].items()):
            terms.append((Scalar(c) * _minus_over_2pi_i() ** sum(mono), mono))
        return cls("trace", tuple(terms), f"c{k}")

    @classmethod
    def pf(cls) -> "InvariantPoly":
        return cls("pf", (), "pf")

    def __mul__(self, other: "InvariantPoly") -> "InvariantPoly":
        if self.kind != "trace" or other.kind != "trace":
            raise ValueError("only trace polynomials multiply")
        terms = []
        for c1, k1 in self.terms:
            for c2, k2 in other.terms:
                terms.append((c1 * c2, tuple(sorted(k1 + k2, reverse=True))))
        return InvariantPoly("trace", tuple(terms), f"{self.name}*{other.name}")

    def __call__(self, X: ConnForm) -> AlgebraElement:
        if self.kind == "pf":
            if not isinstance(X, FormMatrix):
                raise TypeError("the Pfaffian needs an explicit so(4) matrix")
            return Scalar(Fraction(1), -2, 0) * pfaffian(X)
        if not isinstance(X, MatrixElement):
            raise TypeError("trace polynomials act on matrix letters")
        out = AlgebraElement.zero()
        powers: Dict[int, AlgebraElement] = {}
        for coef, ks in self.terms:
            term = AlgebraElement.const(coef)
            for k in ks:
                if k not in powers:
                    powers[k] = trace(X ** k)
                term = term * powers[k]
            out = out + term
        return out


# -- prism forms ------------------------------------------------------------------

def _t(i: int, p: int) -> AlgebraElement:
    return AlgebraElement.t(i, p)


def canonical_connection(p: int, form: str = "gl") -> ConnForm:
    """``theta = sum_{i=0}^p t_i theta_i`` on level ``p``; ``form`` is ``"gl"`` or ``"so4"``."""
    if p < 0:
        raise ValueError("level must be non-negative")
    if form == "gl":
        out = MatrixElement.zero()
        for i in range(p + 1):
            out = out + _t(i, p) * MatrixElement.word([theta(i)])
        return out.with_meta(p, PG)
    if form == "so4":
        out = None
        for i in range(p + 1):
            piece = entry_matrix(i).map(lambda x, i=i: _t(i, p) * x)
            out = piece if out is None else out + piece
        return out
    raise ValueError(f"unknown connection form {form!r}")


def _square(x: ConnForm) -> ConnForm:
    return mat_mul(x, x) if isinstance(x, FormMatrix) else x * x


def _d(x: ConnForm) -> ConnForm:
    return x.d() if isinstance(x, FormMatrix) else differentiate(x)


def curvature(p: int, form: str = "gl") -> ConnForm:
    """``Omega = d theta + theta^2`` on the prism of level ``p``."""
    th = canonical_connection(p, form)
    omega = _d(th) + _square(th)
    if isinstance(omega, FormMatrix):
        return FormMatrix(omega.entries, antisymmetric=True)
    return omega


def _dt_count(key) -> int:
    return sum(1 for g in key[3] if g[0] == "dt")


def split_by_dt(x):
    """Split an element (or a FormMatrix) by the number of ``dt`` generators."""
    if isinstance(x, FormMatrix):
        parts: Dict[int, FormMatrix] = {}
        counts = set()
        for row in x.entries:
            for e in row:
                counts |= set(split_by_dt(e))
        for c in counts:
            parts[c] = FormMatrix.build(
                x.n, lambda a, b: split_by_dt(x[a, b]).get(c, AlgebraElement.zero()), x.antisymmetric)
        return parts
    parts: Dict[int, dict] = {}
    for key, v in x.terms.items():
        parts.setdefault(_dt_count(key), {})[key] = v
    return {c: type(x)(terms, x.level, x.space) for c, terms in parts.items()}


def integrate_prism(x: AlgebraElement, p: int) -> AlgebraElement:
    """``I_Delta``: keep the ``dt_1 ... dt_p`` component and integrate over Delta^p.

    The ``dt`` generators sort to the front of every monomial, so the form is
    read as ``dt_1 ... dt_p * alpha`` and no reordering sign arises.
    """
    lead = tuple(("dt", i) for i in range(1, p + 1))
    terms = {}
    for (a, b, texps, odd, traces, word), v in x.terms.items():
        if odd[:p] != lead or any(g[0] == "dt" for g in odd[p:]):
            continue
        if len(texps) > p:
            raise ValueError(f"t_{len(texps)} does not live on level {p}")
        val = v * simplex_integrate(tuple(texps) + (0,) * (p - len(texps)))
        key = (a, b, (), odd[p:], traces, word)
        nv = terms.get(key, 0) + val
        if nv:
            terms[key] = nv
        else:
            terms.pop(key, None)
    return type(x)(terms, p, x.space)


# -- BSS forms ---------------------------------------------------------------------

def _trace_poly_prism(P: InvariantPoly, pieces: Dict[int, MatrixElement], p: int) -> AlgebraElement:
    """The exactly-``p``-dt part of ``P(X)`` where ``X = sum pieces`` and ``pieces[c]`` has ``c`` dt's."""
    out = AlgebraElement.zero()
    for coef, ks in P.terms:
        K = sum(ks)
        choices = sorted(pieces)
        for assign in itertools.product(choices, repeat=K):
            if sum(assign) != p:
                continue
            term = AlgebraElement.const(coef)
            pos = 0
            for k in ks:
                M = MatrixElement.identity()
                for c in assign[pos:pos + k]:
                    M = M * pieces[c]
                pos += k
                term = term * trace(M)
            out = out + term
    return out


def bss_generate(P: InvariantPoly, p: int) -> AlgebraElement:
    """The level-``p`` component of the BSS cocycle of ``P`` on PG."""
    if P.kind == "pf":
        x = integrate_prism(P(curvature(p, "so4")), p)
    else:
        pieces = split_by_dt(curvature(p))
        x = integrate_prism(_trace_poly_prism(P, pieces, p), p)
        x = mc_reduce(x)
    return x.with_meta(p, PG)


def bss_cochain(P: InvariantPoly) -> Cochain:
    """All nonzero components of the BSS cocycle on PG."""
    return Cochain(PG, {p: bss_generate(P, p) for p in range(P.degree + 1)})


def bss_cochain_ng(P: InvariantPoly) -> Cochain:
    if P.kind == "pf":
        raise ValueError("the Euler cocycle is kept on PG")
    return section_pullback(bss_cochain(P))


# -- transgression -----------------------------------------------------------------

def _s_integral(K: int, m: int) -> Fraction:
    """``int_0^1 s^(K-1) (s-1)^m ds``."""
    return Fraction((-1) ** m * factorial(K - 1) * factorial(m), factorial(K + m))


def cs_transgress(P: InvariantPoly, p: int) -> AlgebraElement:
    """``I_Delta`` of ``K int_0^1 P(theta, Phi_s, ..., Phi_s) ds`` on level ``p``.

    ``Phi_s = s Omega + s(s-1) theta^2`` and ``K = deg P``.
    """
    if P.kind == "pf":
        th = canonical_connection(p, "so4")
        om = curvature(p, "so4")
        sq = FormMatrix(_square(th).entries, antisymmetric=True)
        integrand = (2 * _s_integral(2, 0)) * pfaffian_polarized(th, om) \
            + (2 * _s_integral(2, 1)) * pfaffian_polarized(th, sq)
        x = Scalar(Fraction(1), -2, 0) * integrand
        return integrate_prism(x, p).with_meta(p, PG)

    th = canonical_connection(p)
    sq = th * th
    om_parts = split_by_dt(curvature(p))
    # a Phi slot is Omega (with c dt's) or theta^2 (label "sq")
    labels = [("om", c) for c in sorted(om_parts)] + [("sq", 0)]

    def piece(lab):
        return om_parts[lab[1]] if lab[0] == "om" else sq

    out = AlgebraElement.zero()
    for coef, ks in P.terms:
        K = sum(ks)
        for j, kj in enumerate(ks):
            others = ks[:j] + ks[j + 1:]
            slots = (kj - 1) + sum(others)
            for assign in itertools.product(labels, repeat=slots):
                if sum(c for _, c in assign) != p:
                    continue
                n_sq = sum(1 for lab in assign if lab[0] == "sq")
                weight = coef * (kj * _s_integral(K, n_sq))
                M = th
                for lab in assign[:kj - 1]:
                    M = M * piece(lab)
                term = AlgebraElement.const(weight) * trace(M)
                pos = kj - 1
                for k in others:
                    N = MatrixElement.identity()
                    for lab in assign[pos:pos + k]:
                        N = N * piece(lab)
                    pos += k
                    term = term * trace(N)
                out = out + term
    return mc_reduce(integrate_prism(out, p)).with_meta(p, PG)


def cs_cochain(P: InvariantPoly) -> Cochain:
    return Cochain(PG, {p: cs_transgress(P, p) for p in range(P.degree)})


# -- the combinatorial ch_p cocycle ------------------------------------------------

def theta_diff(i: int, j: int) -> MatrixElement:
    return MatrixElement.word([theta(i)]) - MatrixElement.word([theta(j)])


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def ch_cocycle_thm36(p: int, q: int, slots: str = "cyclic") -> AlgebraElement:
    """Combinatorial component of the ``p``-th Chern character on PG(p - q), degree ``p + q``.

    The word is ``p (theta_0 - theta_1)`` followed by the signed sum over
    orderings of ``(theta_k - theta_{k+1})``, ``k = 1..m-1`` with ``m = p - q``.
    ``q`` squares ``(theta_i - theta_j)^2`` are inserted into the gaps of the
    word, repeats allowed, and each result is weighted by the simplex integral
    of ``prod (t_i t_j)^{a_ij}``.  ``slots="cyclic"`` uses the ``m`` gaps after
    each factor (the last one is also the gap before the first, under the
    trace); ``slots="interior"`` uses only the ``m - 1`` gaps between factors.
    """
    if not 0 <= q <= p - 1:
        raise ValueError(f"q must satisfy 0 <= q <= p-1, got p={p}, q={q}")
    if slots not in ("cyclic", "interior"):
        raise ValueError(f"unknown slot convention {slots!r}")
    m = p - q
    pairs = [(i, j) for i in range(m + 1) for j in range(i + 1, m + 1)]
    squares = {pr: theta_diff(*pr) * theta_diff(*pr) for pr in pairs}
    n_slots = m if (slots == "cyclic" or m == 1) else m - 1

    total = MatrixElement.zero()
    for perm in itertools.permutations(range(1, m)):
        sign = permutation_sign([k - 1 for k in perm])
        factors = [p * theta_diff(0, 1)] + [theta_diff(k, k + 1) for k in perm]
        for dist in _compositions(q, n_slots):
            for seq in itertools.product(pairs, repeat=q):
                exps = [0] * (m + 1)
                for i, j in seq:
                    exps[i] += 1
                    exps[j] += 1
                weight = dirichlet_integral(exps)
                word = MatrixElement.identity()
                pos = 0
                for slot, f in enumerate(factors):
                    word = word * f
                    if slot < n_slots:
                        for pr in seq[pos:pos + dist[slot]]:
                            word = word * squares[pr]
                        pos += dist[slot]
                total = total + (sign * weight) * word
    pref = Scalar(Fraction(1, factorial(p))) * Scalar.two_pi_i(-p)
    if (m * (m - 1) // 2) % 2:
        pref = -pref
    return (pref * trace(total)).with_meta(m, PG)


def ch_cocycle_total(p: int, slots: str = "cyclic") -> Cochain:
    return Cochain(PG, {p - q: ch_cocycle_thm36(p, q, slots) for q in range(p)})
