"""Floating-point evaluation of forms on random points and tangent vectors.

A context assigns a matrix to every group symbol and, for each of ``k``
tangent vectors, a tangent matrix at that point.  A ``k``-form is evaluated by
the determinant rule: the ``j``-th degree-1 factor of a monomial consumes
tangent ``sigma(j)`` and the results are summed with ``sgn(sigma)``.

Face maps, ``gamma`` and the section ``s`` act on contexts (push points and
tangents forward), which makes the oracle independent of the symbolic
substitution engine.
"""

from __future__ import annotations

import itertools
import time
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import DIFF, GROUP, INV, MC, AlgebraElement, MatrixElement, differentiate, letter_degree
from .report import VerificationReport
from .simplicial import NG

__all__ = [
    "EvalContext",
    "FaceContext",
    "GammaContext",
    "SectionContext",
    "eval_form",
    "eval_d_prime",
    "eval_d_doubleprime",
    "eval_wedge",
    "eval_cup",
    "random_identity_check",
]

ENTRY_N = 4


class _Context:
    """Interface shared by random and derived contexts."""

    n: int
    k: int

    def point(self, fam: str, idx: int) -> np.ndarray:
        raise NotImplementedError

    def tangent(self, fam: str, idx: int) -> np.ndarray:
        """Array of shape ``(k, n, n)``."""
        raise NotImplementedError

    def dth(self, s: int, c: int) -> np.ndarray:
        """Array of shape ``(k,)``."""
        raise NotImplementedError

    def ent(self, s: int) -> np.ndarray:
        """Array of shape ``(k, 4, 4)`` of antisymmetric matrices."""
        raise NotImplementedError


class EvalContext(_Context):
    """Random points and tangents, drawn lazily from a seeded generator."""

    def __init__(self, n: int, k: int, seed: Optional[int] = None, rng: Optional[np.random.Generator] = None):
        self.n, self.k = n, k
        self.rng = rng if rng is not None else np.random.default_rng(seed)
        self._points: Dict[Tuple[str, int], np.ndarray] = {}
        self._tangents: Dict[Tuple[str, int], np.ndarray] = {}
        self._dth: Dict[Tuple[int, int], np.ndarray] = {}
        self._ent: Dict[int, np.ndarray] = {}

    def _complex(self, *shape) -> np.ndarray:
        return self.rng.uniform(-1, 1, shape) + 1j * self.rng.uniform(-1, 1, shape)

    def point(self, fam, idx):
        key = (fam, idx)
        if key not in self._points:
            while True:
                m = self._complex(self.n, self.n)
                if abs(np.linalg.det(m)) > 1e-6 and np.linalg.cond(m) < 1e3:
                    break
            self._points[key] = m
        return self._points[key]

    def tangent(self, fam, idx):
        key = (fam, idx)
        if key not in self._tangents:
            if fam == "r":  # constant symbols have no tangent
                self._tangents[key] = np.zeros((self.k, self.n, self.n), complex)
            else:
                self._tangents[key] = self._complex(self.k, self.n, self.n)
        return self._tangents[key]

    def dth(self, s, c):
        if (s, c) not in self._dth:
            self._dth[(s, c)] = self.rng.uniform(-1, 1, self.k)
        return self._dth[(s, c)]

    def ent(self, s):
        if s not in self._ent:
            a = self.rng.uniform(-1, 1, (self.k, ENTRY_N, ENTRY_N))
            self._ent[s] = a - np.transpose(a, (0, 2, 1))
        return self._ent[s]


class FaceContext(_Context):
    """Image of a level-``level`` context under the face ``index`` (a level ``level-1`` context)."""

    def __init__(self, base: _Context, space: str, level: int, index: int):
        if not 0 <= index <= level:
            raise IndexError(f"face {index} out of range for level {level}")
        self.base, self.space, self.level, self.index = base, space, level, index
        self.n, self.k = base.n, base.k

    def _slot(self, j: int) -> int:
        return j if j < self.index else j + 1

    def point(self, fam, idx):
        if self.space != NG:
            return self.base.point(fam, self._slot(idx))
        i = self.index
        if idx < i:
            return self.base.point(fam, idx)
        if idx == i and 0 < i < self.level:
            return self.base.point(fam, i) @ self.base.point(fam, i + 1)
        return self.base.point(fam, idx + 1)

    def tangent(self, fam, idx):
        if self.space != NG:
            return self.base.tangent(fam, self._slot(idx))
        i = self.index
        if idx < i:
            return self.base.tangent(fam, idx)
        if idx == i and 0 < i < self.level:
            b = self.base
            return b.tangent(fam, i) @ b.point(fam, i + 1) + b.point(fam, i) @ b.tangent(fam, i + 1)
        return self.base.tangent(fam, idx + 1)

    def dth(self, s, c):
        return self.base.dth(self._slot(s), c)

    def ent(self, s):
        return self.base.ent(self._slot(s))


class GammaContext(_Context):
    """NG context obtained from a PG context by ``h_i = g_{i-1} g_i^{-1}``."""

    def __init__(self, base: _Context):
        self.base = base
        self.n, self.k = base.n, base.k

    def point(self, fam, idx):
        b = self.base
        return b.point("g", idx - 1) @ np.linalg.inv(b.point("g", idx))

    def tangent(self, fam, idx):
        b = self.base
        gi_inv = np.linalg.inv(b.point("g", idx))
        prev = b.point("g", idx - 1)
        return (b.tangent("g", idx - 1) @ gi_inv
                - prev @ gi_inv @ b.tangent("g", idx) @ gi_inv)


class SectionContext(_Context):
    """PG context obtained from an NG context by ``g_i = h_{i+1} ... h_p``."""

    def __init__(self, base: _Context, level: int):
        self.base, self.level = base, level
        self.n, self.k = base.n, base.k

    def point(self, fam, idx):
        out = np.eye(self.n, dtype=complex)
        for j in range(idx + 1, self.level + 1):
            out = out @ self.base.point("h", j)
        return out

    def tangent(self, fam, idx):
        total = np.zeros((self.k, self.n, self.n), complex)
        hs = list(range(idx + 1, self.level + 1))
        for pos, j in enumerate(hs):
            left = np.eye(self.n, dtype=complex)
            for a in hs[:pos]:
                left = left @ self.base.point("h", a)
            right = np.eye(self.n, dtype=complex)
            for a in hs[pos + 1:]:
                right = right @ self.base.point("h", a)
            total = total + left @ self.base.tangent("h", j) @ right
        return total


# -- evaluation ----------------------------------------------------------------------

def _perm_table(k: int) -> Tuple[np.ndarray, np.ndarray]:
    perms = np.array(list(itertools.permutations(range(k))), dtype=int).reshape(-1, k)
    signs = np.array([_sign(p) for p in perms], dtype=float)
    return perms, signs


def _sign(perm) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


_PERMS: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}


def _perms(k: int):
    if k not in _PERMS:
        _PERMS[k] = _perm_table(k)
    return _PERMS[k]


def _letter_point(ctx: _Context, l) -> np.ndarray:
    fam, idx, kind = l
    if kind == GROUP:
        return ctx.point(fam, idx)
    if kind == INV:
        return np.linalg.inv(ctx.point(fam, idx))
    raise ValueError(f"letter {l} is not a 0-form")


def _letter_tangent(ctx: _Context, l) -> np.ndarray:
    fam, idx, kind = l
    if kind == DIFF:
        return ctx.tangent(fam, idx)
    if kind == MC:
        return np.linalg.inv(ctx.point(fam, idx)) @ ctx.tangent(fam, idx)
    raise ValueError(f"letter {l} is not a 1-form")


def _odd_values(ctx: _Context, g) -> np.ndarray:
    if g[0] == "dth":
        return ctx.dth(g[1], g[2])
    if g[0] == "ent":
        return ctx.ent(g[1])[:, g[2] - 1, g[3] - 1]
    raise ValueError(f"generator {g} has no numeric value (prism forms are not evaluated)")


def eval_form(x: Union[AlgebraElement, MatrixElement], ctx: _Context,
              tangents: Optional[Sequence[int]] = None):
    """Value of ``x`` on the context's tangent vectors (or the chosen subset ``tangents``)."""
    tangents = list(range(ctx.k)) if tangents is None else list(tangents)
    if not x.terms:
        return np.zeros((ctx.n, ctx.n), complex) if isinstance(x, MatrixElement) else 0j
    degs = x.degrees()
    if len(degs) != 1:
        raise ValueError(f"inhomogeneous element, degrees {sorted(degs)}")
    k = degs.pop()
    if k != len(tangents):
        raise ValueError(f"degree {k} form evaluated on {len(tangents)} tangents")
    if k > 7:
        raise ValueError("degree too large for the permutation sum")
    perms, signs = _perms(k)
    tang = np.array(tangents, dtype=int)[perms] if k else np.zeros((1, 0), int)
    matrix_valued = isinstance(x, MatrixElement)
    n = ctx.n
    total = np.zeros((n, n), complex) if matrix_valued else 0j
    for m, key in x.monomials():
        if m.texps or any(g[0] == "dt" for g in m.odd):
            raise ValueError("t/dt content is outside the numeric oracle")
        acc = np.full(len(signs), m.scalar.to_complex(), dtype=complex) * signs
        slot = 0
        for g in m.odd:
            acc = acc * _odd_values(ctx, g)[tang[:, slot]]
            slot += 1

        def word_value(word):
            nonlocal slot
            M = np.broadcast_to(np.eye(n, dtype=complex), (len(signs), n, n))
            for l in word:
                if letter_degree(l):
                    M = M @ _letter_tangent(ctx, l)[tang[:, slot]]
                    slot += 1
                else:
                    M = M @ _letter_point(ctx, l)
            return M

        for w in m.traces:
            acc = acc * np.trace(word_value(w), axis1=1, axis2=2)
        if matrix_valued:
            W = word_value(m.word or ())
            total = total + np.einsum("p,pij->ij", acc, W)
        else:
            total = total + acc.sum()
    return total


def _shuffles(k: int, a: int):
    for left in itertools.combinations(range(k), a):
        right = tuple(j for j in range(k) if j not in left)
        yield _sign(left + right), left, right


def eval_wedge(fa: Callable, qa: int, fb: Callable, qb: int, ctx: _Context,
               tangents: Optional[Sequence[int]] = None) -> complex:
    """``(alpha ^ beta)`` from evaluators ``fa(ctx, tangents)``, ``fb(ctx, tangents)`` by shuffles."""
    tangents = list(range(ctx.k)) if tangents is None else list(tangents)
    total = 0j
    for s, left, right in _shuffles(qa + qb, qa):
        total += s * fa(ctx, [tangents[j] for j in left]) * fb(ctx, [tangents[j] for j in right])
    return total


def eval_cup(a: AlgebraElement, s: int, b: AlgebraElement, t: int, ctx: _Context) -> complex:
    """Numeric cup product on NG(s+t): faces act on the context, the wedge by shuffles."""
    qa, qb = a.degree(), b.degree()
    ca: _Context = ctx
    for lvl in range(s + t, s, -1):
        ca = FaceContext(ca, NG, lvl, lvl)
    cb: _Context = ctx
    for lvl in range(s + t, t, -1):
        cb = FaceContext(cb, NG, lvl, 0)
    val = eval_wedge(lambda c, tg: eval_form(a, ca, tg), qa,
                     lambda c, tg: eval_form(b, cb, tg), qb, ctx)
    return -val if (qa * qb) % 2 else val


def eval_d_prime(x: AlgebraElement, space: str, level: int, ctx: _Context) -> complex:
    """``d'x`` at a level ``level + 1`` context, by pushing the context through each face."""
    p = level + 1
    total = 0j
    for i in range(p + 1):
        v = eval_form(x, FaceContext(ctx, space, p, i))
        total = total + (v if i % 2 == 0 else -v)
    return total


def eval_d_doubleprime(x: AlgebraElement, level: int, ctx: _Context) -> complex:
    v = eval_form(differentiate(x), ctx)
    return v if level % 2 == 0 else -v


# -- identity checks ---------------------------------------------------------------------

Evaluable = Union[AlgebraElement, Callable[[_Context], complex]]


def _evaluate(f: Evaluable, ctx: _Context) -> complex:
    if isinstance(f, (AlgebraElement, MatrixElement)):
        return complex(np.sum(eval_form(f, ctx)))
    return complex(np.sum(f(ctx)))


def _degree_of(*items) -> Optional[int]:
    for x in items:
        if isinstance(x, (AlgebraElement, MatrixElement)) and x.terms:
            return x.degree()
    return None


def random_identity_check(lhs: Evaluable, rhs: Evaluable, trials: int = 20, tol: float = 1e-9,
                          n: int = 2, seed: int = 0, degree: Optional[int] = None,
                          id: str = "identity") -> VerificationReport:
    """Compare ``lhs`` and ``rhs`` on ``trials`` fresh random contexts.

    Either side may be an element or a callable taking a context.  Passes iff
    ``max |lhs - rhs| < tol * (1 + max(|lhs|, |rhs|))`` over all trials.
    """
    k = degree if degree is not None else _degree_of(lhs, rhs)
    rep = VerificationReport(f"numeric {id}", seed=seed)
    if k is None:  # both sides are symbolically zero
        rep.add(id, True, None, "both sides are zero", 0.0)
        return rep
    start = time.perf_counter()
    seeds = np.random.SeedSequence(seed).spawn(trials)
    worst, scale = 0.0, 0.0
    for ss in seeds:
        ctx = EvalContext(n, k, rng=np.random.default_rng(ss))
        a, b = _evaluate(lhs, ctx), _evaluate(rhs, ctx)
        worst = max(worst, abs(a - b))
        scale = max(scale, abs(a), abs(b))
    ok = worst < tol * (1 + scale)
    rep.add(id, ok, None if ok else f"max |lhs - rhs| = {worst:.3e}",
            f"n={n}, trials={trials}, max residual {worst:.2e}, max magnitude {scale:.2e}",
            (time.perf_counter() - start) * 1000)
    return rep
