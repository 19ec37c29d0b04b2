"""Graded algebra of trace words, odd scalar generators and t-polynomials.

A monomial is laid out as::

    scalar * t-monomial * (odd generators, sorted) * (trace factors, sorted) [* open word]

and every Koszul sign picked up while bringing a product into that layout
is folded into the rational coefficient.  Scalar-valued forms are
:class:`AlgebraElement`; matrix-valued forms (an open word at the end of
every monomial) are :class:`MatrixElement`.

Letters are ``(family, index, kind)`` triples.  Families ``h`` and ``g``
are group points, ``r`` is a constant group element (``d r = 0``) used for
right translations.  Kinds are :data:`GROUP`, :data:`INV`, :data:`DIFF`
(``dh``) and :data:`MC` (the Maurer-Cartan form ``g^{-1} dg``, printed
``th``).  Odd generators are ``('dt', i)``, ``('dth', s, k)`` (the torus
one-form ``d theta^s_k``) and ``('ent', s, a, b)`` with ``a < b`` (the
``(a, b)`` entry of the antisymmetric matrix ``theta_s``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from .scalars import Scalar, strip_exponents

GROUP, INV, DIFF, MC = 0, 1, 2, 3
CONSTANT_FAMILIES = frozenset({"r"})
ENTRY_DIM = 4

Letter = Tuple[str, int, int]
Word = Tuple[Letter, ...]
OddGen = tuple
Key = tuple  # (pow2pi, powi, texps, odd, traces, word-or-None)

__all__ = [
    "GROUP",
    "INV",
    "DIFF",
    "MC",
    "ENTRY_DIM",
    "EmptyTraceError",
    "UnmappedSymbolError",
    "ResidualLetterError",
    "LevelMismatchError",
    "Monomial",
    "AlgebraElement",
    "MatrixElement",
    "SymbolImage",
    "SubstitutionMap",
    "letter",
    "theta",
    "ent",
    "dt",
    "dth",
    "free_reduce",
    "trace_canonicalize",
    "multiply",
    "differentiate",
    "substitute",
    "mc_reduce",
    "trace",
]


class EmptyTraceError(ValueError):
    """A trace word reduced to the unit; ``tr(1) = n`` is not representable."""


class UnmappedSymbolError(KeyError):
    pass


class ResidualLetterError(ValueError):
    pass


class LevelMismatchError(ValueError):
    pass


def letter(family: str, index: int, kind: int = GROUP) -> Letter:
    return (family, index, kind)


def theta(i: int) -> Letter:
    return ("g", i, MC)


def letter_degree(l: Letter) -> int:
    return 1 if l[2] >= DIFF else 0


@lru_cache(maxsize=None)
def word_degree(w: Word) -> int:
    return sum(1 for l in w if l[2] >= DIFF)


def free_reduce(word: Iterable[Letter]) -> Word:
    """Cancel adjacent ``x x^{-1}`` and ``x^{-1} x`` pairs."""
    out: List[Letter] = []
    for l in word:
        if out and l[2] <= INV:
            prev = out[-1]
            if prev[2] <= INV and prev[2] != l[2] and prev[0] == l[0] and prev[1] == l[1]:
                out.pop()
                continue
        out.append(l)
    return tuple(out)


def _is_inverse_pair(a: Letter, b: Letter) -> bool:
    return a[2] <= INV and b[2] <= INV and a[2] != b[2] and a[0] == b[0] and a[1] == b[1]


@lru_cache(maxsize=200000)
def trace_canonicalize(word: Word) -> Tuple[Optional[Word], int]:
    """Canonical cyclic rotation of ``tr(word)`` and the Koszul sign.

    Returns ``(None, 0)`` when the trace vanishes identically (a word equal
    to one of its own rotations with sign -1).  Raises
    :class:`EmptyTraceError` when the word reduces to the unit.
    """
    w = list(free_reduce(word))
    # cyclic reduction is sign free: the letters moved have degree 0
    while len(w) >= 2 and _is_inverse_pair(w[-1], w[0]):
        w = w[1:-1]
    if not w:
        raise EmptyTraceError("trace of the unit")
    w = tuple(w)
    m = len(w)
    total = word_degree(w)
    prefix_deg = [0] * (m + 1)
    for j, l in enumerate(w):
        prefix_deg[j + 1] = prefix_deg[j] + letter_degree(l)
    best = None
    best_sign = 0
    for k in range(m):
        rot = w[k:] + w[:k]
        dp = prefix_deg[k]
        sign = -1 if (dp * (total - dp)) % 2 else 1
        if best is None or rot < best:
            best, best_sign = rot, sign
        elif rot == best and sign != best_sign:
            return None, 0
    return best, best_sign


def _ent_gen(s: int, a: int, b: int) -> Tuple[int, Optional[OddGen]]:
    if a == b:
        return 0, None
    if a < b:
        return 1, ("ent", s, a, b)
    return -1, ("ent", s, b, a)


def _sort_odd(odd: Sequence[OddGen]) -> Tuple[int, Tuple[OddGen, ...]]:
    """Sort anticommuting generators; sign 0 on a repeated generator."""
    items = list(odd)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and items[j - 1] == items[j]:
            return 0, ()
    return sign, tuple(items)


def _trace_sort_key(w: Word):
    return (word_degree(w), w)


def _sort_traces(traces: Sequence[Word]) -> Tuple[int, Tuple[Word, ...]]:
    items = list(traces)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and _trace_sort_key(items[j - 1]) > _trace_sort_key(items[j]):
            if word_degree(items[j - 1]) % 2 and word_degree(items[j]) % 2:
                sign = -sign
            items[j - 1], items[j] = items[j], items[j - 1]
            j -= 1
        if j > 0 and items[j - 1] == items[j] and word_degree(items[j]) % 2:
            return 0, ()
    return sign, tuple(items)


def _traces_degree(traces: Tuple[Word, ...]) -> int:
    return sum(word_degree(w) for w in traces)


def _normalize(coef: Fraction, pow2pi: int, powi: int, texps, odd, traces, word):
    """Bring a raw monomial into canonical layout. Returns ``(coef, key)`` or None."""
    if coef == 0:
        return None
    powi %= 4
    if powi >= 2:
        coef = -coef
        powi -= 2
    s1, odd_sorted = _sort_odd(odd)
    if s1 == 0:
        return None
    canon = []
    sign = s1
    for w in traces:
        cw, s = trace_canonicalize(tuple(w))
        if s == 0:
            return None
        sign *= s
        canon.append(cw)
    s2, tr_sorted = _sort_traces(canon)
    if s2 == 0:
        return None
    sign *= s2
    if word is not None:
        word = free_reduce(word)
    key = (pow2pi, powi, strip_exponents(texps), odd_sorted, tr_sorted, word)
    return (coef if sign > 0 else -coef), key


def _key_degree(key: Key) -> int:
    w = key[5]
    return len(key[3]) + _traces_degree(key[4]) + (word_degree(w) if w is not None else 0)


def _add_exps(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    if not a:
        return b
    if not b:
        return a
    n = max(len(a), len(b))
    return tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def _mul_keys(k1: Key, k2: Key) -> Optional[Tuple[int, Key]]:
    a1, b1, t1, o1, T1, W1 = k1
    a2, b2, t2, o2, T2, W2 = k2
    dT1 = _traces_degree(T1)
    dW1 = word_degree(W1) if W1 else 0
    dT2 = _traces_degree(T2)
    sign = -1 if ((dT1 + dW1) * len(o2) + dW1 * dT2) % 2 else 1
    if o2:
        s, odd = _sort_odd(o1 + o2)
        if s == 0:
            return None
        sign *= s
    else:
        odd = o1
    if T2:
        s, traces = _sort_traces(T1 + T2)
        if s == 0:
            return None
        sign *= s
    else:
        traces = T1
    if W1 is None and W2 is None:
        word = None
    else:
        word = free_reduce((W1 or ()) + (W2 or ()))
    powi = b1 + b2
    if powi >= 2:
        sign = -sign
        powi -= 2
    return sign, (a1 + a2, powi, _add_exps(t1, t2), odd, traces, word)


class Monomial(NamedTuple):
    scalar: Scalar
    texps: Tuple[int, ...]
    odd: Tuple[OddGen, ...]
    traces: Tuple[Word, ...]
    word: Optional[Word]

    @property
    def degree(self) -> int:
        w = self.word
        return len(self.odd) + _traces_degree(self.traces) + (word_degree(w) if w is not None else 0)


class _Form:
    """Shared linear-combination machinery; use the two concrete subclasses."""

    __slots__ = ("terms", "level", "space")
    _matrix = False

    def __init__(self, terms: Optional[Dict[Key, Fraction]] = None, level: Optional[int] = None,
                 space: Optional[str] = None):
        self.terms: Dict[Key, Fraction] = terms if terms is not None else {}
        self.level = level
        self.space = space

    # -- construction helpers ------------------------------------------------
    @classmethod
    def _from_raw(cls, raw: Iterable, level=None, space=None):
        terms: Dict[Key, Fraction] = {}
        for coef, a, b, texps, odd, traces, word in raw:
            res = _normalize(Fraction(coef), a, b, texps, odd, traces, word)
            if res is None:
                continue
            c, key = res
            v = terms.get(key, 0) + c
            if v:
                terms[key] = v
            else:
                terms.pop(key, None)
        return cls(terms, level, space)

    def _new(self, terms, level="same", space="same"):
        return type(self)(terms, self.level if level == "same" else level,
                          self.space if space == "same" else space)

    def with_meta(self, level=None, space=None):
        return type(self)(self.terms, level, space)

    # -- queries ----------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def monomials(self) -> Iterator[Tuple[Monomial, Key]]:
        for key in sorted(self.terms, key=_print_order):
            a, b, t, o, T, W = key
            yield Monomial(Scalar(self.terms[key], a, b), t, o, T, W), key

    def degrees(self) -> set:
        return {_key_degree(k) for k in self.terms}

    def homogeneous_parts(self) -> Dict[int, "_Form"]:
        parts: Dict[int, Dict[Key, Fraction]] = {}
        for k, v in self.terms.items():
            parts.setdefault(_key_degree(k), {})[k] = v
        return {d: self._new(t) for d, t in sorted(parts.items())}

    def degree(self) -> int:
        degs = self.degrees()
        if len(degs) > 1:
            raise ValueError(f"element is not homogeneous: degrees {sorted(degs)}")
        return degs.pop() if degs else 0

    def has_t_content(self) -> bool:
        return any(k[2] or any(g[0] == "dt" for g in k[3]) for k in self.terms)

    def symbols(self) -> set:
        """Group-letter symbols ``(family, index)`` and odd generators present."""
        out = set()
        for k in self.terms:
            for w in k[4] + ((k[5],) if k[5] else ()):
                for l in w:
                    out.add((l[0], l[1]))
            for g in k[3]:
                out.add(g)
        return out

    # -- arithmetic -----------------------------------------------------------
    def _meta_merge(self, other):
        lvl, sp = self.level, self.space
        if other.level is not None:
            if lvl is not None and lvl != other.level:
                raise LevelMismatchError(f"level {lvl} vs {other.level}")
            lvl = other.level
        if other.space is not None:
            if sp is not None and sp != other.space:
                raise LevelMismatchError(f"space {sp} vs {other.space}")
            sp = other.space
        return lvl, sp

    def _coerce(self, other):
        if isinstance(other, _Form):
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            if self._matrix:
                return MatrixElement.identity() * other
            return AlgebraElement.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if type(other) is not type(self):
            raise TypeError("cannot add scalar-valued and matrix-valued forms")
        lvl, sp = self._meta_merge(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            nv = terms.get(k, 0) + v
            if nv:
                terms[k] = nv
            else:
                terms.pop(k, None)
        return type(self)(terms, lvl, sp)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _scale(self, s: Scalar):
        if s.is_zero():
            return self._new({})
        terms = {}
        for (a, b, t, o, T, W), v in self.terms.items():
            coef = v * s.rat
            powi = b + s.powi
            if powi >= 2:
                coef = -coef
                powi -= 2
            terms[(a + s.pow2pi, powi, t, o, T, W)] = coef
        return self._new(terms)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._scale(Scalar(Fraction(other)))
        if isinstance(other, Scalar):
            return self._scale(other)
        if not isinstance(other, _Form):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._scale(Scalar(Fraction(other)))
        if isinstance(other, Scalar):
            return self._scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a form")
        out = self._coerce(1) if not self._matrix else MatrixElement.identity()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        if not isinstance(other, _Form):
            return NotImplemented
        return type(self) is type(other) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        from .textio import print_canonical

        return f"{type(self).__name__}({print_canonical(self)!r})"

    def __str__(self):
        from .textio import print_canonical

        return print_canonical(self)


def _print_order(key: Key):
    a, b, t, o, T, W = key
    return (_key_degree(key), o, T, W or (), t, a, b)


class AlgebraElement(_Form):
    """A finite sum of scalar-valued graded monomials."""

    __slots__ = ()

    @classmethod
    def zero(cls, level=None, space=None) -> "AlgebraElement":
        return cls({}, level, space)

    @classmethod
    def const(cls, c: Union[int, Fraction, Scalar]) -> "AlgebraElement":
        s = c if isinstance(c, Scalar) else Scalar(Fraction(c))
        if s.is_zero():
            return cls({})
        return cls({(s.pow2pi, s.powi, (), (), (), None): s.rat})

    @classmethod
    def one(cls) -> "AlgebraElement":
        return cls.const(1)

    @classmethod
    def t(cls, i: int, level: Optional[int] = None) -> "AlgebraElement":
        """Barycentric coordinate ``t_i``; ``t_0`` is expanded as ``1 - sum``."""
        if i == 0:
            if level is None:
                raise ValueError("t_0 needs the level")
            out = cls.one()
            for j in range(1, level + 1):
                out = out - cls.t(j)
            return out
        return cls({(0, 0, (0,) * (i - 1) + (1,), (), (), None): Fraction(1)})

    @classmethod
    def odd(cls, gen: OddGen) -> "AlgebraElement":
        if gen[0] == "ent":
            s, g = _ent_gen(gen[1], gen[2], gen[3])
            if s == 0:
                return cls({})
            return cls({(0, 0, (), (g,), (), None): Fraction(s)})
        return cls({(0, 0, (), (tuple(gen),), (), None): Fraction(1)})


class MatrixElement(_Form):
    """A finite sum of monomials that end in an open (untraced) word."""

    __slots__ = ()
    _matrix = True

    @classmethod
    def zero(cls, level=None, space=None) -> "MatrixElement":
        return cls({}, level, space)

    @classmethod
    def identity(cls) -> "MatrixElement":
        return cls({(0, 0, (), (), (), ()): Fraction(1)})

    @classmethod
    def word(cls, letters: Sequence[Letter], coef=1) -> "MatrixElement":
        return cls._from_raw([(Fraction(coef), 0, 0, (), (), (), tuple(letters))])

    @classmethod
    def letter(cls, family: str, index: int, kind: int = GROUP) -> "MatrixElement":
        return cls.word([(family, index, kind)])

    def trace(self) -> AlgebraElement:
        return trace(self)


def dt(i: int) -> AlgebraElement:
    return AlgebraElement.odd(("dt", i))


def dth(s: int, k: int) -> AlgebraElement:
    return AlgebraElement.odd(("dth", s, k))


def ent(s: int, a: int, b: int) -> AlgebraElement:
    return AlgebraElement.odd(("ent", s, a, b))


def trace(m: MatrixElement) -> AlgebraElement:
    """``tr`` of a matrix-valued form; the word joins the trace factors."""
    raw = []
    for (a, b, t, o, T, W), v in m.terms.items():
        raw.append((v, a, b, t, o, T + (W,), None))
    return AlgebraElement._from_raw(raw, m.level, m.space)


def multiply(x: _Form, y: _Form) -> _Form:
    """Graded product with Koszul signs; result is matrix-valued if either factor is."""
    lvl, sp = x._meta_merge(y)
    cls = MatrixElement if (x._matrix or y._matrix) else AlgebraElement
    if x._matrix or y._matrix:
        # a scalar-valued factor behaves like one with an empty open word
        xs = x.terms if x._matrix else {k[:5] + ((),): v for k, v in x.terms.items()}
        ys = y.terms if y._matrix else {k[:5] + ((),): v for k, v in y.terms.items()}
    else:
        xs, ys = x.terms, y.terms
    terms: Dict[Key, Fraction] = {}
    for k1, v1 in xs.items():
        for k2, v2 in ys.items():
            res = _mul_keys(k1, k2)
            if res is None:
                continue
            s, key = res
            nv = terms.get(key, 0) + (v1 * v2 if s > 0 else -v1 * v2)
            if nv:
                terms[key] = nv
            else:
                terms.pop(key, None)
    return cls(terms, lvl, sp)


# -- exterior derivative -------------------------------------------------------

def _d_letter(l: Letter) -> List[Tuple[int, Word]]:
    fam, idx, kind = l
    if kind == DIFF:
        return []
    if kind == MC:
        return [(-1, (l, l))]
    if fam in CONSTANT_FAMILIES:
        return []
    if kind == GROUP:
        return [(1, ((fam, idx, DIFF),))]
    return [(-1, ((fam, idx, INV), (fam, idx, DIFF), (fam, idx, INV)))]


def _d_word(w: Word) -> List[Tuple[int, Word]]:
    out = []
    deg = 0
    for j, l in enumerate(w):
        sgn = -1 if deg % 2 else 1
        for c, repl in _d_letter(l):
            out.append((sgn * c, w[:j] + repl + w[j + 1:]))
        deg += letter_degree(l)
    return out


def _d_odd(g: OddGen, entry_dim: int) -> List[Tuple[int, Tuple[OddGen, ...]]]:
    if g[0] != "ent":
        return []
    _, s, a, b = g
    out = []
    for c in range(1, entry_dim + 1):
        s1, g1 = _ent_gen(s, a, c)
        s2, g2 = _ent_gen(s, c, b)
        if s1 and s2:
            out.append((-s1 * s2, (g1, g2)))
    return out


def differentiate(x: _Form, entry_dim: int = ENTRY_DIM) -> _Form:
    """Exterior derivative, extended by the graded Leibniz rule."""
    raw = []
    for key, c in x.terms.items():
        a, b, t, o, T, W = key
        for i, e in enumerate(t):
            if e:
                t2 = list(t)
                t2[i] -= 1
                raw.append((c * e, a, b, tuple(t2), (("dt", i + 1),) + o, T, W))
        for j, g in enumerate(o):
            sgn = -1 if j % 2 else 1
            for cc, repl in _d_odd(g, entry_dim):
                raw.append((c * sgn * cc, a, b, t, o[:j] + repl + o[j + 1:], T, W))
        deg = len(o)
        for k, w in enumerate(T):
            sgn = -1 if deg % 2 else 1
            for cc, w2 in _d_word(w):
                raw.append((c * sgn * cc, a, b, t, o, T[:k] + (w2,) + T[k + 1:], W))
            deg += word_degree(w)
        if W:
            sgn = -1 if deg % 2 else 1
            for cc, w2 in _d_word(W):
                raw.append((c * sgn * cc, a, b, t, o, T, w2))
    return type(x)._from_raw(raw, x.level, x.space)


# -- substitution ----------------------------------------------------------------

@dataclass(frozen=True)
class SymbolImage:
    """Images of a group symbol ``x``: of ``x``, ``x^{-1}``, optionally of ``dx`` and ``x^{-1}dx``.

    ``d`` defaults to the derivative of ``img`` and ``mc`` to ``inv * d``.
    """

    img: MatrixElement
    inv: MatrixElement
    d: Optional[MatrixElement] = None
    mc: Optional[MatrixElement] = None


class SubstitutionMap:
    """Algebra homomorphism given on letters (via symbols) and odd generators."""

    def __init__(self, symbols: Optional[Dict[Tuple[str, int], SymbolImage]] = None,
                 odd: Optional[Callable[[OddGen], AlgebraElement]] = None,
                 *, keep_unmapped: bool = False, target_level: Optional[int] = None,
                 target_space: Optional[str] = None, name: str = ""):
        self.symbols = dict(symbols or {})
        self.odd = odd
        self.keep_unmapped = keep_unmapped
        self.target_level = target_level
        self.target_space = target_space
        self.name = name
        self._cache: Dict[Letter, MatrixElement] = {}
        self._odd_cache: Dict[OddGen, AlgebraElement] = {}

    def letter_image(self, l: Letter) -> MatrixElement:
        got = self._cache.get(l)
        if got is not None:
            return got
        sym = self.symbols.get((l[0], l[1]))
        if sym is None:
            if self.keep_unmapped:
                img = MatrixElement.word([l])
            else:
                raise UnmappedSymbolError(f"{self.name or 'substitution'}: no image for {l[0]}{l[1]}")
        elif l[2] == GROUP:
            img = sym.img
        elif l[2] == INV:
            img = sym.inv
        elif l[2] == DIFF:
            img = sym.d if sym.d is not None else differentiate(sym.img)
        else:
            if sym.mc is not None:
                img = sym.mc
            else:
                d_img = sym.d if sym.d is not None else differentiate(sym.img)
                img = sym.inv * d_img
        img = img.with_meta()
        self._cache[l] = img
        return img

    def odd_image(self, g: OddGen) -> AlgebraElement:
        got = self._odd_cache.get(g)
        if got is None:
            got = AlgebraElement.odd(g) if self.odd is None else self.odd(g)
            self._odd_cache[g] = got
        return got

    def word_image(self, w: Word) -> MatrixElement:
        out = MatrixElement.identity()
        for l in w:
            out = out * self.letter_image(l)
        return out

    def check_consistency(self) -> bool:
        """``img * inv`` normalizes to the unit for every mapped symbol."""
        return all((s.img * s.inv) == MatrixElement.identity() for s in self.symbols.values())


def substitute(x: _Form, m: SubstitutionMap) -> _Form:
    trace_cache: Dict[Word, AlgebraElement] = {}
    out_terms: Dict[Key, Fraction] = {}
    for key, c in x.terms.items():
        a, b, t, o, T, W = key
        prod: _Form = AlgebraElement({(a, b, t, (), (), None): c})
        for g in o:
            prod = prod * m.odd_image(g)
            if not prod:
                break
        if prod:
            for w in T:
                img = trace_cache.get(w)
                if img is None:
                    img = trace(m.word_image(w))
                    trace_cache[w] = img
                prod = prod * img
                if not prod:
                    break
        if prod and W is not None:
            prod = prod * m.word_image(W)
        for k, v in prod.terms.items():
            nv = out_terms.get(k, 0) + v
            if nv:
                out_terms[k] = nv
            else:
                out_terms.pop(k, None)
    lvl = m.target_level if m.target_level is not None else x.level
    sp = m.target_space if m.target_space is not None else x.space
    return type(x)(out_terms, lvl, sp)


def mc_reduce(x: _Form) -> _Form:
    """Rewrite ``dg_i = g_i theta_i`` and cancel; raise if any ``g`` letter survives."""
    indices = {s[1] for s in x.symbols() if isinstance(s[0], str) and s[0] == "g"}
    syms = {}
    for i in indices:
        g = MatrixElement.letter("g", i)
        syms[("g", i)] = SymbolImage(
            img=g, inv=MatrixElement.letter("g", i, INV),
            d=g * MatrixElement.word([theta(i)]), mc=MatrixElement.word([theta(i)]))
    out = substitute(x, SubstitutionMap(syms, keep_unmapped=True, name="mc_reduce"))
    for key in out.terms:
        for w in key[4] + ((key[5],) if key[5] else ()):
            for l in w:
                if l[0] == "g" and l[2] != MC:
                    raise ResidualLetterError(
                        f"residual group letter g{l[1]} after Maurer-Cartan reduction")
    return out
