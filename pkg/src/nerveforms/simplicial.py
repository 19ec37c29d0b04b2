"""Face pullbacks on NG, PG and PT^n, the double-complex differentials, cup product,
and the maps gamma: PG -> NG and its section s: NG -> PG.

Level ``p`` of NG carries symbols ``h_1..h_p``; level ``p`` of PG (and of the
torus model PT^n, and of the so(4) entry model) carries slots ``0..p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional

from .algebra import (
    GROUP,
    INV,
    MC,
    AlgebraElement,
    MatrixElement,
    SubstitutionMap,
    SymbolImage,
    differentiate,
    mc_reduce,
    substitute,
    theta,
)

NG, PG, PT = "NG", "PG", "PT"
SPACES = (NG, PG, PT)

__all__ = [
    "NG",
    "PG",
    "PT",
    "FaceSpec",
    "Cochain",
    "face_map",
    "face_pullback",
    "d_prime",
    "d_doubleprime",
    "total_D",
    "cup",
    "cup_cochains",
    "gamma_map",
    "gamma_pullback",
    "section_map",
    "section_pullback",
    "right_invariance_check",
]


@dataclass(frozen=True)
class FaceSpec:
    """The face ``i`` whose pullback goes from level ``level - 1`` to ``level``."""

    space: str
    level: int
    index: int

    def __post_init__(self):
        if self.space not in SPACES:
            raise ValueError(f"unknown space {self.space!r}")
        if not 0 <= self.index <= self.level:
            raise IndexError(f"face index {self.index} out of range for level {self.level}")


def _h(i: int) -> MatrixElement:
    return MatrixElement.letter("h", i)


def _hinv(i: int) -> MatrixElement:
    return MatrixElement.letter("h", i, INV)


def _relabel(fam: str, j: int, k: int) -> SymbolImage:
    return SymbolImage(
        img=MatrixElement.letter(fam, k),
        inv=MatrixElement.letter(fam, k, INV),
        d=MatrixElement.letter(fam, k, 2),
        mc=MatrixElement.word([theta(k)]) if fam == "g" else None,
    )


def _slot_odd_rule(shift):
    def rule(g):
        if g[0] == "dth":
            return AlgebraElement.odd(("dth", shift(g[1]), g[2]))
        if g[0] == "ent":
            return AlgebraElement.odd(("ent", shift(g[1]), g[2], g[3]))
        return AlgebraElement.odd(g)

    return rule


def face_map(face: FaceSpec) -> SubstitutionMap:
    """Substitution realizing the pullback along ``face``."""
    p, i = face.level, face.index
    if face.space == NG:
        syms = {}
        for j in range(1, p):
            if j < i:
                syms[("h", j)] = _relabel("h", j, j)
            elif j == i:
                syms[("h", j)] = SymbolImage(img=_h(j) * _h(j + 1), inv=_hinv(j + 1) * _hinv(j))
            else:
                syms[("h", j)] = _relabel("h", j, j + 1)
        return SubstitutionMap(syms, target_level=p, target_space=NG, name=f"eps_{i}^* (NG, level {p})")

    def shift(j):
        if not 0 <= j <= p - 1:
            raise IndexError(f"slot {j} outside level {p - 1}")
        return j if j < i else j + 1

    syms = {("g", j): _relabel("g", j, shift(j)) for j in range(p)}
    return SubstitutionMap(syms, odd=_slot_odd_rule(shift), target_level=p, target_space=face.space,
                           name=f"eps_{i}^* ({face.space}, level {p})")


def face_pullback(x: AlgebraElement, face: FaceSpec) -> AlgebraElement:
    return substitute(x, face_map(face))


def d_prime(x: AlgebraElement, space: str, level: int) -> AlgebraElement:
    """Alternating sum of face pullbacks, from ``level`` to ``level + 1``."""
    p = level + 1
    out = AlgebraElement.zero(p, space)
    for i in range(p + 1):
        term = face_pullback(x, FaceSpec(space, p, i))
        out = out + (term if i % 2 == 0 else -term)
    return out.with_meta(p, space)


def d_doubleprime(x: AlgebraElement, level: int) -> AlgebraElement:
    dx = differentiate(x)
    return dx if level % 2 == 0 else -dx


@dataclass
class Cochain:
    """Element of the total complex: ``components[p]`` is a form on level ``p``."""

    space: str
    components: Dict[int, AlgebraElement] = field(default_factory=dict)

    def __post_init__(self):
        self.components = {p: x.with_meta(p, self.space) for p, x in sorted(self.components.items()) if x}

    def __getitem__(self, p: int) -> AlgebraElement:
        return self.components.get(p, AlgebraElement.zero(p, self.space))

    def levels(self):
        return sorted(self.components)

    def total_degree(self) -> Optional[int]:
        degs = {p + x.degree() for p, x in self.components.items()}
        if len(degs) > 1:
            raise ValueError(f"components of mixed total degree: {sorted(degs)}")
        return degs.pop() if degs else None

    def is_zero(self) -> bool:
        return not self.components

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.space != self.space:
            raise ValueError("cochains on different spaces")
        comps = dict(self.components)
        for p, x in other.components.items():
            comps[p] = comps[p] + x if p in comps else x
        return Cochain(self.space, comps)

    def __neg__(self) -> "Cochain":
        return Cochain(self.space, {p: -x for p, x in self.components.items()})

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def __rmul__(self, c) -> "Cochain":
        return Cochain(self.space, {p: c * x for p, x in self.components.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.space == other.space and self.components == other.components

    def map(self, fn) -> "Cochain":
        return Cochain(self.space, {p: fn(p, x) for p, x in self.components.items()})


def total_D(c: Cochain) -> Cochain:
    comps: Dict[int, AlgebraElement] = {}

    def acc(p, x):
        comps[p] = comps[p] + x if p in comps else x

    for p, x in c.components.items():
        acc(p, d_doubleprime(x, p).with_meta(p, c.space))
        acc(p + 1, d_prime(x, c.space, p))
    return Cochain(c.space, comps)


def cup(a: AlgebraElement, s: int, b: AlgebraElement, t: int) -> AlgebraElement:
    """``a`` on NG(s) cup ``b`` on NG(t), landing on NG(s+t).

    ``a`` is pulled up by the ``t`` last faces, ``b`` by ``s`` zeroth faces,
    and the wedge carries the sign ``(-1)^(deg a * deg b)``.
    """
    if (a.space not in (None, NG)) or (b.space not in (None, NG)):
        raise ValueError("cup product is defined on NG only")
    if not a or not b:
        return AlgebraElement.zero(s + t, NG)
    q, r = a.degree(), b.degree()
    for k in range(s + 1, s + t + 1):
        a = face_pullback(a, FaceSpec(NG, k, k))
    for k in range(t + 1, s + t + 1):
        b = face_pullback(b, FaceSpec(NG, k, 0))
    out = a.with_meta(s + t, NG) * b.with_meta(s + t, NG)
    return -out if (q * r) % 2 else out


def cup_cochains(A: Cochain, B: Cochain) -> Cochain:
    if A.space != NG or B.space != NG:
        raise ValueError("cup product is defined on NG only")
    comps: Dict[int, AlgebraElement] = {}
    for s, a in A.components.items():
        for t, b in B.components.items():
            x = cup(a, s, b, t)
            comps[s + t] = comps[s + t] + x if s + t in comps else x
    return Cochain(NG, comps)


def _level_symbols(x: AlgebraElement, family: str) -> Iterable[int]:
    return sorted(s[1] for s in x.symbols() if isinstance(s[0], str) and s[0] == family)


def gamma_map(level: int) -> SubstitutionMap:
    """``h_i -> g_{i-1} g_i^{-1}`` on level ``level``."""
    syms = {}
    for i in range(1, level + 1):
        g_prev, g_i = MatrixElement.letter("g", i - 1), MatrixElement.letter("g", i)
        syms[("h", i)] = SymbolImage(
            img=g_prev * MatrixElement.letter("g", i, INV),
            inv=g_i * MatrixElement.letter("g", i - 1, INV),
        )
    return SubstitutionMap(syms, target_level=level, target_space=PG, name=f"gamma^* (level {level})")


def gamma_pullback(c: Cochain, reduce: bool = False) -> Cochain:
    if c.space != NG:
        raise ValueError("gamma pulls back NG cochains")

    def pull(p, x):
        y = substitute(x, gamma_map(p))
        return mc_reduce(y) if reduce else y

    return Cochain(PG, {p: pull(p, x) for p, x in c.components.items()})


def section_map(level: int) -> SubstitutionMap:
    """``g_i -> h_{i+1} ... h_p`` (the unit for ``i = p``)."""
    syms = {}
    for i in range(level + 1):
        img = MatrixElement.identity()
        inv = MatrixElement.identity()
        for j in range(i + 1, level + 1):
            img = img * _h(j)
            inv = _hinv(j) * inv
        syms[("g", i)] = SymbolImage(img=img, inv=inv)
    return SubstitutionMap(syms, target_level=level, target_space=NG, name=f"s^* (level {level})")


def section_pullback(c: Cochain) -> Cochain:
    if c.space != PG:
        raise ValueError("the section pulls back PG cochains")
    return Cochain(NG, {p: substitute(x, section_map(p)) for p, x in c.components.items()})


def right_invariance_check(x: AlgebraElement) -> bool:
    """True iff ``g_i -> g_i r`` (``r`` a constant group element) fixes ``x``."""
    r = MatrixElement.letter("r", 0)
    rinv = MatrixElement.letter("r", 0, INV)
    syms = {}
    for i in _level_symbols(x, "g"):
        g = MatrixElement.letter("g", i)
        syms[("g", i)] = SymbolImage(
            img=g * r,
            inv=rinv * MatrixElement.letter("g", i, INV),
            d=MatrixElement.letter("g", i, 2) * r,
            mc=rinv * MatrixElement.word([theta(i)]) * r,
        )
    m = SubstitutionMap(syms, keep_unmapped=True, name="right translation")
    return substitute(x, m) == x
