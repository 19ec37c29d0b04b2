"""Surface syntax, canonical and LaTeX printers, JSON serialization.

Grammar (whitespace-insensitive)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := primary ('^' ['-'] INT)?
    primary := INT | 'pi' | 'I' | '(' expr ')'
             | 'tr' '(' expr ')' | 'd' '(' expr ')' | 'inv' '(' expr ')'
             | 'ent' '(' 'th'INT ',' INT ',' INT ')' | 'dth' '(' INT ',' INT ')'
             | 'h'INT | 'g'INT | 'r'INT | 'th'INT | 't'INT | 'dt'INT

Everything is a graded product written ``*``.  Letters are matrix valued,
``tr`` makes them scalar valued.  ``/`` only divides by a nonzero constant.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .algebra import (
    DIFF,
    ENTRY_DIM,
    GROUP,
    INV,
    MC,
    AlgebraElement,
    MatrixElement,
    Monomial,
    _Form,
    differentiate,
    trace,
)
from .scalars import Scalar, pi2_convert

SCHEMA = "nerveforms-1"

__all__ = [
    "ParseError",
    "parse",
    "print_canonical",
    "print_latex",
    "to_json",
    "from_json",
    "element_to_obj",
    "element_from_obj",
    "cochain_to_json",
    "cochain_from_json",
    "letter_str",
    "odd_str",
    "scalar_str",
    "scalar_latex",
]


class ParseError(ValueError):
    def __init__(self, message: str, pos: int = -1):
        super().__init__(f"{message} (at position {pos})" if pos >= 0 else message)
        self.pos = pos


# -- printing ------------------------------------------------------------------

def letter_str(l) -> str:
    fam, idx, kind = l
    if kind == MC:
        return f"th{idx}"
    base = f"{fam}{idx}"
    if kind == GROUP:
        return base
    if kind == INV:
        return f"inv({base})"
    return f"d({base})"


def odd_str(g) -> str:
    if g[0] == "dt":
        return f"dt{g[1]}"
    if g[0] == "dth":
        return f"dth({g[1]},{g[2]})"
    return f"ent(th{g[1]},{g[2]},{g[3]})"


def _rat_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def scalar_str(s: Scalar) -> str:
    parts = [_rat_str(s.rat)]
    if s.pow2pi:
        parts.append("(2*pi)" if s.pow2pi == 1 else f"(2*pi)^{s.pow2pi}")
    if s.powi:
        parts.append("I")
    if len(parts) > 1 and parts[0] == "1":
        parts.pop(0)
    return "*".join(parts)


def _monomial_factors(m: Monomial) -> List[str]:
    out = []
    for i, e in enumerate(m.texps):
        if e:
            out.append(f"t{i + 1}" if e == 1 else f"t{i + 1}^{e}")
    out.extend(odd_str(g) for g in m.odd)
    out.extend("tr(" + "*".join(letter_str(l) for l in w) + ")" for w in m.traces)
    if m.word:
        out.extend(letter_str(l) for l in m.word)
    return out


def print_canonical(x: _Form) -> str:
    """Deterministic text; ``parse(print_canonical(x)) == x``."""
    pieces = []
    for m, _ in x.monomials():
        s = m.scalar
        neg = s.rat < 0
        mag = Scalar(abs(s.rat), s.pow2pi, s.powi)
        factors = _monomial_factors(m)
        coef = scalar_str(mag)
        if factors and coef == "1":
            body = "*".join(factors)
        elif factors:
            body = coef + "*" + "*".join(factors)
        else:
            body = coef
        pieces.append((neg, body))
    if not pieces:
        return "0"
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _latex_letter(l) -> str:
    fam, idx, kind = l
    if kind == MC:
        return rf"\theta_{{{idx}}}"
    if kind == GROUP:
        return f"{fam}_{{{idx}}}"
    if kind == INV:
        return f"{fam}_{{{idx}}}^{{-1}}"
    return f"d{fam}_{{{idx}}}"


def _latex_odd(g) -> str:
    if g[0] == "dt":
        return f"dt_{{{g[1]}}}"
    if g[0] == "dth":
        return rf"d\theta^{{{g[1]}}}_{{{g[2]}}}"
    return rf"(\theta_{{{g[1]}}})_{{{g[2]}{g[3]}}}"


def scalar_latex(s: Scalar) -> Tuple[bool, str]:
    """(negative, body) for a coefficient, written with powers of pi."""
    q = s.rat * Fraction(2) ** s.pow2pi
    neg = q < 0
    q = abs(q)
    num = "" if q.numerator == 1 else str(q.numerator)
    den = "" if q.denominator == 1 else str(q.denominator)
    k = s.pow2pi
    if k > 0:
        num += r"\pi" if k == 1 else rf"\pi^{{{k}}}"
    elif k < 0:
        den += r"\pi" if k == -1 else rf"\pi^{{{-k}}}"
    num = (num + ("i" if s.powi else "")) or "1"
    if not den:
        return neg, num
    return neg, rf"\frac{{{num}}}{{{den}}}"


def print_latex(x: _Form) -> str:
    pieces = []
    for m, _ in x.monomials():
        neg, coef = scalar_latex(m.scalar)
        fac = []
        for i, e in enumerate(m.texps):
            if e:
                fac.append(f"t_{{{i + 1}}}" if e == 1 else f"t_{{{i + 1}}}^{{{e}}}")
        fac.extend(_latex_odd(g) for g in m.odd)
        fac.extend(r"\operatorname{tr}(" + " ".join(_latex_letter(l) for l in w) + ")" for w in m.traces)
        if m.word:
            fac.extend(_latex_letter(l) for l in m.word)
        if fac:
            body = ("" if coef == "1" else coef + " ") + " ".join(fac)
        else:
            body = coef
        pieces.append((neg, body))
    if not pieces:
        return "0"
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")
_LETTER = re.compile(r"(h|g|r)(\d+)$")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            if m.group(3).strip():
                toks.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


Value = Union[AlgebraElement, MatrixElement]


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", tok[2])
        self.i += 1
        return tok

    def at(self, value) -> bool:
        tok = self.toks[self.i]
        return tok[0] == "op" and tok[1] == value

    def parse(self) -> Value:
        v = self.expr()
        if self.peek()[0] != "end":
            tok = self.peek()
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return v

    def _add(self, a: Value, b: Value, pos: int) -> Value:
        if type(a) is not type(b):
            raise ParseError("cannot add a scalar-valued and a matrix-valued form", pos)
        return a + b

    def expr(self) -> Value:
        neg = False
        if self.at("+") or self.at("-"):
            neg = self.take()[1] == "-"
        v = self.term()
        if neg:
            v = -v
        while self.at("+") or self.at("-"):
            _, op, pos = self.take()
            w = self.term()
            v = self._add(v, w if op == "+" else -w, pos)
        return v

    def term(self) -> Value:
        v = self.factor()
        while self.at("*") or self.at("/"):
            _, op, pos = self.take()
            w = self.factor()
            if op == "*":
                v = v * w
            else:
                v = v * self._invert_scalar(w, pos)
        return v

    @staticmethod
    def _constant(v: Value) -> Optional[Scalar]:
        if isinstance(v, MatrixElement):
            return None
        if not v.terms:
            return Scalar(Fraction(0))
        if len(v.terms) != 1:
            return None
        (key, c), = v.terms.items()
        a, b, t, o, T, W = key
        if t or o or T:
            return None
        return Scalar(c, a, b)

    def _invert_scalar(self, v: Value, pos: int) -> Scalar:
        s = self._constant(v)
        if s is None:
            raise ParseError("can only divide by a constant", pos)
        if s.is_zero():
            raise ParseError("division by zero", pos)
        return s.inverse()

    def factor(self) -> Value:
        v = self.primary()
        if self.at("^"):
            pos = self.take()[2]
            neg = False
            if self.at("-"):
                self.take()
                neg = True
            k = int(self.take("int")[1])
            if neg:
                s = self._constant(v)
                if s is None or s.is_zero():
                    raise ParseError("negative power of a non-constant", pos)
                return AlgebraElement.const(s.inverse() ** k)
            if isinstance(v, MatrixElement):
                out = MatrixElement.identity()
                for _ in range(k):
                    out = out * v
                return out
            return v ** k
        return v

    def _args(self, n: int) -> List[tuple]:
        self.take("op", "(")
        args = []
        for j in range(n):
            if j:
                self.take("op", ",")
            args.append(self.peek())
            self.i += 1
        self.take("op", ")")
        return args

    def primary(self) -> Value:
        kind, val, pos = self.peek()
        if kind == "int":
            self.i += 1
            return AlgebraElement.const(int(val))
        if kind == "op" and val == "(":
            self.i += 1
            v = self.expr()
            self.take("op", ")")
            return v
        if kind != "name":
            raise ParseError(f"unexpected {val or 'end of input'!r}", pos)
        self.i += 1
        if val == "pi":
            return AlgebraElement.const(pi2_convert(1, 1))
        if val == "I":
            return AlgebraElement.const(Scalar(Fraction(1), 0, 1))
        if val in ("tr", "d", "inv"):
            self.take("op", "(")
            inner = self.expr()
            self.take("op", ")")
            if val == "tr":
                if not isinstance(inner, MatrixElement):
                    raise ParseError("tr() needs a matrix-valued argument", pos)
                try:
                    return trace(inner)
                except ValueError as exc:
                    raise ParseError(str(exc), pos) from None
            if val == "d":
                return differentiate(inner)
            return self._inverse(inner, pos)
        if val == "ent":
            a0, a1, a2 = self._args(3)
            m = re.fullmatch(r"th(\d+)", a0[1])
            if a0[0] != "name" or not m or a1[0] != "int" or a2[0] != "int":
                raise ParseError("ent() expects ent(th<s>, a, b)", pos)
            if not (1 <= int(a1[1]) <= ENTRY_DIM and 1 <= int(a2[1]) <= ENTRY_DIM):
                raise ParseError(f"ent() indices run from 1 to {ENTRY_DIM}", pos)
            return AlgebraElement.odd(("ent", int(m.group(1)), int(a1[1]), int(a2[1])))
        if val == "dth":
            a0, a1 = self._args(2)
            if a0[0] != "int" or a1[0] != "int":
                raise ParseError("dth() expects dth(s, k)", pos)
            return AlgebraElement.odd(("dth", int(a0[1]), int(a1[1])))
        m = re.fullmatch(r"dt(\d+)", val)
        if m:
            if int(m.group(1)) == 0:
                raise ParseError("dt0 is eliminated; write -(dt1+...)", pos)
            return AlgebraElement.odd(("dt", int(m.group(1))))
        m = re.fullmatch(r"th(\d+)", val)
        if m:
            return MatrixElement.letter("g", int(m.group(1)), MC)
        m = re.fullmatch(r"t(\d+)", val)
        if m:
            if int(m.group(1)) == 0:
                raise ParseError("t0 is eliminated; write 1-t1-...", pos)
            return AlgebraElement.t(int(m.group(1)))
        m = _LETTER.match(val)
        if m:
            return MatrixElement.letter(m.group(1), int(m.group(2)))
        raise ParseError(f"unknown symbol {val!r}", pos)

    @staticmethod
    def _inverse(v: Value, pos: int) -> MatrixElement:
        if isinstance(v, MatrixElement) and len(v.terms) == 1:
            (key, c), = v.terms.items()
            a, b, t, o, T, W = key
            if c == 1 and not (a or b or t or o or T) and W and len(W) == 1:
                fam, idx, kind = W[0]
                if kind == GROUP:
                    return MatrixElement.letter(fam, idx, INV)
                if kind == INV:
                    return MatrixElement.letter(fam, idx, GROUP)
        raise ParseError("inv() applies to a single degree-0 group letter", pos)


def parse(text: str) -> Value:
    """Parse an expression into a normalized element."""
    return _Parser(text).parse()


# -- JSON ------------------------------------------------------------------------

def _letter_from_str(s: str):
    v = parse(s)
    if not isinstance(v, MatrixElement) or len(v.terms) != 1:
        raise ValueError(f"malformed letter {s!r}")
    (key, c), = v.terms.items()
    if c != 1 or len(key[5]) != 1:
        raise ValueError(f"malformed letter {s!r}")
    return key[5][0]


def _odd_from_str(s: str):
    v = parse(s)
    if not isinstance(v, AlgebraElement) or len(v.terms) != 1:
        raise ValueError(f"malformed generator {s!r}")
    (key, c), = v.terms.items()
    if c != 1 or len(key[3]) != 1:
        raise ValueError(f"malformed generator {s!r}")
    return key[3][0]


def element_to_obj(x: _Form) -> dict:
    terms = []
    for m, _ in x.monomials():
        s = m.scalar
        entry = {
            "scalar": {"num": s.rat.numerator, "den": s.rat.denominator,
                       "pow2pi": s.pow2pi, "powi": s.powi},
            "tpoly": {"exponents": list(m.texps)},
            "odd": [odd_str(g) for g in m.odd],
            "traces": [[letter_str(l) for l in w] for w in m.traces],
        }
        if isinstance(x, MatrixElement):
            entry["word"] = [letter_str(l) for l in m.word]
        terms.append(entry)
    return {
        "version": SCHEMA,
        "kind": "matrix" if isinstance(x, MatrixElement) else "scalar",
        "space": x.space,
        "level": x.level,
        "terms": terms,
    }


def element_from_obj(obj: dict) -> Value:
    if not isinstance(obj, dict) or obj.get("version") != SCHEMA:
        raise ValueError("not a nerveforms-1 element")
    matrix = obj.get("kind") == "matrix"
    raw = []
    try:
        for t in obj["terms"]:
            sc = t["scalar"]
            word = tuple(_letter_from_str(s) for s in t.get("word", [])) if matrix else None
            raw.append((Fraction(int(sc["num"]), int(sc["den"])), int(sc["pow2pi"]), int(sc["powi"]),
                        tuple(int(e) for e in t["tpoly"]["exponents"]),
                        tuple(_odd_from_str(g) for g in t["odd"]),
                        tuple(tuple(_letter_from_str(s) for s in w) for w in t["traces"]),
                        word))
    except (KeyError, TypeError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed element JSON: {exc}") from None
    cls = MatrixElement if matrix else AlgebraElement
    return cls._from_raw(raw, obj.get("level"), obj.get("space"))


def to_json(x: _Form) -> str:
    return json.dumps(element_to_obj(x), sort_keys=True)


def from_json(text: str) -> Value:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON: {exc}") from None
    return element_from_obj(obj)


def cochain_to_obj(c) -> dict:
    return {
        "version": SCHEMA,
        "kind": "cochain",
        "space": c.space,
        "components": {str(p): element_to_obj(x) for p, x in c.components.items()},
    }


def cochain_from_obj(obj: dict):
    from .simplicial import Cochain

    if not isinstance(obj, dict) or obj.get("version") != SCHEMA or obj.get("kind") != "cochain":
        raise ValueError("not a nerveforms-1 cochain")
    try:
        comps = {int(p): element_from_obj(x) for p, x in obj["components"].items()}
    except (KeyError, AttributeError, TypeError) as exc:
        raise ValueError(f"malformed cochain JSON: {exc}") from None
    return Cochain(obj["space"], comps)


def cochain_to_json(c) -> str:
    return json.dumps(cochain_to_obj(c), sort_keys=True)


def cochain_from_json(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON: {exc}") from None
    return cochain_from_obj(obj)
