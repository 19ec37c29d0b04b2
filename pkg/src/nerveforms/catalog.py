"""Closed-form cochains written out by hand, used as targets for the generators.

Rational coefficients that the checks depend on live in :data:`COEFFICIENTS`
so that fault-injection tests can perturb a single entry.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict

from .algebra import AlgebraElement, MatrixElement, ent
from .matrices import permutation_sign
from .scalars import Scalar, pi2_convert
from .simplicial import NG, PG, Cochain
from .textio import parse, scalar_latex

__all__ = [
    "COEFFICIENTS",
    "c1_power",
    "c1_power_cochain",
    "ng_c3_components",
    "ng_c3_cochain",
    "ch3_components",
    "ch3_cochain",
    "ch3_cs_components",
    "ch3_cs_cochain",
    "ch3_proof_equations",
    "euler_cs_components",
    "euler_cs_cochain",
    "euler_sum",
    "euler_sum_latex",
]

COEFFICIENTS: Dict[str, Fraction] = {
    "C15": Fraction(1, 10),
    "C24_a": Fraction(1, 2),
    "C24_b": Fraction(1, 4),
    "C24_c": Fraction(1, 2),
    "C33": Fraction(1, 2),
    "TC05": Fraction(1, 10),
    "TC14_a": Fraction(1, 2),
    "TC14_b": Fraction(1, 4),
    "TC14_c": Fraction(1, 2),
    "TC23": Fraction(1, 2),
    "TE03": Fraction(-1, 96),
    "TE12": Fraction(-1, 64),
}

_P3 = "(2*pi*I)^-3"


def _q(name: str) -> str:
    c = COEFFICIENTS[name]
    return f"({c.numerator}/{c.denominator})"


# -- first Chern class powers on NG -------------------------------------------------

def c1_power(p: int) -> AlgebraElement:
    """``(1/2 pi i)^p (-1)^{p(p-1)/2} tr(h_1^{-1}dh_1) ... tr(h_p^{-1}dh_p)`` on NG(p)."""
    x = AlgebraElement.const(Scalar.two_pi_i(-p) * (-1 if (p * (p - 1) // 2) % 2 else 1))
    for i in range(1, p + 1):
        x = x * parse(f"tr(inv(h{i})*d(h{i}))")
    return x.with_meta(p, NG)


def c1_power_cochain(p: int) -> Cochain:
    return Cochain(NG, {p: c1_power(p)})


# -- third Chern class on NG ------------------------------------------------------

_NG_C15 = f"1/6*{_P3}*1/5*tr((inv(h1)*d(h1))^5)"

_NG_C24 = (
    f"-1/6*{_P3}*("
    "tr(d(h1)*inv(h1)*d(h1)*inv(h1)*d(h1)*d(h2)*inv(h2)*inv(h1))"
    " + 1/2*tr(d(h1)*d(h2)*inv(h2)*inv(h1)*d(h1)*d(h2)*inv(h2)*inv(h1))"
    " + tr(d(h1)*d(h2)*inv(h2)*d(h2)*inv(h2)*d(h2)*inv(h2)*inv(h1)))"
    f" - 1/12*{_P3}*("
    "tr(inv(h2)*d(h2)*inv(h2)*d(h2)*inv(h2)*d(h2)"
    " + d(h1)*d(h2)*inv(h2)*d(h2)*inv(h2)*inv(h1)"
    " + d(h1)*inv(h1)*d(h1)*d(h2)*inv(h2)*inv(h1))*tr(inv(h1)*d(h1))"
    " - tr(inv(h1)*d(h1)*inv(h1)*d(h1)*inv(h1)*d(h1)"
    " + d(h1)*inv(h1)*d(h1)*d(h2)*inv(h2)*inv(h1)"
    " + d(h1)*d(h2)*inv(h2)*d(h2)*inv(h2)*inv(h1))*tr(inv(h2)*d(h2)))"
)

_NG_C33 = (
    f"-1/6*{_P3}*("
    "tr(d(h1)*d(h2)*d(h3)*inv(h3)*inv(h2)*inv(h1))"
    " - tr(d(h1)*h2*d(h3)*inv(h3)*inv(h2)*d(h2)*inv(h2)*inv(h1)))"
    f" + 1/6*{_P3}*("
    "tr(d(h1)*d(h2)*inv(h2)*inv(h1))*tr(inv(h3)*d(h3))"
    " + tr(d(h2)*d(h3)*inv(h3)*inv(h2))*tr(inv(h1)*d(h1))"
    " - tr(d(h1)*h2*d(h3)*inv(h3)*inv(h2)*inv(h1))*tr(inv(h2)*d(h2)))"
    f" - 1/6*{_P3}*tr(inv(h1)*d(h1))*tr(inv(h2)*d(h2))*tr(inv(h3)*d(h3))"
)


def ng_c3_components() -> Dict[int, AlgebraElement]:
    """The third Chern class cocycle on NG, levels 1..3 (degrees 5, 4, 3)."""
    return {
        1: parse(_NG_C15).with_meta(1, NG),
        2: parse(_NG_C24).with_meta(2, NG),
        3: parse(_NG_C33).with_meta(3, NG),
    }


def ng_c3_cochain() -> Cochain:
    return Cochain(NG, ng_c3_components())


# -- third Chern character on PG and its Chern-Simons form ------------------------------

def ch3_components() -> Dict[int, AlgebraElement]:
    c = _q
    return {
        1: parse(f"1/6*{_P3}*{c('C15')}*tr((th0-th1)^5)").with_meta(1, PG),
        2: parse(
            f"-1/6*{_P3}*({c('C24_a')}*tr((th0-th1)^3*(th1-th2))"
            f" + {c('C24_b')}*tr((th0-th1)*(th1-th2)*(th0-th1)*(th1-th2))"
            f" + {c('C24_c')}*tr((th0-th1)*(th1-th2)^3))").with_meta(2, PG),
        3: parse(
            f"-1/6*{_P3}*({c('C33')}*tr((th0-th1)*(th1-th2)*(th2-th3))"
            f" - {c('C33')}*tr((th0-th1)*(th2-th3)*(th1-th2)))").with_meta(3, PG),
    }


def ch3_cochain() -> Cochain:
    return Cochain(PG, ch3_components())


def ch3_cs_components() -> Dict[int, AlgebraElement]:
    c = _q
    return {
        0: parse(f"-1/6*{_P3}*{c('TC05')}*tr(th0^5)").with_meta(0, PG),
        1: parse(
            f"-1/6*{_P3}*({c('TC14_a')}*tr(th0^3*th1) - {c('TC14_b')}*tr(th0*th1*th0*th1)"
            f" + {c('TC14_c')}*tr(th0*th1^3))").with_meta(1, PG),
        2: parse(
            f"1/6*{_P3}*({c('TC23')}*tr(th0*th1*th2) - {c('TC23')}*tr(th0*th2*th1))").with_meta(2, PG),
    }


def ch3_cs_cochain() -> Cochain:
    return Cochain(PG, ch3_cs_components())


_TC14_BODY = "1/2*tr(th0^3*th1) - 1/4*tr(th0*th1*th0*th1) + 1/2*tr(th0*th1^3)"
_TC23_BODY = "1/2*tr(th0*th1*th2) - 1/2*tr(th0*th2*th1)"


def ch3_proof_equations():
    """The intermediate identities of the Chern-Simons computation.

    Returns ``(id, kind, level, lhs_input, rhs)`` tuples where ``kind`` is
    ``"d'"`` (face sum out of ``level``) or ``"d"`` (exterior derivative).
    """
    return [
        ("d' tr(th0^5)", "d'", 0, parse("tr(th0^5)"), parse("tr(th1^5 - th0^5)")),
        ("d TC14 body", "d", 1, parse(_TC14_BODY), parse(
            "-1/2*tr(th0^4*th1 - th0^3*th1^2) + 1/2*tr(th0^2*th1*th0*th1 - th0*th1^2*th0*th1)"
            " - 1/2*tr(th0^2*th1^3 - th0*th1^4)")),
        ("d' TC14 body", "d'", 1, parse(_TC14_BODY), parse(
            "1/2*tr(th1^3*th2) - 1/4*tr(th1*th2*th1*th2) + 1/2*tr(th1*th2^3)"
            " - (1/2*tr(th0^3*th2) - 1/4*tr(th0*th2*th0*th2) + 1/2*tr(th0*th2^3))"
            " + 1/2*tr(th0^3*th1) - 1/4*tr(th0*th1*th0*th1) + 1/2*tr(th0*th1^3)")),
        ("d TC23 body", "d", 2, parse(_TC23_BODY), parse(
            "-1/2*tr(th0^2*th1*th2 - th0*th1^2*th2 + th0*th1*th2^2)"
            " + 1/2*tr(th0^2*th2*th1 - th0*th2^2*th1 + th0*th2*th1^2)")),
    ]


# -- Euler class of SO(4) ------------------------------------------------------------

def _theta_entry(slot: int, a: int, b: int) -> AlgebraElement:
    return ent(slot, a + 1, b + 1)


def _theta_sq_entry(slot: int, a: int, b: int) -> AlgebraElement:
    out = AlgebraElement.zero()
    for c in range(4):
        out = out + _theta_entry(slot, a, c) * _theta_entry(slot, c, b)
    return out


def euler_sum(kind: str) -> AlgebraElement:
    """The signed sums over S_4 appearing in the Euler Chern-Simons form.

    ``"03"``: ``sum sgn(tau) (theta_0)_{t1 t2} (theta_0^2)_{t3 t4}``;
    ``"12"``: ``sum sgn(tau) ((theta_0)_{t1 t2}(theta_1)_{t3 t4} + (theta_0)_{t3 t4}(theta_1)_{t1 t2})``.
    """
    out = AlgebraElement.zero()
    for tau in itertools.permutations(range(4)):
        s = permutation_sign(tau)
        a, b, c, d = tau
        if kind == "03":
            term = _theta_entry(0, a, b) * _theta_sq_entry(0, c, d)
        elif kind == "12":
            term = _theta_entry(0, a, b) * _theta_entry(1, c, d) + _theta_entry(0, c, d) * _theta_entry(1, a, b)
        else:
            raise ValueError(f"unknown Euler sum {kind!r}")
        out = out + s * term
    return out


def euler_cs_components() -> Dict[int, AlgebraElement]:
    return {
        0: (pi2_convert(COEFFICIENTS["TE03"], -2) * euler_sum("03")).with_meta(0, PG),
        1: (pi2_convert(COEFFICIENTS["TE12"], -2) * euler_sum("12")).with_meta(1, PG),
    }


def euler_cs_cochain() -> Cochain:
    return Cochain(PG, euler_cs_components())


_EULER_SUM_LATEX = {
    "03": r"\sum_{\tau \in \mathfrak{S}_4} \mathrm{sgn}(\tau)\,"
          r"(\theta_0)_{\tau(1)\tau(2)}(\theta_0^2)_{\tau(3)\tau(4)}",
    "12": r"\sum_{\tau \in \mathfrak{S}_4} \mathrm{sgn}(\tau)\,"
          r"\bigl((\theta_0)_{\tau(1)\tau(2)}(\theta_1)_{\tau(3)\tau(4)}"
          r" + (\theta_0)_{\tau(3)\tau(4)}(\theta_1)_{\tau(1)\tau(2)}\bigr)",
}


def euler_sum_latex(x: AlgebraElement, kind: str) -> str:
    """Render ``x`` as ``c * sum_tau ...`` when it is a scalar multiple of :func:`euler_sum`.

    Raises ``ValueError`` when ``x`` is not such a multiple.
    """
    base = euler_sum(kind)
    scalars = {(k[0], k[1]) for k in x.terms}
    if len(scalars) != 1:
        raise ValueError("element is not a multiple of the Euler sum")
    a, b = scalars.pop()
    key, v = next(iter(sorted(base.terms.items())))
    key = (a, b) + key[2:]  # the base sum carries no (2 pi) or i powers
    if key not in x.terms:
        raise ValueError("element is not a multiple of the Euler sum")
    c = Scalar(Fraction(x.terms[key]) / v, a, b)
    if c * base != x:
        raise ValueError("element is not a multiple of the Euler sum")
    sign, body = scalar_latex(c)
    return f"{'-' if sign else ''}{body} {_EULER_SUM_LATEX[kind]}"
