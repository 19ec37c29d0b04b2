"""Exact coefficients and exact integration over standard simplices.

Every coefficient met in the engine has the shape ``q * (2*pi)**a * i**b``
with ``q`` rational, so a :class:`Scalar` stores exactly those three pieces.
Barycentric polynomials live in :class:`TPoly`, with ``t_0`` always written
as ``1 - t_1 - ... - t_m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

Rational = Union[int, Fraction]

__all__ = [
    "Scalar",
    "scalar_mul",
    "pi2_convert",
    "TPoly",
    "simplex_integrate",
    "dirichlet_integral",
    "strip_exponents",
]


@dataclass(frozen=True)
class Scalar:
    """``rat * (2*pi)**pow2pi * i**powi`` with ``powi`` in {0, 1}.

    ``i**2 = -1`` is folded into the sign of ``rat`` on construction, so the
    stored ``powi`` is always 0 or 1.
    """

    rat: Fraction
    pow2pi: int = 0
    powi: int = 0

    def __post_init__(self):
        rat = Fraction(self.rat)
        powi = self.powi % 4
        if powi >= 2:
            rat = -rat
            powi -= 2
        if rat == 0:
            object.__setattr__(self, "rat", Fraction(0))
            object.__setattr__(self, "pow2pi", 0)
            object.__setattr__(self, "powi", 0)
            return
        object.__setattr__(self, "rat", rat)
        object.__setattr__(self, "powi", powi)

    @classmethod
    def one(cls) -> "Scalar":
        return cls(Fraction(1))

    @classmethod
    def two_pi_i(cls, power: int = 1) -> "Scalar":
        """``(2*pi*i)**power``."""
        return cls(Fraction(1), power, power)

    def is_zero(self) -> bool:
        return self.rat == 0

    def __mul__(self, other) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            other = Scalar(Fraction(other))
        if not isinstance(other, Scalar):
            return NotImplemented
        return scalar_mul(self, other)

    __rmul__ = __mul__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.rat, self.pow2pi, self.powi)

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inverse() ** (-k)
        out = Scalar.one()
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> "Scalar":
        if self.rat == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        # i**-1 = -i
        rat = 1 / self.rat
        if self.powi:
            rat = -rat
        return Scalar(rat, -self.pow2pi, self.powi)

    def __truediv__(self, other) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            other = Scalar(Fraction(other))
        return self * other.inverse()

    def to_complex(self) -> complex:
        value = float(self.rat) * (2 * math.pi) ** self.pow2pi
        return complex(0, value) if self.powi else complex(value, 0)

    def __repr__(self) -> str:
        return f"Scalar({self.rat}, pow2pi={self.pow2pi}, powi={self.powi})"


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    return Scalar(a.rat * b.rat, a.pow2pi + b.pow2pi, a.powi + b.powi)


def pi2_convert(c: Rational, pi_exponent: int) -> Scalar:
    """Rewrite ``c * pi**k`` as ``(c / 2**k) * (2*pi)**k``."""
    c = Fraction(c)
    if c == 0:
        return Scalar(Fraction(0))
    return Scalar(c / Fraction(2) ** pi_exponent, pi_exponent, 0)


def strip_exponents(exps: Iterable[int]) -> Tuple[int, ...]:
    """Exponent tuple with trailing zeros removed (the storage form)."""
    exps = list(exps)
    while exps and exps[-1] == 0:
        exps.pop()
    return tuple(exps)


def simplex_integrate(exponents: Iterable[int]) -> Fraction:
    """Integral of ``t_1**a_1 ... t_m**a_m`` over the standard m-simplex.

    The measure is ``dt_1 ... dt_m`` on ``{t_i >= 0, sum t_i <= 1}``; the
    closed form is ``prod(a_i!) / (m + sum(a_i))!``.
    """
    exps = list(exponents)
    if any(a < 0 for a in exps):
        raise ValueError(f"negative exponent in {exps}")
    m = len(exps)
    num = 1
    for a in exps:
        num *= math.factorial(a)
    return Fraction(num, math.factorial(m + sum(exps)))


def dirichlet_integral(full_exponents: Iterable[int]) -> Fraction:
    """Integral of ``t_0**e_0 ... t_m**e_m`` over the m-simplex (Dirichlet)."""
    exps = list(full_exponents)
    if any(a < 0 for a in exps):
        raise ValueError(f"negative exponent in {exps}")
    m = len(exps) - 1
    num = 1
    for a in exps:
        num *= math.factorial(a)
    return Fraction(num, math.factorial(m + sum(exps)))


class TPoly:
    """Polynomial in barycentric coordinates ``t_1..t_m`` with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[Tuple[int, ...], Rational] | None = None):
        self.coeffs: Dict[Tuple[int, ...], Fraction] = {}
        for exps, c in (coeffs or {}).items():
            if c:
                key = strip_exponents(exps)
                total = self.coeffs.get(key, 0) + Fraction(c)
                if total:
                    self.coeffs[key] = total
                else:
                    self.coeffs.pop(key, None)

    @classmethod
    def const(cls, c: Rational) -> "TPoly":
        return cls({(): c})

    @classmethod
    def var(cls, i: int, m: int | None = None) -> "TPoly":
        """``t_i``; for ``i == 0`` the level ``m`` is required (t_0 = 1 - sum)."""
        if i == 0:
            if m is None:
                raise ValueError("t_0 needs the simplex dimension")
            coeffs: Dict[Tuple[int, ...], Fraction] = {(): Fraction(1)}
            for j in range(1, m + 1):
                coeffs[(0,) * (j - 1) + (1,)] = Fraction(-1)
            return cls(coeffs)
        return cls({(0,) * (i - 1) + (1,): 1})

    def __add__(self, other: "TPoly") -> "TPoly":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return TPoly(out)

    def __neg__(self) -> "TPoly":
        return TPoly({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + (-other)

    def __mul__(self, other) -> "TPoly":
        if isinstance(other, (int, Fraction)):
            return TPoly({k: v * other for k, v in self.coeffs.items()})
        out: Dict[Tuple[int, ...], Fraction] = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                n = max(len(k1), len(k2))
                key = strip_exponents(
                    (k1[i] if i < len(k1) else 0) + (k2[i] if i < len(k2) else 0) for i in range(n)
                )
                out[key] = out.get(key, 0) + v1 * v2
        return TPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TPoly":
        out = TPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"TPoly({self.coeffs})"

    def integrate(self, m: int) -> Fraction:
        """Integral over the standard m-simplex."""
        total = Fraction(0)
        for exps, c in self.coeffs.items():
            if len(exps) > m:
                raise ValueError(f"variable t_{len(exps)} outside the {m}-simplex")
            total += c * simplex_integrate(list(exps) + [0] * (m - len(exps)))
        return total
