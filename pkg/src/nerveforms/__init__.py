"""Exact symbolic forms on the simplicial manifolds NG and PG of a Lie group."""

from .algebra import (
    AlgebraElement,
    MatrixElement,
    SubstitutionMap,
    differentiate,
    mc_reduce,
    multiply,
    substitute,
)
from .scalars import Scalar, TPoly, pi2_convert, simplex_integrate
from .textio import from_json, parse, print_canonical, print_latex, to_json

__version__ = "0.1.0"
ENGINE_VERSION = f"nerveforms {__version__}"
