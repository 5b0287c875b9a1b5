"""Exact realizations of quantum generalized Verma modules for sl_{n+m}.

Submodules, bottom up: ``qcoeff`` (the field Q(q)), ``qweyl`` (the quantum
Weyl algebra), ``qcoordinate`` (the quantum coordinate algebra), ``uqalg``
(presentation data of U_q(sl_N)), ``pmodule`` (inducing modules),
``realization`` (the operators), ``oracle`` (the classical module) and
``verify`` (the checks); ``cli`` wires them to the command line.
"""

from .pmodule import PModuleSpec, builtin_module, character_module, validate, vector_module
from .qcoeff import Q, RationalQ, evaluate_at, format_q, parse
from .qweyl import Shape, WeylOperator
from .realization import RealizedOperator, act, pi_generator, rho_E_closed, rho_generator
from .uqalg import AlgebraWord, Gen, evaluate_word, jimbo_catalog, presentation_catalog, root_vector_word

__all__ = [
    "AlgebraWord",
    "Gen",
    "PModuleSpec",
    "Q",
    "RationalQ",
    "RealizedOperator",
    "Shape",
    "WeylOperator",
    "act",
    "builtin_module",
    "character_module",
    "evaluate_at",
    "evaluate_word",
    "format_q",
    "jimbo_catalog",
    "parse",
    "pi_generator",
    "presentation_catalog",
    "rho_E_closed",
    "rho_generator",
    "root_vector_word",
    "validate",
    "vector_module",
]

__version__ = "0.1.0"
