"""Exact verification of invariant holomorphic p-contact and s-symplectic
structures on nilpotent complex Lie algebras."""

from .algebra import AlgebraError, AlgebraSpec, torus, validate
from .dsl import DSLError, parse, parse_document, parse_form, parse_vector, serialize_document
from .exterior import Form, VectorForm, bracket, bracket_oracle, del_, delbar, wedge
from .geometry import check_p_contact, check_s_symplectic, kernel_F, kernel_G
from .linalg import InfeasibleSystem
from .scalars import GaussianRational, parse_scalar

__version__ = "0.1.0"

__all__ = [
    "AlgebraError",
    "AlgebraSpec",
    "DSLError",
    "Form",
    "GaussianRational",
    "InfeasibleSystem",
    "VectorForm",
    "bracket",
    "bracket_oracle",
    "check_p_contact",
    "check_s_symplectic",
    "del_",
    "delbar",
    "kernel_F",
    "kernel_G",
    "parse",
    "parse_document",
    "parse_form",
    "parse_scalar",
    "parse_vector",
    "serialize_document",
    "torus",
    "validate",
    "wedge",
]
