"""Class groups, p-adic L-functions and Stark-unit invariants of real quadratic fields."""

from .classgroup import ClassGroup, Form, IdealClass, class_group, compose, reduce
from .errors import StarkCLError
from .padic import PadicNumber, pexp, plog, teichmuller
from .quadfield import QuadField, chi, make_field, padic_embeddings

__version__ = "0.1.0"

__all__ = [
    "ClassGroup",
    "Form",
    "IdealClass",
    "PadicNumber",
    "QuadField",
    "StarkCLError",
    "chi",
    "class_group",
    "compose",
    "make_field",
    "padic_embeddings",
    "pexp",
    "plog",
    "reduce",
    "teichmuller",
]
