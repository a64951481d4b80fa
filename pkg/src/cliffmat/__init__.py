"""Exact analysis of Clifford matrix semigroups over GF(p) and the rationals."""

__version__ = "0.1.0"

from .exactfield import FieldSpec, Mat, Scalar
from .cayley import SemigroupTable, enumerate_semigroup
from .green import GreenClasses, compute_green
from .clifford import CliffordVerdict, is_clifford
from .structure import Decomposition, decompose, verify_subdirect, synthesize_clifford
from .limit import LimitMat

__all__ = [
    "FieldSpec",
    "Mat",
    "Scalar",
    "SemigroupTable",
    "enumerate_semigroup",
    "GreenClasses",
    "compute_green",
    "CliffordVerdict",
    "is_clifford",
    "Decomposition",
    "decompose",
    "verify_subdirect",
    "synthesize_clifford",
    "LimitMat",
]
