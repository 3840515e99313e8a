"""Modular symbols, Hecke images and explicit estimates for torsion of elliptic curves over number fields."""

__version__ = "0.1.0"

from .projective_line import P1Point, PrimePowerLevel, canonicalize, enumerate_points  # noqa: E402
from .modular_symbols import PresentationCache, build_presentation  # noqa: E402

__all__ = [
    "__version__",
    "P1Point",
    "PrimePowerLevel",
    "PresentationCache",
    "build_presentation",
    "canonicalize",
    "enumerate_points",
]
