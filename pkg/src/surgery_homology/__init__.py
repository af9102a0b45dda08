"""Exact integral homology for a small surgery calculus of manifolds."""

from .abgroup import FGAbelianGroup, GradedGroup, IntegerMatrix, smith_normal_form
from .spaces import attrs, homology, parse

__all__ = ["FGAbelianGroup", "GradedGroup", "IntegerMatrix", "smith_normal_form", "attrs", "homology", "parse"]
__version__ = "0.1.0"
