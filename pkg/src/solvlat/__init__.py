"""Exact construction and certification of lattices in a solvable Lie group.

The group G consists of block matrices (alpha, a, b, C) with a, b in R^d and
C in R^{d x d}; lattices are assembled from an integer matrix N in
SL_2d(Z) with eigenvalues alpha^{+-1}, and every claim about them is
re-checked in exact arithmetic over Q(sqrt(beta^2 - 4)).
"""
from .errors import SolvlatError
from .group import GroupElem
from .lattice import BuildSpec, LatticePresentation, block_matrix, build
from .qfield import QuadNum, rational

__all__ = ["SolvlatError", "GroupElem", "BuildSpec", "LatticePresentation", "block_matrix",
           "build", "QuadNum", "rational"]
__version__ = "0.1.0"
