"""Preprojective algebras of ADE quivers and their Hochschild calculus."""

from .quiver import QuiverType, DoubleQuiver, build, coxeter, UnsupportedRank
from .algebra import PreprojectiveAlgebra, build_preprojective, hilbert_matrix

__all__ = ["QuiverType", "DoubleQuiver", "build", "coxeter", "UnsupportedRank",
           "PreprojectiveAlgebra", "build_preprojective", "hilbert_matrix"]
