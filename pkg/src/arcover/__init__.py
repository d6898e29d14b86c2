"""Exact computations with bound quiver algebras, translation quivers and their coverings."""

from .field import Field, GF2, Q, parse_field
from .algebra import Algebra, Arrow, Path, Quiver, Relation, make_relation

__all__ = ["Field", "GF2", "Q", "parse_field", "Algebra", "Arrow", "Path", "Quiver", "Relation", "make_relation"]
