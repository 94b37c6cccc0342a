"""Decorated preprojective algebras over exact fields."""

from .algebra import FiniteDimAlgebra, FrobeniusForm, make_algebra, standard_algebra
from .field import QQ, Field, parse_field
from .preprojective import PreprojectiveAlgebra, hilbert_series, relation_element, total_dimension
from .quiver import DecoratedQuiver, decorated_quiver, double, fold

__all__ = [
    "QQ", "Field", "parse_field",
    "FiniteDimAlgebra", "FrobeniusForm", "make_algebra", "standard_algebra",
    "DecoratedQuiver", "decorated_quiver", "double", "fold",
    "PreprojectiveAlgebra", "hilbert_series", "relation_element", "total_dimension",
]
