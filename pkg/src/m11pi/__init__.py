"""Polynomial identities of the 2x2 superalgebras M11(E) and M11(E1)
with the supercommutator bracket."""

from .engine import (
    AlgebraSpec,
    consequence_space,
    contains,
    identity_space,
    is_identity,
    spaces_equal,
    subs_relations_check,
    witness_search,
)
from .freelie import LiePoly, MultiDegree
from .lang import format_poly, parse
from .scalars import GF, QQ, Field

__version__ = "0.1.0"

__all__ = [
    "AlgebraSpec",
    "Field",
    "GF",
    "LiePoly",
    "MultiDegree",
    "QQ",
    "consequence_space",
    "contains",
    "format_poly",
    "identity_space",
    "is_identity",
    "parse",
    "spaces_equal",
    "subs_relations_check",
    "witness_search",
]
