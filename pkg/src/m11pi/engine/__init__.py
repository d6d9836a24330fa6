"""Deciders, identity/consequence spaces and witness search."""

from .algebra import AlgebraSpec, Identity, IdentityUpToBound, NonIdentity, Undecided, Verdict
from .decide import is_identity, is_identity_general, is_identity_multilinear
from .relations import SubsReport, subs_relations_check
from .spaces import (
    Bounds,
    SubspaceBasis,
    consequence_space,
    containment,
    contains,
    identity_space,
    spaces_equal,
)
from .witness import WitnessResult, witness_search

__all__ = [
    "AlgebraSpec",
    "Bounds",
    "Identity",
    "IdentityUpToBound",
    "NonIdentity",
    "SubsReport",
    "SubspaceBasis",
    "Undecided",
    "Verdict",
    "WitnessResult",
    "consequence_space",
    "containment",
    "contains",
    "identity_space",
    "is_identity",
    "is_identity_general",
    "is_identity_multilinear",
    "spaces_equal",
    "subs_relations_check",
    "witness_search",
]
