"""Exact combinatorics around large-type Artin groups: defining graphs, dihedral normal forms,
word oracles, developments of the modified Deligne complex, intersection-graph balls and Farey windows."""

from .errors import (
    ArtinRigidError,
    BudgetError,
    CertificationError,
    LabelError,
    ParseError,
    PreconditionError,
    SizeError,
    UnresolvedBallError,
)
from .graph_core import DefiningGraph, parse

__all__ = [
    "ArtinRigidError",
    "BudgetError",
    "CertificationError",
    "DefiningGraph",
    "LabelError",
    "ParseError",
    "PreconditionError",
    "SizeError",
    "UnresolvedBallError",
    "parse",
]
__version__ = "0.1.0"
