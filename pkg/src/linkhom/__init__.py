"""Link-diagram cochains, chord words and homotopy-group formulas for long links."""

from .diagram import CanonicalDiagram, DiagramError, DiagramSum, LinkDiagram, Parity, canonicalize, parse_dsl
from .complex import builtin_cocycles, cocycle_basis, delta, enumerate_diagrams, extend_chord_part, is_cocycle

__all__ = [
    "CanonicalDiagram",
    "DiagramError",
    "DiagramSum",
    "LinkDiagram",
    "Parity",
    "builtin_cocycles",
    "canonicalize",
    "cocycle_basis",
    "delta",
    "enumerate_diagrams",
    "extend_chord_part",
    "is_cocycle",
    "parse_dsl",
]
