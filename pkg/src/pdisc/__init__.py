"""Exact-arithmetic analysis of planar polynomial vector fields.

The package decides Darboux/Liouville integrability questions within
stated search bounds, classifies finite and infinite equilibria through
Poincare compactification and directional blow-ups, and renders global
phase portraits on the Poincare disc.  Everything except the portrait
renderer works in exact rational arithmetic.
"""

from pdisc.errors import (
    InputError,
    InternalInvariantError,
    LineOfEquilibriaError,
    ParseError,
    PDiscError,
    PositiveDimensionalError,
)

__version__ = "0.1.0"

__all__ = [
    "InputError",
    "InternalInvariantError",
    "LineOfEquilibriaError",
    "ParseError",
    "PDiscError",
    "PositiveDimensionalError",
    "__version__",
]
