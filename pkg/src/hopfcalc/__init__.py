"""hopfcalc: exact-arithmetic differential calculus on left Hopf algebroids.

The package builds, at finite dimension and over an exact field (the
rationals or a prime field), the full operator calculus attached to a left
Hopf algebroid with module-comodule coefficients: simplicial and cyclic
structure on chains, the bar resolution with its coalgebra structure, cup
and cap products, Gerstenhaber bracket, Lie derivative, and the cyclic
homotopy operator.  Every defining identity is machine-verified as an exact
matrix equality on concrete instances.
"""

__version__ = "0.1.0"

from .errors import (
    DegreeError,
    NotAChainMapOnHomology,
    NotAGroup,
    NotSaYD,
    NotSemisimple,
    RelationViolation,
    WellDefinednessError,
)

__all__ = [
    "__version__",
    "DegreeError",
    "NotAChainMapOnHomology",
    "NotAGroup",
    "NotSaYD",
    "NotSemisimple",
    "RelationViolation",
    "WellDefinednessError",
]
