"""gardnerlab: exact breathers, conserved functionals, linearized spectra
and time-dependent stability experiments for the Gardner equation."""

from .fields import DEFAULT_GRID, Field, Grid, make_grid
from .params import BreatherParams, DoublePoleParams, ParameterDomainError, SolitonParams

__all__ = [
    "DEFAULT_GRID",
    "Field",
    "Grid",
    "make_grid",
    "BreatherParams",
    "DoublePoleParams",
    "ParameterDomainError",
    "SolitonParams",
]

__version__ = "0.1.0"
