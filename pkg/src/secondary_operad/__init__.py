"""Polygonal subdivisions of planar point sets, their regularity, and the
signed chain complex they span."""

from .geometry import (
    CollinearTriple,
    Configuration,
    ConfigurationError,
    DuplicatePoint,
    convex_hull,
    orientation,
    validate_configuration,
)
from .subdivisions import (
    BudgetExceeded,
    Cell,
    Region,
    Subdivision,
    codimension,
    enumerate_subdivisions,
    refinement_splits,
    subdivision_from_weights,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "Cell",
    "CollinearTriple",
    "Configuration",
    "ConfigurationError",
    "DuplicatePoint",
    "Region",
    "Subdivision",
    "codimension",
    "convex_hull",
    "enumerate_subdivisions",
    "orientation",
    "refinement_splits",
    "subdivision_from_weights",
    "validate_configuration",
]
