"""Cosserat strain and curvature measures in curvilinear coordinates and on shells."""
from .errors import (CosseratError, Degenerate, DegenerateChart, DegenerateSurface, InvalidParams,
                     LineSearchStalled, NotARotation, NotSkew, NyeViolated, OutOfDomain, SchemaError)

__version__ = "0.1.0"

__all__ = [
    "CosseratError", "Degenerate", "DegenerateChart", "DegenerateSurface", "InvalidParams",
    "LineSearchStalled", "NotARotation", "NotSkew", "NyeViolated", "OutOfDomain", "SchemaError",
]
