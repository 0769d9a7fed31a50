"""Numerical laboratory for harmonically weighted Dirichlet spaces D(mu)."""
from .measures import AtomicMeasure, Family, UnitCirclePoint
from .functions import Arc, BoundaryModulus, StructuredFunction
from .quadrature import EnergyValue, QuadratureConfig

__version__ = "1.0.0"

__all__ = ["AtomicMeasure", "Family", "UnitCirclePoint", "Arc", "BoundaryModulus",
           "StructuredFunction", "EnergyValue", "QuadratureConfig", "__version__"]
