from .api import WellSystem, create_system
from .bounds import BoundReport, certify
from .graph import Graph, Involution, VertexPartition
from .spectral import Spectrum

__all__ = [
    "create_system",
    "certify",
    "BoundReport",
    "Graph",
    "Involution",
    "Spectrum",
    "VertexPartition",
    "WellSystem",
]
