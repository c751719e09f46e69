"""Long-range percolation on lattices, hierarchical lattices and the rings of
integers of global fields, with adelic inclusion probabilities."""

from .arith_ff import FqField, PlaceFF, Poly, prime_field
from .arith_nf import QI, QQ, QSQRT2, NFElement, NumberField, PlaceNF
from .engine import SampleConfig, build_vertex_set, cluster_stats, sample_graph
from .hierlattice import HierParams, HierPoint
from .kernels import KernelSpec, Schedule
from .magnitude import ExactMagnitude

__version__ = "0.1.0"

__all__ = [
    "ExactMagnitude",
    "FqField",
    "HierParams",
    "HierPoint",
    "KernelSpec",
    "NFElement",
    "NumberField",
    "PlaceFF",
    "PlaceNF",
    "Poly",
    "QI",
    "QQ",
    "QSQRT2",
    "SampleConfig",
    "Schedule",
    "build_vertex_set",
    "cluster_stats",
    "prime_field",
    "sample_graph",
]
