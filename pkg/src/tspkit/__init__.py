"""Fast Christofides-style tours for metric TSP on sparse graph instances."""

__version__ = "0.1.0"

from .errors import (CapacityError, CheckFailure, InfeasibleError, IngestionError,  # noqa: E402
                     PreconditionError, SamplingFailure, TspkitError)
from .graph import (EdgeMultiset, FractionalSolution, Graph, Tour, build_graph,  # noqa: E402
                    euler_tour, mst, shortest_paths)

__all__ = [
    "__version__", "CapacityError", "CheckFailure", "EdgeMultiset", "FractionalSolution",
    "Graph", "InfeasibleError", "IngestionError", "PreconditionError", "SamplingFailure",
    "Tour", "TspkitError", "build_graph", "euler_tour", "mst", "shortest_paths",
]
