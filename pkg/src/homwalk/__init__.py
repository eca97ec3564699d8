"""Random height functions with long-range constraints.

Uniform graph homomorphisms to the integers from the segment and torus whose
edges join all vertices at odd distance up to ``2d+1``: exact counting and
sampling, structural decompositions (jumps, chains, fluctuations, word
encodings), the local-limit Markov chain, and the reference distributions of
the critical-regime range laws.
"""

from .core import (
    GraphSpec,
    HeightFunction,
    Topology,
    derivative,
    from_derivative,
    line_graph,
    range_size,
    torus_graph,
    validate,
    zigzag,
)
from .counting import (
    LambdaConstants,
    c_recursive,
    enumerate_homomorphisms,
    hom_count_line,
    lambda_of_d,
    prefix_marginal,
)

__version__ = "0.1.0"

__all__ = [
    "GraphSpec",
    "HeightFunction",
    "Topology",
    "LambdaConstants",
    "c_recursive",
    "derivative",
    "enumerate_homomorphisms",
    "from_derivative",
    "hom_count_line",
    "lambda_of_d",
    "line_graph",
    "prefix_marginal",
    "range_size",
    "torus_graph",
    "validate",
    "zigzag",
    "__version__",
]
