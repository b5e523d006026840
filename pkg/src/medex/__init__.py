"""Rooted labeled median graphs that explain symmetric maps.

Typical use::

    from medex import build_map, compute_mdt, pvr_expand, explains

    delta = build_map(points, [(x, y, label), ...])
    result = pvr_expand(delta)
    assert explains(result.graph, delta)
"""

__version__ = "0.1.0"

from .constructions import (
    explain_by_halfgrid,
    explain_by_hypercube,
    extended_half_grid,
    extended_hypercube,
    half_grid,
    halfgrid_median_formula,
    hypercube,
)
from .graph import (
    RootedLabeledGraph,
    ancestor_order,
    distances_from,
    explains,
    interval,
    is_median_graph,
    leaf_append,
    median,
    median_set,
)
from .mdt import PRIME, MDTree, compute_mdt, maximal_strong_partition, strong_modules, tree_from_hierarchy
from .pvr import PvrResult, pvr_expand, pvr_size, verify_pvr
from .symmap import (
    SymMap,
    build_map,
    is_complete,
    is_module,
    is_prime,
    is_strong_module,
    is_symbolic_ultrametric,
    minimal_module,
    quotient,
    restrict,
)
