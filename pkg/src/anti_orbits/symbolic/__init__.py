"""Symbol spaces, transition graphs and codes."""

from anti_orbits.symbolic.codes import (
    Code,
    StandardCode,
    code_from_second_differences,
    is_admissible,
    perturb_outside,
    random_standard_code,
    standard_code_check,
    standard_code_symbols,
    widen_bound,
)
from anti_orbits.symbolic.graph import (
    Edge,
    TransitionGraph,
    complete_graph,
    count_words,
    cycle_graph,
    golden_mean_graph,
    graph_from_edges,
)

__all__ = [
    "Code",
    "Edge",
    "StandardCode",
    "TransitionGraph",
    "code_from_second_differences",
    "complete_graph",
    "count_words",
    "cycle_graph",
    "golden_mean_graph",
    "graph_from_edges",
    "is_admissible",
    "perturb_outside",
    "random_standard_code",
    "standard_code_check",
    "standard_code_symbols",
    "widen_bound",
]
