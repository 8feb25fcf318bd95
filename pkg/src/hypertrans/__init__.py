"""Transversal and total-domination invariants of uniform hypergraphs."""

from .hcore import (
    BoundRow,
    ClassCheck,
    DegreeProfile,
    FormatError,
    Hypergraph,
    class_check,
    class_floor_check,
    components,
    degree_profile,
    delete_vertices,
    from_text,
    hypergraph,
    neighborhood,
)
from .solve import (
    InfeasibleError,
    SolveResult,
    brute_force_oracle,
    ec_t,
    gamma,
    gamma_t,
    solve,
    tau,
    tau_strong,
    tau_t,
)
from .xform import Graph, dual, graph, graph_from_text, onh, two_section
from .xsearch import (
    canonical_form,
    enumerate_Hk,
    estimate_bk,
    random_hypergraph,
    verify_bounds,
)

__all__ = [
    "BoundRow",
    "ClassCheck",
    "DegreeProfile",
    "FormatError",
    "Graph",
    "Hypergraph",
    "InfeasibleError",
    "SolveResult",
    "brute_force_oracle",
    "canonical_form",
    "class_check",
    "class_floor_check",
    "components",
    "degree_profile",
    "delete_vertices",
    "dual",
    "ec_t",
    "enumerate_Hk",
    "estimate_bk",
    "from_text",
    "gamma",
    "gamma_t",
    "graph",
    "graph_from_text",
    "hypergraph",
    "neighborhood",
    "onh",
    "random_hypergraph",
    "solve",
    "tau",
    "tau_strong",
    "tau_t",
    "two_section",
    "verify_bounds",
]
