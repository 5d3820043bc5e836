"""Group distance magic labelings of toroidal grids C_m □ C_n and hypercubes."""

from .abelian import GroupElement, GroupSpec, canonicalize, enumerate_groups, parse_group
from .construct import build_hypercube_labeling, compose_product, construct_lcm_half, construct_square
from .labeling import Labeling, read_labeling, verify, write_labeling
from .oracle import Decision, Status, conjecture_predicate, decide
from .search import SearchConfig, SearchStatus, audit_conjecture, search_exhaustive
from .torus import build_hypercube, build_torus

__all__ = [
    "GroupElement",
    "GroupSpec",
    "canonicalize",
    "enumerate_groups",
    "parse_group",
    "build_hypercube_labeling",
    "compose_product",
    "construct_lcm_half",
    "construct_square",
    "Labeling",
    "read_labeling",
    "verify",
    "write_labeling",
    "Decision",
    "Status",
    "conjecture_predicate",
    "decide",
    "SearchConfig",
    "SearchStatus",
    "audit_conjecture",
    "search_exhaustive",
    "build_hypercube",
    "build_torus",
]
