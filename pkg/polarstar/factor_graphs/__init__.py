from polarstar.factor_graphs.er import ProjectivePoint, build_er, quadrics
from polarstar.factor_graphs.graph import Graph
from polarstar.factor_graphs.properties import (
    check_property_r,
    check_property_r1,
    check_property_r_star,
    r_star_report,
)
from polarstar.factor_graphs.supernodes import (
    SupernodeGraph,
    SupernodeKind,
    SupernodeProperty,
    SupernodeSpec,
    build_complete,
    build_inductive_quad,
    build_paley,
)

__all__ = [
    "Graph",
    "ProjectivePoint",
    "SupernodeGraph",
    "SupernodeKind",
    "SupernodeProperty",
    "SupernodeSpec",
    "build_complete",
    "build_er",
    "build_inductive_quad",
    "build_paley",
    "check_property_r",
    "check_property_r1",
    "check_property_r_star",
    "quadrics",
    "r_star_report",
]
