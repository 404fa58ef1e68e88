from polarstar.star_product.product import (
    BijectionAssignment,
    PolarStarGraph,
    SelfLoopPolicy,
    build_polarstar,
    star_product,
    verify_diameter,
)
from polarstar.star_product.witness import classify_three_hop

__all__ = [
    "BijectionAssignment",
    "PolarStarGraph",
    "SelfLoopPolicy",
    "build_polarstar",
    "classify_three_hop",
    "star_product",
    "verify_diameter",
]
