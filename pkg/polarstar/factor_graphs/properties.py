import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from polarstar.exceptions import NotInvolution
from polarstar.factor_graphs.graph import Graph
from polarstar.factor_graphs.supernodes import SupernodeGraph

logger = logging.getLogger("polarstar")


def check_property_r(g: Graph, diameter: int) -> bool:
    """True iff every ordered pair is joined by a walk of exactly `diameter` steps.

    A self-loop counts as one step.
    """
    if g.n == 0:
        return True
    step = g.to_csr(with_loops=True).astype(np.int64)
    reach = step
    for i in range(diameter - 1):
        reach = reach @ step
        reach.data[:] = 1
        reach.eliminate_zeros()
        logger.debug("Property R: walks of length %d cover %d pairs", i + 2, reach.nnz)
    return reach.nnz == g.n * g.n


@dataclass(frozen=True)
class RStarReport:
    holds: bool
    tight: bool
    uncovered: Tuple[int, ...]


def r_star_report(s: SupernodeGraph) -> RStarReport:
    """Check V = {x} | {f(x)} | f(N(x)) | N(f(x)) for every x.

    ``tight`` also requires the four sets to be pairwise disjoint, which is
    the case exactly when the supernode meets the 2d'+2 order bound.
    """
    if not s.is_involution():
        raise NotInvolution("Property R* needs f to be an involution")
    g, f = s.graph, s.f
    n = g.n
    uncovered = []
    tight = True
    for x in range(n):
        fx = f[x]
        image_of_neighbours = [f[y] for y in g.neighbors(x)]
        neighbours_of_image = list(g.neighbors(fx))
        parts = [x, fx] if fx != x else [x]
        members = parts + image_of_neighbours + neighbours_of_image
        covered = set(members)
        if len(covered) != n:
            uncovered.append(x)
        if fx == x or len(covered) != len(members):
            tight = False
    return RStarReport(holds=not uncovered, tight=tight and not uncovered, uncovered=tuple(uncovered))


def check_property_r_star(s: SupernodeGraph) -> bool:
    return r_star_report(s).holds


def check_property_r1(s: SupernodeGraph) -> bool:
    """f^2 is an automorphism and E | f(E) is every pair of distinct vertices."""
    a = s.graph.adjacency_matrix()
    f = np.asarray(s.f, dtype=np.int64)
    f2 = f[f]
    if not np.array_equal(a[np.ix_(f2, f2)], a):
        return False
    f_inv = np.argsort(f)
    image = a[np.ix_(f_inv, f_inv)]
    covered = a | image
    np.fill_diagonal(covered, True)
    return bool(covered.all())
