"""Exhaustive search for supernodes meeting the 2d'+2 order bound."""

import itertools
import logging
from typing import List, Tuple

from polarstar.exceptions import InvalidParameters
from polarstar.factor_graphs.graph import Graph
from polarstar.factor_graphs.properties import check_property_r_star
from polarstar.factor_graphs.supernodes import (
    SupernodeGraph,
    SupernodeKind,
    SupernodeProperty,
)

logger = logging.getLogger("polarstar")

MAX_SEARCH_VERTICES = 6


def canonical_involutions(n: int) -> List[Tuple[int, ...]]:
    """One involution per conjugacy class: (0 1)(2 3)... with t transpositions."""
    result = []
    for t in range(n // 2 + 1):
        f = list(range(n))
        for i in range(t):
            f[2 * i], f[2 * i + 1] = 2 * i + 1, 2 * i
        result.append(tuple(f))
    return result


def find_r_star_graphs(d_prime: int) -> List[SupernodeGraph]:
    """Every (graph, involution) on 2d'+2 vertices with max degree <= d' and R*.

    Involutions are taken up to conjugacy, so an empty result rules out
    every labelled R* graph of that order.
    """
    n = 2 * d_prime + 2
    if d_prime < 0 or n > MAX_SEARCH_VERTICES:
        raise InvalidParameters(
            f"exhaustive search is limited to {MAX_SEARCH_VERTICES} vertices"
        )
    pairs = list(itertools.combinations(range(n), 2))
    involutions = canonical_involutions(n)
    found = []
    checked = 0
    for size in range(n * d_prime // 2 + 1):
        for subset in itertools.combinations(pairs, size):
            degree = [0] * n
            for u, v in subset:
                degree[u] += 1
                degree[v] += 1
            if max(degree) > d_prime:
                continue
            graph = Graph.from_edges(n, subset)
            for f in involutions:
                checked += 1
                candidate = SupernodeGraph(
                    graph=graph,
                    f=f,
                    property=SupernodeProperty.RSTAR,
                    degree=d_prime,
                    kind=SupernodeKind.INDUCTIVE_QUAD,
                )
                if check_property_r_star(candidate):
                    found.append(candidate)
    logger.info(
        "R* search d'=%d: %d candidates checked, %d found", d_prime, checked, len(found)
    )
    return found
