"""Classify shortest 3-hop paths by the case of the diameter argument they realise."""

import logging
from typing import Iterator, List, Tuple

import numpy as np

from polarstar.analysis.distance import hop_distances
from polarstar.star_product.product import PolarStarGraph

logger = logging.getLogger("polarstar")

F_POWER = "f_power"
NEIGHBOR_OF_IMAGE = "neighbor_of_image"
IMAGE_OF_NEIGHBOR = "image_of_neighbor"
OTHER = "other"
CASES = (F_POWER, NEIGHBOR_OF_IMAGE, IMAGE_OF_NEIGHBOR, OTHER)

MAX_PATHS = 10000


def shortest_paths(ps: PolarStarGraph, source: int, target: int) -> Iterator[List[int]]:
    dist = hop_distances(ps.graph, [target])[0]
    if dist[source] < 0:
        return
    path = [source]

    def extend(v):
        if v == target:
            yield list(path)
            return
        for u in ps.graph.neighbors(v):
            if dist[u] == dist[v] - 1:
                path.append(u)
                yield from extend(u)
                path.pop()

    yield from extend(source)


def hop_pattern(ps: PolarStarGraph, path: List[int]) -> str:
    """'E' for an inter-supernode hop, 'I' for an intra-supernode hop."""
    return "".join("E" if ps.is_global(u, v) else "I" for u, v in zip(path, path[1:]))


def _case(pattern: str) -> str:
    if "I" not in pattern:
        return F_POWER
    if "EI" in pattern:
        return NEIGHBOR_OF_IMAGE
    if "IE" in pattern:
        return IMAGE_OF_NEIGHBOR
    return OTHER


def classify_three_hop(ps: PolarStarGraph, source: int, target: int) -> str:
    """Best-ranked case over all shortest paths from source to target.

    f_power: every hop is inter-supernode, so the target coordinate is an
    iterate of f. neighbor_of_image: an intra hop directly follows an inter
    hop, landing in N(f(z')). image_of_neighbor: an inter hop directly
    follows an intra hop, landing in f(N(z')).
    """
    best = len(CASES) - 1
    for count, path in enumerate(shortest_paths(ps, source, target)):
        best = min(best, CASES.index(_case(hop_pattern(ps, path))))
        if best == 0 or count >= MAX_PATHS:
            break
    return CASES[best]


def sample_three_hop_pairs(
    ps: PolarStarGraph, samples: int, seed: int
) -> List[Tuple[int, int]]:
    """Seeded sample of vertex pairs at distance exactly 3."""
    rng = np.random.default_rng(seed)
    roots = rng.choice(ps.order, size=min(samples, ps.order), replace=False)
    dist = hop_distances(ps.graph, roots)
    pairs = []
    for i, root in enumerate(roots):
        far = np.flatnonzero(dist[i] == 3)
        if len(far):
            pairs.append((int(root), int(rng.choice(far))))
    return pairs
