import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import csgraph

from polarstar.exceptions import Disconnected
from polarstar.factor_graphs.graph import Graph

logger = logging.getLogger("polarstar")

SOURCE_CHUNK = 256


@dataclass(frozen=True)
class DistanceStats:
    diameter: int
    average_path_length: float
    pairs: int

    def __iter__(self):
        # allows `diameter, apl = distance_stats(g)`
        yield self.diameter
        yield self.average_path_length


def hop_distances(g: Graph, sources: Optional[Sequence[int]] = None) -> np.ndarray:
    """BFS hop counts; unreachable pairs are -1. Self-loops never shorten paths."""
    indices = None if sources is None else np.asarray(sources, dtype=np.int64)
    dist = csgraph.shortest_path(
        g.to_csr(), method="D", directed=False, unweighted=True, indices=indices
    )
    dist[np.isinf(dist)] = -1
    return dist.astype(np.int32)


def component_count(g: Graph) -> int:
    count, _ = csgraph.connected_components(g.to_csr(), directed=False)
    return int(count)


def distance_stats(
    g: Graph,
    among: Optional[Iterable[int]] = None,
    sources: Optional[Sequence[int]] = None,
) -> DistanceStats:
    """Exact diameter and mean shortest-path length over ordered pairs u != v.

    ``among`` restricts both endpoints to a vertex subset; ``sources``
    restricts only the BFS roots (used for sampled verification).
    """
    if g.n <= 1:
        return DistanceStats(0, 0.0, 0)
    targets = None
    if among is not None:
        targets = np.asarray(sorted(set(among)), dtype=np.int64)
    components, labels = csgraph.connected_components(g.to_csr(), directed=False)
    if targets is not None:
        # only the listed vertices need to stay mutually reachable
        components = len(np.unique(labels[targets]))
    if components > 1:
        raise Disconnected(f"graph has {components} connected components", int(components))
    roots = targets if sources is None else np.asarray(sources, dtype=np.int64)
    if roots is None:
        roots = np.arange(g.n)
    diameter = 0
    total = 0
    pairs = 0
    for start in range(0, len(roots), SOURCE_CHUNK):
        chunk = roots[start : start + SOURCE_CHUNK]
        dist = hop_distances(g, chunk)
        if targets is not None:
            dist = dist[:, targets]
        diameter = max(diameter, int(dist.max()))
        total += int(dist.sum())
        # zero entries are the roots themselves
        pairs += int(np.count_nonzero(dist))
    apl = total / pairs if pairs else 0.0
    return DistanceStats(diameter=diameter, average_path_length=apl, pairs=pairs)


def eccentricity_bound(g: Graph, sources: Optional[Sequence[int]] = None) -> int:
    """Largest eccentricity among the given roots (all vertices by default)."""
    return distance_stats(g, sources=sources).diameter
