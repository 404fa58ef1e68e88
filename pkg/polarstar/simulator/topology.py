"""Router-level topologies with attached endpoints, as seen by the simulator."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from polarstar.analysis.distance import hop_distances
from polarstar.exceptions import InvalidParameters
from polarstar.factor_graphs.graph import Graph

logger = logging.getLogger("polarstar")


class VCPolicy(Enum):
    # VC index grows by at least one per hop
    HOP = "hop"
    # VC index counts the global links taken so far
    GROUP = "group"


@dataclass(frozen=True, eq=False)
class Topology:
    name: str
    graph: Graph
    endpoints: Tuple[int, ...]
    groups: Optional[Tuple[int, ...]] = None
    vc_policy: VCPolicy = VCPolicy.HOP
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.endpoints) != self.graph.n:
            raise InvalidParameters("endpoints must be given for every router")
        if self.groups is not None and len(self.groups) != self.graph.n:
            raise InvalidParameters("groups must be given for every router")
        if self.vc_policy is VCPolicy.GROUP and self.groups is None:
            raise InvalidParameters("group VC policy needs router groups")

    @property
    def num_routers(self) -> int:
        return self.graph.n

    @property
    def num_endpoints(self) -> int:
        return int(sum(self.endpoints))

    @property
    def radix(self) -> int:
        """Network radix: the largest router-to-router degree."""
        return self.graph.max_degree

    @cached_property
    def endpoint_offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.endpoints)]).astype(np.int64)

    @cached_property
    def endpoint_router(self) -> np.ndarray:
        return np.repeat(np.arange(self.num_routers), self.endpoints)

    @cached_property
    def endpoint_routers(self) -> Tuple[int, ...]:
        return tuple(r for r in range(self.num_routers) if self.endpoints[r])

    def router_endpoints(self, router: int) -> range:
        return range(int(self.endpoint_offsets[router]), int(self.endpoint_offsets[router + 1]))

    def local_index(self, endpoint: int) -> int:
        return endpoint - int(self.endpoint_offsets[self.endpoint_router[endpoint]])

    def is_global(self, u: int, v: int) -> bool:
        return self.groups is not None and self.groups[u] != self.groups[v]

    @property
    def num_groups(self) -> int:
        return len(set(self.groups)) if self.groups is not None else 0

    def hop_distances(self) -> np.ndarray:
        if "hops" not in self._cache:
            self._cache["hops"] = hop_distances(self.graph)
        return self._cache["hops"]

    @property
    def diameter(self) -> int:
        return int(self.hop_distances().max())

    def average_endpoint_hops(self) -> float:
        """Mean router hop count between endpoints on distinct routers."""
        d = self.hop_distances()
        w = np.asarray(self.endpoints, dtype=np.float64)
        weights = np.outer(w, w)
        np.fill_diagonal(weights, 0.0)
        return float((d * weights).sum() / weights.sum())

    def max_global_hops(self, target: int) -> np.ndarray:
        """Most global links on any minimal path from each router to ``target``."""
        key = ("max_global", target)
        if key not in self._cache:
            dist = self.hop_distances()[:, target]
            self._cache[key] = max_global_toward(
                self.graph.adjacency, dist, lambda v, u: 1, self.is_global, target
            )
        return self._cache[key]


def max_global_toward(
    adjacency: Sequence[Sequence[int]],
    dist: np.ndarray,
    weight: Callable[[int, int], float],
    is_global: Callable[[int, int], bool],
    target: int,
) -> np.ndarray:
    """Dynamic programme over the shortest-path DAG toward ``target``."""
    best = np.full(len(adjacency), -1, dtype=np.int64)
    best[target] = 0
    for v in np.argsort(dist, kind="stable"):
        if v == target or dist[v] < 0:
            continue
        for u in adjacency[v]:
            if best[u] >= 0 and dist[u] + weight(v, u) == dist[v]:
                best[v] = max(best[v], best[u] + int(is_global(v, u)))
    return best


def direct_topology(
    name: str,
    graph: Graph,
    endpoints_per_router: int,
    groups: Optional[Sequence[int]] = None,
    vc_policy: VCPolicy = VCPolicy.HOP,
) -> Topology:
    if endpoints_per_router < 0:
        raise InvalidParameters("endpoints per router must be non-negative")
    return Topology(
        name=name,
        graph=graph,
        endpoints=(endpoints_per_router,) * graph.n,
        groups=tuple(groups) if groups is not None else None,
        vc_policy=vc_policy,
    )


def polarstar_topology(ps, endpoints_per_router: int, name: Optional[str] = None) -> Topology:
    """Supernodes become the router groups used by global-hop accounting."""
    label = name or f"PS-{ps.supernode.kind.value}(q={ps.q},d'={ps.supernode.degree})"
    return direct_topology(label, ps.graph, endpoints_per_router, groups=ps.groups())
