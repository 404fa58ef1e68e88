"""Minimal next-hop tables and the MIN / M_MIN / UGAL routing decisions."""

import logging
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from polarstar.exceptions import NoRoute
from polarstar.simulator.topology import Topology, VCPolicy, max_global_toward

logger = logging.getLogger("polarstar")

# weight of an inter-group link under the group metric: one global hop
# always outweighs any number of local hops
GLOBAL_WEIGHT = 1000


class RoutingScheme(Enum):
    MIN = "MIN"
    M_MIN = "M_MIN"
    UGAL = "UGAL"


class RoutingTable:
    """All-pairs minimal distances with next-hop lists built per target on demand.

    HOP topologies use plain hop counts. GROUP topologies use a weighted
    metric where minimal paths take the fewest global links first. With
    ``max_global`` set, next hops are limited to minimal paths that also
    carry the most global links.
    """

    def __init__(self, topology: Topology, max_global: bool = False):
        self.topology = topology
        self.max_global = max_global
        self.adjacency = topology.graph.adjacency
        self.hops = topology.hop_distances()
        if topology.vc_policy is VCPolicy.GROUP:
            self.dist = self._group_distances()
        else:
            self.dist = self.hops
        self._next: Dict[int, List[Tuple[int, ...]]] = {}

    def _group_distances(self) -> np.ndarray:
        t = self.topology
        e = t.graph.edge_array()
        w = np.where(
            [t.is_global(int(u), int(v)) for u, v in e], GLOBAL_WEIGHT, 1
        ).astype(np.float64)
        n = t.num_routers
        m = sparse.csr_matrix(
            (np.concatenate([w, w]), (np.concatenate([e[:, 0], e[:, 1]]), np.concatenate([e[:, 1], e[:, 0]]))),
            shape=(n, n),
        )
        d = csgraph.shortest_path(m, method="D", directed=False)
        d[np.isinf(d)] = -1
        return d.astype(np.int64)

    def weight(self, v: int, u: int) -> int:
        if self.topology.vc_policy is VCPolicy.GROUP and self.topology.is_global(v, u):
            return GLOBAL_WEIGHT
        return 1

    def global_hops(self, source: int, target: int) -> int:
        """Global links on a minimal path (exact under the group metric)."""
        if self.topology.vc_policy is VCPolicy.GROUP:
            return int(self.dist[source, target]) // GLOBAL_WEIGHT
        return int(self.topology.max_global_hops(target)[source])

    def next_hops(self, v: int, target: int) -> Tuple[int, ...]:
        table = self._next.get(target)
        if table is None:
            table = self._build(target)
            self._next[target] = table
        hops = table[v]
        if not hops and v != target:
            raise NoRoute(f"router {target} is unreachable from router {v}")
        return hops

    def _build(self, target: int) -> List[Tuple[int, ...]]:
        dist = self.dist[:, target]
        best = None
        if self.max_global:
            best = max_global_toward(
                self.adjacency, dist, self.weight, self.topology.is_global, target
            )
        table = []
        for v, nbrs in enumerate(self.adjacency):
            if dist[v] <= 0:
                table.append(())
                continue
            hops = [u for u in nbrs if dist[u] + self.weight(v, u) == dist[v]]
            if best is not None:
                hops = [
                    u for u in hops if best[u] + int(self.topology.is_global(v, u)) == best[v]
                ]
            table.append(tuple(hops))
        return table


def choose_min(candidates: Sequence[int]) -> int:
    return candidates[0]


def choose_least_occupied(candidates: Sequence[int], occupancy: Callable[[int], int]) -> int:
    """Lowest output occupancy; ties go to the lowest router id."""
    return min(candidates, key=lambda u: (occupancy(u), u))


def ugal_intermediate(
    table: RoutingTable,
    source: int,
    dest: int,
    occupancy: Callable[[int], int],
    threshold: float,
    samples: int,
    vc_budget: int,
    rng: np.random.Generator,
) -> Optional[int]:
    """Source-side UGAL choice: an intermediate router, or None to stay minimal.

    Misrouting is considered only when the best minimal output holds more
    than ``threshold`` flits. Candidates are sampled among routers whose
    two-phase path fits the VC budget, and each is scored as output
    occupancy times path length.
    """
    first = choose_least_occupied(table.next_hops(source, dest), occupancy)
    minimal_occ = occupancy(first)
    if minimal_occ <= threshold:
        return None
    hops = table.hops
    if table.topology.vc_policy is VCPolicy.GROUP:
        globals_ = table.dist // GLOBAL_WEIGHT
        need = globals_[source] + globals_[:, dest] + 1
    else:
        need = hops[source] + hops[:, dest]
    feasible = need <= vc_budget
    feasible[[source, dest]] = False
    candidates = np.flatnonzero(feasible & (hops[source] > 0) & (hops[:, dest] > 0))
    if not len(candidates):
        return None
    picked = rng.choice(candidates, size=min(samples, len(candidates)), replace=False)
    best_cost = minimal_occ * int(hops[source, dest])
    best = None
    for i in sorted(int(x) for x in picked):
        port = choose_least_occupied(table.next_hops(source, i), occupancy)
        cost = occupancy(port) * int(hops[source, i] + hops[i, dest])
        if cost < best_cost:
            best_cost, best = cost, i
    return best
