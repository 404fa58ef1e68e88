"""Synthetic traffic patterns over contiguously numbered endpoints."""

import logging
from enum import Enum
from typing import Optional

import numpy as np

from polarstar.config import normalise_pattern
from polarstar.exceptions import PatternInfeasible
from polarstar.simulator.topology import Topology

logger = logging.getLogger("polarstar")

MAX_DERANGEMENT_TRIES = 10000


class TrafficKind(Enum):
    Uniform = "Uniform"
    RandomRouterPermutation = "RandomRouterPermutation"
    RandomEndpointPermutation = "RandomEndpointPermutation"
    BitShuffle = "BitShuffle"
    BitReverse = "BitReverse"
    AdversarialSupernode = "AdversarialSupernode"

    @classmethod
    def parse(cls, name) -> "TrafficKind":
        if isinstance(name, cls):
            return name
        return cls(normalise_pattern(name))


def derangement(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random permutation without fixed points, by rejection."""
    if n < 2:
        raise PatternInfeasible(f"cannot derange {n} item(s)")
    for _ in range(MAX_DERANGEMENT_TRIES):
        perm = rng.permutation(n)
        if not np.any(perm == np.arange(n)):
            return perm
    raise PatternInfeasible(f"no derangement of {n} items found")


def pair_groups(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random pairing of n groups as an involution without fixed points.

    An odd count leaves three groups, which form one directed 3-cycle.
    """
    if n < 2:
        raise PatternInfeasible(f"cannot pair {n} group(s)")
    order = rng.permutation(n)
    partner = np.empty(n, dtype=np.int64)
    paired = n - 3 if n % 2 else n
    for a, b in zip(order[0:paired:2], order[1:paired:2]):
        partner[a], partner[b] = b, a
    if n % 2:
        x, y, z = order[paired:]
        partner[x], partner[y], partner[z] = y, z, x
    return partner


def bit_shuffle(x: int, bits: int) -> int:
    """Rotate left by one within ``bits`` bits."""
    mask = (1 << bits) - 1
    return ((x << 1) | (x >> (bits - 1))) & mask if bits else 0


def bit_reverse(x: int, bits: int) -> int:
    return int(format(x, f"0{bits}b")[::-1], 2) if bits else 0


class TrafficPattern:
    """Destination rule for one pattern, fixed for the lifetime of a run.

    ``dest_map`` holds the endpoint-level permutation for every pattern
    except Uniform, where destinations are drawn per packet.
    """

    def __init__(self, kind, topology: Topology, rng: np.random.Generator):
        self.kind = TrafficKind.parse(kind)
        self.topology = topology
        self.dest_map: Optional[np.ndarray] = None
        n_ep = topology.num_endpoints
        self.active = np.arange(n_ep)
        builder = getattr(self, f"_build_{self.kind.name}")
        builder(rng)
        logger.debug(
            "%s traffic on %s: %d active endpoints of %d",
            self.kind.value,
            topology.name,
            len(self.active),
            n_ep,
        )

    def _build_Uniform(self, rng):
        if len(self.topology.endpoint_routers) < 2:
            raise PatternInfeasible("uniform traffic needs endpoints on two routers")

    def _router_map(self, router_perm: np.ndarray) -> None:
        t = self.topology
        dest = np.empty(t.num_endpoints, dtype=np.int64)
        for src_router, dst_router in enumerate(router_perm):
            src_eps = t.router_endpoints(src_router)
            dst_eps = t.router_endpoints(int(dst_router))
            if len(src_eps) != len(dst_eps):
                raise PatternInfeasible("router permutation needs equal endpoint counts")
            dest[list(src_eps)] = list(dst_eps)
        self.dest_map = dest

    def _build_RandomRouterPermutation(self, rng):
        t = self.topology
        hosts = np.asarray(t.endpoint_routers)
        perm = np.arange(t.num_routers)
        perm[hosts] = hosts[derangement(len(hosts), rng)]
        self._router_map(perm)

    def _build_RandomEndpointPermutation(self, rng):
        self.dest_map = derangement(self.topology.num_endpoints, rng)

    def _bit_pattern(self, fn) -> None:
        n_ep = self.topology.num_endpoints
        bits = n_ep.bit_length() - 1
        size = 1 << bits
        self.active = np.arange(size)
        self.dest_map = np.array([fn(x, bits) for x in range(size)], dtype=np.int64)

    def _build_BitShuffle(self, rng):
        self._bit_pattern(bit_shuffle)

    def _build_BitReverse(self, rng):
        self._bit_pattern(bit_reverse)

    def _build_AdversarialSupernode(self, rng):
        """Supernodes paired both ways, then the farthest router pairs across each match."""
        t = self.topology
        if t.groups is None or t.num_groups < 2:
            raise PatternInfeasible(f"{t.name} has no supernodes to pair")
        group_ids = sorted(set(t.groups))
        members = {g: [r for r in range(t.num_routers) if t.groups[r] == g] for g in group_ids}
        partner = pair_groups(len(group_ids), rng)
        target_group = {g: group_ids[int(partner[i])] for i, g in enumerate(group_ids)}
        dist = t.hop_distances()
        perm = np.arange(t.num_routers)
        for g in group_ids:
            sources = members[g]
            free = list(members[target_group[g]])
            if len(free) != len(sources):
                raise PatternInfeasible("adversarial pairing needs equal supernode sizes")
            for s in sources:
                best = max(
                    free,
                    key=lambda d: (dist[s, d], int(t.max_global_hops(d)[s]), -d),
                )
                perm[s] = best
                free.remove(best)
        self._router_map(perm)

    def destination(self, endpoint: int, rng: np.random.Generator) -> int:
        if self.dest_map is not None:
            return int(self.dest_map[endpoint])
        t = self.topology
        src_router = t.endpoint_router[endpoint]
        own = t.router_endpoints(src_router)
        # draw among the endpoints that are not on the source router
        k = int(rng.integers(t.num_endpoints - len(own)))
        return k if k < own.start else k + len(own)
