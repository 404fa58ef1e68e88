"""Dragonfly, HyperX and fat-tree baselines at router granularity."""

import itertools
import logging
from typing import Optional

import networkx as nx

from polarstar.exceptions import InvalidParameters
from polarstar.factor_graphs.graph import Graph
from polarstar.simulator.topology import Topology, VCPolicy, direct_topology

logger = logging.getLogger("polarstar")


def build_dragonfly(a: int, h: int, p: Optional[int] = None) -> Topology:
    """Canonical Dragonfly: ah+1 fully connected groups of a routers.

    Global links use the consecutive arrangement: the t-th global port of
    group i leads to group t (t < i) or t+1 (t >= i), from router t // h.
    """
    if a < 1 or h < 1:
        raise InvalidParameters(f"Dragonfly needs a >= 1 and h >= 1, got a={a}, h={h}")
    p = h if p is None else p
    groups = a * h + 1
    edges = []
    for g in range(groups):
        base = g * a
        edges += [(base + i, base + j) for i, j in itertools.combinations(range(a), 2)]
        for t in range(a * h):
            other = t if t < g else t + 1
            if other < g:
                continue
            back = g if g < other else g - 1
            edges.append((base + t // h, other * a + back // h))
    graph = Graph.from_edges(groups * a, edges)
    logger.debug("Dragonfly a=%d h=%d: %d routers in %d groups", a, h, graph.n, groups)
    return direct_topology(
        f"DF(a={a},h={h})",
        graph,
        p,
        groups=[r // a for r in range(graph.n)],
        vc_policy=VCPolicy.GROUP,
    )


def build_hyperx(S: int, L: int, p: Optional[int] = None) -> Topology:
    """L-dimensional HyperX: S^L routers, each dimension fully connected."""
    if S < 2 or L < 1:
        raise InvalidParameters(f"HyperX needs S >= 2 and L >= 1, got S={S}, L={L}")
    lattice = nx.complete_graph(S)
    for _ in range(L - 1):
        lattice = nx.cartesian_product(lattice, nx.complete_graph(S))
    graph = Graph.from_networkx(lattice)
    radix = L * (S - 1)
    p = radix // 3 if p is None else p
    return direct_topology(f"HX(S={S},L={L})", graph, p)


def build_fattree(levels: int, p: int) -> Topology:
    """k-ary n-tree with k = p: ``levels`` rows of p^(levels-1) switches.

    Switch (w, l) joins (w', l+1) when the digit strings w and w' agree
    everywhere except digit l. Only the bottom row hosts endpoints.
    """
    if levels < 1 or p < 2:
        raise InvalidParameters(f"fat tree needs levels >= 1 and p >= 2, got {levels}, {p}")
    width = p ** (levels - 1)
    edges = []
    for level in range(levels - 1):
        stride = p**level
        for w in range(width):
            digit = (w // stride) % p
            base = w - digit * stride
            for k in range(p):
                edges.append((level * width + w, (level + 1) * width + base + k * stride))
    graph = Graph.from_edges(levels * width, edges)
    endpoints = tuple(p if r < width else 0 for r in range(graph.n))
    logger.debug("Fat tree n=%d p=%d: %d switches", levels, p, graph.n)
    return Topology(name=f"FT(n={levels},p={p})", graph=graph, endpoints=endpoints)
