import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from polarstar.analysis.distance import distance_stats
from polarstar.config import analysis_config, default_seed, load_defaults
from polarstar.exceptions import (
    BijectionArityMismatch,
    DiameterViolation,
    IncompleteAssignment,
    PropertyCheckFailed,
)
from polarstar.factor_graphs.er import build_er
from polarstar.factor_graphs.graph import Graph
from polarstar.factor_graphs.supernodes import (
    SupernodeGraph,
    SupernodeKind,
    SupernodeSpec,
)

logger = logging.getLogger("polarstar")

MAX_DIAMETER = 3


class SelfLoopPolicy(Enum):
    APPLY_F = "apply_f"
    DROP = "drop"


@dataclass(frozen=True)
class BijectionAssignment:
    """Bijection per oriented structure edge; loops are keyed (x, x)."""

    maps: Mapping[Tuple[int, int], Tuple[int, ...]]
    self_loop_policy: SelfLoopPolicy

    @classmethod
    def uniform(
        cls, structure: Graph, f: Tuple[int, ...], policy: SelfLoopPolicy
    ) -> "BijectionAssignment":
        """The same f on every edge, oriented from the lower to the higher index."""
        f = tuple(f)
        maps: Dict[Tuple[int, int], Tuple[int, ...]] = {e: f for e in structure.edges()}
        if policy is SelfLoopPolicy.APPLY_F:
            maps.update({(x, x): f for x in structure.self_loops})
        return cls(maps=maps, self_loop_policy=policy)


@dataclass(frozen=True)
class PolarStarGraph:
    graph: Graph
    structure: Graph
    supernode: SupernodeGraph
    q: Optional[int] = None
    self_loop_policy: SelfLoopPolicy = SelfLoopPolicy.DROP
    degree_deficit: int = 0
    metadata: Dict = field(default_factory=dict, compare=False)

    @property
    def supernode_order(self) -> int:
        return self.supernode.order

    @property
    def order(self) -> int:
        return self.graph.n

    @property
    def radix(self) -> int:
        return self.graph.max_degree

    def vertex(self, x: int, x_local: int) -> int:
        return x * self.supernode_order + x_local

    def supernode_of(self, v: int) -> int:
        return v // self.supernode_order

    def local_index(self, v: int) -> int:
        return v % self.supernode_order

    def is_global(self, u: int, v: int) -> bool:
        return self.supernode_of(u) != self.supernode_of(v)

    def groups(self) -> Tuple[int, ...]:
        return tuple(v // self.supernode_order for v in range(self.order))

    def names(self, template: Optional[str] = None) -> List[str]:
        template = template or load_defaults()["export"]["vertex_name"]
        m = self.supernode_order
        return [template.format(supernode=v // m, local=v % m) for v in range(self.order)]


def _check_assignment(
    structure: Graph, m: int, assign: BijectionAssignment
) -> List[Tuple[int, int, np.ndarray]]:
    oriented = []
    for (x, y), perm in assign.maps.items():
        if len(perm) != m:
            raise BijectionArityMismatch(
                f"bijection on edge ({x}, {y}) has {len(perm)} entries, supernode has {m}"
            )
        perm = np.asarray(perm, dtype=np.int64)
        if not np.array_equal(np.sort(perm), np.arange(m)):
            raise BijectionArityMismatch(f"map on edge ({x}, {y}) is not a bijection")
        if x != y and not structure.has_edge(x, y):
            raise IncompleteAssignment(f"({x}, {y}) is not a structure edge")
        oriented.append((x, y, perm))
    for u, v in structure.edges():
        if ((u, v) in assign.maps) == ((v, u) in assign.maps):
            raise IncompleteAssignment(
                f"structure edge ({u}, {v}) needs exactly one oriented bijection"
            )
    if assign.self_loop_policy is SelfLoopPolicy.APPLY_F:
        missing = [x for x in structure.self_loops if (x, x) not in assign.maps]
        if missing:
            raise IncompleteAssignment(f"self-loops {missing[:5]} have no bijection")
    return oriented


def star_product(
    structure: Graph, supernode: SupernodeGraph, assign: BijectionAssignment
) -> PolarStarGraph:
    """Star product: vertex (x, x') is index x*m + x'."""
    m = supernode.order
    n = structure.n * m
    local = np.arange(m, dtype=np.int64)
    parts = []

    intra = supernode.graph.edge_array()
    if len(intra):
        offsets = (np.arange(structure.n, dtype=np.int64) * m)[:, None, None]
        parts.append((intra[None, :, :] + offsets).reshape(-1, 2))

    nominal = np.repeat(structure.degrees, m) + np.tile(supernode.graph.degrees, structure.n)
    for x, y, perm in _check_assignment(structure, m, assign):
        if x == y:
            if assign.self_loop_policy is SelfLoopPolicy.DROP:
                continue
            moved = perm != local
            if not moved.any():
                continue
            pair = np.stack([x * m + local[moved], x * m + perm[moved]], axis=1)
            parts.append(pair)
            # each moved vertex gains its image and its preimage
            partners = np.zeros(m, dtype=np.int64)
            inverse = np.argsort(perm)
            partners += perm != local
            partners += (inverse != local) & (inverse != perm)
            nominal[x * m : (x + 1) * m] += partners
        else:
            parts.append(np.stack([x * m + local, y * m + perm], axis=1))

    edges = np.concatenate(parts) if parts else np.zeros((0, 2), dtype=np.int64)
    graph = Graph.from_edge_array(n, edges, labels=[(v // m, v % m) for v in range(n)])
    deficit = int((nominal - graph.degrees).sum())
    if deficit:
        logger.debug("Star product collapsed duplicate edges: degree deficit %d", deficit)
    return PolarStarGraph(
        graph=graph,
        structure=structure,
        supernode=supernode,
        self_loop_policy=assign.self_loop_policy,
        degree_deficit=deficit,
    )


def self_loop_policy_for(kind: SupernodeKind) -> SelfLoopPolicy:
    if kind is SupernodeKind.INDUCTIVE_QUAD:
        return SelfLoopPolicy.APPLY_F
    return SelfLoopPolicy.DROP


def verify_diameter(ps: PolarStarGraph, seed: Optional[int] = None) -> int:
    """BFS check that the product has diameter at most 3.

    Graphs above the configured size limit are checked from a seeded sample
    of roots plus one quadric-supernode vertex.
    """
    settings = analysis_config()
    sources = None
    if ps.order > settings.verify_full_limit:
        rng = np.random.default_rng(seed if seed is not None else default_seed())
        sample = rng.choice(ps.order, size=min(settings.verify_samples, ps.order), replace=False)
        quadric_roots = [ps.vertex(x, 0) for x in sorted(ps.structure.self_loops)[:1]]
        sources = np.unique(np.concatenate([sample, quadric_roots, [0]])).astype(np.int64)
        logger.info(
            "Verifying diameter of %d-vertex graph from %d sampled roots",
            ps.order,
            len(sources),
        )
    diameter = distance_stats(ps.graph, sources=sources).diameter
    if diameter > MAX_DIAMETER:
        raise DiameterViolation(
            f"star product has diameter {diameter}, expected at most {MAX_DIAMETER}"
        )
    logger.info("Diameter %d confirmed for %d vertices", diameter, ps.order)
    return diameter


def build_polarstar(
    q: int, kind: SupernodeSpec, verify: bool = True, seed: Optional[int] = None
) -> PolarStarGraph:
    """ER_q star supernode, with the per-family bijection and self-loop policy.

    ``seed`` picks the sampled BFS roots when the graph is too large for a
    full diameter check.
    """
    structure = build_er(q)
    supernode = kind.build()
    policy = self_loop_policy_for(supernode.kind)
    assignment = BijectionAssignment.uniform(structure, supernode.f, policy)
    product = star_product(structure, supernode, assignment)
    ps = replace(product, q=q, metadata={"supernode": kind.label(), "q": q})
    logger.debug(
        "PolarStar q=%d %s: %d vertices, max degree %d",
        q,
        kind.label(),
        ps.order,
        ps.radix,
    )
    if verify:
        expected = structure.max_degree + supernode.degree
        if supernode.kind is SupernodeKind.INDUCTIVE_QUAD and not (
            ps.graph.is_regular() and ps.radix == expected
        ):
            raise PropertyCheckFailed(
                f"PolarStar q={q} {kind.label()} should be {expected}-regular"
            )
        if ps.radix > expected:
            raise PropertyCheckFailed(f"max degree {ps.radix} exceeds {expected}")
        ps.metadata["diameter"] = verify_diameter(ps, seed=seed)
        if ps.order > analysis_config().verify_full_limit:
            ps.metadata["verify_seed"] = seed if seed is not None else default_seed()
    return ps
