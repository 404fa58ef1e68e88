"""Cluster layout of a PolarStar network over an odd-q ER structure graph.

A fixed quadric v splits the structure graph into q+1 clusters: the q+1
quadrics, and for each of the q neighbours c of v the cluster made of c
and the non-quadric points of its polar line. Supernode pairs joined in
the structure graph become cable bundles whose counts are checked against
closed forms.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, List, Optional, Tuple

import numpy as np

from polarstar.exceptions import DecompositionNotFound
from polarstar.factor_graphs.graph import Graph
from polarstar.factor_graphs.supernodes import SupernodeKind

if TYPE_CHECKING:
    from polarstar.star_product.product import PolarStarGraph

logger = logging.getLogger("polarstar")

QUADRIC_CLUSTER = 0


@dataclass(frozen=True)
class LayoutDecomposition:
    q: int
    quadric: int
    centers: Tuple[int, ...]
    clusters: Tuple[Tuple[int, ...], ...]
    cluster_of: Tuple[int, ...]
    bundles: Tuple[Tuple[int, int, int], ...]
    supernode_order: int
    radix: int

    def intra_bundles(self, cluster: int) -> int:
        return sum(
            1
            for x, y, _ in self.bundles
            if self.cluster_of[x] == cluster and self.cluster_of[y] == cluster
        )

    def inter_cluster_bundles(self) -> Dict[Tuple[int, int], int]:
        counts: Counter = Counter()
        for x, y, _ in self.bundles:
            a, b = sorted((self.cluster_of[x], self.cluster_of[y]))
            if a != b:
                counts[(a, b)] += 1
        return dict(counts)

    def triangles(self, cluster: int, structure: Graph) -> List[Tuple[int, int, int]]:
        """Edge-disjoint triangles through the centre of a non-quadric cluster."""
        center = self.centers[cluster - 1]
        members = [w for w in self.clusters[cluster] if w != center]
        found, used = [], set()
        for w in members:
            if w in used:
                continue
            partner = next(
                (u for u in structure.neighbors(w) if u in members and u not in used and u != w),
                None,
            )
            if partner is not None:
                used.update((w, partner))
                found.append((center, w, partner))
        return found

    def summary(self) -> dict:
        """Computed counts next to the closed forms quoted for this layout."""
        q, d = self.q, self.radix
        computed_intra = (3 * q - 3) // 2
        quoted_intra = (3 * q - 1) / 2
        computed_total = len(self.bundles)
        quoted_total = q * (q + 1) ** 2
        report = {
            "q": q,
            "quadric": self.quadric,
            "clusters": len(self.clusters),
            "cluster_sizes": [len(c) for c in self.clusters],
            "links_per_bundle": self.supernode_order,
            "intra_cluster_bundles": computed_intra,
            "quoted_intra_cluster_bundles": quoted_intra,
            "inter_supernode_bundles": computed_total,
            "quoted_inter_module_mcfs": quoted_total,
            "cluster_pairs": len(self.inter_cluster_bundles()),
            "quoted_inter_cluster_mcfs": 2 * d * d / 9,
            "quoted_inter_supernode_mcfs": 2 * d * d / 3,
        }
        if quoted_intra != computed_intra:
            logger.warning(
                "Quoted %.1f intra-cluster bundles, graph has %d", quoted_intra, computed_intra
            )
        if quoted_total != computed_total:
            logger.warning(
                "Quoted %d inter-module MCFs, graph has %d bundles", quoted_total, computed_total
            )
        return report


def _clusters_from(structure: Graph, quadric: int) -> Optional[List[Tuple[int, ...]]]:
    quads = structure.self_loops
    centers = [c for c in structure.neighbors(quadric) if c not in quads]
    clusters = [tuple(sorted(quads))]
    for c in centers:
        clusters.append((c, *sorted(w for w in structure.neighbors(c) if w not in quads)))
    seen = [v for cluster in clusters for v in cluster]
    if len(seen) != structure.n or len(set(seen)) != structure.n:
        return None
    return clusters


def _bundles(ps: "PolarStarGraph") -> Tuple[Tuple[int, int, int], ...]:
    m = ps.supernode_order
    e = ps.graph.edge_array()
    x, y = e[:, 0] // m, e[:, 1] // m
    inter = x != y
    pairs = np.stack([np.minimum(x, y)[inter], np.maximum(x, y)[inter]], axis=1)
    if not len(pairs):
        return ()
    uniq, counts = np.unique(pairs, axis=0, return_counts=True)
    return tuple((int(a), int(b), int(c)) for (a, b), c in zip(uniq, counts))


def _check(layout: LayoutDecomposition, structure: Graph, ps: "PolarStarGraph") -> None:
    q = layout.q
    sizes = [len(c) for c in layout.clusters]
    if sizes != [q + 1] + [q] * q:
        raise DecompositionNotFound(f"cluster sizes {sizes} do not match q={q}")
    if layout.intra_bundles(QUADRIC_CLUSTER):
        raise DecompositionNotFound("quadric cluster has internal bundles")
    for k in range(1, q + 1):
        intra = layout.intra_bundles(k)
        if intra != (3 * q - 3) // 2:
            raise DecompositionNotFound(f"cluster {k} has {intra} internal bundles")
        if len(layout.triangles(k, structure)) != (q - 1) // 2:
            raise DecompositionNotFound(f"cluster {k} lacks (q-1)/2 edge-disjoint triangles")
    for (a, b), count in layout.inter_cluster_bundles().items():
        expected = q + 1 if a == QUADRIC_CLUSTER else q - 2
        if count != expected:
            raise DecompositionNotFound(
                f"clusters {a} and {b} share {count} bundles, expected {expected}"
            )
    if len(layout.bundles) != q * (q + 1) ** 2 // 2:
        raise DecompositionNotFound(f"{len(layout.bundles)} bundles for q={q}")
    links = {c for _, _, c in layout.bundles}
    expected_links = ps.supernode_order
    if ps.supernode.kind is SupernodeKind.INDUCTIVE_QUAD:
        expected_links = 2 * (ps.radix - q)
    if links != {expected_links}:
        raise DecompositionNotFound(f"bundle sizes {sorted(links)}, expected {expected_links}")


def layout_decompose(ps: "PolarStarGraph") -> LayoutDecomposition:
    structure = ps.structure
    q = len(structure.self_loops) - 1
    if q < 3 or q % 2 == 0:
        raise DecompositionNotFound(f"cluster layout needs an odd prime power q, got {q}")
    bundles = _bundles(ps)
    last_error = None
    for quadric in sorted(structure.self_loops):
        clusters = _clusters_from(structure, quadric)
        if clusters is None:
            continue
        cluster_of = [0] * structure.n
        for k, cluster in enumerate(clusters):
            for x in cluster:
                cluster_of[x] = k
        layout = LayoutDecomposition(
            q=q,
            quadric=quadric,
            centers=tuple(c[0] for c in clusters[1:]),
            clusters=tuple(clusters),
            cluster_of=tuple(cluster_of),
            bundles=bundles,
            supernode_order=ps.supernode_order,
            radix=ps.radix,
        )
        try:
            _check(layout, structure, ps)
        except DecompositionNotFound as e:
            last_error = e
            logger.debug("Quadric %d gives no valid layout: %s", quadric, e)
            continue
        logger.debug("Layout for q=%d found around quadric %d", q, quadric)
        return layout
    raise DecompositionNotFound(f"no cluster layout for q={q}: {last_error}")
