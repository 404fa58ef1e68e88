from unittest import mock

import networkx as nx
import numpy as np
import pytest

from polarstar.analysis.distance import distance_stats
from polarstar.config import analysis_config
from polarstar.exceptions import (
    BijectionArityMismatch,
    DiameterViolation,
    IncompleteAssignment,
)
from polarstar.factor_graphs import (
    Graph,
    SupernodeSpec,
    build_complete,
    build_er,
    build_inductive_quad,
    build_paley,
)
from polarstar.star_product import (
    BijectionAssignment,
    PolarStarGraph,
    SelfLoopPolicy,
    build_polarstar,
    classify_three_hop,
    star_product,
    verify_diameter,
)
from polarstar.star_product.witness import CASES, hop_pattern, sample_three_hop_pairs


def uniform_product(q, supernode, policy):
    structure = build_er(q)
    return star_product(
        structure, supernode, BijectionAssignment.uniform(structure, supernode.f, policy)
    )


class TestStarProduct:
    def test_er3_with_paley5(self):
        ps = uniform_product(3, build_paley(5), SelfLoopPolicy.DROP)
        assert ps.order == 65
        assert ps.radix == 6
        assert verify_diameter(ps) <= 3

    def test_er3_with_trivial_inductive_quad(self):
        ps = uniform_product(3, build_inductive_quad(0), SelfLoopPolicy.APPLY_F)
        assert ps.order == 26
        internal = [(u, v) for u, v in ps.graph.edges() if not ps.is_global(u, v)]
        # one internal edge per quadric supernode, from the applied self-loop
        assert len(internal) == 4
        assert ps.graph.is_regular()
        assert ps.radix == 4
        assert ps.degree_deficit == 0

    def test_single_vertex_structure_gives_the_supernode(self):
        supernode = build_paley(13)
        structure = Graph.from_edges(1, [])
        ps = star_product(
            structure,
            supernode,
            BijectionAssignment.uniform(structure, supernode.f, SelfLoopPolicy.DROP),
        )
        assert ps.graph == supernode.graph

    def test_vertex_indexing(self):
        ps = uniform_product(2, build_complete(3), SelfLoopPolicy.DROP)
        v = ps.vertex(4, 2)
        assert v == 14
        assert ps.supernode_of(v) == 4
        assert ps.local_index(v) == 2
        assert ps.graph.labels[v] == (4, 2)
        assert len(set(ps.groups())) == 7

    def test_missing_orientation_is_rejected(self):
        structure = build_er(2)
        supernode = build_complete(2)
        maps = {e: supernode.f for e in list(structure.edges())[1:]}
        with pytest.raises(IncompleteAssignment):
            star_product(structure, supernode, BijectionAssignment(maps, SelfLoopPolicy.DROP))

    def test_both_orientations_are_rejected(self):
        structure = build_er(2)
        supernode = build_complete(2)
        maps = {e: supernode.f for e in structure.edges()}
        u, v = next(structure.edges())
        maps[(v, u)] = supernode.f
        with pytest.raises(IncompleteAssignment):
            star_product(structure, supernode, BijectionAssignment(maps, SelfLoopPolicy.DROP))

    def test_wrong_arity_is_rejected(self):
        structure = build_er(2)
        supernode = build_complete(3)
        maps = {e: (0, 1) for e in structure.edges()}
        with pytest.raises(BijectionArityMismatch):
            star_product(structure, supernode, BijectionAssignment(maps, SelfLoopPolicy.DROP))

    def test_degree_deficit_counts_collapsed_edges(self):
        # the loop map a -> 2a on Paley(5) repeats the intra edges 1-2 and 3-4
        supernode = build_paley(5)
        structure = Graph.from_edges(1, [(0, 0)])
        assign = BijectionAssignment.uniform(structure, supernode.f, SelfLoopPolicy.APPLY_F)
        ps = star_product(structure, supernode, assign)
        assert ps.graph.num_edges == 7
        assert ps.degree_deficit == 4


class TestBuildPolarStar:
    def test_iq_q11_is_15_regular(self):
        ps = build_polarstar(11, SupernodeSpec.inductive_quad(3))
        assert ps.order == 1064
        assert ps.graph.is_regular()
        assert ps.radix == 15
        assert ps.metadata["diameter"] <= 3

    @pytest.mark.parametrize(
        "q,spec,order,radix",
        [
            (13, SupernodeSpec.inductive_quad(4), 1830, 18),
            (11, SupernodeSpec.inductive_quad(7), 2128, 19),
            (11, SupernodeSpec.inductive_quad(8), 2394, 20),
        ],
    )
    def test_largest_small_radix_configurations(self, q, spec, order, radix):
        ps = build_polarstar(q, spec)
        assert ps.order == order
        assert ps.radix == radix

    @pytest.mark.parametrize("q", [2, 3, 4, 5])
    @pytest.mark.parametrize(
        "spec",
        [
            SupernodeSpec.inductive_quad(3),
            SupernodeSpec.paley(5),
            SupernodeSpec.paley(9),
            SupernodeSpec.complete(4),
        ],
    )
    def test_diameter_three_matches_networkx(self, q, spec):
        ps = build_polarstar(q, spec)
        assert nx.diameter(ps.graph.to_networkx()) <= 3

    def test_paley_quadric_supernodes_lose_a_degree(self):
        ps = build_polarstar(3, SupernodeSpec.paley(5))
        degrees = ps.graph.degrees.reshape(13, 5)
        for x in range(13):
            expected = 5 if x in ps.structure.self_loops else 6
            assert set(degrees[x]) == {expected}

    def test_names_follow_the_template(self):
        ps = build_polarstar(2, SupernodeSpec.inductive_quad(0), verify=False)
        names = ps.names()
        assert names[0] == "s0_n0"
        assert names[ps.vertex(3, 1)] == "s3_n1"
        assert ps.names("{supernode}-{local}")[5] == "2-1"

    def test_diameter_violation(self):
        # a plain cycle relabelled as a product cannot have diameter 3
        ring = Graph.from_edges(12, [(i, (i + 1) % 12) for i in range(12)])
        supernode = build_complete(1)
        ps = PolarStarGraph(graph=ring, structure=ring, supernode=supernode)
        with pytest.raises(DiameterViolation):
            verify_diameter(ps)

    def test_sampled_roots_follow_the_seed(self):
        small = analysis_config(verify_full_limit=10, verify_samples=8)
        roots = {}
        for seed in (17, 17, 18):
            with mock.patch(
                "polarstar.star_product.product.analysis_config", return_value=small
            ), mock.patch(
                "polarstar.star_product.product.distance_stats", wraps=distance_stats
            ) as stats:
                ps = build_polarstar(3, SupernodeSpec.inductive_quad(3), seed=seed)
            assert ps.metadata["verify_seed"] == seed
            assert ps.metadata["diameter"] <= 3
            sources = tuple(stats.call_args.kwargs["sources"])
            assert roots.setdefault(seed, sources) == sources
        assert roots[17] != roots[18]

    @pytest.mark.slow
    def test_sampled_verification_on_large_graph(self):
        ps = build_polarstar(23, SupernodeSpec.inductive_quad(8))
        assert ps.order == 553 * 18
        assert ps.metadata["diameter"] == 3


class TestWitness:
    def test_pairs_at_distance_three(self):
        ps = build_polarstar(3, SupernodeSpec.inductive_quad(3))
        pairs = sample_three_hop_pairs(ps, 20, seed=7)
        assert pairs
        dist = distance_stats(ps.graph)
        assert dist.diameter == 3
        seen = set()
        for s, t in pairs:
            case = classify_three_hop(ps, s, t)
            assert case in CASES
            seen.add(case)
        assert seen - {"other"}

    def test_hop_pattern(self):
        ps = build_polarstar(2, SupernodeSpec.inductive_quad(3), verify=False)
        u = ps.vertex(0, 0)
        v = ps.graph.neighbors(u)[0]
        pattern = hop_pattern(ps, [u, v])
        assert pattern == ("E" if ps.is_global(u, v) else "I")

    def test_inter_only_path_is_an_f_power(self):
        ps = build_polarstar(3, SupernodeSpec.complete(3))
        u = ps.vertex(0, 1)
        w = next(v for v in ps.graph.neighbors(u) if ps.is_global(u, v))
        assert classify_three_hop(ps, u, w) == "f_power"
        assert np.all(ps.graph.degrees <= 6)
