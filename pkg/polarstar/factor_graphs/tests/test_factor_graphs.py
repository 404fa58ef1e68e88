import networkx as nx
import pytest

from polarstar.exceptions import (
    BijectionArityMismatch,
    InfeasibleDegree,
    InfeasibleOrder,
    NotInvolution,
    NotPrimePower,
)
from polarstar.factor_graphs import (
    Graph,
    SupernodeGraph,
    SupernodeKind,
    SupernodeProperty,
    SupernodeSpec,
    build_complete,
    build_er,
    build_inductive_quad,
    build_paley,
    check_property_r,
    check_property_r1,
    check_property_r_star,
    quadrics,
    r_star_report,
)
from polarstar.factor_graphs.er import ProjectivePoint
from polarstar.factor_graphs.search import canonical_involutions, find_r_star_graphs
from polarstar.galois import field_new

ER_ORDERS = [2, 3, 4, 5, 7, 8, 9, 11, 13]


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


class TestGraph:
    def test_from_edges_deduplicates_and_records_loops(self):
        g = Graph.from_edges(3, [(0, 1), (1, 0), (2, 2), (1, 2)])
        assert g.adjacency == ((1,), (0, 2), (1,))
        assert g.self_loops == frozenset({2})
        assert g.num_edges == 2
        assert list(g.edges(loops=True)) == [(0, 1), (1, 2), (2, 2)]

    def test_from_edge_array_matches_from_edges(self):
        edges = [(0, 3), (3, 0), (1, 2), (2, 2), (0, 1)]
        assert Graph.from_edge_array(4, edges) == Graph.from_edges(4, edges)

    def test_symmetry(self):
        assert build_er(3).check_symmetric()

    def test_networkx_round_trip(self):
        g = cycle(6)
        assert Graph.from_networkx(g.to_networkx()) == g


class TestER:
    @pytest.mark.parametrize("q", ER_ORDERS)
    def test_counts_degrees_and_diameter(self, q):
        g = build_er(q)
        assert g.n == q * q + q + 1
        quads = quadrics(g)
        assert len(quads) == q + 1
        for v in range(g.n):
            assert g.degree(v) == (q if v in g.self_loops else q + 1)
        assert nx.diameter(g.to_networkx()) == 2

    @pytest.mark.parametrize("q", ER_ORDERS)
    def test_property_r(self, q):
        assert check_property_r(build_er(q), 2)

    def test_er3_and_er7_sizes(self):
        assert build_er(3).n == 13
        assert len(build_er(3).self_loops) == 4
        assert build_er(7).n == 57

    def test_er2_brute_force(self):
        g = build_er(2)
        points = [ProjectivePoint(*p) for p in [(0, 0, 1), (0, 1, 0), (0, 1, 1)]]
        assert list(g.labels[:3]) == points
        f = field_new(2)
        for u in range(7):
            for v in range(7):
                a, b = g.labels[u], g.labels[v]
                orthogonal = sum(x * y for x, y in zip(a, b)) % 2 == 0
                assert g.has_edge(u, v) == orthogonal
        assert len(g.self_loops) == 3
        assert f.q == 2

    def test_points_are_left_normalized_and_sorted(self):
        g = build_er(5)
        labels = list(g.labels)
        assert labels == sorted(labels)
        for p in labels:
            assert next(c for c in p if c) == 1

    def test_not_prime_power(self):
        with pytest.raises(NotPrimePower):
            build_er(6)


class TestPropertyR:
    def test_triangle_without_loops_fails_length_one(self):
        triangle = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        assert not check_property_r(triangle, 1)

    def test_bipartite_cycle_fails(self):
        assert not check_property_r(cycle(6), 3)

    def test_odd_cycle_has_long_walks(self):
        # C5 has diameter 2, walks of length 4 reach every ordered pair
        assert check_property_r(cycle(5), 4)


class TestInductiveQuad:
    @pytest.mark.parametrize("d_prime", [0, 3, 4, 7, 8, 11, 12])
    def test_order_regularity_and_r_star(self, d_prime):
        s = build_inductive_quad(d_prime)
        assert s.order == 2 * d_prime + 2
        assert s.graph.is_regular()
        assert s.graph.max_degree == d_prime
        assert s.is_involution()
        report = r_star_report(s)
        assert report.holds
        assert report.tight

    def test_base_cases(self):
        g0 = build_inductive_quad(0)
        assert (g0.order, g0.graph.num_edges) == (2, 0)
        g3 = build_inductive_quad(3)
        assert (g3.order, g3.graph.num_edges) == (8, 12)

    @pytest.mark.parametrize("d_prime", [3, 4, 7, 11])
    def test_f_is_a_matching_disjoint_from_edges(self, d_prime):
        s = build_inductive_quad(d_prime)
        for v in range(s.order):
            assert s.f[v] != v
            assert not s.graph.has_edge(v, s.f[v])

    @pytest.mark.parametrize("d_prime", [1, 2, 5, 6, 9, 10, -1])
    def test_infeasible_degrees(self, d_prime):
        with pytest.raises(InfeasibleDegree):
            build_inductive_quad(d_prime)


class TestPaley:
    @pytest.mark.parametrize("q_prime", [5, 9, 13, 17, 25, 29])
    def test_regular_and_r1(self, q_prime):
        s = build_paley(q_prime)
        assert s.order == q_prime
        assert s.graph.is_regular()
        assert s.graph.max_degree == (q_prime - 1) // 2
        assert s.property is SupernodeProperty.R1
        assert check_property_r1(s)

    def test_paley5_is_the_five_cycle(self):
        s = build_paley(5)
        assert nx.is_isomorphic(s.graph.to_networkx(), nx.cycle_graph(5))
        assert s.f == (0, 2, 4, 1, 3)

    def test_paley5_is_not_an_involution(self):
        with pytest.raises(NotInvolution):
            check_property_r_star(build_paley(5))

    @pytest.mark.parametrize("q_prime", [7, 11, 15, 6])
    def test_infeasible_orders(self, q_prime):
        with pytest.raises(InfeasibleOrder):
            build_paley(q_prime)


class TestComplete:
    def test_single_vertex(self):
        s = build_complete(1)
        assert s.order == 1 and s.graph.num_edges == 0

    def test_k4(self):
        s = build_complete(4)
        assert s.graph.num_edges == 6
        assert s.graph.is_regular() and s.degree == 3
        assert check_property_r1(s)

    def test_k5_passes_r_star_with_identity(self):
        s = build_complete(5)
        report = r_star_report(s)
        assert report.holds
        assert not report.tight

    def test_rejects_empty(self):
        with pytest.raises(InfeasibleOrder):
            build_complete(0)


class TestPropertyRStar:
    def test_disconnected_pairs_fail(self):
        g = Graph.from_edges(4, [(0, 1)])
        s = SupernodeGraph(g, (2, 3, 0, 1), SupernodeProperty.RSTAR, 1, SupernodeKind.INDUCTIVE_QUAD)
        assert not check_property_r_star(s)

    def test_bad_bijection(self):
        with pytest.raises(BijectionArityMismatch):
            SupernodeGraph(Graph.from_edges(3, []), (0, 0, 1), SupernodeProperty.R1, 0, SupernodeKind.PALEY)


class TestNonexistence:
    def test_canonical_involutions(self):
        assert canonical_involutions(4) == [(0, 1, 2, 3), (1, 0, 2, 3), (1, 0, 3, 2)]

    @pytest.mark.parametrize("d_prime", [1, 2])
    def test_no_r_star_graph_of_maximum_order(self, d_prime):
        assert find_r_star_graphs(d_prime) == []

    def test_search_finds_the_trivial_supernode(self):
        found = find_r_star_graphs(0)
        assert any(s.f == (1, 0) for s in found)


class TestSupernodeSpec:
    @pytest.mark.parametrize(
        "kind,d_prime,order",
        [("iq", 3, 8), ("paley", 6, 13), ("complete", 4, 5)],
    )
    def test_from_degree(self, kind, d_prime, order):
        spec = SupernodeSpec.from_degree(kind, d_prime)
        assert spec.degree == d_prime
        assert spec.order == order
        assert spec.build().order == order
