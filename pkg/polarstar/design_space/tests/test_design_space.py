import csv
import io

import pytest

from polarstar.design_space import (
    SUPERNODE_CHART,
    design_points,
    dragonfly_order,
    efficiency_table,
    enumerate_configs,
    find_config,
    hyperx_order,
    max_order,
    moore_bound,
    paley_factorizations,
    rows_to_csv,
    starmax,
)
from polarstar.exceptions import EmptyDesignSpace, InvalidParameters
from polarstar.factor_graphs import SupernodeKind
from polarstar.star_product import build_polarstar

IQ = SupernodeKind.INDUCTIVE_QUAD
PALEY = SupernodeKind.PALEY


class TestMooreBound:
    @pytest.mark.parametrize("d,D,bound", [(18, 3, 5527), (2, 2, 5), (57, 2, 3250), (3, 1, 4)])
    def test_values(self, d, D, bound):
        assert moore_bound(d, D) == bound

    def test_rejects_degree_one(self):
        with pytest.raises(InvalidParameters):
            moore_bound(1, 3)


class TestStarmax:
    def test_radix_three(self):
        assert starmax(3) == 20

    def test_radix_eighteen_by_brute_force(self):
        expected = max((d * d + 1) * (2 * (18 - d) + 2) for d in range(1, 19))
        assert starmax(18) == expected

    def test_strictly_increasing(self):
        values = [starmax(r) for r in range(3, 60)]
        assert all(b > a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("radix", range(8, 41))
    def test_bounds_enumerated_maximum(self, radix):
        assert max_order(radix).order <= starmax(radix)


class TestEnumerateConfigs:
    @pytest.mark.parametrize("radix", range(8, 129))
    def test_never_empty_and_consistent(self, radix):
        configs = enumerate_configs(radix)
        assert configs
        for c in configs:
            assert c.q + 1 + c.d_prime == radix
            if c.kind is IQ:
                assert c.order == c.structure_order * (2 * c.d_prime + 2)
            elif c.kind is PALEY:
                assert c.order == c.structure_order * (2 * c.d_prime + 1)
        orders = [c.order for c in configs]
        assert orders == sorted(orders, reverse=True)

    def test_radix_18_top_entry(self):
        top = enumerate_configs(18)[0]
        assert (top.q, top.kind, top.d_prime, top.order) == (13, IQ, 4, 1830)

    def test_radix_15_contains_table_configurations(self):
        configs = {(c.q, c.kind, c.d_prime): c.order for c in enumerate_configs(15)}
        assert configs[(11, IQ, 3)] == 1064
        assert configs[(8, PALEY, 6)] == 949

    def test_tiny_radix(self):
        with pytest.raises(InvalidParameters):
            enumerate_configs(2)

    def test_empty(self, monkeypatch):
        monkeypatch.setattr("polarstar.design_space.configs.prime_powers", lambda lo, hi: [])
        with pytest.raises(EmptyDesignSpace):
            enumerate_configs(10)


class TestMaxOrder:
    @pytest.mark.parametrize(
        "radix,order,efficiency",
        [(18, 1830, 0.3311), (19, 2128, 0.3265), (20, 2394, 0.3141)],
    )
    def test_small_radix_table(self, radix, order, efficiency):
        report = max_order(radix)
        assert report.order == order
        assert report.config.moore_efficiency == pytest.approx(efficiency, abs=5e-4)

    def test_radix_18_bracket(self):
        report = max_order(18)
        assert report.optimum_q == pytest.approx(11.16, abs=0.01)
        assert report.bracket == (11, 13)
        assert report.q_in_bracket

    def test_radix_64(self):
        assert max_order(64).order == 79506

    def test_radix_128_approaches_eight_27ths(self):
        report = max_order(128)
        c = report.config
        assert (c.q, c.kind, c.d_prime, c.order) == (83, IQ, 44, 627570)
        assert abs(c.moore_efficiency - 8 / 27) <= 0.01
        assert c.order <= report.analytic_order

    def test_analytic_ratio_trends_down(self):
        ratios = [max_order(r).analytic_order / moore_bound(r, 3) for r in (16, 32, 64, 128)]
        assert all(b <= a for a, b in zip(ratios, ratios[1:]))

    def test_tie_breaks_toward_larger_q(self):
        configs = enumerate_configs(20)
        best = configs[0]
        assert all(c.q <= best.q for c in configs if c.order == best.order)


class TestFactorizations:
    def test_993_has_no_paley_factorization(self):
        assert paley_factorizations(993) == []

    def test_949(self):
        assert (8, 13) in paley_factorizations(949)

    def test_find_config_by_kind(self):
        found = find_config(1064, IQ)
        assert (11, 3) in [(c.q, c.d_prime) for c in found]
        assert all(c.kind is IQ and c.order == 1064 for c in found)

    def test_design_points_cover_every_radix(self):
        points = design_points(8, 12)
        assert {p.radix for p in points} == set(range(8, 13))


class TestComparisonCurves:
    def test_dragonfly_canonical_split(self):
        # radix 11: h = 4, a = 8
        assert dragonfly_order(11) == 8 * (8 * 4 + 1)

    def test_hyperx(self):
        assert hyperx_order(27) == 1000

    def test_efficiency_table_rows(self):
        rows = efficiency_table(8, 128)
        assert len(rows) == 121
        assert rows[10]["radix"] == 18
        assert rows[10]["polarstar_order"] == 1830

    def test_csv(self):
        text = rows_to_csv(efficiency_table(18, 19))
        parsed = list(csv.DictReader(io.StringIO(text)))
        assert [r["polarstar_order"] for r in parsed] == ["1830", "2128"]

    def test_large_radix_baselines_are_less_efficient(self):
        row = efficiency_table(64, 64)[0]
        assert row["dragonfly_efficiency"] < row["moore_efficiency"]
        assert row["hyperx_efficiency"] < 0.05


class TestSupernodeChart:
    def test_rows(self):
        families = [row.family for row in SUPERNODE_CHART]
        assert families == ["Inductive-Quad", "Paley", "BDF", "Cayley", "Complete"]
        assert [row.buildable for row in SUPERNODE_CHART] == [True, True, False, False, True]

    def test_complete_has_every_property(self):
        complete = SUPERNODE_CHART[-1]
        assert complete.symmetric and complete.r_star and complete.r1


@pytest.mark.parametrize("radix", range(8, 13))
def test_enumerated_configs_build_with_diameter_three(radix):
    for c in enumerate_configs(radix)[:3]:
        ps = build_polarstar(c.q, c.supernode)
        assert ps.order == c.order
        assert ps.radix <= radix
