import csv
import io
import json
from unittest import mock

import pytest

from polarstar.cli.polarstar import build_parser, get_version, run


@pytest.fixture
def quiet_spinner():
    with mock.patch("polarstar.utils.progress.Spinner") as spinner:
        yield spinner


def stderr_error(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


class TestGenerate:
    def test_table1_radix18(self, capsys):
        code = run(["generate", "--topology", "polarstar", "--q", "13", "--supernode", "iq", "--dprime", "4"])
        assert code == 0
        header = capsys.readouterr().out.splitlines()[0]
        assert header.startswith("# n=1830 m=")

    def test_radix_picks_largest(self, tmp_path):
        out = tmp_path / "ps.json"
        assert run(["generate", "--radix", "15", "--format", "json", "--output", str(out)]) == 0
        envelope = json.loads(out.read_text())
        assert envelope["n"] == 1064
        assert envelope["names"][0] == "s0_n0"
        assert envelope["metadata"]["diameter"] == 3

    def test_supernode_json_carries_f(self, tmp_path):
        out = tmp_path / "iq.json"
        assert run(["generate", "--topology", "iq", "--dprime", "3", "--format", "json", "--output", str(out)]) == 0
        envelope = json.loads(out.read_text())
        assert envelope["f"] == [1, 0, 3, 2, 5, 4, 7, 6]
        assert envelope["metadata"]["kind"] == "iq"

    def test_baseline(self, capsys):
        assert run(["generate", "--topology", "hyperx", "--S", "3", "--L", "2"]) == 0
        assert capsys.readouterr().out.startswith("# n=9 m=18")

    def test_infeasible_degree_is_validation_error(self, capsys):
        assert run(["generate", "--topology", "iq", "--dprime", "5"]) == 1
        error = stderr_error(capsys)
        assert error["error"] == "InfeasibleDegree"
        assert error["module"] == "polarstar.factor_graphs.supernodes"
        assert "d' = 0 or 3" in error["message"]

    def test_seed_reaches_diameter_verification(self, tmp_path):
        out = tmp_path / "ps.txt"
        with mock.patch("polarstar.star_product.product.verify_diameter", return_value=3) as verify:
            assert run(["generate", "--q", "5", "--dprime", "3", "--seed", "17", "--output", str(out)]) == 0
        assert verify.call_args.kwargs["seed"] == 17

    def test_byte_reproducible(self, tmp_path):
        first, second = tmp_path / "a.txt", tmp_path / "b.txt"
        for out in (first, second):
            assert run(["generate", "--q", "5", "--dprime", "3", "--output", str(out)]) == 0
        assert first.read_bytes() == second.read_bytes()


class TestVerify:
    @pytest.fixture
    def polarstar_file(self, tmp_path):
        out = tmp_path / "ps.txt"
        assert run(["generate", "--q", "5", "--dprime", "3", "--output", str(out)]) == 0
        return out

    def test_diameter_passes(self, polarstar_file, capsys):
        assert run(["verify", "--input", str(polarstar_file), "--check", "diameter", "--max", "3"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["checks"]["diameter"]["ok"]
        assert result["vertices"] == 248

    def test_degree_and_order(self, polarstar_file, capsys):
        args = ["verify", "--input", str(polarstar_file), "--check", "degree", "--check", "order"]
        assert run(args + ["--degree", "9", "--order", "248"]) == 0
        checks = json.loads(capsys.readouterr().out)["checks"]
        assert checks["degree"] == {"min": 9, "max": 9, "slack": 0, "ok": True}

    def test_wrong_order_is_invariant_violation(self, polarstar_file, capsys):
        assert run(["verify", "--input", str(polarstar_file), "--check", "order", "--order", "250"]) == 2
        assert stderr_error(capsys)["error"] == "PropertyCheckFailed"

    def test_diameter_violation(self, tmp_path, capsys):
        ring = tmp_path / "c12.txt"
        ring.write_text("# n=12 m=12\n" + "".join(f"{i} {(i + 1) % 12}\n" for i in range(12)))
        assert run(["verify", "--input", str(ring), "--check", "diameter"]) == 2
        error = stderr_error(capsys)
        assert error["error"] == "DiameterViolation"
        assert error["module"] == "polarstar.cli.polarstar"

    def test_property_r_on_er(self, tmp_path, capsys):
        er = tmp_path / "er.txt"
        assert run(["generate", "--topology", "er", "--q", "4", "--output", str(er)]) == 0
        assert run(["verify", "--input", str(er), "--check", "r", "--walk-length", "2"]) == 0
        assert json.loads(capsys.readouterr().out)["checks"]["r"]["ok"]

    def test_supernode_checks(self, tmp_path, capsys):
        iq = tmp_path / "iq.json"
        paley = tmp_path / "paley.json"
        assert run(["generate", "--topology", "iq", "--dprime", "4", "--format", "json", "--output", str(iq)]) == 0
        assert run(["generate", "--topology", "paley", "--q", "13", "--format", "json", "--output", str(paley)]) == 0
        capsys.readouterr()
        assert run(["verify", "--input", str(iq), "--check", "rstar"]) == 0
        result = json.loads(capsys.readouterr().out)["checks"]["rstar"]
        assert result["ok"] and result["tight"]
        assert run(["verify", "--input", str(paley), "--check", "r1"]) == 0

    def test_all_uses_certified_property(self, tmp_path, capsys):
        paley = tmp_path / "paley.json"
        assert run(["generate", "--topology", "paley", "--q", "5", "--format", "json", "--output", str(paley)]) == 0
        capsys.readouterr()
        assert run(["verify", "--input", str(paley), "--check", "all"]) == 0
        checks = json.loads(capsys.readouterr().out)["checks"]
        assert "r1" in checks and "rstar" not in checks

    def test_paley_polarstar_degree_slack(self, tmp_path, capsys):
        out = tmp_path / "ps189.json"
        args = ["generate", "--q", "4", "--supernode", "paley", "--dprime", "4", "--format", "json"]
        assert run(args + ["--output", str(out)]) == 0
        capsys.readouterr()
        assert run(["verify", "--input", str(out), "--check", "all", "--order", "189"]) == 0
        degree = json.loads(capsys.readouterr().out)["checks"]["degree"]
        assert degree["slack"] == 1
        assert degree["max"] - degree["min"] == 1

    def test_rstar_needs_f(self, polarstar_file, capsys):
        assert run(["verify", "--input", str(polarstar_file), "--check", "rstar"]) == 1
        assert stderr_error(capsys)["error"] == "ConfigurationError"

    def test_missing_file(self, tmp_path, capsys):
        assert run(["verify", "--input", str(tmp_path / "nope.txt")]) == 1
        assert "Could not read" in stderr_error(capsys)["message"]


class TestDesignSpace:
    def test_full_radix_range(self, capsys):
        assert run(["design-space", "--radix-min", "8", "--radix-max", "128", "--format", "csv"]) == 0
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert len(rows) == 121
        assert all(int(r["polarstar_order"]) > 0 for r in rows)
        by_radix = {int(r["radix"]): r for r in rows}
        assert int(by_radix[64]["polarstar_order"]) == 79506

    def test_all_configs_json(self, capsys):
        assert run(["design-space", "--radix", "15", "--all-configs", "--format", "json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert max(r["order"] for r in rows) == 1064
        assert {r["radix"] for r in rows} == {15}


class TestAnalyze:
    def test_distance_and_exact_bisection(self, capsys):
        assert run(["analyze", "--topology", "er", "--q", "3"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["distance"]["diameter"] == 2
        assert result["bisection"]["exact"]

    def test_faults(self, capsys, quiet_spinner):
        args = ["analyze", "--topology", "er", "--q", "5", "--metric", "faults", "--trials", "5"]
        assert run(args + ["--seed", "3"]) == 0
        faults = json.loads(capsys.readouterr().out)["faults"]
        assert len(faults["ratios"]) == 5
        assert 0 < faults["median_ratio"] <= 1
        assert faults["curve"][0]["connected"]

    def test_fattree_counts_leaves_only(self, capsys):
        args = ["analyze", "--topology", "fattree", "--levels", "2", "--p", "3", "--metric", "distance"]
        assert run(args) == 0
        assert json.loads(capsys.readouterr().out)["distance"]["diameter"] == 2


class TestLayout:
    def test_q5(self, capsys):
        assert run(["layout", "--q", "5", "--dprime", "3"]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["clusters"] == 6
        assert summary["inter_supernode_bundles"] == 90
        assert summary["intra_cluster_bundles"] == 6

    def test_even_q(self, capsys):
        assert run(["layout", "--q", "4", "--dprime", "4"]) == 2
        assert stderr_error(capsys)["error"] == "DecompositionNotFound"

    def test_polarstar_only(self, capsys):
        assert run(["layout", "--topology", "dragonfly", "--a", "4", "--h", "2"]) == 1


class TestSimulate:
    ARGS = [
        "simulate", "--topology", "er", "--q", "2", "--load", "0.05", "0.1",
        "--routing", "min", "--routing", "ugal", "--cycles", "200", "--warmup", "50",
    ]  # fmt: skip

    def test_campaign_csv(self, tmp_path, quiet_spinner):
        out = tmp_path / "sim.csv"
        assert run(self.ARGS + ["--output", str(out)]) == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert [(r["scheme"], float(r["load"])) for r in rows] == [
            ("MIN", 0.05),
            ("MIN", 0.1),
            ("UGAL", 0.05),
            ("UGAL", 0.1),
        ]
        assert {r["seed"] for r in rows} == {"20230414"}

    def test_deterministic_replay(self, tmp_path, quiet_spinner):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (first, second):
            assert run(self.ARGS + ["--seed", "9", "--output", str(out)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_campaign_file(self, tmp_path, quiet_spinner, capsys):
        campaign = tmp_path / "campaign.yml"
        campaign.write_text(
            "topologies:\n"
            "  - {topology: hyperx, S: 3, L: 2, p: 1}\n"
            "loads: [0.05]\n"
            "patterns: [uniform, perm]\n"
            "schemes: [mmin]\n"
            "seeds: [1]\n"
            "simulation: {warmup_cycles: 20, measure_cycles: 100}\n"
        )
        assert run(["simulate", "--campaign", str(campaign), "--format", "json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert [r["pattern"] for r in rows] == ["Uniform", "RandomRouterPermutation"]
        assert all(r["scheme"] == "M_MIN" for r in rows)

    def test_bad_campaign(self, tmp_path, capsys):
        campaign = tmp_path / "bad.yml"
        campaign.write_text("loads: [0.1]\npatterns: [sideways]\n")
        assert run(["simulate", "--campaign", str(campaign)]) == 1
        assert stderr_error(capsys)["error"] == "ConfigurationError"


class TestExport:
    def test_round_trip(self, tmp_path):
        edges, envelope, back = tmp_path / "g.txt", tmp_path / "g.json", tmp_path / "back.txt"
        assert run(["generate", "--topology", "er", "--q", "3", "--output", str(edges)]) == 0
        assert run(["export", "--input", str(edges), "--format", "json", "--output", str(envelope)]) == 0
        assert run(["export", "--input", str(envelope), "--format", "edgelist", "--output", str(back)]) == 0
        assert back.read_text() == edges.read_text()

    def test_dot(self, tmp_path, capsys):
        edges = tmp_path / "g.txt"
        edges.write_text("# n=3 m=2\n0 1\n1 2\n")
        assert run(["export", "--input", str(edges), "--format", "dot"]) == 0
        assert '"0" -- "1";' in capsys.readouterr().out


class TestParser:
    def test_version(self):
        assert get_version()
        with pytest.raises(SystemExit) as exit_info:
            build_parser().parse_args(["--version"])
        assert exit_info.value.code == 0

    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            run([])
