#!/usr/bin/env python3
"""
Command Line Interface for building, checking and simulating PolarStar networks
"""

import argparse
import json
import logging
import sys
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import List, Optional

from polarstar.__about__ import __version__
from polarstar.analysis import bisection_estimate, distance_stats, fault_sweep, layout_decompose
from polarstar.config import (
    PATTERN_ALIASES,
    SCHEME_ALIASES,
    TOPOLOGY_KINDS,
    TopologySpec,
    campaign_from_dict,
    default_seed,
    load_campaign,
)
from polarstar.design_space import (
    EFFICIENCY_COLUMNS,
    design_points,
    efficiency_table,
    max_order,
    rows_to_csv,
)
from polarstar.exceptions import (
    ConfigurationError,
    DiameterViolation,
    PolarStarException,
    PropertyCheckFailed,
)
from polarstar.factor_graphs import (
    SupernodeGraph,
    SupernodeKind,
    SupernodeProperty,
    build_inductive_quad,
    build_paley,
    check_property_r,
    check_property_r1,
    r_star_report,
)
from polarstar.factor_graphs.export import FORMATS, Envelope, loads_graph, render
from polarstar.simulator import build_polarstar_from, build_topology, campaign_csv, run_campaign
from polarstar.utils.files import write_atomic

logger = logging.getLogger("polarstar")

PROG = "polarstar"
PACKAGE = "polarstar-networks"
CHECKS = ("diameter", "degree", "order", "r", "rstar", "r1")
METRICS = ("distance", "bisection", "faults")
CONFIG_COLUMNS = ("radix", "q", "kind", "d_prime", "order", "moore_efficiency")


def get_version():
    """Get the version of the package."""
    try:
        return version(PACKAGE)
    except PackageNotFoundError:
        return __version__


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        write_atomic(output, text)
    else:
        sys.stdout.write(text)


def _dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _read_graph(path: str) -> Envelope:
    try:
        text = Path(path).read_text("utf-8")
    except OSError as e:
        raise ConfigurationError(f"Could not read graph file {path}: {e}")
    return loads_graph(text)


def _topology_spec(args) -> TopologySpec:
    fields = ("q", "dprime", "radix", "a", "h", "S", "L", "levels", "p", "endpoints")
    values = {k: getattr(args, k) for k in fields if getattr(args, k, None) is not None}
    return TopologySpec(kind=args.topology, supernode=args.supernode, **values)


def _graph_payload(spec: TopologySpec, seed: Optional[int] = None):
    """Graph, bijection, vertex names and metadata for one topology recipe."""
    if spec.kind == "polarstar":
        ps = build_polarstar_from(spec, seed=seed)
        metadata = dict(
            ps.metadata,
            degree_deficit=ps.degree_deficit,
            self_loop_policy=ps.self_loop_policy.value,
        )
        return ps.graph, None, ps.names(), metadata
    if spec.kind in ("iq", "paley"):
        if spec.kind == "iq":
            if spec.dprime is None:
                raise ConfigurationError("iq supernode needs --dprime")
            s = build_inductive_quad(spec.dprime)
        else:
            s = build_paley(spec.q if spec.q is not None else 2 * (spec.dprime or 0) + 1)
        metadata = {"kind": s.kind.value, "property": s.property.value, "degree": s.degree}
        return s.graph, s.f, None, metadata
    topology = build_topology(spec)
    return topology.graph, None, None, {"topology": topology.name}


def _supernode_from(envelope: Envelope) -> SupernodeGraph:
    if envelope.f is None:
        raise ConfigurationError("property R* and R1 checks need a JSON envelope carrying f")
    meta = envelope.metadata
    return SupernodeGraph(
        graph=envelope.graph,
        f=tuple(int(x) for x in envelope.f),
        property=SupernodeProperty(meta.get("property", SupernodeProperty.BOTH.value)),
        degree=envelope.graph.max_degree,
        kind=SupernodeKind(meta.get("kind", SupernodeKind.COMPLETE.value)),
    )


def cmd_generate(args) -> int:
    graph, f, names, metadata = _graph_payload(_topology_spec(args), args.seed)
    _emit(render(graph, args.format, f=f, names=names, metadata=metadata), args.output)
    return 0


def cmd_export(args) -> int:
    envelope = _read_graph(args.input)
    _emit(
        render(envelope.graph, args.format, envelope.f, envelope.names, envelope.metadata),
        args.output,
    )
    return 0


def cmd_verify(args) -> int:
    envelope = _read_graph(args.input)
    graph = envelope.graph
    checks = args.check or ["diameter"]
    if "all" in checks:
        checks = ["diameter", "degree", "order"]
        # property R concerns structure graphs, which carry their quadric loops
        checks += ["r"] if graph.self_loops else []
        if envelope.f is not None:
            certified = _supernode_from(envelope).property
            checks += ["rstar"] if certified.has_r_star else []
            checks += ["r1"] if certified.has_r1 else []
    results = {}
    failed = []
    for check in checks:
        if check == "diameter":
            diameter = distance_stats(graph).diameter
            ok = diameter <= args.max
            results[check] = {"value": diameter, "max": args.max, "ok": ok}
            if not ok:
                raise DiameterViolation(f"diameter {diameter} exceeds {args.max}")
        elif check == "degree":
            # dropped structure loops leave quadric vertices one short
            slack = 1 if envelope.metadata.get("self_loop_policy") == "drop" else 0
            ok = graph.max_degree - graph.min_degree <= slack
            ok = ok and (args.degree is None or graph.max_degree == args.degree)
            results[check] = {
                "min": graph.min_degree,
                "max": graph.max_degree,
                "slack": slack,
                "ok": ok,
            }
        elif check == "order":
            ok = args.order is None or graph.n == args.order
            results[check] = {"value": graph.n, "ok": ok}
        elif check == "r":
            ok = check_property_r(graph, args.walk_length)
            results[check] = {"walk_length": args.walk_length, "ok": ok}
        elif check == "rstar":
            report = r_star_report(_supernode_from(envelope))
            ok = report.holds
            results[check] = {"ok": ok, "tight": report.tight, "uncovered": list(report.uncovered)}
        elif check == "r1":
            ok = check_property_r1(_supernode_from(envelope))
            results[check] = {"ok": ok}
        if not results[check]["ok"]:
            failed.append(check)
    _emit(_dumps({"checks": results, "vertices": graph.n, "edges": graph.num_edges}), args.output)
    if failed:
        raise PropertyCheckFailed(f"failed checks: {', '.join(failed)}")
    logger.info("All %d checks passed", len(results))
    return 0


def cmd_design_space(args) -> int:
    low = args.radix if args.radix is not None else args.radix_min
    high = args.radix if args.radix is not None else args.radix_max
    if args.all_configs:
        rows = [c.as_row() for c in design_points(low, high)]
        columns = CONFIG_COLUMNS
    else:
        rows = efficiency_table(low, high)
        columns = EFFICIENCY_COLUMNS
    if args.format == "json":
        _emit(_dumps(rows), args.output)
    else:
        _emit(rows_to_csv(rows, columns), args.output)
    if args.radix is not None and not args.all_configs:
        report = max_order(args.radix)
        logger.info(
            "Radix %d: closed-form optimum q=%.2f, bracket %s",
            args.radix,
            report.optimum_q,
            report.bracket,
        )
    return 0


def _analysis_target(args):
    """Graph plus the routers distance and fault metrics should cover."""
    if args.input:
        return _read_graph(args.input).graph, None
    spec = _topology_spec(args)
    if spec.kind in ("dragonfly", "hyperx", "fattree"):
        topology = build_topology(spec)
        among = topology.endpoint_routers if spec.kind == "fattree" else None
        return topology.graph, among
    return _graph_payload(spec, args.seed)[0], None


def cmd_analyze(args) -> int:
    graph, among = _analysis_target(args)
    seed = args.seed if args.seed is not None else default_seed()
    metrics = args.metric or ["distance", "bisection"]
    result = {"vertices": graph.n, "edges": graph.num_edges, "seed": seed}
    if "distance" in metrics:
        stats = distance_stats(graph, among=among)
        result["distance"] = {
            "diameter": stats.diameter,
            "average_path_length": stats.average_path_length,
        }
    if "bisection" in metrics:
        cut = bisection_estimate(graph, trials=args.trials, seed=seed, workers=args.workers)
        result["bisection"] = {
            "cut_edges": cut.cut_edges,
            "fraction": cut.fraction,
            "exact": cut.exact,
        }
    if "faults" in metrics:
        sweep = fault_sweep(graph, trials=args.trials, step=args.step, seed=seed, among=among)
        result["faults"] = {
            "median_ratio": sweep.median_ratio,
            "ratios": list(sweep.ratios),
            "median_trial": sweep.curve.trial,
            "curve": [p.as_row() for p in sweep.curve.points],
        }
    _emit(_dumps(result), args.output)
    return 0


def cmd_layout(args) -> int:
    if args.topology != "polarstar":
        raise ConfigurationError("layout applies to polarstar topologies only")
    ps = build_polarstar_from(_topology_spec(args), seed=args.seed)
    _emit(_dumps(layout_decompose(ps).summary()), args.output)
    return 0


def cmd_simulate(args) -> int:
    if args.campaign:
        campaign = load_campaign(args.campaign)
    else:
        simulation = {"warmup_cycles": args.warmup, "measure_cycles": args.cycles}
        campaign = campaign_from_dict(
            {
                "topologies": [_topology_spec(args).model_dump(exclude_none=True)],
                "loads": args.load or [0.1],
                "patterns": args.pattern or ["uniform"],
                "schemes": args.routing or ["min"],
                "seeds": [args.seed if args.seed is not None else default_seed()],
                "workers": args.workers,
                "simulation": {k: v for k, v in simulation.items() if v is not None},
            }
        )
    rows = run_campaign(campaign)
    if args.format == "json":
        _emit(_dumps(rows), args.output)
    else:
        _emit(campaign_csv(rows), args.output)
    return 0


def _add_topology_args(parser) -> None:
    group = parser.add_argument_group("topology")
    group.add_argument("--topology", choices=TOPOLOGY_KINDS, default="polarstar")
    group.add_argument("--q", type=int, help="ER_q structure graph order parameter")
    group.add_argument("--dprime", type=int, help="supernode degree d'")
    group.add_argument(
        "--supernode", choices=[k.value for k in SupernodeKind], default="iq"
    )
    group.add_argument("--radix", type=int, help="pick the largest PolarStar of this radix")
    group.add_argument("--a", type=int, help="Dragonfly routers per group")
    group.add_argument("--h", type=int, help="Dragonfly global links per router")
    group.add_argument("--S", type=int, help="HyperX routers per dimension")
    group.add_argument("--L", type=int, help="HyperX dimensions")
    group.add_argument("--levels", type=int, help="fat-tree levels")
    group.add_argument("--p", type=int, help="endpoints per router (fat-tree arity)")
    group.add_argument("--endpoints", type=int, help="override endpoints per router")


def _add_common_args(parser, formats) -> None:
    parser.add_argument("--seed", type=int, help=f"random seed (default {default_seed()})")
    parser.add_argument("--format", choices=formats, default=formats[0])
    parser.add_argument("--output", help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Build, verify, analyse and simulate PolarStar networks", prog=PROG
    )
    parser.add_argument("--version", action="version", version=f"{PACKAGE} {get_version()}")
    parser.add_argument("--verbose", action="store_true", help="log results at INFO")
    parser.add_argument("--debug", action="store_true", help="log construction steps")
    sub = parser.add_subparsers(dest="command", required=True)

    generate = sub.add_parser("generate", help="write a topology graph")
    _add_topology_args(generate)
    _add_common_args(generate, FORMATS)
    generate.set_defaults(func=cmd_generate)

    verify = sub.add_parser("verify", help="check graph properties")
    verify.add_argument("--input", required=True)
    verify.add_argument("--check", action="append", choices=CHECKS + ("all",))
    verify.add_argument("--max", type=int, default=3, help="largest accepted diameter")
    verify.add_argument("--degree", type=int)
    verify.add_argument("--order", type=int)
    verify.add_argument("--walk-length", type=int, default=2, help="walk length for property R")
    _add_common_args(verify, ("json",))
    verify.set_defaults(func=cmd_verify)

    design = sub.add_parser("design-space", help="tabulate the largest PolarStar per radix")
    design.add_argument("--radix-min", type=int, default=8)
    design.add_argument("--radix-max", type=int, default=128)
    design.add_argument("--radix", type=int)
    design.add_argument("--all-configs", action="store_true", help="every feasible configuration")
    _add_common_args(design, ("csv", "json"))
    design.set_defaults(func=cmd_design_space)

    analyze = sub.add_parser("analyze", help="distance, bisection and fault statistics")
    analyze.add_argument("--input")
    analyze.add_argument("--metric", action="append", choices=METRICS)
    analyze.add_argument("--trials", type=int)
    analyze.add_argument("--step", type=float, help="fault curve step as a fraction of links")
    analyze.add_argument("--workers", type=int, default=1)
    _add_topology_args(analyze)
    _add_common_args(analyze, ("json",))
    analyze.set_defaults(func=cmd_analyze)

    layout = sub.add_parser("layout", help="cluster and bundle decomposition")
    _add_topology_args(layout)
    _add_common_args(layout, ("json",))
    layout.set_defaults(func=cmd_layout)

    simulate = sub.add_parser("simulate", help="run a traffic campaign")
    simulate.add_argument("--campaign", help="YAML or JSON campaign file")
    simulate.add_argument("--pattern", action="append", choices=sorted(PATTERN_ALIASES))
    simulate.add_argument("--routing", action="append", choices=sorted(SCHEME_ALIASES))
    simulate.add_argument("--load", type=float, nargs="+")
    simulate.add_argument("--cycles", type=int, help="measurement cycles")
    simulate.add_argument("--warmup", type=int, help="warm-up cycles")
    simulate.add_argument("--workers", type=int, default=1)
    _add_topology_args(simulate)
    _add_common_args(simulate, ("csv", "json"))
    simulate.set_defaults(func=cmd_simulate)

    export = sub.add_parser("export", help="convert a graph file between formats")
    export.add_argument("--input", required=True)
    _add_common_args(export, FORMATS)
    export.set_defaults(func=cmd_export)
    return parser


def _origin(error: BaseException) -> str:
    """Module of the innermost frame that raised ``error``."""
    tb = error.__traceback__
    module = type(error).__module__
    while tb is not None:
        module = tb.tb_frame.f_globals.get("__name__", module)
        tb = tb.tb_next
    return module


def _configure_logging(args) -> None:
    level = logging.WARNING
    if args.verbose:
        level = logging.INFO
    if args.debug:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s", stream=sys.stderr)


def run(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv`` and run one subcommand; returns the process exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args)
    try:
        return args.func(args)
    except PolarStarException as e:
        diagnostic = {"error": e.error_name, "module": _origin(e), "message": str(e)}
        sys.stderr.write(json.dumps(diagnostic) + "\n")
        return e.exit_code


def main():
    """Main CLI entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
