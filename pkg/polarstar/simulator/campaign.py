"""Sweeps of (topology, pattern, scheme, load, seed) simulation points."""

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Iterable, List, NamedTuple, Optional, Sequence

from polarstar.config import CampaignConfig, SimConfig, TopologySpec
from polarstar.exceptions import PatternInfeasible
from polarstar.simulator.catalog import build_topology
from polarstar.simulator.network import simulate
from polarstar.simulator.topology import Topology
from polarstar.utils.files import csv_text, write_atomic
from polarstar.utils.progress import show_progress

logger = logging.getLogger("polarstar")

CAMPAIGN_COLUMNS = (
    "topology",
    "pattern",
    "scheme",
    "load",
    "seed",
    "latency",
    "latency_first_half",
    "latency_second_half",
    "throughput",
    "offered",
    "average_hops",
    "tagged_packets",
    "delivered_tagged",
    "saturated",
    "cycles",
    "vc_occupancy",
)


class CampaignPoint(NamedTuple):
    topology: TopologySpec
    pattern: str
    scheme: str
    load: float
    seed: int


def campaign_points(campaign: CampaignConfig) -> List[CampaignPoint]:
    return [
        CampaignPoint(*point)
        for point in itertools.product(
            campaign.topologies,
            campaign.patterns,
            campaign.schemes,
            sorted(campaign.loads),
            campaign.seeds,
        )
    ]


@lru_cache(maxsize=8)
def _cached_topology(spec_json: str) -> Topology:
    return build_topology(TopologySpec.model_validate_json(spec_json))


def run_point(point: CampaignPoint, simulation: SimConfig) -> Optional[dict]:
    """One simulation; infeasible pattern/topology pairs give None."""
    topology = _cached_topology(point.topology.model_dump_json())
    config = simulation.model_copy(update={"load": point.load, "seed": point.seed})
    try:
        report = simulate(topology, config, point.pattern, point.scheme)
    except PatternInfeasible as e:
        logger.warning("Skipping %s %s: %s", topology.name, point.pattern, e)
        return None
    return report.as_row()


def run_campaign(campaign: CampaignConfig, output=None) -> List[dict]:
    """Run every point, in worker processes when ``workers`` > 1.

    Rows come back in point order whatever the worker scheduling, so the
    CSV is reproducible.
    """
    points = campaign_points(campaign)
    logger.info("Campaign of %d points on %d worker(s)", len(points), campaign.workers)
    rows: List[Optional[dict]] = []
    with show_progress("Simulating", len(points)) as step:
        if campaign.workers > 1:
            with ProcessPoolExecutor(max_workers=campaign.workers) as pool:
                futures = [pool.submit(run_point, p, campaign.simulation) for p in points]
                for done, future in enumerate(futures, 1):
                    rows.append(future.result())
                    step(done)
        else:
            for done, point in enumerate(points, 1):
                rows.append(run_point(point, campaign.simulation))
                step(done)
    kept = [r for r in rows if r is not None]
    if output is not None:
        write_atomic(output, campaign_csv(kept))
    return kept


def campaign_csv(rows: Iterable[dict]) -> str:
    return csv_text(rows, CAMPAIGN_COLUMNS)


def saturation_load(
    topology: Topology,
    config: SimConfig,
    pattern="Uniform",
    scheme="MIN",
    loads: Sequence[float] = (0.1, 0.3, 0.5, 0.7, 0.9, 1.0),
    resolution: float = 0.0,
) -> float:
    """Highest load at which the run stays unsaturated, 0.0 if none does.

    Loads are tried in increasing order and the search stops at the first
    saturated one. With a positive ``resolution`` the gap between the last
    stable and first saturated load is then bisected down to that width.
    """

    def saturated(load: float) -> bool:
        cfg = config.model_copy(update={"load": load})
        return simulate(topology, cfg, pattern, scheme).saturated

    stable = 0.0
    unstable = None
    for load in sorted(loads):
        if saturated(load):
            unstable = load
            break
        stable = load
    if unstable is None:
        return stable
    while resolution > 0 and unstable - stable > resolution:
        mid = round((stable + unstable) / 2, 6)
        if saturated(mid):
            unstable = mid
        else:
            stable = mid
    logger.info(
        "%s %s %s saturates between %.3f and %.3f",
        topology.name,
        pattern,
        scheme,
        stable,
        unstable,
    )
    return stable
