from polarstar.simulator.baselines import build_dragonfly, build_fattree, build_hyperx
from polarstar.simulator.campaign import (
    CAMPAIGN_COLUMNS,
    campaign_csv,
    run_campaign,
    saturation_load,
)
from polarstar.simulator.catalog import (
    build_graph,
    build_polarstar_from,
    build_topology,
    scaling_topologies,
    table3_topologies,
)
from polarstar.simulator.network import Network, SimReport, simulate
from polarstar.simulator.routing import RoutingScheme, RoutingTable
from polarstar.simulator.topology import Topology, VCPolicy, polarstar_topology
from polarstar.simulator.traffic import TrafficKind, TrafficPattern

__all__ = [
    "CAMPAIGN_COLUMNS",
    "Network",
    "RoutingScheme",
    "RoutingTable",
    "SimReport",
    "Topology",
    "TrafficKind",
    "TrafficPattern",
    "VCPolicy",
    "build_dragonfly",
    "build_fattree",
    "build_graph",
    "build_hyperx",
    "build_polarstar_from",
    "build_topology",
    "campaign_csv",
    "polarstar_topology",
    "run_campaign",
    "saturation_load",
    "scaling_topologies",
    "simulate",
    "table3_topologies",
]
