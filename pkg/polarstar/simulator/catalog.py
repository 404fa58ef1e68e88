"""Build simulator topologies from TopologySpec recipes."""

import logging
from typing import List, Optional

from polarstar.config import TopologySpec
from polarstar.design_space import enumerate_configs, max_order, paley_factorizations
from polarstar.exceptions import InvalidParameters
from polarstar.factor_graphs import (
    Graph,
    SupernodeKind,
    SupernodeSpec,
    build_er,
    build_inductive_quad,
    build_paley,
)
from polarstar.simulator.baselines import build_dragonfly, build_fattree, build_hyperx
from polarstar.simulator.topology import Topology, direct_topology, polarstar_topology
from polarstar.star_product import PolarStarGraph, build_polarstar

logger = logging.getLogger("polarstar")

DEFAULT_LEVELS = 3
DEFAULT_HYPERX_DIMENSIONS = 3

# published router count of the radix-15 Paley comparison network
STATED_PALEY_ROUTERS = 993
COMPARISON_RADIX = 15


def _require(spec: TopologySpec, *names: str) -> None:
    missing = [n for n in names if getattr(spec, n) is None]
    if missing:
        raise InvalidParameters(
            f"{spec.kind} topology needs {', '.join('--' + m for m in missing)}"
        )


def resolve_polarstar(spec: TopologySpec) -> TopologySpec:
    """Fill q, supernode and d' from the radix when they were left out."""
    if spec.q is not None and spec.dprime is not None:
        return spec
    if spec.radix is None:
        raise InvalidParameters("polarstar topology needs --q and --dprime, or --radix")
    if spec.q is not None:
        return spec.model_copy(update={"dprime": spec.radix - spec.q - 1})
    best = max_order(spec.radix).config
    logger.info("Radix %d resolves to %s", spec.radix, best.label())
    return spec.model_copy(
        update={"q": best.q, "supernode": best.kind.value, "dprime": best.d_prime}
    )


def build_polarstar_from(
    spec: TopologySpec, verify: bool = True, seed: Optional[int] = None
) -> PolarStarGraph:
    spec = resolve_polarstar(spec)
    try:
        kind = SupernodeKind(spec.supernode)
    except ValueError:
        raise InvalidParameters(f"Unknown supernode family {spec.supernode!r}")
    return build_polarstar(
        spec.q, SupernodeSpec.from_degree(kind, spec.dprime), verify=verify, seed=seed
    )


def _paley_order(spec: TopologySpec) -> int:
    if spec.q is not None:
        return spec.q
    _require(spec, "dprime")
    return 2 * spec.dprime + 1


def build_graph(spec: TopologySpec) -> Graph:
    """The bare router graph of any topology kind, without endpoints."""
    if spec.kind == "polarstar":
        return build_polarstar_from(spec).graph
    if spec.kind == "er":
        _require(spec, "q")
        return build_er(spec.q)
    if spec.kind == "iq":
        _require(spec, "dprime")
        return build_inductive_quad(spec.dprime).graph
    if spec.kind == "paley":
        return build_paley(_paley_order(spec)).graph
    return build_topology(spec).graph


def _endpoints(spec: TopologySpec, radix: int, override: Optional[int]) -> int:
    for value in (override, spec.endpoints, spec.p):
        if value is not None:
            return value
    return max(1, radix // 3)


def build_topology(spec: TopologySpec, endpoints: Optional[int] = None) -> Topology:
    """Router graph plus endpoints; p defaults to a third of the radix."""
    kind = spec.kind
    if kind == "polarstar":
        ps = build_polarstar_from(spec)
        return polarstar_topology(ps, _endpoints(spec, ps.radix, endpoints))
    if kind in ("er", "iq", "paley"):
        graph = build_graph(spec)
        return direct_topology(spec.label(), graph, _endpoints(spec, graph.max_degree, endpoints))
    if kind == "dragonfly":
        a, h = spec.a, spec.h
        if a is None or h is None:
            _require(spec, "radix")
            h = max(1, round((spec.radix + 1) / 3))
            a = spec.radix + 1 - h
        return build_dragonfly(a, h, endpoints if endpoints is not None else spec.endpoints or spec.p)
    if kind == "hyperx":
        L = spec.L or DEFAULT_HYPERX_DIMENSIONS
        S = spec.S
        if S is None:
            _require(spec, "radix")
            S = spec.radix // L + 1
        return build_hyperx(S, L, endpoints if endpoints is not None else spec.endpoints or spec.p)
    if kind == "fattree":
        levels = spec.levels or DEFAULT_LEVELS
        p = spec.p
        if p is None:
            _require(spec, "radix")
            p = spec.radix // 2
        return build_fattree(levels, p)
    raise InvalidParameters(f"Unknown topology kind {kind!r}")


def _paley_comparison() -> TopologySpec:
    """Paley PolarStar of the comparison radix, cross-checked against the stated size."""
    found = paley_factorizations(STATED_PALEY_ROUTERS)
    if found:
        q, q_prime = found[0]
        d_prime = (q_prime - 1) // 2
    else:
        best = max(
            (c for c in enumerate_configs(COMPARISON_RADIX) if c.kind is SupernodeKind.PALEY),
            key=lambda c: c.order,
        )
        logger.warning(
            "No Paley PolarStar has %d routers; inconsistent entry replaced by %s with %d routers",
            STATED_PALEY_ROUTERS,
            best.label(),
            best.order,
        )
        q, d_prime = best.q, best.d_prime
    return TopologySpec(kind="polarstar", q=q, supernode="paley", dprime=d_prime, p=5)


def table3_topologies() -> List[TopologySpec]:
    """The five networks of the headline simulation comparison."""
    return [
        TopologySpec(kind="polarstar", q=11, supernode="iq", dprime=3, p=5),
        _paley_comparison(),
        TopologySpec(kind="dragonfly", a=12, h=6, p=6),
        TopologySpec(kind="hyperx", S=10, L=3, p=9),
        TopologySpec(kind="fattree", levels=3, p=18),
    ]


def scaling_topologies() -> List[TopologySpec]:
    """Pairs of PolarStar sizes at radix 9, 15 and 21 for the size-consistency study."""
    return [
        TopologySpec(kind="polarstar", q=4, supernode="paley", dprime=4),
        TopologySpec(kind="polarstar", q=5, supernode="iq", dprime=3),
        TopologySpec(kind="polarstar", q=11, supernode="iq", dprime=3),
        TopologySpec(kind="polarstar", q=8, supernode="paley", dprime=6),
        TopologySpec(kind="polarstar", q=16, supernode="paley", dprime=4),
        TopologySpec(kind="polarstar", q=13, supernode="iq", dprime=7),
    ]
