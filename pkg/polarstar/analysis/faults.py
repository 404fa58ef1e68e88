"""Random link-failure sweeps until disconnection."""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from polarstar.analysis.distance import distance_stats
from polarstar.config import analysis_config, default_seed
from polarstar.exceptions import Disconnected
from polarstar.factor_graphs.graph import Graph
from polarstar.utils import show_progress

logger = logging.getLogger("polarstar")


@dataclass(frozen=True)
class FaultPoint:
    failed_fraction: float
    removed: int
    connected: bool
    diameter: Optional[int] = None
    average_path_length: Optional[float] = None

    def as_row(self) -> dict:
        return {
            "failed_percent": round(100 * self.failed_fraction, 4),
            "removed": self.removed,
            "connected": self.connected,
            "diameter": self.diameter,
            "average_path_length": self.average_path_length,
        }


@dataclass(frozen=True)
class FaultCurve:
    trial: int
    disconnection_ratio: float
    points: Tuple[FaultPoint, ...]


@dataclass(frozen=True)
class FaultSweepReport:
    ratios: Tuple[float, ...]
    curve: FaultCurve

    @property
    def median_ratio(self) -> float:
        return self.curve.disconnection_ratio

    @property
    def trials(self) -> int:
        return len(self.ratios)


def disconnection_removals(
    n: int, edges: np.ndarray, order: np.ndarray, among: Optional[np.ndarray] = None
) -> int:
    """Number of removals, in ``order``, after which the graph first disconnects.

    Links are added back in reverse removal order until the graph (or the
    ``among`` subset) becomes connected.
    """
    ds = DisjointSet(range(n))
    members = None
    if among is not None:
        members = {int(v): 1 for v in among}
        need = len(members)
        if need <= 1:
            return len(order)
    for j in range(len(order) - 1, -1, -1):
        a, b = (int(x) for x in edges[order[j]])
        ra, rb = ds[a], ds[b]
        if ra == rb:
            continue
        ds.merge(a, b)
        if members is None:
            if ds.n_subsets == 1:
                return j + 1
            continue
        root = ds[a]
        count = members.pop(ra, 0) + members.pop(rb, 0)
        members[root] = count
        if count == need:
            return j + 1
    return 0


def _curve(
    g: Graph,
    edges: np.ndarray,
    order: np.ndarray,
    cutoff: int,
    step: float,
    among: Optional[Iterable[int]],
) -> List[FaultPoint]:
    m = len(edges)
    points = []
    i = 0
    while True:
        removed = min(m, int(round(i * step * m)))
        if removed >= cutoff:
            points.append(FaultPoint(removed / m, removed, False))
            return points
        remaining = Graph.from_edge_array(g.n, edges[order[removed:]])
        try:
            diameter, apl = distance_stats(remaining, among=among)
        except Disconnected:
            points.append(FaultPoint(removed / m, removed, False))
            return points
        points.append(FaultPoint(removed / m, removed, True, diameter, apl))
        i += 1


def fault_sweep(
    g: Graph,
    trials: Optional[int] = None,
    step: Optional[float] = None,
    seed: Optional[int] = None,
    among: Optional[Iterable[int]] = None,
) -> FaultSweepReport:
    """Remove random links until disconnection, ``trials`` times.

    Every trial contributes its disconnection ratio. The distance curve is
    traced in ``step`` increments for the trial with the median ratio only.
    ``among`` limits connectivity and distances to a vertex subset, such as
    the routers that host endpoints in an indirect network.
    """
    settings = analysis_config()
    trials = trials or settings.fault_trials
    step = step or settings.fault_step
    seed = default_seed() if seed is None else seed
    among = None if among is None else np.asarray(sorted(set(among)), dtype=np.int64)
    edges = g.edge_array()
    m = len(edges)
    if not m:
        raise Disconnected("graph has no links to fail", g.n)
    if disconnection_removals(g.n, edges, np.arange(m), among) == 0:
        raise Disconnected("graph is disconnected before any failure", 2)
    rng = np.random.default_rng(seed)
    orders, cutoffs = [], []
    with show_progress("Fault trials", trials) as advance:
        for t in range(trials):
            order = rng.permutation(m)
            orders.append(order)
            cutoffs.append(disconnection_removals(g.n, edges, order, among))
            advance(t + 1)
    ratios = tuple(c / m for c in cutoffs)
    median_trial = sorted(range(trials), key=lambda t: (ratios[t], t))[(trials - 1) // 2]
    points = _curve(g, edges, orders[median_trial], cutoffs[median_trial], step, among)
    logger.info(
        "Median disconnection ratio %.3f over %d trials (trial %d)",
        ratios[median_trial],
        trials,
        median_trial,
    )
    curve = FaultCurve(median_trial, ratios[median_trial], tuple(points))
    return FaultSweepReport(ratios=ratios, curve=curve)
