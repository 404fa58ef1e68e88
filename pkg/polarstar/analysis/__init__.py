from polarstar.analysis.bisection import BisectionResult, bisection_estimate, exact_bisection
from polarstar.analysis.distance import (
    DistanceStats,
    component_count,
    distance_stats,
    hop_distances,
)
from polarstar.analysis.faults import FaultCurve, FaultPoint, FaultSweepReport, fault_sweep
from polarstar.analysis.layout import LayoutDecomposition, layout_decompose

__all__ = [
    "BisectionResult",
    "DistanceStats",
    "FaultCurve",
    "FaultPoint",
    "FaultSweepReport",
    "LayoutDecomposition",
    "bisection_estimate",
    "component_count",
    "distance_stats",
    "exact_bisection",
    "fault_sweep",
    "hop_distances",
    "layout_decompose",
]
