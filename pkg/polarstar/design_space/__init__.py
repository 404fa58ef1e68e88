from polarstar.design_space.bounds import (
    EFFICIENCY_COLUMNS,
    dragonfly_order,
    hyperx_order,
    moore_bound,
    rows_to_csv,
    starmax,
)
from polarstar.design_space.configs import (
    SUPERNODE_CHART,
    MaxOrderReport,
    PolarStarConfig,
    design_points,
    efficiency_table,
    enumerate_configs,
    find_config,
    max_order,
    paley_factorizations,
)

__all__ = [
    "EFFICIENCY_COLUMNS",
    "SUPERNODE_CHART",
    "MaxOrderReport",
    "PolarStarConfig",
    "design_points",
    "dragonfly_order",
    "efficiency_table",
    "enumerate_configs",
    "find_config",
    "hyperx_order",
    "max_order",
    "moore_bound",
    "paley_factorizations",
    "rows_to_csv",
    "starmax",
]
