"""Moore bound, star-product bound and the comparison-curve closed forms."""

import logging
from typing import Iterable, List

from polarstar.exceptions import InvalidParameters
from polarstar.utils.files import csv_text

logger = logging.getLogger("polarstar")

EFFICIENCY_COLUMNS = (
    "radix",
    "polarstar_order",
    "q",
    "kind",
    "d_prime",
    "moore_bound",
    "moore_efficiency",
    "starmax",
    "dragonfly_order",
    "dragonfly_efficiency",
    "hyperx_order",
    "hyperx_efficiency",
)


def moore_bound(d: int, diameter: int) -> int:
    """1 + d * sum((d-1)^i for i < diameter)."""
    if d < 2 or diameter < 1:
        raise InvalidParameters(f"Moore bound needs d >= 2 and D >= 1, got d={d}, D={diameter}")
    return 1 + d * sum((d - 1) ** i for i in range(diameter))


def starmax(radix: int) -> int:
    """Best diameter-2 Moore graph times the largest R* supernode over all splits."""
    if radix < 3:
        raise InvalidParameters(f"starmax needs radix >= 3, got {radix}")
    return max((d * d + 1) * (2 * (radix - d) + 2) for d in range(1, radix + 1))


def dragonfly_order(radix: int) -> int:
    """Balanced Dragonfly: h global and a-1 local ports with a ~ 2h."""
    h = max(1, round((radix + 1) / 3))
    a = radix + 1 - h
    return a * (a * h + 1)


def hyperx_order(radix: int) -> int:
    """Largest 3-D HyperX S^3 with 3(S-1) <= radix."""
    return (radix // 3 + 1) ** 3


def rows_to_csv(rows: Iterable[dict], columns: Iterable[str] = EFFICIENCY_COLUMNS) -> str:
    return csv_text(rows, columns)
