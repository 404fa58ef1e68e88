"""Feasible PolarStar configurations per radix and the maximum-order choice."""

import logging
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

from polarstar.design_space.bounds import (
    dragonfly_order,
    hyperx_order,
    moore_bound,
    starmax,
)
from polarstar.exceptions import EmptyDesignSpace, InvalidParameters
from polarstar.factor_graphs.supernodes import SupernodeKind, SupernodeSpec
from polarstar.galois import is_prime_power, prime_powers

logger = logging.getLogger("polarstar")

ANALYTIC_SLACK = 0.02

KIND_RANK = {
    SupernodeKind.INDUCTIVE_QUAD: 0,
    SupernodeKind.PALEY: 1,
    SupernodeKind.COMPLETE: 2,
}


class ChartRow(NamedTuple):
    family: str
    order: str
    permitted: str
    symmetric: bool
    r_star: bool
    r1: bool
    buildable: bool


SUPERNODE_CHART: Tuple[ChartRow, ...] = (
    ChartRow("Inductive-Quad", "2d'+2", "d' = 0 or 3 (mod 4)", False, True, False, True),
    ChartRow("Paley", "2d'+1", "2d'+1 a prime power, 1 (mod 4)", True, False, True, True),
    ChartRow("BDF", "2d'", "all", False, True, False, False),
    ChartRow("Cayley", "2d'+delta, delta in {0, +-1}", "2d'+delta a prime power", True, False, True, False),
    ChartRow("Complete", "d'+1", "all", True, True, True, True),
)  # fmt: skip


def supernode_feasible(kind: SupernodeKind, d_prime: int) -> bool:
    if d_prime < 0:
        return False
    if kind is SupernodeKind.INDUCTIVE_QUAD:
        return d_prime % 4 in (0, 3)
    if kind is SupernodeKind.PALEY:
        q_prime = 2 * d_prime + 1
        return q_prime % 4 == 1 and is_prime_power(q_prime)
    return True


@dataclass(frozen=True)
class PolarStarConfig:
    radix: int
    q: int
    kind: SupernodeKind
    d_prime: int

    @property
    def structure_degree(self) -> int:
        return self.q + 1

    @property
    def structure_order(self) -> int:
        return self.q * self.q + self.q + 1

    @property
    def supernode(self) -> SupernodeSpec:
        return SupernodeSpec.from_degree(self.kind, self.d_prime)

    @property
    def supernode_order(self) -> int:
        return self.supernode.order

    @property
    def order(self) -> int:
        return self.structure_order * self.supernode_order

    @property
    def moore_efficiency(self) -> float:
        return self.order / moore_bound(self.radix, 3)

    def sort_key(self):
        return (-self.order, -self.q, KIND_RANK[self.kind])

    def label(self) -> str:
        return f"PS(q={self.q}, {self.supernode.label()})"

    def as_row(self) -> dict:
        return {
            "radix": self.radix,
            "q": self.q,
            "kind": self.kind.value,
            "d_prime": self.d_prime,
            "order": self.order,
            "moore_efficiency": round(self.moore_efficiency, 6),
        }


def enumerate_configs(radix: int) -> List[PolarStarConfig]:
    """Every (q, supernode kind, d') of total degree ``radix``, largest first."""
    if radix < 3:
        raise InvalidParameters(f"radix must be at least 3, got {radix}")
    configs = [
        PolarStarConfig(radix, q, kind, radix - q - 1)
        for q in prime_powers(2, radix - 1)
        for kind in SupernodeKind
        if supernode_feasible(kind, radix - q - 1)
    ]
    if not configs:
        raise EmptyDesignSpace(f"no PolarStar configuration has radix {radix}")
    configs.sort(key=PolarStarConfig.sort_key)
    return configs


def analytic_optimum_q(radix: int) -> float:
    return ((radix - 1) + math.sqrt((radix - 1) * (radix - 2))) / 3


def analytic_max_order(radix: int) -> float:
    return (8 * radix**3 + 12 * radix**2 + 18 * radix) / 27


def prime_power_bracket(x: float) -> Tuple[Optional[int], Optional[int]]:
    """The largest prime power <= x and the smallest >= x."""
    below = next((n for n in range(math.floor(x), 1, -1) if is_prime_power(n)), None)
    above = math.ceil(x)
    while not is_prime_power(above):
        above += 1
    return below, above


@dataclass(frozen=True)
class MaxOrderReport:
    config: PolarStarConfig
    optimum_q: float
    analytic_order: float
    bracket: Tuple[Optional[int], Optional[int]]

    @property
    def order(self) -> int:
        return self.config.order

    @property
    def q_in_bracket(self) -> bool:
        lo, hi = self.bracket
        return (lo or 0) <= self.config.q <= hi


def max_order(radix: int) -> MaxOrderReport:
    """Largest enumerated configuration, ties broken toward larger q.

    The report carries the closed-form optimum q and order approximation
    for cross-checking; departures from the prime-power bracket around
    2*radix/3 are logged rather than raised.
    """
    best = enumerate_configs(radix)[0]
    report = MaxOrderReport(
        config=best,
        optimum_q=analytic_optimum_q(radix),
        analytic_order=analytic_max_order(radix),
        bracket=prime_power_bracket(2 * radix / 3),
    )
    if best.order > report.analytic_order * (1 + ANALYTIC_SLACK):
        logger.warning(
            "Radix %d: order %d exceeds the closed-form estimate %.0f",
            radix,
            best.order,
            report.analytic_order,
        )
    if radix >= 12 and not report.q_in_bracket:
        logger.warning(
            "Radix %d: best q=%d lies outside the prime-power bracket %s around 2d/3",
            radix,
            best.q,
            report.bracket,
        )
    logger.debug("Radix %d: best %s with %d vertices", radix, best.label(), best.order)
    return report


def design_points(radix_min: int, radix_max: int) -> List[PolarStarConfig]:
    """Every feasible configuration over a radix range, for scatter plots."""
    return [c for radix in range(radix_min, radix_max + 1) for c in enumerate_configs(radix)]


def find_config(
    order: int, kind: Optional[SupernodeKind] = None
) -> List[PolarStarConfig]:
    """All configurations with exactly ``order`` vertices, optionally of one kind."""
    found = []
    for q in prime_powers(2, math.isqrt(order)):
        structure = q * q + q + 1
        if order % structure:
            continue
        m = order // structure
        for k in SupernodeKind if kind is None else (kind,):
            if k is SupernodeKind.INDUCTIVE_QUAD:
                d_prime, exact = (m - 2) // 2, m % 2 == 0
            elif k is SupernodeKind.PALEY:
                d_prime, exact = (m - 1) // 2, m % 2 == 1
            else:
                d_prime, exact = m - 1, True
            if exact and supernode_feasible(k, d_prime):
                found.append(PolarStarConfig(q + 1 + d_prime, q, k, d_prime))
    return sorted(found, key=PolarStarConfig.sort_key)


def paley_factorizations(order: int) -> List[Tuple[int, int]]:
    """Pairs (q, q') with (q^2+q+1) * q' == order and q' a Paley order."""
    return [(c.q, c.supernode_order) for c in find_config(order, SupernodeKind.PALEY)]


def efficiency_table(radix_min: int, radix_max: int) -> List[dict]:
    """Per radix: best PolarStar order against the Moore bound and the baselines."""
    rows = []
    for radix in range(radix_min, radix_max + 1):
        best = max_order(radix).config
        moore = moore_bound(radix, 3)
        df = dragonfly_order(radix)
        hx = hyperx_order(radix)
        rows.append(
            {
                "radix": radix,
                "polarstar_order": best.order,
                "q": best.q,
                "kind": best.kind.value,
                "d_prime": best.d_prime,
                "moore_bound": moore,
                "moore_efficiency": round(best.order / moore, 6),
                "starmax": starmax(radix),
                "dragonfly_order": df,
                "dragonfly_efficiency": round(df / moore, 6),
                "hyperx_order": hx,
                "hyperx_efficiency": round(hx / moore, 6),
            }
        )
    return rows
