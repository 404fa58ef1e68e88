import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

from polarstar.exceptions import (
    BijectionArityMismatch,
    InfeasibleDegree,
    InfeasibleOrder,
    NotPrimePower,
)
from polarstar.factor_graphs.graph import Graph
from polarstar.galois import field_new

logger = logging.getLogger("polarstar")

# G'_3 labels: x, f(x), y, f(y), z, f(z), w, f(w)
X, FX, Y, FY, Z, FZ, W, FW = range(8)
QUAD_GADGET_EDGES = (
    (FY, Z), (FY, FZ),
    (FZ, W), (FZ, FW),
    (FW, Y), (FW, FY),
    (X, Y), (X, Z), (X, W),
    (FX, Y), (FX, Z), (FX, W),
)  # fmt: skip
GADGET_TO_A = (X, FX, Z, FZ)
GADGET_TO_F_A = (Y, FY, W, FW)


class SupernodeProperty(Enum):
    RSTAR = "R*"
    R1 = "R1"
    BOTH = "R*+R1"

    @property
    def has_r_star(self) -> bool:
        return self in (SupernodeProperty.RSTAR, SupernodeProperty.BOTH)

    @property
    def has_r1(self) -> bool:
        return self in (SupernodeProperty.R1, SupernodeProperty.BOTH)


class SupernodeKind(Enum):
    INDUCTIVE_QUAD = "iq"
    PALEY = "paley"
    COMPLETE = "complete"


@dataclass(frozen=True)
class SupernodeGraph:
    """A supernode graph with the bijection f used by the star product."""

    graph: Graph
    f: Tuple[int, ...]
    property: SupernodeProperty
    degree: int
    kind: SupernodeKind

    def __post_init__(self):
        if sorted(self.f) != list(range(self.graph.n)):
            raise BijectionArityMismatch(
                f"f must permute the {self.graph.n} supernode vertices"
            )

    @property
    def order(self) -> int:
        return self.graph.n

    def is_involution(self) -> bool:
        return all(self.f[self.f[v]] == v for v in range(self.order))

    def f_inverse(self) -> Tuple[int, ...]:
        inverse = [0] * self.order
        for v, image in enumerate(self.f):
            inverse[image] = v
        return tuple(inverse)


def _quad_gadget(offset: int) -> List[Tuple[int, int]]:
    return [(offset + u, offset + v) for u, v in QUAD_GADGET_EDGES]


def build_inductive_quad(d_prime: int) -> SupernodeGraph:
    """Inductive-Quad graph of degree d' on 2d'+2 vertices.

    f pairs vertex 2i with 2i+1. Each inductive step appends a G'_3 gadget
    and joins {x, fx, z, fz} to the even vertices and {y, fy, w, fw} to the
    odd ones.
    """
    if d_prime < 0 or d_prime % 4 in (1, 2):
        raise InfeasibleDegree(
            f"Inductive-Quad supernodes exist only for d' = 0 or 3 (mod 4), got {d_prime}"
        )
    if d_prime % 4 == 0:
        n, edges = 2, []
    else:
        n, edges = 8, _quad_gadget(0)
    while n < 2 * d_prime + 2:
        edges += _quad_gadget(n)
        side_a = range(0, n, 2)
        side_f_a = range(1, n, 2)
        edges += [(n + g, a) for g in GADGET_TO_A for a in side_a]
        edges += [(n + g, b) for g in GADGET_TO_F_A for b in side_f_a]
        n += 8
    f = tuple(v ^ 1 for v in range(n))
    graph = Graph.from_edges(n, edges)
    logger.debug("Inductive-Quad d'=%d: %d vertices, %d edges", d_prime, n, graph.num_edges)
    return SupernodeGraph(
        graph=graph,
        f=f,
        property=SupernodeProperty.RSTAR,
        degree=d_prime,
        kind=SupernodeKind.INDUCTIVE_QUAD,
    )


def build_paley(q_prime: int) -> SupernodeGraph:
    """Paley graph on GF(q') with f(a) = zeta * a."""
    try:
        field = field_new(q_prime)
    except NotPrimePower:
        raise InfeasibleOrder(f"Paley order {q_prime} is not a prime power")
    if q_prime % 4 != 1:
        raise InfeasibleOrder(f"Paley order must be 1 (mod 4), got {q_prime}")
    edges = [
        (a, b)
        for a in range(q_prime)
        for b in range(a + 1, q_prime)
        if field.is_square(field.sub(b, a))
    ]
    zeta = field.primitive_root
    f = tuple(field.mul(zeta, a) for a in range(q_prime))
    return SupernodeGraph(
        graph=Graph.from_edges(q_prime, edges, labels=range(q_prime)),
        f=f,
        property=SupernodeProperty.R1,
        degree=(q_prime - 1) // 2,
        kind=SupernodeKind.PALEY,
    )


def build_complete(n: int) -> SupernodeGraph:
    if n < 1:
        raise InfeasibleOrder(f"Complete supernode needs at least one vertex, got {n}")
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return SupernodeGraph(
        graph=Graph.from_edges(n, edges),
        f=tuple(range(n)),
        property=SupernodeProperty.BOTH,
        degree=n - 1,
        kind=SupernodeKind.COMPLETE,
    )


@dataclass(frozen=True)
class SupernodeSpec:
    """Supernode family plus its defining parameter (d', q' or n)."""

    kind: SupernodeKind
    parameter: int

    @classmethod
    def inductive_quad(cls, d_prime: int) -> "SupernodeSpec":
        return cls(SupernodeKind.INDUCTIVE_QUAD, d_prime)

    @classmethod
    def paley(cls, q_prime: int) -> "SupernodeSpec":
        return cls(SupernodeKind.PALEY, q_prime)

    @classmethod
    def complete(cls, n: int) -> "SupernodeSpec":
        return cls(SupernodeKind.COMPLETE, n)

    @classmethod
    def from_degree(cls, kind, d_prime: int) -> "SupernodeSpec":
        kind = SupernodeKind(kind)
        if kind is SupernodeKind.INDUCTIVE_QUAD:
            return cls.inductive_quad(d_prime)
        if kind is SupernodeKind.PALEY:
            return cls.paley(2 * d_prime + 1)
        return cls.complete(d_prime + 1)

    @property
    def degree(self) -> int:
        if self.kind is SupernodeKind.INDUCTIVE_QUAD:
            return self.parameter
        if self.kind is SupernodeKind.PALEY:
            return (self.parameter - 1) // 2
        return self.parameter - 1

    @property
    def order(self) -> int:
        if self.kind is SupernodeKind.INDUCTIVE_QUAD:
            return 2 * self.parameter + 2
        return self.parameter

    def build(self) -> SupernodeGraph:
        if self.kind is SupernodeKind.INDUCTIVE_QUAD:
            return build_inductive_quad(self.parameter)
        if self.kind is SupernodeKind.PALEY:
            return build_paley(self.parameter)
        return build_complete(self.parameter)

    def label(self) -> str:
        names = {
            SupernodeKind.INDUCTIVE_QUAD: "IQ",
            SupernodeKind.PALEY: "Paley",
            SupernodeKind.COMPLETE: "K",
        }
        return f"{names[self.kind]}({self.parameter})"

