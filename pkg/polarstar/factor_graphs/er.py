import logging
from typing import Dict, Iterator, List, NamedTuple, Tuple

from polarstar.factor_graphs.graph import Graph
from polarstar.galois import Field, field_new

logger = logging.getLogger("polarstar")


class ProjectivePoint(NamedTuple):
    """Left-normalized point of PG(2, q): the leftmost nonzero coordinate is 1."""

    x: int
    y: int
    z: int


def projective_points(field: Field) -> List[ProjectivePoint]:
    """All q^2+q+1 points, lexicographic on coordinate encodings."""
    q = field.q
    points = [ProjectivePoint(0, 0, 1)]
    points += [ProjectivePoint(0, 1, c) for c in range(q)]
    points += [ProjectivePoint(1, b, c) for b in range(q) for c in range(q)]
    return points


def dot(field: Field, v, w) -> int:
    total = 0
    for a, b in zip(v, w):
        total = field.add(total, field.mul(a, b))
    return total


def normalize(field: Field, coords) -> ProjectivePoint:
    for c in coords:
        if c:
            scale = field.inv(c)
            return ProjectivePoint(*(field.mul(scale, x) for x in coords))
    raise ValueError("the zero vector is not a projective point")


def polar_line(field: Field, v: ProjectivePoint) -> Iterator[ProjectivePoint]:
    """The q+1 points w with v.w = 0."""
    j = next(i for i, c in enumerate(v) if c)
    l1, l2 = (i for i in range(3) if i != j)
    u_a = [0, 0, 0]
    u_a[l1] = 1
    u_a[j] = field.neg(v[l1])
    u_b = [0, 0, 0]
    u_b[l2] = 1
    u_b[j] = field.neg(v[l2])
    yield normalize(field, u_b)
    for t in range(field.q):
        yield normalize(field, [field.add(a, field.mul(t, b)) for a, b in zip(u_a, u_b)])


def build_er(q: int) -> Graph:
    """Erdos-Renyi polarity graph ER_q; quadrics carry self-loops."""
    field = field_new(q)
    points = projective_points(field)
    index: Dict[ProjectivePoint, int] = {p: i for i, p in enumerate(points)}
    edges: List[Tuple[int, int]] = []
    for i, v in enumerate(points):
        for w in polar_line(field, v):
            j = index[w]
            if j >= i:
                edges.append((i, j))
    graph = Graph.from_edges(len(points), edges, labels=points)
    logger.debug(
        "ER_%d: %d vertices, %d edges, %d quadrics",
        q,
        graph.n,
        graph.num_edges,
        len(graph.self_loops),
    )
    return graph


def quadrics(graph: Graph) -> Tuple[int, ...]:
    return tuple(sorted(graph.self_loops))
