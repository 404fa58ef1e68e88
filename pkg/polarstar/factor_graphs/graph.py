import logging
from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, FrozenSet, Iterable, Iterator, Optional, Tuple

import networkx as nx
import numpy as np
from scipy import sparse

from polarstar.exceptions import InvalidParameters

logger = logging.getLogger("polarstar")


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph with optional self-loops and vertex labels.

    Vertices are 0..n-1. ``adjacency[v]`` is the sorted tuple of neighbours of
    v excluding v itself; self-loops live in ``self_loops`` only.
    """

    n: int
    adjacency: Tuple[Tuple[int, ...], ...]
    self_loops: FrozenSet[int] = frozenset()
    labels: Optional[Tuple[Any, ...]] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if len(self.adjacency) != self.n:
            raise InvalidParameters("adjacency must list every vertex")
        if self.labels is not None and len(self.labels) != self.n:
            raise InvalidParameters("labels must name every vertex")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Tuple[int, int]],
        labels: Optional[Iterable[Any]] = None,
    ) -> "Graph":
        """Build from an edge iterable; duplicates collapse, (v, v) is a loop."""
        neighbours = [set() for _ in range(n)]
        loops = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidParameters(f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                loops.add(u)
            else:
                neighbours[u].add(v)
                neighbours[v].add(u)
        return cls(
            n=n,
            adjacency=tuple(tuple(sorted(s)) for s in neighbours),
            self_loops=frozenset(loops),
            labels=tuple(labels) if labels is not None else None,
        )

    @classmethod
    def from_edge_array(cls, n: int, edges: np.ndarray, labels=None) -> "Graph":
        """Vectorised constructor for large edge arrays of shape (m, 2)."""
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        loops = edges[edges[:, 0] == edges[:, 1], 0]
        edges = edges[edges[:, 0] != edges[:, 1]]
        both = np.concatenate([edges, edges[:, ::-1]])
        if both.size:
            both = np.unique(both, axis=0)
        starts = np.searchsorted(both[:, 0], np.arange(n + 1)) if both.size else None
        adjacency = tuple(
            tuple(int(x) for x in both[starts[v] : starts[v + 1], 1])
            if both.size
            else ()
            for v in range(n)
        )
        return cls(
            n=n,
            adjacency=adjacency,
            self_loops=frozenset(int(v) for v in loops),
            labels=tuple(labels) if labels is not None else None,
        )

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.adjacency == other.adjacency
            and self.self_loops == other.self_loops
        )

    def __hash__(self):
        return hash((self.n, self.adjacency, self.self_loops))

    def __len__(self):
        return self.n

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return u in self.self_loops
        row = self.adjacency[u]
        i = bisect_left(row, v)
        return i < len(row) and row[i] == v

    def degree(self, v: int) -> int:
        """Degree excluding the self-loop."""
        return len(self.adjacency[v])

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.fromiter((len(a) for a in self.adjacency), dtype=np.int64, count=self.n)

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    @property
    def min_degree(self) -> int:
        return int(self.degrees.min()) if self.n else 0

    def is_regular(self) -> bool:
        return self.max_degree == self.min_degree

    @property
    def num_edges(self) -> int:
        """Number of non-loop edges."""
        return int(self.degrees.sum()) // 2

    def edges(self, loops: bool = False) -> Iterator[Tuple[int, int]]:
        """Edges (u, v) with u <= v in lexicographic order."""
        for u in range(self.n):
            if loops and u in self.self_loops:
                yield u, u
            for v in self.adjacency[u]:
                if v > u:
                    yield u, v

    def edge_array(self) -> np.ndarray:
        if "edge_array" not in self._cache:
            self._cache["edge_array"] = np.array(
                list(self.edges()), dtype=np.int64
            ).reshape(-1, 2)
        return self._cache["edge_array"]

    def adjacency_matrix(self, with_loops: bool = False) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        e = self.edge_array()
        a[e[:, 0], e[:, 1]] = True
        a[e[:, 1], e[:, 0]] = True
        if with_loops and self.self_loops:
            loops = np.fromiter(self.self_loops, dtype=np.int64)
            a[loops, loops] = True
        return a

    def to_csr(self, with_loops: bool = False) -> sparse.csr_matrix:
        if ("csr", with_loops) not in self._cache:
            e = self.edge_array()
            rows = [e[:, 0], e[:, 1]]
            cols = [e[:, 1], e[:, 0]]
            if with_loops and self.self_loops:
                loops = np.fromiter(sorted(self.self_loops), dtype=np.int64)
                rows.append(loops)
                cols.append(loops)
            r = np.concatenate(rows)
            c = np.concatenate(cols)
            m = sparse.csr_matrix(
                (np.ones(len(r), dtype=np.int8), (r, c)), shape=(self.n, self.n)
            )
            self._cache[("csr", with_loops)] = m
        return self._cache[("csr", with_loops)]

    def to_networkx(self, with_loops: bool = False) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges(loops=with_loops))
        return g

    @classmethod
    def from_networkx(cls, g: nx.Graph, labels=None) -> "Graph":
        nodes = sorted(g.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls.from_edges(
            len(nodes),
            ((index[u], index[v]) for u, v in g.edges()),
            labels=labels,
        )

    def check_symmetric(self) -> bool:
        return all(u in self.adjacency[v] for u in range(self.n) for v in self.adjacency[u])

    def induced_edges(self, vertices: Iterable[int]) -> int:
        members = set(vertices)
        return sum(1 for u in members for v in self.adjacency[u] if v in members) // 2

    def with_labels(self, labels) -> "Graph":
        return Graph(self.n, self.adjacency, self.self_loops, tuple(labels))
