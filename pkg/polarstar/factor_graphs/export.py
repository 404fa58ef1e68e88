"""Edge-list, DOT and JSON-envelope codecs for Graph."""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from polarstar.config import check_schema_version, schema_version
from polarstar.exceptions import ConfigurationError
from polarstar.factor_graphs.graph import Graph

logger = logging.getLogger("polarstar")

FORMATS = ("edgelist", "dot", "json")


@dataclass(frozen=True)
class Envelope:
    graph: Graph
    f: Optional[List[int]] = None
    names: Optional[List[str]] = None
    metadata: Dict[str, Any] = field(default_factory=dict)


def to_edgelist(graph: Graph) -> str:
    lines = [f"{u} {v}" for u, v in graph.edges(loops=True)]
    header = f"# n={graph.n} m={len(lines)}"
    return "\n".join([header] + lines) + "\n"


def read_edgelist(text: str) -> Graph:
    n = None
    edges = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].split():
                if token.startswith("n="):
                    n = int(token[2:])
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ConfigurationError(f"edge list line {number}: expected 'u v'")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return Graph.from_edges(n, edges)


def to_dot(graph: Graph, names: Optional[Sequence[str]] = None) -> str:
    names = list(names) if names is not None else [str(v) for v in range(graph.n)]
    lines = ["graph G {"]
    lines += [f'  "{name}";' for name in names]
    lines += [f'  "{names[u]}" -- "{names[v]}";' for u, v in graph.edges(loops=True)]
    lines.append("}")
    return "\n".join(lines) + "\n"


def _jsonable(label):
    if isinstance(label, (tuple, list)):
        return [_jsonable(x) for x in label]
    if isinstance(label, (int, str, float)) or label is None:
        return label
    return str(label)


def to_json_envelope(
    graph: Graph,
    f: Optional[Sequence[int]] = None,
    names: Optional[Sequence[str]] = None,
    metadata: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    return {
        "schema_version": schema_version(),
        "n": graph.n,
        "edges": [[u, v] for u, v in graph.edges()],
        "self_loops": sorted(graph.self_loops),
        "labels": _jsonable(list(graph.labels)) if graph.labels is not None else None,
        "names": list(names) if names is not None else None,
        "f": [int(x) for x in f] if f is not None else None,
        "metadata": metadata or {},
    }


def dumps_envelope(envelope: Dict[str, Any]) -> str:
    return json.dumps(envelope, sort_keys=True, separators=(",", ":")) + "\n"


def from_json_envelope(data: Dict[str, Any]) -> Envelope:
    if not isinstance(data, dict):
        raise ConfigurationError("JSON envelope must be an object")
    check_schema_version(data.get("schema_version"))
    try:
        n = int(data["n"])
        edges = [tuple(e) for e in data["edges"]]
        edges += [(v, v) for v in data.get("self_loops") or []]
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigurationError(f"Malformed JSON envelope: {e}")
    labels = data.get("labels")
    if labels is not None:
        labels = [tuple(x) if isinstance(x, list) else x for x in labels]
    return Envelope(
        graph=Graph.from_edges(n, edges, labels=labels),
        f=data.get("f"),
        names=data.get("names"),
        metadata=data.get("metadata") or {},
    )


def loads_graph(text: str) -> Envelope:
    """Parse either a JSON envelope or an edge list."""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Invalid JSON envelope: {e}")
        return from_json_envelope(data)
    return Envelope(graph=read_edgelist(text))


def render(
    graph: Graph,
    fmt: str,
    f: Optional[Sequence[int]] = None,
    names: Optional[Sequence[str]] = None,
    metadata: Optional[Dict[str, Any]] = None,
) -> str:
    if fmt == "edgelist":
        return to_edgelist(graph)
    if fmt == "dot":
        return to_dot(graph, names)
    if fmt == "json":
        return dumps_envelope(to_json_envelope(graph, f, names, metadata))
    raise ConfigurationError(f"Unknown graph format {fmt!r}; expected one of {FORMATS}")
