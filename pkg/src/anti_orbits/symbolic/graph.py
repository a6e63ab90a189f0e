import logging
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from anti_orbits.errors import GraphError, WordCountOverflow

logger = logging.getLogger(__name__)

Vertex = Hashable
EdgeId = Hashable


@dataclass(frozen=True)
class Edge:
    id: EdgeId
    src: Vertex
    dst: Vertex


@dataclass(frozen=True)
class TransitionGraph:
    """Directed multigraph whose vertices index Lagrangian pieces.

    Codes refer to edges, not vertices, so parallel edges (one per critical
    point of the same edge potential) stay distinguishable.
    """

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    _by_id: dict[EdgeId, Edge] = field(init=False, repr=False, compare=False)
    _out: dict[Vertex, tuple[Edge, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise GraphError("duplicate vertex")
        by_id: dict[EdgeId, Edge] = {}
        out: dict[Vertex, list[Edge]] = {v: [] for v in self.vertices}
        for edge in self.edges:
            if edge.src not in known or edge.dst not in known:
                raise GraphError(f"edge {edge.id!r} references an unknown vertex")
            if edge.id in by_id:
                raise GraphError(f"duplicate edge id {edge.id!r}")
            by_id[edge.id] = edge
            out[edge.src].append(edge)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_out", {v: tuple(es) for v, es in out.items()})

    def has_edge(self, edge_id: EdgeId) -> bool:
        return edge_id in self._by_id

    def edge(self, edge_id: EdgeId) -> Edge:
        try:
            return self._by_id[edge_id]
        except (KeyError, TypeError):
            raise GraphError("edge not in graph") from None

    def out_edges(self, vertex: Vertex) -> tuple[Edge, ...]:
        return self._out.get(vertex, ())

    def add_edge(self, edge: Edge) -> "TransitionGraph":
        vertices = list(self.vertices)
        for v in (edge.src, edge.dst):
            if v not in self._out:
                vertices.append(v)
        return TransitionGraph(tuple(vertices), self.edges + (edge,))

    def adjacency(self) -> np.ndarray:
        """Vertex adjacency matrix counting parallel edges, rows = source."""
        index = {v: i for i, v in enumerate(self.vertices)}
        matrix = np.zeros((len(self.vertices), len(self.vertices)), dtype=np.int64)
        for edge in self.edges:
            matrix[index[edge.src], index[edge.dst]] += 1
        return matrix

    def recurrent_core(self) -> "TransitionGraph":
        """Largest subgraph where every vertex has in- and out-degree >= 1."""
        alive = set(self.vertices)
        edges = list(self.edges)
        while True:
            edges = [e for e in edges if e.src in alive and e.dst in alive]
            has_out = {e.src for e in edges}
            has_in = {e.dst for e in edges}
            keep = alive & has_out & has_in
            if keep == alive:
                break
            alive = keep
        vertices = tuple(v for v in self.vertices if v in alive)
        return TransitionGraph(vertices, tuple(edges))

    def random_path(self, rng: np.random.Generator, length: int, start: Vertex | None = None) -> list[EdgeId]:
        """Uniform random walk of ``length`` composable edges."""
        if length < 1:
            raise GraphError("path length must be >= 1")
        core = self.recurrent_core()
        if not core.vertices:
            raise GraphError("graph has no recurrent part")
        vertex = start if start is not None else core.vertices[int(rng.integers(len(core.vertices)))]
        path: list[EdgeId] = []
        for _ in range(length):
            choices = core.out_edges(vertex)
            if not choices:
                raise GraphError(f"dead end at vertex {vertex!r}")
            edge = choices[int(rng.integers(len(choices)))]
            path.append(edge.id)
            vertex = edge.dst
        return path


def count_words(graph: TransitionGraph, n: int, limit: int = 2**63 - 1) -> int:
    """Number of admissible words of ``n`` vertices (``n - 1`` composable edges).

    Equals the sum of the entries of ``A**(n-1)``; computed with exact integers.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    counts = {v: 1 for v in graph.vertices}
    for _ in range(n - 1):
        nxt = {v: 0 for v in graph.vertices}
        for edge in graph.edges:
            nxt[edge.dst] += counts[edge.src]
        counts = nxt
        if sum(counts.values()) > limit:
            logger.warning("symbolic.count_words overflow n=%d limit=%d", n, limit)
            raise WordCountOverflow()
    total = sum(counts.values())
    if total > limit:
        raise WordCountOverflow()
    return total


def complete_graph(q: int) -> TransitionGraph:
    vertices = tuple(range(q))
    edges = tuple(Edge(id=f"{i}-{j}", src=i, dst=j) for i in vertices for j in vertices)
    return TransitionGraph(vertices, edges)


def golden_mean_graph() -> TransitionGraph:
    return TransitionGraph(
        (1, 2),
        (Edge("11", 1, 1), Edge("12", 1, 2), Edge("21", 2, 1)),
    )


def cycle_graph(p: int) -> TransitionGraph:
    vertices = tuple(range(p))
    return TransitionGraph(vertices, tuple(Edge(f"c{i}", i, (i + 1) % p) for i in vertices))


def graph_from_edges(triples: Iterable[Sequence[Hashable]], vertices: Iterable[Vertex] | None = None) -> TransitionGraph:
    edges = [Edge(id=t[0], src=t[1], dst=t[2]) for t in triples]
    if vertices is None:
        seen: dict[Vertex, None] = {}
        for e in edges:
            seen.setdefault(e.src)
            seen.setdefault(e.dst)
        vertices = seen.keys()
    return TransitionGraph(tuple(vertices), tuple(edges))
