import logging
from collections.abc import Hashable, Mapping
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from anti_orbits.config import CriticalPointConfig
from anti_orbits.dls.fields import Box, Coupling, Potential
from anti_orbits.errors import GraphError
from anti_orbits.symbolic.codes import Code
from anti_orbits.symbolic.graph import EdgeId, TransitionGraph, Vertex

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LagrangianPiece:
    """L_k(x, y) = V^-(x) + V^+(y) + u(x, y) on ``domain_minus x domain_plus``."""

    index: Hashable
    v_minus: Potential
    v_plus: Potential
    coupling: Coupling
    domain_minus: Box
    domain_plus: Box
    exact: Coupling | None = None

    @property
    def dim(self) -> int:
        return self.v_minus.dim

    def value(self, x: np.ndarray, y: np.ndarray) -> float:
        return self.v_minus.value(x) + self.v_plus.value(y) + self.coupling.value(x, y)

    def grad(self, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        gx, gy = self.coupling.grad(x, y)
        return gx + self.v_minus.grad(x), gy + self.v_plus.grad(y)

    def hess(self, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        hxx, hxy, hyy = self.coupling.hess(x, y)
        return hxx + self.v_minus.hess(x), hxy, hyy + self.v_plus.hess(y)


@dataclass(frozen=True, eq=False)
class EdgeData:
    """Nondegenerate critical point of Psi = V^+_src + V^-_dst attached to one edge."""

    edge: EdgeId | None
    source: Vertex | None
    target: Vertex | None
    point: np.ndarray
    hessian: np.ndarray
    radius: float
    lip_phi: float
    psi: Potential
    condition: float = 1.0

    def retagged(self, edge: EdgeId, source: Vertex, target: Vertex) -> "EdgeData":
        return replace(self, edge=edge, source=source, target=target)


def edge_potential(source: LagrangianPiece, target: LagrangianPiece) -> Potential:
    return source.v_plus + target.v_minus


def intersect(a: Box, b: Box) -> Box:
    lower = np.maximum(a.center - a.half_width, b.center - b.half_width)
    upper = np.minimum(a.center + a.half_width, b.center + b.half_width)
    if np.any(upper <= lower):
        raise GraphError("edge domains do not overlap")
    return Box((lower + upper) / 2, (upper - lower) / 2)


@dataclass(frozen=True, eq=False)
class DLSystem:
    graph: TransitionGraph
    pieces: Mapping[Vertex, LagrangianPiece]
    edge_data: Mapping[EdgeId, EdgeData]
    name: str = "dls"
    fundamental_edges: tuple[EdgeId, ...] = ()
    edge_tags: Mapping[EdgeId, Any] = field(default_factory=dict)
    lift: Any = None

    def __post_init__(self) -> None:
        missing = [v for v in self.graph.vertices if v not in self.pieces]
        if missing:
            raise GraphError(f"no Lagrangian piece for vertex {missing[0]!r}")

    @property
    def dim(self) -> int:
        return next(iter(self.pieces.values())).dim

    @property
    def uncoupled(self) -> bool:
        return all(p.coupling.is_zero for p in self.pieces.values())

    def edge(self, edge_id: EdgeId) -> EdgeData:
        try:
            return self.edge_data[edge_id]
        except (KeyError, TypeError):
            raise GraphError("edge not in graph") from None

    def anchors(self, code: Code) -> np.ndarray:
        return np.stack([self.edge(e).point for e in code.edges]).astype(float)

    def slot_pieces(self, code: Code) -> tuple[list[LagrangianPiece], list[LagrangianPiece]]:
        """Pieces to the left (``L_{k_{i-1}}``) and right (``L_{k_i}``) of every slot."""
        before, after = [], []
        for eid in code.edges:
            edge = self.graph.edge(eid)
            before.append(self.pieces[edge.src])
            after.append(self.pieces[edge.dst])
        return before, after

    def representative_edges(self) -> list[EdgeData]:
        ids = self.fundamental_edges or tuple(self.edge_data)
        return [self.edge_data[e] for e in ids]


def build_system(
    graph: TransitionGraph,
    pieces: Mapping[Vertex, LagrangianPiece],
    seeds: Mapping[EdgeId, np.ndarray],
    config: CriticalPointConfig | None = None,
    name: str = "dls",
) -> DLSystem:
    """Locate the critical point of every edge from its seed."""
    from anti_orbits.dls.critical import find_critical_point

    edge_data: dict[EdgeId, EdgeData] = {}
    for edge in graph.edges:
        if edge.id not in seeds:
            raise GraphError(f"no critical point seed for edge {edge.id!r}")
        src, dst = pieces[edge.src], pieces[edge.dst]
        domain = intersect(src.domain_plus, dst.domain_minus)
        data = find_critical_point((src, dst), np.atleast_1d(np.asarray(seeds[edge.id], dtype=float)), domain=domain, config=config)
        edge_data[edge.id] = data.retagged(edge.id, edge.src, edge.dst)
    logger.info("dls.build name=%s vertices=%d edges=%d", name, len(graph.vertices), len(graph.edges))
    return DLSystem(graph=graph, pieces=dict(pieces), edge_data=edge_data, name=name)


def gauge_transform(system: DLSystem, f: Potential) -> DLSystem:
    """Add ``f(x) - f(y)`` to every piece; trajectories are unchanged."""
    pieces = {
        key: replace(
            piece,
            coupling=piece.coupling.gauged(f),
            exact=piece.exact.gauged(f) if piece.exact is not None else None,
        )
        for key, piece in system.pieces.items()
    }
    return replace(system, pieces=pieces, name=f"{system.name}+gauge")


def check_split(piece: LagrangianPiece, rng: np.random.Generator, samples: int = 100) -> float:
    """Largest |L_exact - (V^- + V^+ + u)| over random domain points."""
    if piece.exact is None:
        return 0.0
    xs = piece.domain_minus.sample(rng, samples)
    ys = piece.domain_plus.sample(rng, samples)
    worst = 0.0
    for x, y in zip(xs, ys):
        worst = max(worst, abs(piece.exact.value(x, y) - piece.value(x, y)))
    return worst
