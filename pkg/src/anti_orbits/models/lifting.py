"""Finite lattice lift of periodic models.

Configuration points are stored in fundamental coordinates: slot ``i`` sits
near a critical point ``c`` of its sheet, and the piece leading to the next
slot carries the integer cell shift ``n`` so that the absolute next point is
``y + n * T``. Vertices are ``(sheet, i, j, n)`` for a piece running from
``c_{sheet,i}`` to ``c_{sheet+1,j} + n T`` with ``|n|_inf <= radius``.
"""

import itertools
import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from anti_orbits.config import CriticalPointConfig
from anti_orbits.dls.critical import find_critical_point
from anti_orbits.dls.fields import Box, Potential
from anti_orbits.dls.system import DLSystem, EdgeData, LagrangianPiece, intersect
from anti_orbits.errors import CodeFormatError, CriticalPointError, ModelInvariantError
from anti_orbits.symbolic.codes import Code
from anti_orbits.symbolic.graph import Edge, TransitionGraph

logger = logging.getLogger(__name__)

Vertex = tuple[int, int, int, tuple[int, ...]]
PieceFactory = Callable[[int, int, int, tuple[int, ...]], LagrangianPiece]

_DEDUP_TOLERANCE = 1e-8


@dataclass(frozen=True, eq=False)
class LatticeLift:
    sheets: tuple[np.ndarray, ...]
    period: np.ndarray
    radius: int

    @property
    def dim(self) -> int:
        return int(self.period.size)

    def next_sheet(self, sheet: int) -> int:
        return (sheet + 1) % len(self.sheets)

    def crit(self, sheet: int, index: int) -> np.ndarray:
        return self.sheets[sheet][index]

    def shifts(self) -> list[tuple[int, ...]]:
        span = range(-self.radius, self.radius + 1)
        return [tuple(n) for n in itertools.product(span, repeat=self.dim)]

    def vertices(self) -> list[Vertex]:
        out: list[Vertex] = []
        for s, crits in enumerate(self.sheets):
            t = self.next_sheet(s)
            for i in range(len(crits)):
                for j in range(len(self.sheets[t])):
                    out.extend((s, i, j, n) for n in self.shifts())
        return out

    def domain(self, sheet: int, index: int, cap: float) -> Box:
        """Box around a critical point reaching at most halfway to any other lifted critical point."""
        c = self.crit(sheet, index)
        nearest = np.inf
        for k, other in enumerate(self.sheets[sheet]):
            for n in itertools.product((-1, 0, 1), repeat=self.dim):
                if k == index and not any(n):
                    continue
                nearest = min(nearest, float(np.max(np.abs(other + np.asarray(n) * self.period - c))))
        return Box.around(c, min(cap, 0.5 * nearest))

    def locate(self, sheet: int, point: np.ndarray) -> tuple[int, tuple[int, ...]]:
        """Nearest lifted critical point ``c_{sheet,i} + cell * T`` of an absolute point."""
        best: tuple[float, int, tuple[int, ...]] | None = None
        for i, c in enumerate(self.sheets[sheet]):
            cell = np.rint((point - c) / self.period).astype(int)
            distance = float(np.max(np.abs(point - c - cell * self.period)))
            if best is None or distance < best[0]:
                best = (distance, i, tuple(int(v) for v in cell))
        assert best is not None
        return best[1], best[2]


def lifted_edge_id(src: Vertex, dst: Vertex) -> tuple[Vertex, Vertex]:
    return (src, dst)


def build_lifted_system(
    lift: LatticeLift,
    factory: PieceFactory,
    config: CriticalPointConfig,
    name: str,
) -> DLSystem:
    """Pieces for every vertex, edges ``(s,i,j,n) -> (s+1,j,l,n')``; one critical point per (sheet, crit)."""
    vertices = lift.vertices()
    pieces = {v: factory(*v) for v in vertices}
    by_start: dict[tuple[int, int], list[Vertex]] = {}
    for v in vertices:
        by_start.setdefault((v[0], v[1]), []).append(v)

    edges: list[Edge] = []
    edge_data: dict[tuple[Vertex, Vertex], EdgeData] = {}
    fundamental: list[tuple[Vertex, Vertex]] = []
    shared: dict[tuple[int, int], EdgeData] = {}
    for src in vertices:
        s, _, j, _ = src
        t = lift.next_sheet(s)
        for dst in by_start[(t, j)]:
            eid = lifted_edge_id(src, dst)
            edges.append(Edge(eid, src, dst))
            key = (t, j)
            if key not in shared:
                shared[key] = find_critical_point(
                    (pieces[src], pieces[dst]),
                    lift.crit(t, j),
                    domain=intersect(pieces[src].domain_plus, pieces[dst].domain_minus),
                    config=config,
                )
                fundamental.append(eid)
            edge_data[eid] = shared[key].retagged(eid, src, dst)

    graph = TransitionGraph(tuple(vertices), tuple(edges))
    logger.info("lift.build name=%s vertices=%d edges=%d radius=%d", name, len(vertices), len(edges), lift.radius)
    return DLSystem(
        graph=graph,
        pieces=pieces,
        edge_data=edge_data,
        name=name,
        fundamental_edges=tuple(fundamental),
        lift=lift,
    )


def critical_points(
    potential: Potential,
    seeds: Sequence[np.ndarray | float],
    config: CriticalPointConfig,
    period: np.ndarray,
) -> np.ndarray:
    """Distinct nondegenerate critical points reached from ``seeds``; failed seeds are skipped."""
    found: list[np.ndarray] = []
    for seed in seeds:
        try:
            data = find_critical_point(potential, seed, config=config)
        except CriticalPointError as exc:
            logger.info("lift.seed_rejected seed=%s reason=%s", np.atleast_1d(seed).tolist(), exc)
            continue
        point = data.point
        if any(np.max(np.abs(np.mod(point - f + period / 2, period) - period / 2)) < _DEDUP_TOLERANCE for f in found):
            continue
        found.append(point)
    if not found:
        raise ModelInvariantError("anti-integrability", "model not anti-integrable")
    return np.asarray(found)


def code_from_points(
    system: DLSystem,
    points: np.ndarray,
    periodic: bool,
    *,
    winding: Sequence[int] | int = 0,
    first_sheet: int = 0,
) -> tuple[Code, tuple[int, ...]]:
    """Code of the lifted critical points nearest to absolute ``points``; also returns the first cell.

    Windows get zero-shift pieces before the first and after the last slot.
    Periodic codes close up with ``x_{i+p} = x_i + winding * T``.
    """
    lift: LatticeLift = system.lift
    pts = np.asarray(points, dtype=float).reshape(len(points), lift.dim)
    sheets = [(first_sheet + k) % len(lift.sheets) for k in range(len(pts))]
    located = [lift.locate(s, p) for s, p in zip(sheets, pts)]
    crits = [i for i, _ in located]
    cells = [np.asarray(cell) for _, cell in located]
    if periodic and len(pts) % len(lift.sheets):
        raise CodeFormatError("periodic codes must visit every sheet equally often")

    def shift(delta: np.ndarray) -> tuple[int, ...]:
        if np.max(np.abs(delta)) > lift.radius:
            raise CodeFormatError("shift exceeds translation radius")
        return tuple(int(v) for v in delta)

    n = len(pts)
    after: list[Vertex] = []
    for k in range(n):
        if k + 1 < n:
            after.append((sheets[k], crits[k], crits[k + 1], shift(cells[k + 1] - cells[k])))
        elif periodic:
            wind = np.broadcast_to(np.asarray(winding, dtype=int), (lift.dim,))
            after.append((sheets[k], crits[k], crits[0], shift(cells[0] + wind - cells[k])))
        else:
            after.append((sheets[k], crits[k], 0, tuple([0] * lift.dim)))
    if periodic:
        before = [after[-1], *after[:-1]]
    else:
        previous_sheet = (sheets[0] - 1) % len(lift.sheets)
        pad = (previous_sheet, 0, crits[0], tuple([0] * lift.dim))
        before = [pad, *after[:-1]]
    edges = tuple(lifted_edge_id(b, a) for b, a in zip(before, after))
    return Code(edges, periodic=periodic), tuple(int(v) for v in cells[0])


def unfold(system: DLSystem, code: Code, points: np.ndarray, base: Sequence[int] | None = None) -> np.ndarray:
    """Absolute positions of fundamental-coordinate ``points`` along ``code``."""
    lift: LatticeLift = system.lift
    cell = np.zeros(lift.dim, dtype=int) if base is None else np.asarray(base, dtype=int)
    out = np.array(points, dtype=float).reshape(len(code), lift.dim)
    for k, eid in enumerate(code.edges):
        out[k] = out[k] + cell * lift.period
        cell = cell + np.asarray(system.graph.edge(eid).dst[3], dtype=int)
    return out


def winding_of(system: DLSystem, code: Code) -> np.ndarray:
    """Total cell shift over one period of a periodic code."""
    total = np.zeros(system.lift.dim, dtype=int)
    for eid in code.edges:
        total = total + np.asarray(system.graph.edge(eid).dst[3], dtype=int)
    return total


def random_lifted_code(system: DLSystem, rng: np.random.Generator, length: int, *, max_shift: int = 1) -> Code:
    """Random window code with cell shifts bounded by ``max_shift``."""
    lift: LatticeLift = system.lift
    max_shift = min(max_shift, lift.radius)
    sheet = int(rng.integers(len(lift.sheets)))
    cell = np.zeros(lift.dim, dtype=int)
    points = []
    for k in range(length):
        s = (sheet + k) % len(lift.sheets)
        i = int(rng.integers(len(lift.sheets[s])))
        if k:
            cell = cell + rng.integers(-max_shift, max_shift + 1, size=lift.dim)
        points.append(lift.crit(s, i) + cell * lift.period)
    code, _ = code_from_points(system, np.asarray(points), periodic=False, first_sheet=sheet)
    return code
