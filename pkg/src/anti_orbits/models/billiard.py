"""Billiard in a wide periodic strip ``f1(x) <= y <= d + f2(x)``.

Impacts alternate between the lower wall (sheet 0) and the upper wall
(sheet 1). Both pieces use the exact chord length

    L(x, y) = sqrt((y - x)^2 + h^2),  h = d + a(x) + b(y),

with ``(a, b) = (-f1, f2)`` going up and ``(f2, -f1)`` going down. The
uncoupled split keeps ``V^- = d + a`` and ``V^+ = b``, so the edge potential
on a wall is ``d - 2 f1`` or ``d + 2 f2`` and the chord correction is the
coupling.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from anti_orbits.config import CriticalPointConfig, get_settings
from anti_orbits.dls.fields import Box, Coupling, Potential
from anti_orbits.dls.shadow import Orbit
from anti_orbits.dls.system import DLSystem, LagrangianPiece
from anti_orbits.errors import ModelInvariantError
from anti_orbits.models.lifting import (
    LatticeLift,
    build_lifted_system,
    code_from_points,
    critical_points,
    unfold,
    winding_of,
)
from anti_orbits.symbolic.codes import Code

logger = logging.getLogger(__name__)

LOWER = 0
UPPER = 1
_WIDTH_SAMPLES = 512


@dataclass(frozen=True, eq=False)
class StripBilliardSpec:
    lower: Potential
    upper: Potential
    width: float
    lower_seeds: Sequence[float]
    upper_seeds: Sequence[float]
    period: float = 1.0
    name: str = "strip-billiard"

    def wall(self, sheet: int) -> Potential:
        return self.lower if sheet == LOWER else self.upper

    def impact(self, sheet: int, x: float) -> np.ndarray:
        """Impact point on the lower wall ``(x, f1(x))`` or the upper wall ``(x, d + f2(x))``."""
        arg = np.array([x])
        if sheet == LOWER:
            return np.array([x, self.lower.value(arg)])
        return np.array([x, self.width + self.upper.value(arg)])


def check_width(spec: StripBilliardSpec) -> float:
    """Largest sampled ``|f_i| + 1``; must stay below ``d / 4``."""
    if not spec.width > 0:
        raise ModelInvariantError("wide strip", "strip width must be positive")
    grid = np.linspace(0.0, spec.period, _WIDTH_SAMPLES, endpoint=False)
    worst = max(abs(w.value(np.array([x]))) for w in (spec.lower, spec.upper) for x in grid) + 1.0
    if not worst < spec.width / 4:
        raise ModelInvariantError("wide strip", f"strip too narrow: |f| + 1 = {worst:.3g} >= d/4 = {spec.width / 4:.3g}")
    return worst


def chord_length(a: Potential, b: Potential, width: float, shift: float) -> Coupling:
    """Free-flight length between impacts at abscissae ``x`` and ``y + shift``.

    The vertical gap is ``h = width + a(x) + b(y)``; ``a`` and ``b`` are the signed
    wall profiles of the departure and arrival walls.
    """

    def parts(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float, float, float]:
        dx = float(y[0]) + shift - float(x[0])
        h = width + a.value(x) + b.value(y)
        return dx, h, float(a.grad(x)[0]), float(b.grad(y)[0]), float(a.hess(x)[0, 0]), float(b.hess(y)[0, 0])

    def value(x: np.ndarray, y: np.ndarray) -> float:
        dx, h, *_ = parts(x, y)
        return math.hypot(dx, h)

    def grad(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        dx, h, da, db, _, _ = parts(x, y)
        length = math.hypot(dx, h)
        return np.array([(-dx + h * da) / length]), np.array([(dx + h * db) / length])

    def hess(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        dx, h, da, db, dda, ddb = parts(x, y)
        length = math.hypot(dx, h)
        gx, gy = -dx + h * da, dx + h * db
        gxx = 1 + da * da + h * dda
        gxy = -1 + da * db
        gyy = 1 + db * db + h * ddb
        l3 = length**3
        return (
            np.array([[gxx / length - gx * gx / l3]]),
            np.array([[gxy / length - gx * gy / l3]]),
            np.array([[gyy / length - gy * gy / l3]]),
        )

    return Coupling(dim=1, value=value, grad=grad, hess=hess, name="chord")


def distance_coupling(dim: int) -> Coupling:
    """u(x, y) = |x - y|, the free-flight length between impacts in the plane."""

    def value(x: np.ndarray, y: np.ndarray) -> float:
        return float(np.linalg.norm(x - y))

    def grad(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        d = x - y
        unit = d / np.linalg.norm(d)
        return unit, -unit

    def hess(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        d = x - y
        r = float(np.linalg.norm(d))
        unit = d / r
        block = (np.eye(dim) - np.outer(unit, unit)) / r
        return block, -block, block.copy()

    return Coupling(dim=dim, value=value, grad=grad, hess=hess, name="distance")


def distance_piece(dim: int, reach: float = 10.0) -> LagrangianPiece:
    zero = Potential.zero(dim)
    box = Box.around(np.zeros(dim), reach)
    return LagrangianPiece(
        index="distance",
        v_minus=zero,
        v_plus=zero,
        coupling=distance_coupling(dim),
        domain_minus=box,
        domain_plus=box,
    )


def make_strip_billiard(
    spec: StripBilliardSpec,
    *,
    radius: int | None = None,
    config: CriticalPointConfig | None = None,
) -> DLSystem:
    config = config or CriticalPointConfig.from_settings()
    radius = get_settings().translation_radius if radius is None else radius
    check_width(spec)
    period = np.array([float(spec.period)])
    lower_crits = critical_points(spec.lower, [np.array([s]) for s in spec.lower_seeds], config, period)
    upper_crits = critical_points(spec.upper, [np.array([s]) for s in spec.upper_seeds], config, period)
    lift = LatticeLift(
        sheets=(_sorted_cell(lower_crits, spec.period), _sorted_cell(upper_crits, spec.period)),
        period=period,
        radius=radius,
    )
    down = spec.lower.scaled(-1.0)
    cap = config.radius_cap
    d = float(spec.width)

    def piece(s: int, i: int, j: int, n: tuple[int, ...]) -> LagrangianPiece:
        a, b = (down, spec.upper) if s == LOWER else (spec.upper, down)
        v_minus = a.scaled(1.0, d)
        exact = chord_length(a, b, d, n[0] * spec.period)
        return LagrangianPiece(
            index=(s, i, j, n),
            v_minus=v_minus,
            v_plus=b,
            coupling=Coupling.remainder(exact, v_minus, b),
            domain_minus=lift.domain(s, i, cap),
            domain_plus=lift.domain(lift.next_sheet(s), j, cap),
            exact=exact,
        )

    logger.info(
        "billiard.build name=%s width=%g lower_crits=%d upper_crits=%d radius=%d",
        spec.name,
        d,
        len(lower_crits),
        len(upper_crits),
        radius,
    )
    return build_lifted_system(lift, piece, config, spec.name)


def _sorted_cell(points: np.ndarray, period: float) -> np.ndarray:
    wrapped = points - period * np.floor(points / period + 1e-9)
    return np.sort(wrapped, axis=0)


def billiard_code(
    system: DLSystem,
    xs: Sequence[float],
    periodic: bool,
    *,
    winding: int = 0,
    first_wall: int = LOWER,
) -> tuple[Code, tuple[int, ...]]:
    """Code of the bounce sequence nearest to the abscissae ``xs``, starting on ``first_wall``."""
    return code_from_points(
        system,
        np.asarray(xs, dtype=float).reshape(-1, 1),
        periodic,
        winding=winding,
        first_sheet=first_wall,
    )


def _angle(tangent: np.ndarray, v: np.ndarray) -> float:
    cross = tangent[0] * v[1] - tangent[1] * v[0]
    return math.atan2(cross, float(tangent @ v))


def reflection_defect(
    xs: Sequence[float],
    walls: Sequence[int],
    spec: StripBilliardSpec,
    periodic: bool,
    *,
    winding: int = 0,
) -> float:
    """sup over impacts of |angle_in + angle_out| measured against the wall tangent.

    ``xs`` are absolute abscissae; a periodic sequence repeats with shift
    ``winding * period``. Windows skip their two end points.
    """
    x = [float(v) for v in xs]
    n = len(x)
    if len(walls) != n:
        raise ValueError("one wall label per impact")
    shift = winding * spec.period
    points = [spec.impact(w, v) for w, v in zip(walls, x)]
    slots = range(n) if periodic else range(1, n - 1)
    worst = 0.0
    for k in slots:
        if periodic:
            prev = points[k - 1] if k > 0 else spec.impact(walls[-1], x[-1] - shift)
            nxt = points[k + 1] if k + 1 < n else spec.impact(walls[0], x[0] + shift)
        else:
            prev, nxt = points[k - 1], points[k + 1]
        slope = float(spec.wall(walls[k]).grad(np.array([x[k]]))[0])
        tangent = np.array([1.0, slope]) / math.hypot(1.0, slope)
        theta_in = _angle(tangent, points[k] - prev)
        theta_out = _angle(tangent, nxt - points[k])
        worst = max(worst, abs(theta_in + theta_out))
    return worst


def orbit_walls(system: DLSystem, code: Code) -> list[int]:
    return [int(system.graph.edge(e).dst[0]) for e in code.edges]


def reflection_check(
    orbit: Orbit,
    system: DLSystem,
    spec: StripBilliardSpec,
    base: Sequence[int] | None = None,
    *,
    points: np.ndarray | None = None,
) -> float:
    """Geometric reflection-law defect of an orbit (or of ``points`` along its code)."""
    code = orbit.code
    xs = unfold(system, code, orbit.points if points is None else points, base)[:, 0]
    winding = int(winding_of(system, code)[0]) if code.periodic else 0
    defect = reflection_defect(xs, orbit_walls(system, code), spec, code.periodic, winding=winding)
    logger.info("billiard.reflection_check length=%d defect=%.3e", len(code), defect)
    return defect
