"""Lagrangian model of the separatrix map.

A piece ``kappa = (k, sigma, theta)`` runs from a point ``x`` near the
``sigma`` loop to the next point ``x+`` after a downward jump of ``k``
periods:

    L_kappa(x, x+) = theta * exp(lam * (x+ - x - k - omega_hat[sigma])) + V_sigma(x).

Consecutive pieces chain when ``sigma' = sigma * theta``. Points are kept in
the fundamental cell; ``unfold_path`` restores the absolute positions.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from anti_orbits.config import CriticalPointConfig, ShadowConfig
from anti_orbits.dls.critical import find_critical_point
from anti_orbits.dls.fields import Box, Coupling, Potential
from anti_orbits.dls.shadow import Orbit
from anti_orbits.dls.system import DLSystem, EdgeData, LagrangianPiece
from anti_orbits.dls.uniformity import uniformity_report
from anti_orbits.errors import CodeFormatError, ModelInvariantError
from anti_orbits.models.lifting import critical_points
from anti_orbits.symbolic.codes import Code
from anti_orbits.symbolic.graph import Edge, TransitionGraph

logger = logging.getLogger(__name__)

SIGNS = (-1, 1)
_DOMAIN_CAP = 0.25

Label = tuple[int, int, int]


@dataclass(frozen=True, eq=False)
class SepMapSpec:
    """``potentials`` and ``omega_hat`` are indexed by ``sigma = -1, +1`` in that order."""

    exponent: float
    potentials: tuple[Potential, Potential]
    seeds: tuple[Sequence[float], Sequence[float]]
    min_jump: int
    max_jump: int | None = None
    omega_hat: tuple[float, float] = (0.0, 0.0)
    period: float = 1.0
    exponential: bool = True
    name: str = "sepmap"

    def potential(self, sigma: int) -> Potential:
        return self.potentials[SIGNS.index(sigma)]

    def phase(self, sigma: int) -> float:
        return self.omega_hat[SIGNS.index(sigma)]

    @property
    def jumps(self) -> range:
        top = self.min_jump + 10 if self.max_jump is None else self.max_jump
        return range(self.min_jump, top + 1)


@dataclass(frozen=True)
class SepMapLift:
    """Critical points of ``V_sigma`` in the fundamental cell, and the jump range."""

    crits: dict[int, np.ndarray]
    jumps: range
    period: float


def exponential_coupling(exponent: float, theta: int, jump: int, phase: float) -> Coupling:
    lam = float(exponent)

    def term(x: np.ndarray, y: np.ndarray) -> float:
        return theta * math.exp(lam * (float(y[0]) - float(x[0]) - jump - phase))

    def value(x: np.ndarray, y: np.ndarray) -> float:
        return term(x, y)

    def grad(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        t = lam * term(x, y)
        return np.array([-t]), np.array([t])

    def hess(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        t = lam * lam * term(x, y)
        return np.array([[t]]), np.array([[-t]]), np.array([[t]])

    return Coupling(dim=1, value=value, grad=grad, hess=hess, name="exp")


def _check_spec(spec: SepMapSpec) -> None:
    if not spec.exponent > 0:
        raise ModelInvariantError("splitting exponent", "lambda must be positive")
    if spec.min_jump < 1:
        raise ModelInvariantError("minimum jump", "minimum jump must be >= 1")
    if len(spec.jumps) == 0:
        raise ModelInvariantError("jump range", "max_jump must be >= min_jump")


def _cell(points: np.ndarray, period: float) -> np.ndarray:
    wrapped = points - period * np.floor(points / period + 1e-9)
    return np.sort(wrapped, axis=0)


def make_sepmap(
    spec: SepMapSpec,
    *,
    config: CriticalPointConfig | None = None,
    shadow_config: ShadowConfig | None = None,
    check: bool = True,
) -> DLSystem:
    """Pieces over ``jumps x {+-1} x {+-1}``; one edge per critical point of ``V_{sigma'}``.

    With ``check`` the sampled uniformity report must hold, otherwise the
    minimum jump is too small for the splitting exponent.
    """
    _check_spec(spec)
    config = config or CriticalPointConfig.from_settings()
    period = np.array([float(spec.period)])
    crits = {
        s: _cell(critical_points(spec.potential(s), [np.array([v]) for v in spec.seeds[SIGNS.index(s)]], config, period), spec.period)
        for s in SIGNS
    }
    lift = SepMapLift(crits=crits, jumps=spec.jumps, period=spec.period)
    cell = Box(np.array([0.5 * spec.period]), np.array([0.75 * spec.period]))

    vertices: list[Label] = [(k, s, t) for k in lift.jumps for s in SIGNS for t in SIGNS]
    pieces: dict[Label, LagrangianPiece] = {}
    for k, s, t in vertices:
        coupling = exponential_coupling(spec.exponent, t, k, spec.phase(s)) if spec.exponential else Coupling.zero(1)
        pieces[(k, s, t)] = LagrangianPiece(
            index=(k, s, t),
            v_minus=spec.potential(s),
            v_plus=Potential.zero(1),
            coupling=coupling,
            domain_minus=cell,
            domain_plus=cell,
        )

    shared: dict[tuple[int, int], EdgeData] = {}
    for s in SIGNS:
        points = crits[s]
        for c, point in enumerate(points):
            gaps = [abs(point[0] - other[0] - n * spec.period) for other in points for n in (-1, 0, 1)]
            nearest = min(g for g in gaps if g > 1e-12)
            domain = Box.around(point, min(_DOMAIN_CAP * spec.period, 0.5 * nearest, config.radius_cap))
            shared[(s, c)] = find_critical_point(spec.potential(s), point, domain=domain, config=config)

    edges: list[Edge] = []
    edge_data: dict[tuple[Label, Label, int], EdgeData] = {}
    fundamental: list[tuple[Label, Label, int]] = []
    for src in vertices:
        s_next = src[1] * src[2]
        for dst in vertices:
            if dst[1] != s_next:
                continue
            for c in range(len(crits[s_next])):
                eid = (src, dst, c)
                edges.append(Edge(eid, src, dst))
                edge_data[eid] = shared[(s_next, c)].retagged(eid, src, dst)
    seen: set[tuple[int, int]] = set()
    for eid in edge_data:
        key = (eid[1][1], eid[2])
        if key not in seen:
            seen.add(key)
            fundamental.append(eid)

    system = DLSystem(
        graph=TransitionGraph(tuple(vertices), tuple(edges)),
        pieces=pieces,
        edge_data=edge_data,
        name=spec.name,
        fundamental_edges=tuple(fundamental),
        lift=lift,
    )
    logger.info(
        "sepmap.build name=%s lambda=%g jumps=%d..%d vertices=%d edges=%d",
        spec.name,
        spec.exponent,
        lift.jumps.start,
        lift.jumps.stop - 1,
        len(vertices),
        len(edges),
    )
    if check:
        report = uniformity_report(system, shadow_config)
        if not report.satisfied:
            logger.warning("sepmap.not_uniform min_jump=%d bound=%.3e sigma=%.3e", spec.min_jump, report.contraction_bound, report.sigma)
            raise ModelInvariantError("uniform anti-integrability", "minimum jump too small: uniformity condition fails")
    return system


def code_from_path(
    system: DLSystem,
    sigmas: Sequence[int],
    crits: Sequence[int],
    jumps: Sequence[int],
    periodic: bool,
) -> Code:
    """Code of a simple path: slot ``j`` sits at critical point ``crits[j]`` of ``V_{sigmas[j]}``.

    ``jumps[j]`` is the downward jump from slot ``j`` to ``j + 1``; periodic
    paths need one jump per slot, windows one fewer.
    """
    lift: SepMapLift = system.lift
    n = len(sigmas)
    if len(crits) != n or n == 0:
        raise CodeFormatError("sigmas and crits must have the same nonzero length")
    expected = n if periodic else n - 1
    if len(jumps) != expected:
        raise CodeFormatError(f"expected {expected} jumps, got {len(jumps)}")
    for s, c in zip(sigmas, crits):
        if s not in SIGNS:
            raise CodeFormatError("sigma labels must be -1 or +1")
        if not 0 <= c < len(lift.crits[s]):
            raise CodeFormatError(f"no critical point {c} for sigma={s}")
    for k in jumps:
        if k not in lift.jumps:
            raise CodeFormatError(f"jump {k} outside {lift.jumps.start}..{lift.jumps.stop - 1}")

    after: list[Label] = []
    for j in range(n):
        if j + 1 < n:
            after.append((int(jumps[j]), int(sigmas[j]), int(sigmas[j] * sigmas[j + 1])))
        elif periodic:
            after.append((int(jumps[j]), int(sigmas[j]), int(sigmas[j] * sigmas[0])))
        else:
            pad = int(jumps[-1]) if jumps else lift.jumps.start
            after.append((pad, int(sigmas[j]), 1))
    if periodic:
        before = [after[-1], *after[:-1]]
    else:
        first = int(jumps[0]) if jumps else lift.jumps.start
        before = [(first, int(sigmas[0]), 1), *after[:-1]]
    return Code(tuple((b, a, int(c)) for b, a, c in zip(before, after, crits)), periodic=periodic)


def random_path(
    system: DLSystem,
    rng: np.random.Generator,
    length: int,
    *,
    periodic: bool = False,
) -> Code:
    lift: SepMapLift = system.lift
    sigmas = [int(rng.choice(SIGNS)) for _ in range(length)]
    crits = [int(rng.integers(len(lift.crits[s]))) for s in sigmas]
    count = length if periodic else length - 1
    jumps = [int(rng.integers(lift.jumps.start, lift.jumps.stop)) for _ in range(count)]
    return code_from_path(system, sigmas, crits, jumps, periodic)


def sepmap_labels(code: Code) -> tuple[list[int], list[int], list[int]]:
    """``(sigma_j, theta_j, k_j)`` per slot, read off the pieces around each slot."""
    sigmas = [int(eid[1][1]) for eid in code.edges]
    thetas = [int(eid[0][2]) for eid in code.edges]
    jumps = [int(eid[1][0]) for eid in code.edges]
    return sigmas, thetas, jumps


def unfold_path(code: Code, points: np.ndarray, start: float = 0.0) -> np.ndarray:
    """Absolute positions ``X_{j+1} = X_j + x_{j+1} - x_j - k_j``."""
    x = np.asarray(points, dtype=float).reshape(-1)
    _, _, jumps = sepmap_labels(code)
    out = np.empty_like(x)
    out[0] = x[0] + start
    for j in range(1, len(x)):
        out[j] = out[j - 1] + x[j] - x[j - 1] - jumps[j - 1]
    return out


@dataclass(frozen=True)
class GeneratingDefect:
    momentum: float
    position: float
    signs_ok: bool

    @property
    def worst(self) -> float:
        return max(self.momentum, self.position) if self.signs_ok else math.inf


def sepmap_generating_defect(orbit: Orbit, system: DLSystem, spec: SepMapSpec) -> GeneratingDefect:
    """Check ``y+ = y + lam V'_sigma(x)``, the log relation for ``x+`` and ``sign y+ = sigma sigma+``.

    ``y`` at slot ``j`` is ``lam * d/dx_j L_{j-1}`` computed from the pieces.
    """
    code = orbit.code
    lam = spec.exponent
    x = orbit.points[:, 0]
    n = len(code)
    sigmas, thetas, jumps = sepmap_labels(code)
    before, after = system.slot_pieces(code)

    def momentum_in(j: int) -> float:
        prev = (j - 1) % n
        _, gy = before[j].grad(orbit.points[prev], orbit.points[j])
        return lam * float(gy[0])

    slots = range(n) if code.periodic else range(1, n - 1)
    worst_momentum = 0.0
    worst_position = 0.0
    signs_ok = True
    for j in slots:
        nxt = (j + 1) % n
        y = momentum_in(j)
        y_next = momentum_in(nxt)
        v_prime = float(spec.potential(sigmas[j]).grad(orbit.points[j])[0])
        worst_momentum = max(worst_momentum, abs(y_next - y - lam * v_prime))
        if y_next == 0.0:
            signs_ok = False
            continue
        predicted = x[j] + jumps[j] + spec.phase(sigmas[j]) + (math.log(abs(y_next)) - math.log(lam * lam)) / lam
        worst_position = max(worst_position, abs(x[nxt] - predicted))
        if int(math.copysign(1, y_next)) != sigmas[j] * sigmas[nxt] or thetas[nxt] != sigmas[j] * sigmas[nxt]:
            signs_ok = False
    defect = GeneratingDefect(worst_momentum, worst_position, signs_ok)
    logger.info(
        "sepmap.generating_defect momentum=%.3e position=%.3e signs_ok=%s",
        defect.momentum,
        defect.position,
        defect.signs_ok,
    )
    return defect
