import logging
from dataclasses import dataclass

import numpy as np

from anti_orbits.dls.shadow import Orbit, code_residual, neighbours
from anti_orbits.dls.system import DLSystem
from anti_orbits.errors import NotConvergedError
from anti_orbits.standard_map.params import StandardMapParams
from anti_orbits.standard_map.shadowing import lagrangian_residual

logger = logging.getLogger(__name__)

CONVERGED_RESIDUAL = 1e-9


@dataclass(frozen=True, eq=False)
class VariationalBlocks:
    """Blocks of G_{i-} u_{i-1} + G_i u_i + G_{i+} u_{i+1} = 0 and of u_i = P u_{i-1} + Q u_i + R u_{i+1}.

    Arrays have shape ``(len(indices), m, m)``; entry ``k`` belongs to slot ``indices[k]``.
    """

    indices: tuple[int, ...]
    g_minus: np.ndarray
    g_center: np.ndarray
    g_plus: np.ndarray
    p: np.ndarray
    q: np.ndarray
    r: np.ndarray
    length: int
    periodic: bool

    @property
    def dim(self) -> int:
        return int(self.g_center.shape[1])

    @property
    def norm_bound(self) -> float:
        """max over slots of |P|, |Q|, |R|."""
        if not self.indices:
            return 0.0
        stacked = np.concatenate([self.p, self.q, self.r])
        return float(max(np.linalg.norm(b, 2) for b in stacked))

    @property
    def degenerate(self) -> bool:
        return not (np.any(self.p) or np.any(self.q) or np.any(self.r))

    def position(self, slot: int) -> int:
        """Row of ``slot`` (taken cyclically for periodic orbits)."""
        key = slot % self.length if self.periodic else slot
        try:
            return self.indices.index(key)
        except ValueError:
            raise IndexError(f"no variational blocks at slot {slot}") from None


def _assemble(
    indices: list[int],
    g_minus: list[np.ndarray],
    g_center: list[np.ndarray],
    g_plus: list[np.ndarray],
    d2psi: list[np.ndarray],
    length: int,
    periodic: bool,
) -> VariationalBlocks:
    ps, qs, rs = [], [], []
    for gm, gc, gp, h in zip(g_minus, g_center, g_plus, d2psi):
        d = np.linalg.inv(h)
        # couplings carry every mixed term, so U_{i-} = G_{i-}, U_{i+} = G_{i+}
        ps.append(-d @ gm)
        qs.append(-d @ (gc - h))
        rs.append(-d @ gp)
    return VariationalBlocks(
        indices=tuple(indices),
        g_minus=np.asarray(g_minus),
        g_center=np.asarray(g_center),
        g_plus=np.asarray(g_plus),
        p=np.asarray(ps),
        q=np.asarray(qs),
        r=np.asarray(rs),
        length=length,
        periodic=periodic,
    )


def variational_blocks(orbit: Orbit, system: DLSystem | StandardMapParams) -> VariationalBlocks:
    """Second derivatives of the action along ``orbit`` at every free slot."""
    if isinstance(system, StandardMapParams):
        return standard_blocks(orbit, system)
    code = orbit.code
    res = code_residual(code, system, orbit.points)
    if res > CONVERGED_RESIDUAL:
        raise NotConvergedError("orbit not converged")
    before, after = system.slot_pieces(code)
    n = orbit.length
    indices, gm, gc, gp, d2psi = [], [], [], [], []
    for i in code.free_slots():
        lo, hi = neighbours(n, i, code.periodic)
        x_prev, x, x_next = orbit.points[lo], orbit.points[i], orbit.points[hi]
        _, hxy_b, hyy_b = before[i].hess(x_prev, x)
        hxx_a, hxy_a, _ = after[i].hess(x, x_next)
        indices.append(i)
        gm.append(hxy_b.T)
        gc.append(hyy_b + hxx_a)
        gp.append(hxy_a)
        d2psi.append(np.atleast_2d(system.edge(code.edges[i]).psi.hess(x)))
    blocks = _assemble(indices, gm, gc, gp, d2psi, n, code.periodic)
    logger.info("hyperbolicity.blocks system=%s slots=%d norm_bound=%.3e", system.name, len(indices), blocks.norm_bound)
    return blocks


def standard_blocks(orbit: Orbit, params: StandardMapParams) -> VariationalBlocks:
    """Closed form for L = (x' - x)^2 / (2 lambda) - cos x': G_{i+-} = -1/lambda, G_i = 2/lambda + cos x_i."""
    code = orbit.code
    x = orbit.x
    if lagrangian_residual(code, x, params.coupling) > CONVERGED_RESIDUAL * abs(params.coupling):
        raise NotConvergedError("orbit not converged")
    lam = params.coupling
    indices = list(code.free_slots())
    eye = np.eye(1)
    gm = [-eye / lam for _ in indices]
    gp = [-eye / lam for _ in indices]
    gc = [(2.0 / lam + np.cos(x[i])) * eye for i in indices]
    d2psi = [np.cos(x[i]) * eye for i in indices]
    return _assemble(indices, gm, gc, gp, d2psi, orbit.length, code.periodic)


def predict_next(blocks: VariationalBlocks, k: int, u_prev: np.ndarray, u: np.ndarray) -> np.ndarray:
    """u_{i+1} from the G-form at row ``k``."""
    return -np.linalg.solve(blocks.g_plus[k], blocks.g_minus[k] @ u_prev + blocks.g_center[k] @ u)


def predict_next_pqr(blocks: VariationalBlocks, k: int, u_prev: np.ndarray, u: np.ndarray) -> np.ndarray:
    """u_{i+1} from R u_{i+1} = (I - Q) u_i - P u_{i-1}."""
    m = blocks.dim
    rhs = (np.eye(m) - blocks.q[k]) @ u - blocks.p[k] @ u_prev
    return np.linalg.solve(blocks.r[k], rhs)


def consistency_error(blocks: VariationalBlocks, rng: np.random.Generator, samples: int = 5) -> float:
    """Largest relative disagreement of the G-form and PQR-form predictions of u_{i+1}."""
    worst = 0.0
    for k in range(len(blocks.indices)):
        for _ in range(samples):
            u_prev, u = rng.standard_normal(blocks.dim), rng.standard_normal(blocks.dim)
            g = predict_next(blocks, k, u_prev, u)
            pqr = predict_next_pqr(blocks, k, u_prev, u)
            worst = max(worst, float(np.max(np.abs(g - pqr))) / max(1.0, float(np.max(np.abs(g)))))
    return worst
