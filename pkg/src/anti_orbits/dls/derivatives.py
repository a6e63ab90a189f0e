"""Central finite-difference cross-checks of analytic evaluators."""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from anti_orbits.dls.system import LagrangianPiece

# Truncation O(h^2) and rounding O(1e-16 / h) both stay well below the default pass tolerance of 1e-6 at h = 1e-6.
FD_STEP = 1e-6


@dataclass(frozen=True)
class DerivativeCheck:
    grad_error: float
    hess_error: float
    samples: int

    def passed(self, tolerance: float = 1e-6) -> bool:
        return self.grad_error <= tolerance and self.hess_error <= tolerance


def central_gradient(f: Callable[[np.ndarray], float], z: np.ndarray, step: float) -> np.ndarray:
    out = np.zeros(z.size)
    for j in range(z.size):
        e = np.zeros(z.size)
        e[j] = step
        out[j] = (f(z + e) - f(z - e)) / (2 * step)
    return out


def central_jacobian(f: Callable[[np.ndarray], np.ndarray], z: np.ndarray, step: float) -> np.ndarray:
    columns = []
    for j in range(z.size):
        e = np.zeros(z.size)
        e[j] = step
        columns.append((np.asarray(f(z + e)) - np.asarray(f(z - e))) / (2 * step))
    return np.stack(columns, axis=1)


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    scale = max(1.0, float(np.max(np.abs(analytic))))
    return float(np.max(np.abs(analytic - numeric))) / scale


def check_piece_derivatives(
    piece: LagrangianPiece,
    rng: np.random.Generator,
    samples: int = 100,
    step: float = FD_STEP,
) -> DerivativeCheck:
    """Compare ``piece.grad``/``piece.hess`` with central differences at random domain points."""
    m = piece.dim
    xs = piece.domain_minus.sample(rng, samples)
    ys = piece.domain_plus.sample(rng, samples)
    grad_error = 0.0
    hess_error = 0.0
    for x, y in zip(xs, ys):
        z = np.concatenate([x, y])

        def value(w: np.ndarray) -> float:
            return piece.value(w[:m], w[m:])

        def gradient(w: np.ndarray) -> np.ndarray:
            return np.concatenate(piece.grad(w[:m], w[m:]))

        hxx, hxy, hyy = piece.hess(x, y)
        analytic_hess = np.block([[hxx, hxy], [hxy.T, hyy]])
        grad_error = max(grad_error, relative_error(gradient(z), central_gradient(value, z, step)))
        hess_error = max(hess_error, relative_error(analytic_hess, central_jacobian(gradient, z, step)))
    return DerivativeCheck(grad_error=grad_error, hess_error=hess_error, samples=samples)
