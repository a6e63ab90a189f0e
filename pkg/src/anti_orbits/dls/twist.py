from dataclasses import dataclass

import numpy as np

from anti_orbits.dls.system import LagrangianPiece

DEGENERACY_RATIO = 1e-12


@dataclass(frozen=True, eq=False)
class TwistMatrix:
    matrix: np.ndarray
    nondegenerate: bool


def twist_matrix(piece: LagrangianPiece, x: np.ndarray, y: np.ndarray) -> TwistMatrix:
    """B(x, y) = d_x d_y L(x, y); nondegenerate iff |det B| > 1e-12 |B|^m."""
    _, hxy, _ = piece.hess(np.atleast_1d(x), np.atleast_1d(y))
    b = np.atleast_2d(hxy)
    norm = float(np.linalg.norm(b, 2))
    det = abs(float(np.linalg.det(b)))
    return TwistMatrix(matrix=b, nondegenerate=norm > 0 and det > DEGENERACY_RATIO * norm ** b.shape[0])
