from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

ScalarFn = Callable[[float], float]
VectorValue = Callable[[np.ndarray], float]
VectorGrad = Callable[[np.ndarray], np.ndarray]
VectorHess = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Potential:
    """A C^2 function on R^m with analytic gradient and Hessian."""

    dim: int
    value: VectorValue
    grad: VectorGrad
    hess: VectorHess
    name: str = "potential"

    @classmethod
    def scalar(cls, f: ScalarFn, df: ScalarFn, d2f: ScalarFn, name: str = "potential") -> "Potential":
        return cls(
            dim=1,
            value=lambda x: float(f(float(x[0]))),
            grad=lambda x: np.array([df(float(x[0]))]),
            hess=lambda x: np.array([[d2f(float(x[0]))]]),
            name=name,
        )

    @classmethod
    def zero(cls, dim: int) -> "Potential":
        return cls(
            dim=dim,
            value=lambda x: 0.0,
            grad=lambda x: np.zeros(dim),
            hess=lambda x: np.zeros((dim, dim)),
            name="zero",
        )

    def __add__(self, other: "Potential") -> "Potential":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return Potential(
            dim=self.dim,
            value=lambda x: self.value(x) + other.value(x),
            grad=lambda x: self.grad(x) + other.grad(x),
            hess=lambda x: self.hess(x) + other.hess(x),
            name=f"{self.name}+{other.name}",
        )

    def scaled(self, factor: float, offset: float = 0.0) -> "Potential":
        return Potential(
            dim=self.dim,
            value=lambda x: factor * self.value(x) + offset,
            grad=lambda x: factor * self.grad(x),
            hess=lambda x: factor * self.hess(x),
            name=f"{factor:g}*{self.name}",
        )


@dataclass(frozen=True)
class Coupling:
    """Two-point function u(x, y).

    ``grad`` returns ``(d_x u, d_y u)``; ``hess`` returns ``(d_xx, d_xy, d_yy)``
    with ``d_xy[a, b] = d/dx_a d/dy_b u``.
    """

    dim: int
    value: Callable[[np.ndarray, np.ndarray], float]
    grad: Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]
    hess: Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]
    name: str = "coupling"
    is_zero: bool = False

    @classmethod
    def zero(cls, dim: int) -> "Coupling":
        z = np.zeros(dim)
        zz = np.zeros((dim, dim))
        return cls(
            dim=dim,
            value=lambda x, y: 0.0,
            grad=lambda x, y: (z.copy(), z.copy()),
            hess=lambda x, y: (zz.copy(), zz.copy(), zz.copy()),
            name="zero",
            is_zero=True,
        )

    @classmethod
    def quadratic(cls, matrix: np.ndarray, offset: np.ndarray | None = None) -> "Coupling":
        """u = 1/2 <B d, d> with d = x - y - offset."""
        b = np.atleast_2d(np.asarray(matrix, dtype=float))
        dim = b.shape[0]
        shift = np.zeros(dim) if offset is None else np.asarray(offset, dtype=float)
        is_zero = not np.any(b)

        def value(x: np.ndarray, y: np.ndarray) -> float:
            d = x - y - shift
            return 0.5 * float(d @ b @ d)

        def grad(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
            g = b @ (x - y - shift)
            return g, -g

        def hess(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
            return b.copy(), -b.copy(), b.copy()

        return cls(dim=dim, value=value, grad=grad, hess=hess, name="quadratic", is_zero=is_zero)

    @classmethod
    def remainder(
        cls,
        exact: "Coupling",
        v_minus: Potential,
        v_plus: Potential,
    ) -> "Coupling":
        """u = L - V^-(x) - V^+(y) for an exact two-point Lagrangian L."""

        def value(x: np.ndarray, y: np.ndarray) -> float:
            return exact.value(x, y) - v_minus.value(x) - v_plus.value(y)

        def grad(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
            gx, gy = exact.grad(x, y)
            return gx - v_minus.grad(x), gy - v_plus.grad(y)

        def hess(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
            hxx, hxy, hyy = exact.hess(x, y)
            return hxx - v_minus.hess(x), hxy, hyy - v_plus.hess(y)

        return cls(dim=exact.dim, value=value, grad=grad, hess=hess, name=f"{exact.name}-split")

    def gauged(self, f: Potential) -> "Coupling":
        """u(x, y) + f(x) - f(y)."""

        def value(x: np.ndarray, y: np.ndarray) -> float:
            return self.value(x, y) + f.value(x) - f.value(y)

        def grad(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
            gx, gy = self.grad(x, y)
            return gx + f.grad(x), gy - f.grad(y)

        def hess(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
            hxx, hxy, hyy = self.hess(x, y)
            return hxx + f.hess(x), hxy, hyy - f.hess(y)

        return Coupling(dim=self.dim, value=value, grad=grad, hess=hess, name=f"{self.name}+gauge")


@dataclass(frozen=True)
class Box:
    """Axis-aligned box ``center +/- half_width``."""

    center: np.ndarray
    half_width: np.ndarray
    _lower: np.ndarray = field(init=False, repr=False, compare=False)
    _upper: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        center = np.atleast_1d(np.asarray(self.center, dtype=float))
        width = np.broadcast_to(np.asarray(self.half_width, dtype=float), center.shape).copy()
        if np.any(width <= 0):
            raise ValueError("box half width must be positive")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "half_width", width)
        object.__setattr__(self, "_lower", center - width)
        object.__setattr__(self, "_upper", center + width)

    @classmethod
    def around(cls, center: np.ndarray, radius: float) -> "Box":
        return cls(np.asarray(center, dtype=float), np.full(np.size(center), float(radius)))

    @property
    def dim(self) -> int:
        return int(self.center.size)

    @property
    def radius(self) -> float:
        return float(np.min(self.half_width))

    def contains(self, x: np.ndarray, slack: float = 0.0) -> bool:
        return bool(np.all(x >= self._lower - slack) and np.all(x <= self._upper + slack))

    def shrink(self, radius: float) -> "Box":
        return Box(self.center, np.minimum(self.half_width, radius))

    def grid(self, points_per_axis: int) -> np.ndarray:
        axes = [np.linspace(lo, hi, points_per_axis) for lo, hi in zip(self._lower, self._upper)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.uniform(self._lower, self._upper, size=(count, self.dim))
