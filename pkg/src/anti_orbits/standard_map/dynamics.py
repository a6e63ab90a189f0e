"""Hamiltonian and Lagrangian forms of the standard map."""

import math

import numpy as np


def map_forward(x: float, y: float, coupling: float) -> tuple[float, float]:
    y_next = y + coupling * math.sin(x)
    return x + y_next, y_next


def map_backward(x: float, y: float, coupling: float) -> tuple[float, float]:
    x_prev = x - y
    return x_prev, y - coupling * math.sin(x_prev)


def map_jacobian(x: float, y: float, coupling: float) -> np.ndarray:
    k = coupling * math.cos(x)
    return np.array([[1.0 + k, 1.0], [k, 1.0]])


def step_lagrangian(x_prev: float, x: float, coupling: float) -> float:
    return 2 * x - x_prev + coupling * math.sin(x)


def orbit_from_map(x0: float, x1: float, coupling: float, steps: int) -> np.ndarray:
    """Iterate the Hamiltonian form from ``(x1, x1 - x0)`` and return ``x0, x1, ..., x_{steps+1}``."""
    xs = [x0, x1]
    x, y = x1, x1 - x0
    for _ in range(steps):
        x, y = map_forward(x, y, coupling)
        xs.append(x)
    return np.asarray(xs)
