import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.optimize import root

from anti_orbits.config import ShadowConfig
from anti_orbits.dls.shadow import Orbit, sup_distance
from anti_orbits.errors import (
    ArcsinDomainError,
    CodeFormatError,
    ContractionFailure,
    LeftBallError,
    ModelInvariantError,
    NotConvergedError,
)
from anti_orbits.standard_map.params import StandardMapParams
from anti_orbits.symbolic.codes import StandardCode, standard_code_check

logger = logging.getLogger(__name__)

POLISH_STEPS = 3


def _neighbours(code: StandardCode, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """x_{k-1}, x_{k+1} for every storage slot; wraps with the winding for periodic codes."""
    shift = 2 * math.pi * code.winding
    if code.periodic:
        left = np.concatenate([[x[-1] - shift], x[:-1]])
        right = np.concatenate([x[1:], [x[0] + shift]])
    else:
        left = np.concatenate([[np.nan], x[:-1]])
        right = np.concatenate([x[1:], [np.nan]])
    return left, right


def second_difference(code: StandardCode, x: np.ndarray) -> np.ndarray:
    left, right = _neighbours(code, x)
    return right - 2 * x + left


def residual_profile(code: StandardCode, x: np.ndarray, coupling: float) -> np.ndarray:
    """|x_{k+1} - 2x_k + x_{k-1} - lambda sin x_k| per slot; NaN at pinned window ends."""
    return np.abs(second_difference(code, x) - coupling * np.sin(x))


def lagrangian_residual(code: StandardCode, x: np.ndarray, coupling: float) -> float:
    slots = list(code.free_slots())
    if not slots:
        return 0.0
    return float(np.max(residual_profile(code, x, coupling)[slots]))


def effective_params(code: StandardCode, params: StandardMapParams) -> StandardMapParams:
    """``params`` with its bound raised to the code's own bound when the code is wider."""
    if code.bound > params.bound:
        return params.model_copy(update={"bound": code.bound})
    return params


def _orbit(
    code: StandardCode,
    x: np.ndarray,
    params: StandardMapParams,
    *,
    iterations: int,
    ratios: tuple[float, ...] = (),
    method: str = "contraction",
) -> Orbit:
    anchors = code.entries.reshape(-1, 1)
    return Orbit(
        code=code,
        points=x.reshape(-1, 1),
        anchors=anchors,
        residual=lagrangian_residual(code, x, params.coupling),
        iterations=iterations,
        contraction_estimate=max(ratios) if ratios else 0.0,
        rho=sup_distance(x.reshape(-1, 1), anchors),
        sigma=params.sigma,
        update_ratios=ratios,
        rho_bound=params.sigma,
        method=method,
        extras={"lambda0": params.lambda0, "contraction_bound": params.contraction_bound},
    )


def shadow_code(
    code: StandardCode,
    params: StandardMapParams,
    config: ShadowConfig | None = None,
    *,
    initial: np.ndarray | None = None,
) -> Orbit:
    """Jacobi sweeps of x_k <- a_k +/- arcsin((x_{k+1} - 2x_k + x_{k-1}) / lambda).

    The sign follows the parity of ``m_k``. Window ends stay pinned to ``a``.
    """
    config = config or ShadowConfig.from_settings()
    if not standard_code_check(code):
        raise ModelInvariantError("code bound", "code violates its second-difference bound")
    params = effective_params(code, params)
    if not params.above_threshold:
        logger.warning(
            "standard.below_lambda0 lambda=%.6g lambda0=%.6g bound=%.6g sigma=%.6g",
            params.coupling,
            params.lambda0,
            params.bound,
            params.sigma,
        )
    anchors = code.entries
    parity = np.where(np.asarray(code.multiples) % 2 == 0, 1.0, -1.0)
    free = np.zeros(len(code), dtype=bool)
    free[list(code.free_slots())] = True
    limit = math.sin(params.sigma)

    x = anchors.copy() if initial is None else np.asarray(initial, dtype=float).reshape(-1).copy()
    if x.shape != anchors.shape:
        raise CodeFormatError("initial guess does not match the code length")
    x[~free] = anchors[~free]
    if np.max(np.abs(x - anchors), initial=0.0) >= params.sigma:
        raise LeftBallError()

    ratios: list[float] = []
    previous: float | None = None
    stalled = 0
    iterations = 0
    while True:
        iterations += 1
        if iterations > config.max_iterations:
            logger.warning("standard.not_converged iterations=%d", config.max_iterations)
            raise NotConvergedError(f"no convergence after {config.max_iterations} sweeps")
        s = second_difference(code, x) / params.coupling
        if np.any(np.abs(s[free]) >= limit):
            worst = int(np.argmax(np.where(free, np.abs(s), -np.inf)))
            logger.info("standard.left_arcsin_domain iteration=%d index=%d argument=%.6g", iterations, worst, s[worst])
            raise ArcsinDomainError()
        new = np.where(free, anchors + parity * np.arcsin(np.where(free, s, 0.0)), anchors)
        update = float(np.max(np.abs(new - x)))
        x = new
        if previous is not None and previous > config.ratio_floor:
            ratio = update / previous
            ratios.append(ratio)
            stalled = stalled + 1 if ratio >= 1.0 else 0
            if stalled >= config.stall_sweeps:
                raise ContractionFailure("contraction failure: ε too large")
        if update < config.tolerance:
            break
        previous = update

    orbit = _orbit(code, x, params, iterations=iterations, ratios=tuple(ratios))
    logger.info(
        "standard.converged lambda=%.6g length=%d iterations=%d residual=%.3e rho=%.3e contraction=%.3e",
        params.coupling,
        len(code),
        iterations,
        orbit.residual,
        orbit.rho,
        orbit.contraction_estimate,
    )
    return orbit


def newton_orbit(code: StandardCode, params: StandardMapParams, *, tolerance: float = 1e-12, accept: float = 1e-11) -> Orbit:
    """Independent check: hybrid Newton on the stacked relations, seeded at ``a``."""
    params = effective_params(code, params)
    anchors = code.entries
    free = list(code.free_slots())
    if not free:
        return _orbit(code, anchors.copy(), params, iterations=0, method="newton")
    lam = params.coupling
    n = len(code)

    def assemble(z: np.ndarray) -> np.ndarray:
        x = anchors.copy()
        x[free] = z
        return x

    def fun(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        x = assemble(z)
        f = (second_difference(code, x) - lam * np.sin(x))[free]
        jac = np.zeros((len(free), len(free)))
        column = {slot: k for k, slot in enumerate(free)}
        for k, i in enumerate(free):
            jac[k, k] += -2.0 - lam * math.cos(x[i])
            for j in ((i - 1) % n, (i + 1) % n) if code.periodic else (i - 1, i + 1):
                if j in column:
                    jac[k, column[j]] += 1.0
        return f, jac

    sol = root(fun, anchors[free], jac=True, method="hybr", tol=tolerance)
    z = sol.x
    for _ in range(POLISH_STEPS):
        f, jac = fun(z)
        if np.max(np.abs(f)) <= accept:
            break
        z = z - np.linalg.solve(jac, f)
    x = assemble(z)
    res = lagrangian_residual(code, x, lam)
    if not sol.success and res > accept:
        raise NotConvergedError(f"newton oracle failed: {sol.message}")
    return _orbit(code, x, params, iterations=int(sol.nfev), method="newton")


@dataclass(frozen=True)
class DecayReport:
    ratio: float
    worst_index: int
    radius: int
    passed: bool

    def as_meta(self) -> dict[str, Any]:
        return {"ratio": self.ratio, "worst_index": self.worst_index, "n": self.radius, "pass": self.passed}


def decay_check(
    code: StandardCode,
    other: StandardCode,
    params: StandardMapParams,
    n: int,
    config: ShadowConfig | None = None,
) -> DecayReport:
    """max over |k| <= n of |x'_k - x_k| / (5^(|k|-n) 2 sigma) for two codes agreeing on |k| <= n."""
    if code.origin != other.origin or len(code) != len(other):
        raise CodeFormatError("codes must share length and origin")
    lo, hi = code.storage_index(-n), code.storage_index(n)
    if lo < 0 or hi >= len(code):
        raise CodeFormatError("agreement radius exceeds the window")
    if code.multiples[lo : hi + 1] != other.multiples[lo : hi + 1]:
        raise CodeFormatError(f"codes differ inside |k| <= {n}")
    x = shadow_code(code, params, config).x
    y = shadow_code(other, params, config).x
    worst, worst_k = 0.0, 0
    for k in range(-n, n + 1):
        i = code.storage_index(k)
        ratio = abs(y[i] - x[i]) / (5.0 ** (abs(k) - n) * 2 * params.sigma)
        if ratio > worst:
            worst, worst_k = ratio, k
    return DecayReport(ratio=worst, worst_index=worst_k, radius=n, passed=worst <= 1.0)


def quotient_project(orbit: Orbit | np.ndarray) -> np.ndarray:
    """Consecutive pairs ``(x_k, x_{k+1})`` reduced mod 2*pi."""
    x = orbit.x if isinstance(orbit, Orbit) else np.asarray(orbit, dtype=float).reshape(-1)
    pairs = np.stack([x[:-1], x[1:]], axis=1) if x.size > 1 else np.stack([x, x], axis=1)
    return np.mod(pairs, 2 * math.pi)
