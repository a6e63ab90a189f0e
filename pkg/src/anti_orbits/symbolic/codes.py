import math
from collections.abc import Sequence
from dataclasses import dataclass, replace

import numpy as np

from anti_orbits.errors import CodeFormatError
from anti_orbits.symbolic.graph import EdgeId, TransitionGraph

_BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class Code:
    """A finite proxy of a bi-infinite path.

    ``periodic=True`` repeats ``edges`` cyclically. Otherwise the code is a
    window whose first and last slots are pinned to their critical points.
    """

    edges: tuple[EdgeId, ...]
    periodic: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(self.edges))
        if not self.edges:
            raise CodeFormatError("code must contain at least one edge")

    def __len__(self) -> int:
        return len(self.edges)

    def rotate(self, shift: int) -> "Code":
        if not self.periodic:
            raise CodeFormatError("only periodic codes can be rotated")
        k = shift % len(self.edges)
        return Code(self.edges[k:] + self.edges[:k], periodic=True)

    def free_slots(self) -> range:
        if self.periodic:
            return range(len(self.edges))
        return range(1, len(self.edges) - 1)


def is_admissible(code: Code, graph: TransitionGraph) -> bool:
    edges = [graph.edge(eid) for eid in code.edges]
    for prev, nxt in zip(edges, edges[1:]):
        if prev.dst != nxt.src:
            return False
    if code.periodic and edges[-1].dst != edges[0].src:
        return False
    return True


@dataclass(frozen=True)
class StandardCode:
    """Integer multiples ``m_k`` of pi with second differences bounded by ``bound``.

    For periodic codes ``winding`` w extends the cycle by ``a_{k+p} = a_k + 2*pi*w``.
    ``origin`` is the storage index that plays the role of ``k = 0``.
    """

    multiples: tuple[int, ...]
    periodic: bool = True
    bound: float = math.pi
    winding: int = 0
    origin: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "multiples", tuple(int(m) for m in self.multiples))
        if not self.multiples:
            raise CodeFormatError("standard code must contain at least one entry")
        if not self.bound > 0:
            raise CodeFormatError("code bound must be positive")
        if not 0 <= self.origin < len(self.multiples):
            raise CodeFormatError("origin outside the code")
        if self.winding and not self.periodic:
            raise CodeFormatError("winding only applies to periodic codes")

    def __len__(self) -> int:
        return len(self.multiples)

    @property
    def entries(self) -> np.ndarray:
        return math.pi * np.asarray(self.multiples, dtype=float)

    def extended(self) -> np.ndarray:
        """Multiples with one neighbour on each side (cyclic, shifted by the winding)."""
        m = list(self.multiples)
        if self.periodic:
            shift = 2 * self.winding
            return np.asarray([m[-1] - shift, *m, m[0] + shift], dtype=np.int64)
        return np.asarray(m, dtype=np.int64)

    def storage_index(self, k: int) -> int:
        return self.origin + k

    def free_slots(self) -> range:
        if self.periodic:
            return range(len(self.multiples))
        return range(1, len(self.multiples) - 1)


def second_differences(code: StandardCode) -> np.ndarray:
    ext = code.extended()
    return ext[:-2] - 2 * ext[1:-1] + ext[2:]


def standard_code_check(code: StandardCode) -> bool:
    if len(code) < 3 and not code.periodic:
        return True
    diffs = second_differences(code)
    return bool(np.all(np.abs(diffs) * math.pi <= code.bound + _BOUND_SLACK * max(1.0, code.bound)))


def standard_code_symbols(code: StandardCode) -> tuple[int, ...]:
    """Second differences ``b_k / pi``; together with two initial entries they determine the code."""
    return tuple(int(b) for b in second_differences(code))


def widen_bound(code: StandardCode) -> StandardCode:
    """Same code with ``bound`` raised to cover its own second differences."""
    top = float(np.max(np.abs(second_differences(code)), initial=0.0)) * math.pi
    return replace(code, bound=max(code.bound, top))


def code_from_second_differences(
    symbols: Sequence[int],
    m0: int = 0,
    m1: int = 0,
    bound: float | None = None,
    origin: int = 0,
) -> StandardCode:
    """Inverse of the symbol map for windows: ``m_{k+1} = b_k + 2 m_k - m_{k-1}``."""
    multiples = [int(m0), int(m1)]
    for b in symbols:
        multiples.append(int(b) + 2 * multiples[-1] - multiples[-2])
    if bound is None:
        bound = max(math.pi, max((abs(int(b)) for b in symbols), default=0) * math.pi)
    return StandardCode(tuple(multiples), periodic=False, bound=bound, origin=origin)


def _max_symbol(bound: float) -> int:
    return int(math.floor(bound / math.pi + _BOUND_SLACK))


def random_standard_code(
    rng: np.random.Generator,
    length: int,
    bound: float = math.pi,
    *,
    max_step: int | None = None,
    origin: int | None = None,
) -> StandardCode:
    """Random admissible window; ``max_step`` caps ``|m_{k+1} - m_k|``."""
    if length < 2:
        raise CodeFormatError("random codes need length >= 2")
    top = _max_symbol(bound)
    multiples = [0, _next_multiple(rng, 0, 0, top, max_step)]
    while len(multiples) < length:
        multiples.append(_next_multiple(rng, multiples[-2], multiples[-1], top, max_step))
    return StandardCode(
        tuple(multiples),
        periodic=False,
        bound=bound,
        origin=length // 2 if origin is None else origin,
    )


def _next_multiple(rng: np.random.Generator, before: int, current: int, top: int, max_step: int | None) -> int:
    choices = []
    for b in range(-top, top + 1):
        candidate = b + 2 * current - before
        if max_step is None or abs(candidate - current) <= max_step:
            choices.append(candidate)
    return int(choices[int(rng.integers(len(choices)))])


def perturb_outside(
    code: StandardCode,
    rng: np.random.Generator,
    n: int,
    *,
    max_step: int | None = None,
) -> StandardCode:
    """Redraw every entry with ``|k| > n`` while keeping the code admissible."""
    if code.periodic:
        raise CodeFormatError("perturb_outside expects a window code")
    top = _max_symbol(code.bound)
    m = list(code.multiples)
    lo, hi = code.storage_index(-n), code.storage_index(n)
    if lo < 1 or hi > len(m) - 2:
        raise CodeFormatError("window too short for the requested agreement radius")
    for i in range(hi + 1, len(m)):
        m[i] = _next_multiple(rng, m[i - 2], m[i - 1], top, max_step)
    for i in range(lo - 1, -1, -1):
        m[i] = _next_multiple(rng, m[i + 2], m[i + 1], top, max_step)
    return StandardCode(tuple(m), periodic=False, bound=code.bound, origin=code.origin)
