import dataclasses
import math

import numpy as np
import pytest

from anti_orbits.config import CriticalPointConfig, ShadowConfig
from anti_orbits.dls.critical import find_critical_point, phi_eval
from anti_orbits.dls.derivatives import check_piece_derivatives
from anti_orbits.dls.fields import Box, Coupling, Potential
from anti_orbits.dls.oracle import newton_oracle
from anti_orbits.dls.shadow import (
    action_window,
    code_residual,
    coupling_gradient,
    local_residuals,
    residual,
    shadow,
    sweep_once,
)
from anti_orbits.dls.system import LagrangianPiece, build_system, gauge_transform
from anti_orbits.dls.twist import twist_matrix
from anti_orbits.dls.uniformity import uniformity_report
from anti_orbits.errors import CertificationError, CriticalPointError, DegenerateCriticalPoint, PhiDomainError
from anti_orbits.models.billiard import distance_piece
from anti_orbits.models.kick import kick_code, standard_map_system
from anti_orbits.models.potentials import neg_cos
from anti_orbits.symbolic.codes import Code, StandardCode, random_standard_code
from anti_orbits.symbolic.graph import graph_from_edges


def _quadratic() -> Potential:
    return Potential.scalar(lambda x: 0.5 * x * x, lambda x: x, lambda x: 1.0, name="half_square")


def _quartic() -> Potential:
    return Potential.scalar(lambda x: x**4, lambda x: 4 * x**3, lambda x: 12 * x**2, name="quartic")


def _uncoupled_system():
    """Two pieces with V^+ = -cos and V^- = 0, no coupling; edges at 0 and pi."""
    zero = Potential.zero(1)
    box = Box.around(np.array([math.pi / 2]), 3.0)
    pieces = {
        v: LagrangianPiece(v, zero, neg_cos(), Coupling.zero(1), box, box)
        for v in ("p", "q")
    }
    graph = graph_from_edges([("pq", "p", "q"), ("qp", "q", "p"), ("pp", "p", "p")])
    seeds = {"pq": 0.2, "qp": 3.0, "pp": 0.1}
    return build_system(graph, pieces, seeds, name="uncoupled")


def test_critical_point_of_neg_cos() -> None:
    data = find_critical_point(neg_cos(), 3.0)
    assert data.point[0] == pytest.approx(math.pi, abs=1e-12)
    assert data.hessian[0, 0] == pytest.approx(-1.0)
    assert data.lip_phi == pytest.approx(2.0)
    assert np.linalg.norm(data.psi.grad(data.point)) <= 1e-12


def test_critical_point_of_quadratic() -> None:
    data = find_critical_point(_quadratic(), 0.4)
    assert data.point[0] == pytest.approx(0.0, abs=1e-14)
    assert data.radius == pytest.approx(CriticalPointConfig().radius_cap)


def test_degenerate_critical_point() -> None:
    with pytest.raises(DegenerateCriticalPoint, match="degenerate critical point"):
        find_critical_point(_quartic(), 0.1)


def test_seed_outside_domain_is_rejected() -> None:
    with pytest.raises(CriticalPointError, match="no critical point from seed"):
        find_critical_point(neg_cos(), 1.4, domain=Box.around(np.array([1.4]), 0.2))


def test_phi_eval_examples() -> None:
    quadratic = find_critical_point(_quadratic(), 0.4)
    assert phi_eval(quadratic, 0.0)[0] == pytest.approx(0.0, abs=1e-14)
    assert phi_eval(quadratic, 0.3)[0] == pytest.approx(0.3, abs=1e-12)

    branch = find_critical_point(neg_cos(), 3.0)
    assert phi_eval(branch, 0.0)[0] == pytest.approx(math.pi)
    assert phi_eval(branch, 0.1)[0] == pytest.approx(math.pi - math.asin(0.1), abs=1e-12)


def test_phi_eval_leaves_the_ball() -> None:
    branch = find_critical_point(neg_cos(), 3.0)
    with pytest.raises(PhiDomainError, match="phi outside uniformity ball"):
        phi_eval(branch, 0.99)


def test_phi_eval_on_a_singular_hessian() -> None:
    branch = find_critical_point(_quadratic(), 0.4)
    flat = Potential.scalar(lambda x: 0.0, lambda x: 0.0, lambda x: 0.0, name="flat")
    with pytest.raises(PhiDomainError, match="phi outside uniformity ball"):
        phi_eval(dataclasses.replace(branch, psi=flat), 0.1)


def test_uncoupled_shadow_returns_the_code() -> None:
    system = _uncoupled_system()
    code_edges = ("pq", "qp", "pp", "pq", "qp")
    orbit = shadow(Code(code_edges, periodic=False), system)
    assert orbit.iterations == 1
    assert np.array_equal(orbit.points, orbit.anchors)
    assert residual(orbit, system) <= 1e-14

    total = action_window(orbit, system, 0, 4)
    expected = sum(system.edge(e).psi.value(system.edge(e).point) for e in code_edges[1:])
    assert total == pytest.approx(expected)
    assert action_window(orbit, system, 2, 2) == 0.0


def test_uncoupled_uniformity() -> None:
    report = uniformity_report(_uncoupled_system(), rng=np.random.default_rng(0))
    assert report.eps == 0.0
    assert report.satisfied


def test_period_two_standard_orbit() -> None:
    system = standard_map_system(20.0)
    code, _ = kick_code(system, StandardCode((0, 1), periodic=True))
    orbit = shadow(code, system)
    u = math.asin(2 * math.pi / 20)
    assert orbit.points[0, 0] == pytest.approx(u, abs=1e-9)
    assert orbit.points[1, 0] == pytest.approx(math.pi + u, abs=1e-9)
    assert orbit.residual < 1e-10
    assert orbit.rho <= orbit.rho_bound


def test_constant_code_is_a_fixed_point() -> None:
    system = standard_map_system(12.0)
    code, _ = kick_code(system, StandardCode((1, 1, 1, 1), periodic=True))
    orbit = shadow(code, system)
    assert np.allclose(orbit.points[:, 0], math.pi, atol=1e-14)

    window, _ = kick_code(system, StandardCode((1, 1, 1), periodic=False))
    assert action_window(shadow(window, system), system, 0, 2) == pytest.approx(2.0)


def test_raw_code_residual_is_coupling_gradient() -> None:
    system = standard_map_system(20.0)
    code, _ = kick_code(system, StandardCode((0, 1), periodic=True))
    raw = code_residual(code, system, system.anchors(code))
    assert raw == pytest.approx(2 * math.pi / 20)


def test_local_residuals_are_nan_at_window_ends() -> None:
    system = standard_map_system(20.0)
    code, _ = kick_code(system, StandardCode((0, 1, 1, 0), periodic=False))
    orbit = shadow(code, system)
    values = local_residuals(orbit, system)
    assert math.isnan(values[0]) and math.isnan(values[-1])
    assert np.all(values[1:-1] <= 1e-10)


def test_weak_coupling_does_not_contract() -> None:
    system = standard_map_system(0.5)
    code, _ = kick_code(system, StandardCode((0, 1, 0, 1), periodic=True))
    with pytest.raises(CertificationError):
        shadow(code, system, ShadowConfig(sigma=0.9))


def test_fixed_point_identity_and_uniqueness() -> None:
    system = standard_map_system(20.0)
    rng = np.random.default_rng(5)
    code = kick_code(system, random_standard_code(rng, 16, max_step=2))[0]
    orbit = shadow(code, system)
    assert np.max(np.abs(sweep_once(orbit, system) - orbit.points)) < 1e-12

    start = orbit.anchors + rng.uniform(-0.1, 0.1, size=orbit.anchors.shape)
    other = shadow(code, system, initial=start)
    assert np.max(np.abs(other.points - orbit.points)) <= 1e-11


def test_newton_oracle_agrees_with_shadow() -> None:
    system = standard_map_system(20.0)
    rng = np.random.default_rng(9)
    for _ in range(5):
        code = kick_code(system, random_standard_code(rng, 32, max_step=2))[0]
        a = shadow(code, system).points
        b = newton_oracle(code, system).points
        assert np.max(np.abs(a - b)) <= 1e-9


def test_gauge_transform_keeps_orbits() -> None:
    system = standard_map_system(12.0)
    f = Potential.scalar(lambda x: 0.3 * math.sin(x), lambda x: 0.3 * math.cos(x), lambda x: -0.3 * math.sin(x))
    gauged = gauge_transform(system, f)
    rng = np.random.default_rng(2)
    code = kick_code(system, random_standard_code(rng, 20, max_step=2))[0]
    orbit = shadow(code, system)
    assert residual(orbit, gauged) <= 1e-9
    again = shadow(code, gauged)
    assert np.max(np.abs(again.points - orbit.points)) <= 1e-9


def test_uniformity_of_the_standard_map() -> None:
    good = uniformity_report(standard_map_system(12.0), ShadowConfig(sigma=math.pi / 4), rng=np.random.default_rng(0))
    assert good.satisfied
    assert good.contraction_bound == pytest.approx(4 / (12 * math.cos(math.pi / 4)), rel=1e-6)

    bad = uniformity_report(standard_map_system(2.0), rng=np.random.default_rng(0))
    assert not bad.satisfied


def _shear_coupling(c: float) -> Coupling:
    """u = c sin(y - x); its second derivatives vanish on the diagonal y = x."""

    def value(x: np.ndarray, y: np.ndarray) -> float:
        return c * math.sin(float(y[0] - x[0]))

    def grad(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        g = c * math.cos(float(y[0] - x[0]))
        return np.array([-g]), np.array([g])

    def hess(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        h = -c * math.sin(float(y[0] - x[0]))
        return np.array([[h]]), np.array([[-h]]), np.array([[h]])

    return Coupling(dim=1, value=value, grad=grad, hess=hess, name="shear")


def test_uniformity_samples_off_diagonal_pairs() -> None:
    box = Box.around(np.array([math.pi]), 1.0)
    piece = LagrangianPiece("p", Potential.zero(1), neg_cos(), _shear_coupling(0.01), box, box)
    system = build_system(graph_from_edges([("pp", "p", "p")]), {"p": piece}, {"pp": 3.0}, name="shear")

    report = uniformity_report(system, rng=np.random.default_rng(0))
    assert 2 * report.sigma <= math.pi / 2
    assert report.eps == pytest.approx(2 * 0.01 * math.sin(2 * report.sigma), rel=1e-12)
    assert report.eps_c1 == pytest.approx(0.01 * math.sqrt(2), rel=1e-12)


def test_twist_matrix_examples() -> None:
    system = standard_map_system(4.0)
    piece = next(iter(system.pieces.values()))
    twist = twist_matrix(piece, np.array([0.1]), np.array([0.2]))
    assert twist.matrix[0, 0] == pytest.approx(-0.25)
    assert twist.nondegenerate

    uncoupled = next(iter(_uncoupled_system().pieces.values()))
    flat = twist_matrix(uncoupled, np.array([0.1]), np.array([0.2]))
    assert not np.any(flat.matrix)
    assert not flat.nondegenerate


def test_billiard_distance_twist() -> None:
    piece = distance_piece(2)
    twist = twist_matrix(piece, np.array([0.0, 0.0]), np.array([2.0, 0.0]))
    v = w = np.array([0.0, 1.0])
    assert float(v @ twist.matrix @ w) == pytest.approx(-0.5)


def test_piece_derivatives_match_finite_differences() -> None:
    rng = np.random.default_rng(4)
    system = standard_map_system(12.0)
    for piece in list(system.pieces.values())[:3]:
        assert check_piece_derivatives(piece, rng, samples=20).passed()



def test_rho_bound_covers_the_converged_orbit() -> None:
    rng = np.random.default_rng(12)
    system = standard_map_system(20.0)
    for _ in range(5):
        code = kick_code(system, random_standard_code(rng, 30, max_step=2))[0]
        orbit = shadow(code, system)
        lip = max(system.edge(e).lip_phi for e in code.edges)
        slots = list(code.free_slots())
        final = np.linalg.norm(coupling_gradient(code, system, orbit.points)[slots], axis=1)
        assert orbit.rho_bound >= 2.0 * lip * float(np.max(final))
        assert orbit.rho <= orbit.rho_bound


def test_piece_derivative_check_flags_a_wrong_gradient() -> None:
    rng = np.random.default_rng(5)
    box = Box.around(np.array([math.pi]), 1.0)
    good = LagrangianPiece("p", Potential.zero(1), neg_cos(), _shear_coupling(0.5), box, box)
    assert check_piece_derivatives(good, rng, samples=20).passed()

    broken = dataclasses.replace(_shear_coupling(0.5), grad=lambda x, y: (np.zeros(1), np.zeros(1)))
    check = check_piece_derivatives(LagrangianPiece("p", Potential.zero(1), neg_cos(), broken, box, box), rng, samples=20)
    assert not check.passed()
    assert check.grad_error > 1e-3
