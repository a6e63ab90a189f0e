import math

import numpy as np
import pytest
from pydantic import ValidationError

from anti_orbits.dls.oracle import newton_oracle
from anti_orbits.dls.shadow import code_residual, shadow
from anti_orbits.dls.system import check_split
from anti_orbits.errors import CodeFormatError, ModelInvariantError
from anti_orbits.hyperbolicity.blocks import variational_blocks
from anti_orbits.hyperbolicity.cones import cone_verify
from anti_orbits.models.billiard import StripBilliardSpec, billiard_code, reflection_check, reflection_defect
from anti_orbits.models.kick import kick_code, kick_residual, standard_map_spec, standard_map_system
from anti_orbits.models.lifting import code_from_points, unfold
from anti_orbits.models.potentials import flat, potential_from_json, spline_wall, two_well
from anti_orbits.models.registry import BilliardModel, KickModel, SepMapModel, StandardModel, parse_model
from anti_orbits.models.sepmap import (
    code_from_path,
    random_path,
    sepmap_generating_defect,
    sepmap_labels,
    unfold_path,
)
from anti_orbits.standard_map.params import StandardMapParams
from anti_orbits.standard_map.shadowing import shadow_code
from anti_orbits.symbolic.codes import random_standard_code


def test_kick_map_matches_standard_map() -> None:
    system = standard_map_system(20.0)
    params = StandardMapParams(coupling=20.0)
    rng = np.random.default_rng(0)
    for _ in range(20):
        code = random_standard_code(rng, 16, max_step=2)
        lifted, base = kick_code(system, code)
        orbit = shadow(lifted, system)
        absolute = unfold(system, lifted, orbit.points, base)
        assert np.max(np.abs(absolute[:, 0] - shadow_code(code, params).x)) <= 1e-9
        assert kick_residual(standard_map_spec(20.0), absolute) <= 1e-9


def test_kick_map_without_coupling_returns_the_code() -> None:
    built = KickModel(mass=0.0).build()
    code, _ = code_from_points(built.system, np.array([[0.0], [math.pi], [2 * math.pi]]), False)
    orbit = shadow(code, built.system)
    assert np.array_equal(orbit.points, orbit.anchors)


def test_two_dimensional_kick_map() -> None:
    model = KickModel(
        potential=["neg_cos", "neg_cos"],
        period=[2 * math.pi, 2 * math.pi],
        seeds=[[0.1, 0.1], [0.1, 3.0], [3.0, 0.1], [3.0, 3.0]],
        mass=1 / 20,
        radius=1,
    )
    built = model.build()
    points = np.array([[0.0, 0.0], [math.pi, 0.0], [math.pi, math.pi], [0.0, math.pi]])
    code, base = code_from_points(built.system, points, True)
    orbit = shadow(code, built.system)
    assert orbit.residual <= 1e-9
    assert kick_residual(built.spec, unfold(built.system, code, orbit.points, base)) <= 1e-9


def test_kick_map_rejects_bad_matrix() -> None:
    with pytest.raises(ModelInvariantError, match="B must be 1x1"):
        KickModel(matrix=[[1.0, 0.0], [0.0, 1.0]]).build()
    model = KickModel(
        potential=["neg_cos", "neg_cos"],
        period=[2 * math.pi, 2 * math.pi],
        seeds=[[0.1, 0.1]],
        matrix=[[1.0, 2.0], [0.0, 1.0]],
    )
    with pytest.raises(ModelInvariantError, match="symmetric"):
        model.build()


def test_flat_potential_is_not_anti_integrable() -> None:
    with pytest.raises(ModelInvariantError, match="model not anti-integrable") as info:
        KickModel(potential="flat").build()
    assert info.value.invariant == "anti-integrability"


def test_billiard_orbits_obey_the_reflection_law() -> None:
    built = BilliardModel().build()
    for xs in ([0.0, 0.5], [0.5, 0.0, 0.0, 0.5]):
        code, base = billiard_code(built.system, xs, True)
        orbit = shadow(code, built.system)
        assert orbit.residual <= 1e-9
        assert reflection_check(orbit, built.system, built.spec, base) <= 1e-8


def test_unrefined_billiard_code_breaks_the_reflection_law() -> None:
    built = BilliardModel().build()
    code, base = billiard_code(built.system, [0.0, 0.5, 1.5, 1.0, 0.0], False)
    orbit = shadow(code, built.system)
    assert reflection_check(orbit, built.system, built.spec, base) <= 1e-8
    assert reflection_check(orbit, built.system, built.spec, base, points=orbit.anchors) > 1e-6


def test_billiard_split_is_exact() -> None:
    system = BilliardModel().build().system
    rng = np.random.default_rng(2)
    for piece in list(system.pieces.values())[:4]:
        assert check_split(piece, rng, samples=20) <= 1e-10


def test_billiard_residual_scales_like_inverse_width() -> None:
    widths = (25.0, 50.0, 100.0)
    residuals = []
    for width in widths:
        system = BilliardModel(width=width).build().system
        code, _ = billiard_code(system, [0.0, 0.5], True)
        residuals.append(code_residual(code, system, system.anchors(code)))
    slope = float(np.polyfit(np.log(widths), np.log(residuals), 1)[0])
    assert slope == pytest.approx(-1.0, abs=0.15)


def test_narrow_strip_is_rejected() -> None:
    model = BilliardModel(width=2.0, lower={"name": "cos", "amplitude": 0.6}, upper={"name": "cos", "amplitude": 0.6})
    with pytest.raises(ModelInvariantError, match="strip too narrow") as info:
        model.build()
    assert info.value.invariant == "wide strip"


def test_flat_walls_are_rejected() -> None:
    with pytest.raises(ModelInvariantError, match="model not anti-integrable"):
        BilliardModel(lower="flat", upper="flat").build()


def test_vertical_bounces_between_flat_walls() -> None:
    spec = StripBilliardSpec(lower=flat(), upper=flat(), width=10.0, lower_seeds=(), upper_seeds=())
    assert reflection_defect([0.3, 0.3, 0.3, 0.3], [0, 1, 0, 1], spec, True) == 0.0
    with pytest.raises(ValueError):
        reflection_defect([0.3, 0.3], [0], spec, True)


def test_sepmap_paths_shadow() -> None:
    built = SepMapModel().build()
    rng = np.random.default_rng(3)
    for _ in range(5):
        code = random_path(built.system, rng, 12)
        orbit = shadow(code, built.system)
        assert orbit.residual <= 1e-8
        assert sepmap_generating_defect(orbit, built.system, built.spec).worst <= 1e-8


def test_sepmap_small_jump_is_rejected() -> None:
    with pytest.raises(ModelInvariantError, match="minimum jump too small") as info:
        SepMapModel(exponent=3.0, min_jump=1, max_jump=3).build()
    assert info.value.invariant == "uniform anti-integrability"


def test_sepmap_without_exponential_terms_returns_the_code() -> None:
    built = SepMapModel(exponential=False).build()
    code = code_from_path(built.system, [1, -1, 1], [0, 1, 0], [10, 12], False)
    orbit = shadow(code, built.system)
    assert np.array_equal(orbit.points, orbit.anchors)


def test_sepmap_label_dynamics() -> None:
    built = SepMapModel().build()
    code = random_path(built.system, np.random.default_rng(4), 20)
    sigmas, thetas, _ = sepmap_labels(code)
    for j in range(len(sigmas) - 1):
        assert sigmas[j + 1] == sigmas[j] * thetas[j + 1]


def test_sepmap_path_validation() -> None:
    built = SepMapModel().build()
    with pytest.raises(CodeFormatError, match="expected 2 jumps"):
        code_from_path(built.system, [1, 1, 1], [0, 0, 0], [10], False)
    with pytest.raises(CodeFormatError, match="sigma labels"):
        code_from_path(built.system, [1, 0], [0, 0], [10], False)
    with pytest.raises(CodeFormatError, match="jump 3 outside"):
        code_from_path(built.system, [1, 1], [0, 0], [3], False)


def test_unfold_path_subtracts_jumps() -> None:
    built = SepMapModel().build()
    code = code_from_path(built.system, [1, 1, 1], [0, 1, 0], [10, 11], False)
    absolute = unfold_path(code, np.array([0.0, 0.5, 0.0]))
    assert absolute.tolist() == pytest.approx([0.0, -9.5, -21.0])


def test_named_potentials() -> None:
    wall = spline_wall([0.0, 1.0, 0.0, -1.0])
    assert wall.value(np.array([0.25])) == pytest.approx(1.0)
    assert wall.value(np.array([1.25])) == pytest.approx(1.0)
    well = two_well(depth=0.5)
    assert float(well.grad(np.array([0.0]))[0]) == pytest.approx(0.0, abs=1e-12)
    assert potential_from_json({"name": "neg_cos", "period": 1.0}).value(np.array([0.0])) == pytest.approx(-1.0)


def test_unknown_potential_is_rejected() -> None:
    with pytest.raises(ModelInvariantError, match="unknown potential"):
        potential_from_json("sawtooth")
    with pytest.raises(ModelInvariantError, match="bad parameters"):
        potential_from_json({"name": "neg_cos", "slope": 2})
    with pytest.raises(ModelInvariantError):
        spline_wall([0.0, 1.0])


def test_parse_model() -> None:
    assert isinstance(parse_model("billiard"), BilliardModel)
    assert isinstance(parse_model({"model": "standard", "coupling": 12.0}), StandardModel)
    with pytest.raises(ValidationError):
        parse_model({"model": "standard"})
    with pytest.raises(ValidationError):
        parse_model({"model": "standard", "coupling": 12.0, "sigma": 2.0})
    with pytest.raises(ValidationError):
        parse_model({"model": "pendulum"})


def _kick_2d_codes(rng: np.random.Generator, length: int):
    model = KickModel(
        potential=["neg_cos", "neg_cos"],
        period=[2 * math.pi, 2 * math.pi],
        seeds=[[0.1, 0.1], [0.1, 3.0], [3.0, 0.1], [3.0, 3.0]],
        mass=1 / 20,
        radius=1,
    )
    system = model.build().system

    def make():
        columns = [random_standard_code(rng, length, max_step=2).entries for _ in range(2)]
        return code_from_points(system, np.column_stack(columns), False)[0]

    return system, make


def _standard_codes(rng: np.random.Generator, length: int):
    system = standard_map_system(20.0)
    return system, lambda: kick_code(system, random_standard_code(rng, length, max_step=2))[0]


def _billiard_codes(rng: np.random.Generator, length: int):
    system = BilliardModel().build().system
    lift = system.lift

    def make():
        xs = [float(lift.crit(k % 2, int(c))[0]) for k, c in enumerate(rng.integers(2, size=length))]
        return billiard_code(system, xs, False)[0]

    return system, make


def _sepmap_codes(rng: np.random.Generator, length: int):
    system = SepMapModel().build().system
    return system, lambda: random_path(system, rng, length)


@pytest.mark.parametrize(
    "codes",
    [_standard_codes, _kick_2d_codes, _billiard_codes, _sepmap_codes],
    ids=["standard", "kick2d", "billiard", "sepmap"],
)
def test_shadow_agrees_with_newton_on_every_model(codes) -> None:
    system, make = codes(np.random.default_rng(21), 64)
    for _ in range(20):
        code = make()
        a = shadow(code, system).points
        b = newton_oracle(code, system).points
        assert np.max(np.abs(a - b)) <= 1e-9


def test_sepmap_orbits_satisfy_the_cone_condition() -> None:
    built = SepMapModel().build()
    rng = np.random.default_rng(7)
    for _ in range(5):
        orbit = shadow(random_path(built.system, rng, 12), built.system)
        report = cone_verify(orbit, variational_blocks(orbit, built.system), rng=rng)
        assert report.passed
        assert report.mu > 1.0
