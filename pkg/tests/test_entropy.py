import math

import pytest

from anti_orbits.entropy.spectral import NO_RECURRENT_PART, spectral_report, tmc_entropy, word_count_entropy
from anti_orbits.entropy.standard import optimize_sigma, standard_map_entropy_bound
from anti_orbits.errors import GraphError, ModelInvariantError, ThresholdError
from anti_orbits.symbolic.graph import (
    Edge,
    TransitionGraph,
    complete_graph,
    cycle_graph,
    golden_mean_graph,
    graph_from_edges,
)

GOLDEN = (1 + math.sqrt(5)) / 2


@pytest.mark.parametrize("q", [1, 2, 3, 7])
def test_complete_graph_entropy_is_log_q(q: int) -> None:
    assert tmc_entropy(complete_graph(q)) == pytest.approx(math.log(q), abs=1e-9)


def test_golden_mean_entropy() -> None:
    report = spectral_report(golden_mean_graph())
    assert report.spectral_radius == pytest.approx(GOLDEN, abs=1e-9)
    assert report.entropy == pytest.approx(math.log(GOLDEN), abs=1e-9)
    assert report.flag is None


def test_cycle_has_zero_entropy() -> None:
    assert tmc_entropy(cycle_graph(5)) == pytest.approx(0.0, abs=1e-9)


def test_graph_without_cycles_is_flagged() -> None:
    report = spectral_report(graph_from_edges([("a", 1, 2), ("b", 2, 3)]))
    assert report.entropy == 0.0
    assert report.flag == NO_RECURRENT_PART
    assert report.as_meta()["flag"] == NO_RECURRENT_PART


def test_empty_graph_is_rejected() -> None:
    with pytest.raises(GraphError):
        spectral_report(TransitionGraph((), ()))


def test_dead_ends_do_not_count() -> None:
    graph = graph_from_edges([("a", 1, 1), ("b", 1, 1), ("c", 1, 2), ("d", 2, 3)])
    assert tmc_entropy(graph) == pytest.approx(math.log(2), abs=1e-9)


def test_word_count_entropy_approaches_spectral_value() -> None:
    values = word_count_entropy(golden_mean_graph(), 30)
    assert len(values) == 30
    assert values[-1] == pytest.approx(math.log(GOLDEN), abs=0.05)
    assert word_count_entropy(complete_graph(3), 4) == pytest.approx([math.log(3)] * 4)


def test_standard_bound_at_lambda_twenty() -> None:
    bound = standard_map_entropy_bound(20.0, math.pi / 4)
    assert bound.lambda_star == pytest.approx(20 * math.sin(math.pi / 4) - math.pi)
    assert bound.q == 7
    assert bound.bound == pytest.approx(math.log(7))
    assert bound.bound == pytest.approx(1.9459, abs=1e-4)


def test_standard_bound_below_threshold() -> None:
    with pytest.raises(ThresholdError, match="below threshold, no bound"):
        standard_map_entropy_bound(10.0, math.pi / 4)


def test_standard_bound_rejects_bad_sigma() -> None:
    with pytest.raises(ModelInvariantError):
        standard_map_entropy_bound(20.0, 1.6)


def test_standard_bound_grows_like_log_lambda() -> None:
    small = standard_map_entropy_bound(1e3, math.pi / 4).bound
    large = standard_map_entropy_bound(1e6, math.pi / 4).bound
    assert large > small
    assert large / math.log(1e6) >= 0.9


def test_optimize_sigma_beats_fixed_sigma() -> None:
    best = optimize_sigma(20.0)
    assert best.bound >= standard_map_entropy_bound(20.0, math.pi / 4).bound
    assert 0 < best.sigma < math.pi / 2


def test_optimize_sigma_below_every_threshold() -> None:
    with pytest.raises(ThresholdError):
        optimize_sigma(5.0)


@pytest.mark.parametrize(
    ("graph", "extra"),
    [
        (golden_mean_graph(), Edge("22", 2, 2)),
        (cycle_graph(3), Edge("chord", 0, 2)),
        (complete_graph(2), Edge("parallel", 0, 0)),
        (graph_from_edges([("a", 1, 2), ("b", 2, 3)]), Edge("back", 3, 1)),
    ],
)
def test_adding_an_edge_never_lowers_entropy(graph: TransitionGraph, extra: Edge) -> None:
    assert tmc_entropy(graph.add_edge(extra)) >= tmc_entropy(graph) - 1e-12


def test_standard_bound_is_nondecreasing_in_lambda() -> None:
    couplings = [12.0 * 1.15**k for k in range(50)]
    bounds = [standard_map_entropy_bound(c, math.pi / 4).bound for c in couplings]
    assert all(b >= a for a, b in zip(bounds, bounds[1:]))
    assert bounds[-1] > bounds[0]
