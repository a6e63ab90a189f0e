import math

import numpy as np
import pytest

from anti_orbits.errors import CodeFormatError, GraphError, WordCountOverflow
from anti_orbits.symbolic.codes import (
    Code,
    StandardCode,
    code_from_second_differences,
    is_admissible,
    perturb_outside,
    random_standard_code,
    standard_code_check,
    standard_code_symbols,
)
from anti_orbits.symbolic.graph import (
    Edge,
    TransitionGraph,
    complete_graph,
    count_words,
    golden_mean_graph,
    graph_from_edges,
)
from anti_orbits.symbolic.io import (
    code_from_json,
    code_to_json,
    graph_from_json,
    graph_to_json,
    standard_code_from_json,
)


def test_self_loop_is_admissible() -> None:
    graph = graph_from_edges([("a", 1, 1)])
    assert is_admissible(Code(("a",), periodic=True), graph)


def test_alternating_cycle_is_admissible() -> None:
    graph = graph_from_edges([("a", 1, 2), ("b", 2, 1)])
    assert is_admissible(Code(("a", "b"), periodic=True), graph)
    assert not is_admissible(Code(("a", "a"), periodic=False), graph)


def test_broken_window_is_not_admissible() -> None:
    graph = graph_from_edges([("a", 1, 2), ("c", 3, 1)])
    assert not is_admissible(Code(("a", "c"), periodic=False), graph)


def test_unknown_edge_raises() -> None:
    graph = graph_from_edges([("a", 1, 1)])
    with pytest.raises(GraphError, match="edge not in graph"):
        is_admissible(Code(("zzz",)), graph)


def test_edge_to_unknown_vertex_is_rejected() -> None:
    with pytest.raises(GraphError):
        TransitionGraph((1,), (Edge("a", 1, 2),))


def test_multi_edges_are_counted() -> None:
    graph = graph_from_edges([("a", 1, 1), ("b", 1, 1)])
    assert graph.adjacency().tolist() == [[2]]
    assert count_words(graph, 4) == 8


def test_count_words_examples() -> None:
    assert count_words(complete_graph(3), 4) == 81
    assert count_words(graph_from_edges([("a", 0, 0)]), 10) == 1
    assert count_words(golden_mean_graph(), 3) == 5


def test_count_words_complete_graph_is_power() -> None:
    for q in (2, 3, 5):
        for n in range(1, 7):
            assert count_words(complete_graph(q), n) == q**n


def test_count_words_is_submultiplicative() -> None:
    graph = golden_mean_graph()
    for n in range(1, 6):
        for m in range(1, 6):
            assert count_words(graph, n + m) <= count_words(graph, n) * count_words(graph, m)


def test_count_words_overflow() -> None:
    with pytest.raises(WordCountOverflow, match="word count overflow"):
        count_words(complete_graph(7), 40, limit=10**6)


def test_admissibility_survives_rotation() -> None:
    graph = graph_from_edges([("a", 1, 2), ("b", 2, 3), ("c", 3, 1)])
    code = Code(("a", "b", "c"), periodic=True)
    for shift in range(3):
        assert is_admissible(code.rotate(shift), graph)


def test_random_path_is_admissible() -> None:
    rng = np.random.default_rng(3)
    graph = golden_mean_graph()
    path = graph.random_path(rng, 30)
    assert is_admissible(Code(tuple(path), periodic=False), graph)


def test_recurrent_core_drops_dead_ends() -> None:
    graph = graph_from_edges([("a", 1, 1), ("b", 1, 2)])
    core = graph.recurrent_core()
    assert core.vertices == (1,)
    assert [e.id for e in core.edges] == ["a"]


def test_standard_code_check_examples() -> None:
    assert standard_code_check(StandardCode((0, 0, 0), periodic=True, bound=1.0))
    assert standard_code_check(StandardCode((0, 1), periodic=True, bound=2 * math.pi))
    assert not standard_code_check(StandardCode((0, 1), periodic=True, bound=math.pi))


def test_second_difference_symbols_invert() -> None:
    code = code_from_second_differences((1, -1, 0, 1), m0=2, m1=3)
    assert code.multiples[:2] == (2, 3)
    assert standard_code_symbols(code) == (1, -1, 0, 1)
    assert standard_code_check(code)


def test_standard_code_rejects_winding_on_window() -> None:
    with pytest.raises(CodeFormatError):
        StandardCode((0, 1, 2), periodic=False, winding=1)


def test_random_standard_code_is_admissible() -> None:
    rng = np.random.default_rng(7)
    for _ in range(20):
        code = random_standard_code(rng, 25, max_step=2)
        assert standard_code_check(code)
        assert max(abs(b - a) for a, b in zip(code.multiples, code.multiples[1:])) <= 2


def test_perturb_outside_keeps_the_core() -> None:
    rng = np.random.default_rng(11)
    code = random_standard_code(rng, 41)
    other = perturb_outside(code, rng, 8)
    lo, hi = code.storage_index(-8), code.storage_index(8)
    assert other.multiples[lo : hi + 1] == code.multiples[lo : hi + 1]
    assert standard_code_check(other)


def test_graph_and_code_json() -> None:
    graph = graph_from_edges([("a", 1, 2), ("b", 2, 1)])
    assert graph_from_json(graph_to_json(graph)) == graph
    code = Code(("a", "b"), periodic=True)
    assert code_from_json(code_to_json(code)) == code


def test_code_json_rejects_unknown_type() -> None:
    with pytest.raises(CodeFormatError):
        code_from_json({"type": "loop", "edges": ["a"]})


def test_standard_code_from_json(tmp_path) -> None:
    path = tmp_path / "period2.json"
    path.write_text('{"multiples": [0, 1], "periodic": true}', encoding="utf-8")
    code = standard_code_from_json(path)
    assert code.multiples == (0, 1)
    assert code.periodic
    with pytest.raises(CodeFormatError):
        standard_code_from_json({"multiples": [0, 0.5]})
