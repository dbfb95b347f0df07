import math

import numpy as np
import pytest

import eqwalk


def test_welded_phase_flip_reaches_target():
    tree = eqwalk.generate_welded(3, 1)
    graph = tree.extended()
    assert graph.num_edges == 44
    result = eqwalk.transduce_walk(graph, phase=-1)
    assert abs(result["tau"][1]) == pytest.approx(1.0, abs=1e-9)
    assert result["complexity"] <= 3.5 + 1e-9


def test_electric_bound_on_welded():
    graph = eqwalk.generate_welded(3, 1).extended()
    assert graph.total_weight() == pytest.approx(44.0)
    assert graph.effective_resistance() == pytest.approx(29 / 16)
    result = eqwalk.transduce_walk(graph, phase=1)
    assert result["complexity"] <= 0.5 * (44 + 29 / 16) + 1e-9


def test_walk_matrix_is_unitary():
    graph = eqwalk.Graph(["a", "c"], ["b"], [("a", "b", 1.0), ("c", "b", 2.0)], "a", "b")
    u = eqwalk.walk_matrix(graph)
    assert np.allclose(u.conj().T @ u, np.eye(graph.dim), atol=1e-12)


def test_iterative_success():
    graph = eqwalk.generate_welded(3, 1).extended()
    tau = eqwalk.run_iterative(graph, -1, 1400)
    assert abs(tau[1]) ** 2 >= 0.81


def test_hypercube_profile():
    profile = eqwalk.hierarchical_profile("hypercube", 3)
    assert profile["bound"] == pytest.approx(91 / 24)
    assert profile["sign"] == 1
    assert profile["weights"][-1] == pytest.approx(9 / 4)


def test_errors_are_typed():
    with pytest.raises(eqwalk.ParityError):
        eqwalk.catalyst_v2(eqwalk.generate_welded(2, 1))
    with pytest.raises(eqwalk.SideMismatchError):
        eqwalk.Graph(["a"], ["b"], [("a", "b", 1.0)], "b", "a")


def test_single_edge_classical_hit():
    graph = eqwalk.Graph(["s"], ["t"], [("s", "t", 1.0)], "s", "t")
    assert eqwalk.classical_hitting(graph, 10, 5) == [1] * 5
    assert math.isfinite(graph.effective_resistance())
