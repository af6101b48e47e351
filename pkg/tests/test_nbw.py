import math
from fractions import Fraction

import numpy as np
import pytest

from unispec import (
    BUILTIN_TRANSPORTS,
    DirectedEdge,
    GraphInputError,
    build_graph,
    degree_biased_edge_law,
    degree_stats,
    degree_transport,
    distance_window_transport,
    edge_root_law,
    mtp_check,
    nbw_entropy,
    nbw_transition,
    simulate_nbw,
    stationarity_check,
)

from fixture_graphs import FIXTURES, LEAFLESS, star


def test_uniform_edge_law():
    law = edge_root_law(FIXTURES["c4"])
    assert law.probabilities == (Fraction(1, 8),) * 8
    assert edge_root_law(FIXTURES["c3"]).probabilities == (Fraction(1, 6),) * 6
    k2 = build_graph([(0, 1)], 2)
    assert edge_root_law(k2).probabilities == (Fraction(1, 2), Fraction(1, 2))


def test_edgeless_rejected():
    with pytest.raises(GraphInputError):
        edge_root_law(build_graph([], 3))


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_degree_biased_factorization_agrees(name):
    g = FIXTURES[name]
    if g.edge_count == 0:
        return
    assert degree_biased_edge_law(g).probabilities == edge_root_law(g).probabilities


def test_kernel_c4_rotation():
    kernel = nbw_transition(FIXTURES["c4"])
    assert kernel.matrix.shape == (8, 8)
    assert np.all(kernel.matrix.sum(axis=1) == 1.0)
    assert np.all((kernel.matrix == 0) | (kernel.matrix == 1))  # degree 2 forces the step


def test_kernel_k3_deterministic():
    kernel = nbw_transition(FIXTURES["c3"])
    assert np.all((kernel.matrix == 0) | (kernel.matrix == 1))


def test_kernel_k4_two_successors():
    kernel = nbw_transition(FIXTURES["k4"])
    for row in kernel.matrix:
        targets = row[row > 0]
        assert len(targets) == 2
        assert np.allclose(targets, 0.5)


def test_kernel_rejects_leaf():
    with pytest.raises(GraphInputError, match="leaf"):
        nbw_transition(star(3))
    with pytest.raises(GraphInputError, match="leaf"):
        stationarity_check(FIXTURES["p5"])


def test_stationarity_exact_small():
    assert stationarity_check(FIXTURES["c4"]) == (0.0, 0.0)
    assert stationarity_check(FIXTURES["k4"]) == (0.0, 0.0)


def test_stationarity_chorded():
    report = stationarity_check(FIXTURES["chorded8"])
    assert report.stationarity_deviation <= 1e-14
    assert report.reversal_deviation <= 1e-14


@pytest.mark.parametrize("name", LEAFLESS)
def test_stationarity_matches_dense_kernel(name):
    g = FIXTURES[name]
    kernel = nbw_transition(g)
    size = len(kernel.edges)
    u = np.full(size, 1.0 / size)
    dense_dev = float(np.abs(u @ kernel.matrix - u).max())
    report = stationarity_check(g)
    assert report.stationarity_deviation <= 1e-12
    assert abs(report.stationarity_deviation - dense_dev) <= 1e-15


def test_entropy_values():
    assert abs(nbw_entropy(degree_stats(FIXTURES["k4"])) - math.log(2)) < 1e-15
    assert nbw_entropy(degree_stats(FIXTURES["c6"])) == 0.0
    got = nbw_entropy(degree_stats(FIXTURES["c4_chord"]))
    assert abs(got - 6 * math.log(2) / 10) < 1e-15


def test_entropy_rejects_leaf():
    with pytest.raises(GraphInputError):
        nbw_entropy(degree_stats(FIXTURES["p5"]))


@pytest.mark.parametrize("name", LEAFLESS)
def test_entropy_matches_kernel_rate(name):
    g = FIXTURES[name]
    kernel = nbw_transition(g)
    law = edge_root_law(g)
    rate = 0.0
    for p, row in zip(law.probabilities, kernel.matrix):
        rate += float(p) * -sum(x * math.log(x) for x in row if x > 0)
    assert abs(rate - nbw_entropy(degree_stats(g))) <= 1e-12


def test_mtp_adjacency_is_average_degree():
    g = FIXTURES["c4_chord"]
    lhs, rhs = mtp_check(g, BUILTIN_TRANSPORTS["adjacency"])
    assert lhs == rhs == Fraction(2 * g.edge_count, g.vertex_count)


def test_mtp_head_degree_c4():
    lhs, rhs = mtp_check(FIXTURES["c4"], BUILTIN_TRANSPORTS["head_degree"])
    assert lhs == rhs == 4


@pytest.mark.parametrize("name", sorted(FIXTURES))
@pytest.mark.parametrize("transport", sorted(BUILTIN_TRANSPORTS))
def test_mtp_exact_on_all_fixtures(name, transport):
    lhs, rhs = mtp_check(FIXTURES[name], BUILTIN_TRANSPORTS[transport])
    assert lhs == rhs
    assert isinstance(lhs, Fraction)


def test_mtp_custom_transports():
    g = FIXTURES["chorded8"]  # asymmetric degrees
    f = degree_transport(lambda dx, dy: dx * dy * dy)
    lhs, rhs = mtp_check(g, f)
    assert lhs == rhs
    window = distance_window_transport(1, 3)
    lhs, rhs = mtp_check(g, window)
    assert lhs == rhs


def test_simulate_c4_rotation():
    sim = simulate_nbw(FIXTURES["c4"], 8, seed=1, start=DirectedEdge(0, 1))
    expected = [(0, 1), (1, 2), (2, 3), (3, 0)] * 3
    assert [tuple(e) for e in sim.trajectory.edges] == expected[:9]


def test_simulate_k4_occupancy():
    sim = simulate_nbw(FIXTURES["k4"], 100_000, seed=42)
    assert sim.total == 100_001
    for edge in FIXTURES["k4"].directed_edges():
        freq = sim.counts.get(edge, 0) / sim.total
        assert abs(freq - sim.uniform_target) <= 4 * sim.stderr


def test_simulate_never_backtracks():
    sim = simulate_nbw(FIXTURES["petersen"], 2000, seed=5)
    for a, b in zip(sim.trajectory.edges, sim.trajectory.edges[1:]):
        assert a.head == b.tail
        assert b != a.reverse()


def test_simulate_deterministic_and_guarded():
    one = simulate_nbw(FIXTURES["k4"], 50, seed=7)
    two = simulate_nbw(FIXTURES["k4"], 50, seed=7)
    assert one.trajectory == two.trajectory
    with pytest.raises(GraphInputError, match="leaf"):
        simulate_nbw(star(3), 10, seed=0)
    with pytest.raises(GraphInputError, match="start edge"):
        simulate_nbw(FIXTURES["c4"], 10, seed=0, start=DirectedEdge(0, 2))
