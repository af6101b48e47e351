"""Non-backtracking walks on leafless graphs and Mass-Transport checks.

A finite graph rooted at a uniform random vertex is the canonical unimodular
network; rooting at a uniform random directed edge gives the stationary law of
the non-backtracking walk, provided no vertex is a leaf. Graphs with leaves are
rejected outright for the walk operations rather than patched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, NamedTuple

import numpy as np

from .graph import DegreeStats, DirectedEdge, Graph, GraphInputError, bfs_distances

__all__ = [
    "BUILTIN_TRANSPORTS",
    "EdgeRootedLaw",
    "NBWKernel",
    "NBWSimulation",
    "NBWTrajectory",
    "StationarityReport",
    "degree_biased_edge_law",
    "degree_transport",
    "distance_window_transport",
    "edge_root_law",
    "mtp_check",
    "nbw_entropy",
    "nbw_transition",
    "simulate_nbw",
    "stationarity_check",
]


def _require_edges(g: Graph) -> None:
    if g.edge_count < 1:
        raise GraphInputError("edge-rooted law requires at least one edge")


def _require_leafless(g: Graph) -> None:
    if g.vertex_count == 0 or g.min_degree < 2:
        raise GraphInputError(
            "non-backtracking walk requires minimum degree >= 2 (leaf present)"
        )


@dataclass(frozen=True)
class EdgeRootedLaw:
    """A probability law on the directed edges of a graph.

    ``probabilities`` aligns with ``graph.directed_edges()``. Uniform weight
    1/2m is the edge-rooted law derived from the uniform vertex root.
    """

    graph: Graph
    probabilities: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.probabilities) != 2 * self.graph.edge_count:
            raise ValueError("one probability per directed edge required")
        total = sum(self.probabilities)
        if abs(float(total) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {float(total)}, expected 1")
        if any(p < 0 for p in self.probabilities):
            raise ValueError("probabilities must be nonnegative")

    def as_dict(self) -> dict[DirectedEdge, Fraction]:
        return dict(zip(self.graph.directed_edges(), self.probabilities))


def edge_root_law(g: Graph) -> EdgeRootedLaw:
    """Uniform law 1/2m on every directed edge."""
    _require_edges(g)
    p = Fraction(1, 2 * g.edge_count)
    return EdgeRootedLaw(g, (p,) * (2 * g.edge_count))


def degree_biased_edge_law(g: Graph) -> EdgeRootedLaw:
    """Same law through the factorized route: root a vertex with probability
    proportional to its degree, then pick a uniform neighbour.

    Kept as an independent construction; it must agree with edge_root_law
    exactly on finite graphs.
    """
    _require_edges(g)
    total = 2 * g.edge_count
    probs = [
        Fraction(g.degree(e.tail), total) * Fraction(1, g.degree(e.tail))
        for e in g.directed_edges()
    ]
    return EdgeRootedLaw(g, tuple(probs))


@dataclass(frozen=True)
class NBWKernel:
    """Stochastic matrix of the non-backtracking step over directed edges.

    Row (x, y) is uniform on {(y, z): z ~ y, z != x}; the matrix is indexed by
    ``edges`` and ``index`` gives the reverse lookup.
    """

    edges: tuple[DirectedEdge, ...]
    matrix: np.ndarray

    def index(self) -> dict[DirectedEdge, int]:
        return {e: i for i, e in enumerate(self.edges)}


def _successors(g: Graph) -> tuple[list[DirectedEdge], dict[DirectedEdge, int], list[list[int]]]:
    edges = g.directed_edges()
    index = {e: i for i, e in enumerate(edges)}
    succ = [
        [index[DirectedEdge(e.head, z)] for z in g.adjacency[e.head] if z != e.tail]
        for e in edges
    ]
    return edges, index, succ


def nbw_transition(g: Graph) -> NBWKernel:
    _require_leafless(g)
    edges, _, succ = _successors(g)
    size = len(edges)
    m = np.zeros((size, size), dtype=np.float64)
    for i, targets in enumerate(succ):
        w = 1.0 / len(targets)
        for j in targets:
            m[i, j] = w
    return NBWKernel(tuple(edges), m)


class StationarityReport(NamedTuple):
    stationarity_deviation: float
    reversal_deviation: float


def stationarity_check(g: Graph) -> StationarityReport:
    """Max deviation of u^T M from u (u uniform on directed edges) and of the
    reversal pushforward of u from u.

    Accumulates row sums directly from successor lists, without materializing
    the kernel matrix, so it stays usable on graphs where 2m x 2m is large.
    """
    _require_leafless(g)
    edges, index, succ = _successors(g)
    size = len(edges)
    u = 1.0 / size
    acc = [0.0] * size
    for targets in succ:
        w = u / len(targets)
        for j in targets:
            acc[j] += w
    stat_dev = max(abs(a - u) for a in acc)
    rev_dev = max(abs(u - u) for _ in edges)  # uniform law is reversal invariant
    return StationarityReport(stat_dev, rev_dev)


def nbw_entropy(stats: DegreeStats) -> float:
    """Entropy (nats) of one non-backtracking step under the stationary law:
    E[deg log(deg - 1)] / E[deg]."""
    if stats.min_degree < 2 or stats.dlog_mean is None:
        raise GraphInputError("nbw_entropy undefined when a leaf exists")
    return stats.dlog_mean / stats.d_av


# ----------------------------------------------------------------------------
# Mass-Transport Principle
# ----------------------------------------------------------------------------


def mtp_check(g: Graph, f: Callable[[Graph, int, int], object]) -> tuple:
    """Evaluate both sides of the Mass-Transport identity.

    lhs = (1/n) sum_x sum_y f(x, y) is the mass the root sends, rhs the mass it
    receives. For a finite graph with a uniform root the two double sums are
    the same sum reindexed, so equality is exact whenever f returns exact
    numbers (ints or Fractions).
    """
    n = g.vertex_count
    if n == 0:
        raise GraphInputError("mtp_check needs at least one vertex")
    lhs = sum(f(g, x, y) for x in range(n) for y in range(n))
    rhs = sum(f(g, y, x) for x in range(n) for y in range(n))
    if isinstance(lhs, (int, Fraction)) and isinstance(rhs, (int, Fraction)):
        return Fraction(lhs, n), Fraction(rhs, n)
    return lhs / n, rhs / n


def degree_transport(h: Callable[[int, int], object]) -> Callable[[Graph, int, int], object]:
    """Transport f(x, y) = 1[x ~ y] * h(deg x, deg y)."""

    def f(g: Graph, x: int, y: int):
        return h(g.degree(x), g.degree(y)) if g.has_edge(x, y) else 0

    return f


def distance_window_transport(lo: int, hi: int) -> Callable[[Graph, int, int], object]:
    """Transport f(x, y) = 1[lo <= dist(x, y) <= hi]."""

    def f(g: Graph, x: int, y: int):
        d = bfs_distances(g, x, limit=hi)[y]
        return 1 if 0 <= d and lo <= d <= hi else 0

    return f


BUILTIN_TRANSPORTS: Mapping[str, Callable[[Graph, int, int], object]] = {
    "adjacency": degree_transport(lambda dx, dy: 1),
    "head_degree": degree_transport(lambda dx, dy: dy),
    "degree_product": degree_transport(lambda dx, dy: dx * dy * dy),
    "srw_step": degree_transport(lambda dx, dy: Fraction(1, dx)),
    "distance_two": distance_window_transport(2, 2),
}


# ----------------------------------------------------------------------------
# Simulation
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class NBWTrajectory:
    edges: tuple[DirectedEdge, ...]
    seed: int


@dataclass(frozen=True)
class NBWSimulation:
    trajectory: NBWTrajectory
    counts: Mapping[DirectedEdge, int]
    total: int
    uniform_target: float
    stderr: float


def simulate_nbw(
    g: Graph, steps: int, seed: int, start: DirectedEdge | None = None
) -> NBWSimulation:
    """Run ``steps`` non-backtracking steps and tally edge occupancy.

    The start edge is drawn from the uniform edge law unless given. The
    occupancy of each directed edge converges to 1/2m; ``stderr`` is the
    binomial standard error sqrt(p(1-p)/N) against that target.
    """
    _require_leafless(g)
    if steps < 0:
        raise GraphInputError(f"steps must be nonnegative, got {steps}")
    edges, index, succ = _successors(g)
    rng = np.random.default_rng(seed)
    if start is None:
        cur = int(rng.integers(len(edges)))
    else:
        start = DirectedEdge(*start)
        if start not in index:
            raise GraphInputError(f"start edge {start} is not a directed edge of the graph")
        cur = index[start]
    visited = [cur]
    for _ in range(steps):
        targets = succ[cur]
        nxt = targets[int(rng.integers(len(targets)))]
        if edges[nxt].tail != edges[cur].head or edges[nxt] == edges[cur].reverse():
            raise AssertionError("non-backtracking step invariant violated")
        cur = nxt
        visited.append(cur)
    counts: dict[DirectedEdge, int] = {}
    for i in visited:
        counts[edges[i]] = counts.get(edges[i], 0) + 1
    total = len(visited)
    p = 1.0 / len(edges)
    stderr = math.sqrt(p * (1.0 - p) / total)
    return NBWSimulation(
        trajectory=NBWTrajectory(tuple(edges[i] for i in visited), seed),
        counts=counts,
        total=total,
        uniform_target=p,
        stderr=stderr,
    )
