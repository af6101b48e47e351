"""Truncated universal covers and the walk-count lifting inequality."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import NamedTuple

from .graph import BudgetError, Graph, GraphInputError, build_graph
from .walks import WalkCountTable, closed_walk_counts

__all__ = [
    "NODE_BUDGET_DEFAULT",
    "CoverBall",
    "LiftCheck",
    "cover_walk_counts",
    "rho_cover_estimate",
    "universal_cover_ball",
    "verify_lifting",
]

NODE_BUDGET_DEFAULT = 5_000_000
NODE_BUDGET_ENV = "UNISPEC_NODE_BUDGET"


def _node_budget(override: int | None) -> int:
    if override is not None:
        return override
    env = os.environ.get(NODE_BUDGET_ENV)
    return int(env) if env else NODE_BUDGET_DEFAULT


@dataclass(frozen=True)
class CoverBall:
    """Radius-r ball of the universal cover around a lift of ``cover_map[root]``.

    Vertices of the ball are the non-backtracking paths of length <= radius
    from the base vertex (the empty path is the root). Only the parent edge and
    the final base vertex of each path are materialized. ``cover_map`` sends
    each cover vertex to the base vertex its path ends at; it restricts to an
    isomorphism on the neighbourhood of every vertex of depth < radius.
    """

    tree: Graph
    root: int
    cover_map: tuple[int, ...]
    radius: int


def _ball_size_estimate(max_degree: int, radius: int) -> int:
    if radius == 0 or max_degree == 0:
        return 1
    if max_degree == 1:
        return 2
    if max_degree == 2:
        return 2 * radius + 1
    return 1 + max_degree * ((max_degree - 1) ** radius - 1) // (max_degree - 2)


def universal_cover_ball(
    g: Graph, base: int, radius: int, node_budget: int | None = None
) -> CoverBall:
    """Materialize the universal cover out to ``radius`` around a lift of ``base``."""
    if radius < 0:
        raise GraphInputError(f"radius must be nonnegative, got {radius}")
    if not g.is_connected():
        raise GraphInputError("universal cover requires a connected graph")
    budget = _node_budget(node_budget)
    estimate = _ball_size_estimate(g.max_degree, radius)
    if estimate > budget:
        raise BudgetError(
            f"cover ball size estimate {estimate} exceeds node budget {budget} "
            f"(max degree {g.max_degree}, radius {radius})"
        )
    # cover vertex i: base_of[i] = final base vertex, came_from[i] = base vertex
    # preceding it on the path (-1 at the root), parent[i] = cover parent.
    base_of = [base]
    came_from = [-1]
    depth_of = [0]
    edges: list[tuple[int, int]] = []
    frontier = [0]
    for depth in range(radius):
        nxt = []
        for node in frontier:
            b = base_of[node]
            for z in g.adjacency[b]:
                if z == came_from[node]:
                    continue
                idx = len(base_of)
                if idx > budget:
                    raise BudgetError(f"cover ball exceeded node budget {budget} at depth {depth}")
                base_of.append(z)
                came_from.append(b)
                depth_of.append(depth + 1)
                edges.append((node, idx))
                nxt.append(idx)
        frontier = nxt
    tree = build_graph(edges, len(base_of))
    # the cover map must restrict to an isomorphism around every interior vertex
    for node, depth in enumerate(depth_of):
        if depth < radius and tree.degree(node) != g.degree(base_of[node]):
            raise AssertionError(
                f"cover construction broke local isomorphism at node {node} "
                f"(degree {tree.degree(node)} vs base {g.degree(base_of[node])})"
            )
    return CoverBall(tree=tree, root=0, cover_map=tuple(base_of), radius=radius)


def cover_walk_counts(cb: CoverBall, kmax: int) -> WalkCountTable:
    """Exact closed-walk counts of the cover from the lifted root, k <= 2*kmax.

    Walks of length 2k stay in the radius-k ball, so counts up to length
    2*radius are those of the full (usually infinite) cover.
    """
    if kmax > cb.radius:
        raise GraphInputError(
            f"kmax={kmax} exceeds cover radius {cb.radius}; walks of length 2k "
            f"need radius k"
        )
    return closed_walk_counts(cb.tree, cb.root, 2 * kmax, budget=2 * kmax)


class LiftCheck(NamedTuple):
    k: int
    cover_count: int
    base_count: int
    ok: bool


def verify_lifting(
    g: Graph, base: int, kmax: int, node_budget: int | None = None
) -> list[LiftCheck]:
    """Check W_2k(cover, lift) <= W_2k(g, base) for k = 1..kmax, exactly.

    Closed walks lift injectively through the cover map, so every cover count
    is at most the base count; equality holds at every k when g is a tree.
    """
    cb = universal_cover_ball(g, base, kmax, node_budget=node_budget)
    cover_counts = cover_walk_counts(cb, kmax).counts
    base_counts = closed_walk_counts(g, base, 2 * kmax, budget=2 * kmax).counts
    out = []
    for k in range(1, kmax + 1):
        wc, wb = cover_counts[2 * k], base_counts[2 * k]
        out.append(LiftCheck(k, wc, wb, wc <= wb))
    return out


def rho_cover_estimate(g: Graph, kmax: int, node_budget: int | None = None) -> list[float]:
    """Moment norms ((1/n) sum_x W_2k(cover at x))^(1/2k) for k = 1..kmax.

    The sequence is nondecreasing and every entry is a lower estimate of the
    cover's spectral radius in the vertex-averaged sense; no extrapolation is
    performed, the final entry is an estimate and not a per-root bound.
    """
    if kmax < 1:
        raise GraphInputError(f"kmax must be >= 1, got {kmax}")
    n = g.vertex_count
    sums = [0] * (kmax + 1)
    for base in range(n):
        cb = universal_cover_ball(g, base, kmax, node_budget=node_budget)
        counts = cover_walk_counts(cb, kmax).counts
        for k in range(1, kmax + 1):
            sums[k] += counts[2 * k]
    # math.log accepts arbitrarily large ints, so no float overflow on the way
    return [math.exp((math.log(sums[k]) - math.log(n)) / (2 * k)) for k in range(1, kmax + 1)]
