"""Exact closed-walk counting, Dyck paths, the tree-walk codec, weighted walks.

Closed walks in a tree are encoded by their height profile (the Dyck path of
root distances along the walk) together with the directed edges taken at the
forward times, i.e. the steps that increase the height. Decoding replays a
stack discipline: forward steps push their edge, backward steps pop and
traverse the reversal. This codec is what connects walk counts to Catalan
numbers and to non-backtracking-walk entropy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .graph import BudgetError, DirectedEdge, Graph, GraphInputError, bfs_distances

__all__ = [
    "DYCK_ENUM_LIMIT",
    "DyckPath",
    "TreeWalkCode",
    "WALK_BUDGET_DEFAULT",
    "WalkCountTable",
    "WeightFn",
    "catalan",
    "closed_walk_counts",
    "decode_tree_walk",
    "edge_weight",
    "encode_tree_walk",
    "enumerate_dyck",
    "profile_stack_states",
    "srw_return_probs",
    "walk_identity_check",
    "weighted_closed_walks",
]

WALK_BUDGET_DEFAULT = 64
DYCK_ENUM_LIMIT = 14
IDENTITY_K_LIMIT = 6
IDENTITY_SIZE_LIMIT = 16


@dataclass(frozen=True)
class WalkCountTable:
    """counts[k] = number of closed walks of length k from ``root``, exact."""

    root: int
    counts: tuple[int, ...]

    @property
    def kmax(self) -> int:
        return len(self.counts) - 1


def _ball_adjacency(g: Graph, root: int, radius: int) -> tuple[list[list[int]], int]:
    """Local adjacency lists restricted to the ball B_radius(root)."""
    dist = bfs_distances(g, root, limit=radius)
    ball = [v for v in range(g.vertex_count) if 0 <= dist[v] <= radius]
    local = {v: i for i, v in enumerate(ball)}
    adj = [[local[w] for w in g.adjacency[v] if w in local] for v in ball]
    return adj, local[root]


def closed_walk_counts(
    g: Graph, root: int, kmax: int, budget: int = WALK_BUDGET_DEFAULT
) -> WalkCountTable:
    """Exact (A^k)_{root,root} for k = 0..kmax by integer vector iteration.

    A closed walk of length k stays within distance floor(k/2) of its start,
    so the iteration runs on the ball of radius floor(kmax/2) only. Counts are
    Python integers, so growth like max_degree^k never overflows.
    """
    if kmax < 0:
        raise GraphInputError(f"kmax must be nonnegative, got {kmax}")
    if budget is not None and kmax > budget:
        raise BudgetError(f"kmax={kmax} exceeds walk budget {budget}")
    adj, start = _ball_adjacency(g, root, kmax // 2)
    vec = [0] * len(adj)
    vec[start] = 1
    counts = [1]
    for _ in range(kmax):
        vec = [sum(map(vec.__getitem__, nbrs)) for nbrs in adj]
        counts.append(vec[start])
    return WalkCountTable(root, tuple(counts))


def srw_return_probs(g: Graph, root: int, kmax: int) -> list[float]:
    """Return probabilities p_k = (P^k)_{root,root} of the simple random walk.

    Degrees are those of the full graph even though the iteration is
    ball-local; walks contributing to p_k never leave B_{k/2}(root).
    """
    if g.min_degree < 1:
        raise GraphInputError("srw_return_probs undefined with an isolated vertex")
    if kmax < 0:
        raise GraphInputError(f"kmax must be nonnegative, got {kmax}")
    dist = bfs_distances(g, root, limit=kmax // 2)
    ball = [v for v in range(g.vertex_count) if dist[v] >= 0]
    local = {v: i for i, v in enumerate(ball)}
    adj = [[(local[w], 1.0 / g.degree(w)) for w in g.adjacency[v] if w in local] for v in ball]
    vec = [0.0] * len(ball)
    vec[local[root]] = 1.0
    probs = [1.0]
    for _ in range(kmax):
        vec = [sum(vec[j] * p for j, p in nbrs) for nbrs in adj]
        probs.append(vec[local[root]])
    return probs


# ----------------------------------------------------------------------------
# Dyck paths
# ----------------------------------------------------------------------------


def catalan(k: int) -> int:
    """Number of Dyck paths of length 2k: binom(2k, k) / (k + 1)."""
    if k < 0:
        raise ValueError(f"catalan index must be nonnegative, got {k}")
    return math.comb(2 * k, k) // (k + 1)


@dataclass(frozen=True)
class DyckPath:
    """A +1/-1 step sequence with all prefix sums >= 0 and total 0."""

    steps: tuple[int, ...]

    def __post_init__(self):
        height = 0
        for s in self.steps:
            if s not in (1, -1):
                raise ValueError(f"Dyck steps must be +1 or -1, got {s}")
            height += s
            if height < 0:
                raise ValueError("Dyck prefix sum went negative")
        if height != 0:
            raise ValueError("Dyck path must return to height 0")

    def __len__(self) -> int:
        return len(self.steps)

    def heights(self) -> tuple[int, ...]:
        out = [0]
        for s in self.steps:
            out.append(out[-1] + s)
        return tuple(out)


def enumerate_dyck(k: int, limit: int = DYCK_ENUM_LIMIT) -> list[DyckPath]:
    """All Dyck paths of length 2k. Capped (C_14 = 2674440 paths already)."""
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if k > limit:
        raise BudgetError(f"Dyck enumeration k={k} exceeds limit {limit}")
    paths: list[DyckPath] = []
    steps: list[int] = []

    def extend(height: int, ups_left: int, downs_left: int):
        if ups_left == 0 and downs_left == 0:
            paths.append(DyckPath(tuple(steps)))
            return
        if ups_left > 0:
            steps.append(1)
            extend(height + 1, ups_left - 1, downs_left)
            steps.pop()
        if downs_left > 0 and height > 0:
            steps.append(-1)
            extend(height - 1, ups_left, downs_left - 1)
            steps.pop()

    extend(0, k, k)
    return paths


# ----------------------------------------------------------------------------
# Height-profile / forward-step codec
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeWalkCode:
    profile: DyckPath
    forward_edges: tuple[DirectedEdge, ...]


def _check_tree(tree: Graph) -> None:
    if not tree.is_tree():
        raise GraphInputError("expected a tree (connected, m = n - 1)")


def encode_tree_walk(tree: Graph, walk: Sequence[int]) -> TreeWalkCode:
    """Encode a closed walk from walk[0] as (height profile, forward edges)."""
    _check_tree(tree)
    if len(walk) < 1:
        raise GraphInputError("walk must contain at least the starting vertex")
    if walk[0] != walk[-1]:
        raise GraphInputError(f"open walk: starts at {walk[0]}, ends at {walk[-1]}")
    root = walk[0]
    dist = bfs_distances(tree, root)
    steps = []
    forward = []
    for a, b in zip(walk, walk[1:]):
        if not tree.has_edge(a, b):
            raise GraphInputError(f"not a walk: ({a}, {b}) is not an edge")
        diff = dist[b] - dist[a]
        steps.append(diff)
        if diff == 1:
            forward.append(DirectedEdge(a, b))
    return TreeWalkCode(DyckPath(tuple(steps)), tuple(forward))


def decode_tree_walk(tree: Graph, root: int, code: TreeWalkCode) -> list[int]:
    """Replay the stack discipline: forward times push their edge, backward
    times pop the most recent edge and traverse it in reverse."""
    _check_tree(tree)
    walk = [root]
    stack: list[DirectedEdge] = []
    forward = iter(code.forward_edges)
    for s in code.profile.steps:
        if s == 1:
            edge = next(forward, None)
            if edge is None:
                raise GraphInputError("fewer forward edges than forward times")
            if edge.tail != walk[-1]:
                raise GraphInputError(
                    f"forward edge {edge} does not start at current vertex {walk[-1]}"
                )
            if not tree.has_edge(edge.tail, edge.head):
                raise GraphInputError(f"forward edge {edge} is not a tree edge")
            stack.append(edge)
            walk.append(edge.head)
        else:
            edge = stack.pop()
            walk.append(edge.tail)
    if next(forward, None) is not None:
        raise GraphInputError("more forward edges than forward times")
    return walk


def profile_stack_states(profile: DyckPath) -> list[tuple[int, ...]]:
    """Stack of forward times after each step; determined by the profile alone.

    For steps (+1,-1,+1,+1,-1,-1) the trace is
    (1,) () (3,) (3,4) (3,) () using 1-based step times.
    """
    stack: list[int] = []
    states = []
    for i, s in enumerate(profile.steps, start=1):
        if s == 1:
            stack.append(i)
        else:
            stack.pop()
        states.append(tuple(stack))
    return states


# ----------------------------------------------------------------------------
# Weighted walk counts on trees
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightFn:
    """Directed-edge weight function with a positive lower bound ``delta``.

    Modes: "unit" (all weights 1, exact integer arithmetic), "srw"
    (weight(x, y) = 1/deg(x), resolved against the graph in use, delta is
    1/max_degree there), "explicit" (a table keyed by (tail, head); rational
    entries keep downstream arithmetic exact).
    """

    mode: str
    table: Mapping[tuple[int, int], object] | None = None
    delta: object = 1

    @classmethod
    def unit(cls) -> "WeightFn":
        return cls("unit", None, 1)

    @classmethod
    def srw(cls) -> "WeightFn":
        return cls("srw", None, None)

    @classmethod
    def explicit(cls, table: Mapping[tuple[int, int], object], delta=None) -> "WeightFn":
        if not table:
            raise GraphInputError("explicit weight table is empty")
        if delta is None:
            delta = min(table.values())
        for edge, value in table.items():
            if value < delta or value <= 0:
                raise GraphInputError(f"weight {value} on {edge} below delta={delta} or <= 0")
        return cls("explicit", dict(table), delta)


def edge_weight(w: WeightFn, g: Graph, x: int, y: int):
    if w.mode == "unit":
        return 1
    if w.mode == "srw":
        return 1.0 / g.degree(x)
    assert w.table is not None
    try:
        return w.table[(x, y)]
    except KeyError:
        raise GraphInputError(f"explicit weight table has no entry for ({x}, {y})") from None


def weighted_closed_walks(tree: Graph, root: int, kmax: int, w: WeightFn) -> list:
    """Weighted closed-walk counts: entry k is the sum over closed walks of
    length 2k from ``root`` of the product of the 2k step weights.

    Unit weights reproduce closed_walk_counts at even lengths; srw weights
    reproduce srw_return_probs on the tree.
    """
    _check_tree(tree)
    if kmax < 0:
        raise GraphInputError(f"kmax must be nonnegative, got {kmax}")
    dist = bfs_distances(tree, root, limit=kmax)
    ball = [v for v in range(tree.vertex_count) if dist[v] >= 0]
    local = {v: i for i, v in enumerate(ball)}
    # incoming[u] lists (v_local, weight of step v -> u)
    incoming = [
        [(local[v], edge_weight(w, tree, v, u)) for v in tree.adjacency[u] if v in local]
        for u in ball
    ]
    zero = 0 if w.mode == "unit" else 0.0 if w.mode == "srw" else 0 * w.delta
    vec = [zero] * len(ball)
    vec[local[root]] = zero + 1
    totals = [zero + 1]
    for step in range(1, 2 * kmax + 1):
        vec = [sum((vec[j] * wt for j, wt in inc), zero) for inc in incoming]
        if step % 2 == 0:
            totals.append(vec[local[root]])
    return totals


def _symmetric_weight(w: WeightFn, g: Graph, x: int, y: int):
    return edge_weight(w, g, x, y) * edge_weight(w, g, y, x)


def walk_identity_check(tree: Graph, root: int, k: int, w: WeightFn):
    """Residual of the profile-conditioned walk decomposition.

    The weighted closed-walk count from ``root`` must equal, summed over Dyck
    profiles h and first neighbours y, kappa(root, y) times the weighted count
    of walks with first step y and profile h, where walks are weighted by the
    symmetrized kappa over forward times after the first. The right side is
    brute-force enumeration, the left side the transfer iteration, so the two
    routes are independent. Exact arithmetic whenever the weights are rational.
    """
    if k > IDENTITY_K_LIMIT:
        raise BudgetError(f"walk_identity_check limited to k <= {IDENTITY_K_LIMIT}, got {k}")
    if tree.vertex_count > IDENTITY_SIZE_LIMIT:
        raise BudgetError(
            f"walk_identity_check limited to {IDENTITY_SIZE_LIMIT} vertices, "
            f"got {tree.vertex_count}"
        )
    _check_tree(tree)
    lhs = weighted_closed_walks(tree, root, k, w)[k]

    # parent[v] is the neighbour of v on the path back to root
    dist = bfs_distances(tree, root)
    parent = [-1] * tree.vertex_count
    for v in range(tree.vertex_count):
        for u in tree.adjacency[v]:
            if dist[u] == dist[v] - 1:
                parent[v] = u

    def profile_sum(first: int, steps: tuple[int, ...]):
        """Sum of prod kappa over forward times > 1, over walks with the given
        first neighbour and height profile."""

        def go(cur: int, idx: int, acc):
            if idx == len(steps):
                return acc
            if steps[idx] == -1:
                return go(parent[cur], idx + 1, acc)
            total = 0 * acc
            for z in tree.adjacency[cur]:
                if z == parent[cur]:
                    continue
                total += go(z, idx + 1, acc * _symmetric_weight(w, tree, cur, z))
            return total

        one = Fraction(1) if w.mode in ("unit", "explicit") else 1.0
        return go(first, 1, one)

    rhs = 0
    for h in enumerate_dyck(k):
        for y in tree.adjacency[root]:
            rhs += _symmetric_weight(w, tree, root, y) * profile_sum(y, h.steps)
    return abs(lhs - rhs)
