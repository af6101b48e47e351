"""Random rooted-tree samplers, Monte Carlo estimators, and rooted-ball censuses.

The Galton-Watson sampler here is the unimodular variant: the root degree is
drawn from the given law pi, and every other vertex draws its offspring count
from the size-biased shifted law P(offspring = k - 1) = k pi(k) / E[D]. That is
the construction under which the resulting random rooted tree satisfies the
Mass-Transport Principle.

All estimators derive a per-sample generator from (master seed, sample index),
so aggregation is deterministic no matter how samples are scheduled.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .graph import BudgetError, Graph, GraphInputError, bfs_distances, build_graph, induced_subgraph
from .walks import closed_walk_counts

__all__ = [
    "Census",
    "DegreeDistribution",
    "Estimate",
    "RootedTree",
    "ball_census",
    "canonical_rooted_code",
    "estimate_sphere",
    "estimate_walk_moment",
    "exact_sphere_expectation",
    "regular_tree_walks",
    "sample_ugw",
    "tv_distance",
]

EXACT_CANON_LIMIT = 40
# legitimate desk-scale balls refine almost immediately (grid/cycle/Petersen
# balls use < 30 search nodes); only factorially symmetric balls hit the cap
CANON_SEARCH_CAP = 5_000
UGW_NODE_BUDGET = 1_000_000


@dataclass(frozen=True)
class DegreeDistribution:
    """A finitely supported root-degree law with its moments.

    Leafless mode (the default) requires support >= 2, which is what the
    bound machinery assumes; censuses and plain sampling may allow degree 1
    via ``allow_leaves=True``. Rational probabilities (Fractions) keep the
    size-biased construction exact.
    """

    support: tuple[int, ...]
    probabilities: tuple

    def __post_init__(self):
        if len(self.support) != len(self.probabilities) or not self.support:
            raise GraphInputError("support and probabilities must align and be nonempty")
        if list(self.support) != sorted(set(self.support)):
            raise GraphInputError("support must be strictly increasing degrees")
        if any(d < 1 for d in self.support):
            raise GraphInputError("degrees must be >= 1")
        if any(p <= 0 for p in self.probabilities):
            raise GraphInputError("probabilities must be positive (drop zero atoms)")
        if abs(float(sum(self.probabilities)) - 1.0) > 1e-12:
            raise GraphInputError(f"probabilities sum to {float(sum(self.probabilities))}")

    @classmethod
    def build(cls, pairs, allow_leaves: bool = False) -> "DegreeDistribution":
        items = sorted(pairs)
        support = tuple(d for d, _ in items)
        probs = tuple(p for _, p in items)
        if not allow_leaves and any(d < 2 for d in support):
            raise GraphInputError("degree 1 in support requires allow_leaves=True")
        return cls(support, probs)

    @classmethod
    def from_string(cls, text: str, allow_leaves: bool = False) -> "DegreeDistribution":
        """Parse "2:0.5,3:0.5"; decimal probabilities become exact Fractions."""
        pairs = []
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                d_text, p_text = part.split(":")
                pairs.append((int(d_text), Fraction(p_text)))
            except (ValueError, ZeroDivisionError):
                raise GraphInputError(f"bad degree:probability pair {part!r}") from None
        return cls.build(pairs, allow_leaves=allow_leaves)

    def _moment(self, f) -> float:
        return float(sum(p * f(d) for d, p in zip(self.support, self.probabilities)))

    @property
    def mean_d(self) -> float:
        return self._moment(lambda d: d)

    @property
    def mean_d2(self) -> float:
        return self._moment(lambda d: d * d)

    @property
    def mean_d_dm1(self) -> float:
        """E[D (D - 1)], the mean offspring count of non-root vertices."""
        return self._moment(lambda d: d * (d - 1))

    @property
    def mean_dlog(self) -> float:
        """E[D log(D - 1)] with the 1 * log 0 case excluded by leafless mode."""
        if self.support[0] < 2:
            raise GraphInputError("E[D log(D-1)] undefined with degree-1 support")
        return self._moment(lambda d: d * math.log(d - 1))

    @property
    def mean_dlogd(self) -> float:
        return self._moment(lambda d: d * math.log(d))

    @property
    def min_degree(self) -> int:
        return self.support[0]

    @property
    def max_degree(self) -> int:
        return self.support[-1]

    def is_point_mass(self) -> bool:
        return len(self.support) == 1

    def size_biased_offspring(self) -> tuple[tuple[int, object], ...]:
        """Offspring law of non-root vertices: P(k - 1) = k pi(k) / E[D].

        Exact (Fraction) whenever the input probabilities are exact; the
        probabilities sum to 1 identically.
        """
        mean = sum(d * p for d, p in zip(self.support, self.probabilities))
        return tuple(
            (d - 1, d * p / mean) for d, p in zip(self.support, self.probabilities)
        )


class RootedTree(NamedTuple):
    graph: Graph
    root: int
    depth: int


class _Sampler:
    """Inverse-CDF draws for the root-degree and offspring laws."""

    def __init__(self, pi: DegreeDistribution):
        root_probs = np.array([float(p) for p in pi.probabilities])
        self.root_values = np.array(pi.support)
        self.root_cum = np.cumsum(root_probs)
        offspring = pi.size_biased_offspring()
        self.off_values = np.array([k for k, _ in offspring])
        self.off_cum = np.cumsum(np.array([float(p) for _, p in offspring]))

    def root_degree(self, rng) -> int:
        return int(self.root_values[np.searchsorted(self.root_cum, rng.random())])

    def offspring(self, rng, count: int) -> np.ndarray:
        if count == 0:
            return np.zeros(0, dtype=np.int64)
        return self.off_values[np.searchsorted(self.off_cum, rng.random(count))]


def sample_ugw(
    pi: DegreeDistribution, depth: int, seed, node_budget: int = UGW_NODE_BUDGET
) -> RootedTree:
    """Sample a unimodular Galton-Watson tree truncated at ``depth``.

    Vertex 0 is the root; vertices at distance ``depth`` get no children.
    Deterministic for a fixed seed (ints and (master, index) tuples both work).
    """
    if depth < 0:
        raise GraphInputError(f"depth must be nonnegative, got {depth}")
    rng = np.random.default_rng(seed)
    sampler = _Sampler(pi)
    edges: list[tuple[int, int]] = []
    n = 1
    frontier = [0]
    counts_next = [sampler.root_degree(rng)] if depth > 0 else []
    for level in range(depth):
        children_counts = counts_next
        nxt = []
        for v, c in zip(frontier, children_counts):
            for _ in range(c):
                edges.append((v, n))
                nxt.append(n)
                n += 1
                if n > node_budget:
                    raise BudgetError(f"UGW sample exceeded node budget {node_budget}")
        frontier = nxt
        if level + 1 < depth:
            counts_next = list(sampler.offspring(rng, len(frontier)))
    return RootedTree(build_graph(edges, n), 0, depth)


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo estimate: mean, stderr = sample std / sqrt(samples)."""

    mean: float
    stderr: float
    samples: int
    seed: int


def _aggregate(values: Sequence[float], samples: int, seed) -> Estimate:
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    stderr = float(arr.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return Estimate(mean=mean, stderr=stderr, samples=samples, seed=seed)


def estimate_walk_moment(pi: DegreeDistribution, k: int, samples: int, seed) -> Estimate:
    """Estimate E[W_2k(T, root)] over unimodular Galton-Watson trees.

    Each sample draws a depth-k tree (walks of length 2k never go deeper) and
    counts its closed walks exactly.
    """
    if samples < 1:
        raise GraphInputError(f"samples must be >= 1, got {samples}")
    values = []
    for i in range(samples):
        tree = sample_ugw(pi, k, (seed, i))
        values.append(float(closed_walk_counts(tree.graph, tree.root, 2 * k, budget=2 * k).counts[2 * k]))
    return _aggregate(values, samples, seed)


def exact_sphere_expectation(pi: DegreeDistribution, r: int) -> float:
    """Branching value E[|S_r|] = E[D] * m^(r-1) with m = E[D(D-1)] / E[D]."""
    if r < 1:
        raise GraphInputError(f"sphere radius must be >= 1, got {r}")
    mean = pi.mean_d
    return mean * (pi.mean_d_dm1 / mean) ** (r - 1)


def estimate_sphere(
    pi: DegreeDistribution, r: int, samples: int, seed
) -> tuple[Estimate, float]:
    """Monte Carlo estimate of E[|S_r|] plus the exact branching value.

    Only generation sizes are simulated (same draws as growing the tree level
    by level), which keeps 1e5-sample runs cheap.
    """
    if r < 1:
        raise GraphInputError(f"sphere radius must be >= 1, got {r}")
    if samples < 1:
        raise GraphInputError(f"samples must be >= 1, got {samples}")
    sampler = _Sampler(pi)
    values = []
    for i in range(samples):
        rng = np.random.default_rng((seed, i))
        size = sampler.root_degree(rng)
        for _ in range(r - 1):
            size = int(sampler.offspring(rng, size).sum())
        values.append(float(size))
    return _aggregate(values, samples, seed), exact_sphere_expectation(pi, r)


def regular_tree_walks(d: int, kmax: int) -> tuple[int, ...]:
    """Exact closed-walk counts W_2k from a vertex of the infinite d-regular tree.

    Height-profile transfer: a forward step from height 0 has d choices, from
    height > 0 it has d - 1; backward steps are forced. O(kmax^2) integer work.
    """
    if d < 2:
        raise GraphInputError(f"regular tree degree must be >= 2, got {d}")
    if kmax < 0:
        raise GraphInputError(f"kmax must be nonnegative, got {kmax}")
    cur = [0] * (kmax + 2)
    cur[0] = 1
    counts = [1]
    for step in range(1, 2 * kmax + 1):
        nxt = [0] * (kmax + 2)
        top = min(step, kmax)
        for h in range(top + 1):
            v = cur[h]
            if not v:
                continue
            if h + 1 <= kmax:
                nxt[h + 1] += v * (d if h == 0 else d - 1)
            if h > 0:
                nxt[h - 1] += v
        cur = nxt
        if step % 2 == 0:
            counts.append(cur[0])
    return tuple(counts)


# ----------------------------------------------------------------------------
# Rooted-ball census and canonical codes
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Census:
    """Frequencies of canonical rooted-ball codes over all root choices."""

    radius: int
    counts: dict
    total: int
    exact: bool


class _CanonBudget(Exception):
    pass


def _refine(adj: list[list[int]], colors: list[int]) -> list[int]:
    # canonical color ids: sorted signature order, so refinement is
    # label-invariant
    while True:
        sigs = [(colors[v], tuple(sorted(colors[u] for u in adj[v]))) for v in range(len(adj))]
        lookup = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new_colors = [lookup[s] for s in sigs]
        if new_colors == colors:
            return colors
        colors = new_colors


def _code_from_discrete(adj: list[list[int]], colors: list[int]) -> tuple:
    order = sorted(range(len(adj)), key=colors.__getitem__)
    label = [0] * len(adj)
    for pos, v in enumerate(order):
        label[v] = pos
    edges = sorted(
        (label[u], label[v]) for u in range(len(adj)) for v in adj[u] if label[u] < label[v]
    )
    return (len(adj), tuple(edges))


def _min_code(adj: list[list[int]], colors: list[int], budget: list[int]) -> tuple:
    # budget counts search nodes, so walls of equal-code branches on highly
    # symmetric balls cannot stall the census; exhaustion degrades to hashing
    budget[0] -= 1
    if budget[0] < 0:
        raise _CanonBudget
    colors = _refine(adj, colors)
    n = len(adj)
    if len(set(colors)) == n:
        return _code_from_discrete(adj, colors)
    by_color: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        by_color.setdefault(c, []).append(v)
    target = min(c for c, vs in by_color.items() if len(vs) > 1)
    best = None
    for v in by_color[target]:
        child = list(colors)
        child[v] = n  # fresh color, larger than any refined id
        code = _min_code(adj, child, budget)
        if best is None or code < best:
            best = code
    return best


def canonical_rooted_code(
    g: Graph, root: int, radius: int, exact_limit: int = EXACT_CANON_LIMIT
) -> tuple[str, bool]:
    """Canonical code of the rooted ball B_radius(g, root).

    Exact canonical form (minimum code over refinement-individualized
    orderings) up to ``exact_limit`` vertices; larger balls fall back to an
    iterative-refinement hash, flagged non-exact, which can in principle
    collide for refinement-equivalent non-isomorphic balls.
    """
    dist = bfs_distances(g, root, limit=radius)
    vertices = [v for v in range(g.vertex_count) if 0 <= dist[v] <= radius]
    ball = induced_subgraph(g, vertices)
    local_root = vertices.index(root)
    adj = [list(ball.adjacency[v]) for v in range(ball.vertex_count)]
    local_dist = bfs_distances(ball, local_root)
    init = list(local_dist)  # root alone at distance 0
    if ball.vertex_count <= exact_limit:
        try:
            n, edges = _min_code(adj, init, [CANON_SEARCH_CAP])
            body = ",".join(f"{u}-{v}" for u, v in edges)
            return f"g{n}:{body}", True
        except _CanonBudget:
            pass
    colors = _refine(adj, init)
    payload = repr((ball.vertex_count, colors[local_root],
                    sorted((colors[v], tuple(sorted(colors[u] for u in adj[v])))
                           for v in range(ball.vertex_count))))
    digest = hashlib.sha256(payload.encode()).hexdigest()[:16]
    return f"h{ball.vertex_count}:{digest}", False


def ball_census(g: Graph, r: int, exact_limit: int = EXACT_CANON_LIMIT) -> Census:
    """Census of canonical r-ball codes over all n root choices."""
    if r < 0:
        raise GraphInputError(f"radius must be nonnegative, got {r}")
    counts: dict[str, int] = {}
    all_exact = True
    for root in range(g.vertex_count):
        code, exact = canonical_rooted_code(g, root, r, exact_limit=exact_limit)
        all_exact &= exact
        counts[code] = counts.get(code, 0) + 1
    return Census(radius=r, counts=counts, total=g.vertex_count, exact=all_exact)


def tv_distance(a: Census, b: Census) -> float:
    """Total variation distance between two censuses of equal radius."""
    if a.radius != b.radius:
        raise GraphInputError(f"census radii differ: {a.radius} vs {b.radius}")
    codes = set(a.counts) | set(b.counts)
    total = Fraction(0)
    for code in codes:
        total += abs(Fraction(a.counts.get(code, 0), a.total) - Fraction(b.counts.get(code, 0), b.total))
    return float(total / 2)
