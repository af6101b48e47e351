"""Spectral-radius, tail-mass, and volume-growth lower bounds from degree moments.

Every bound here consumes either the degree functionals of a concrete finite
graph (DegreeStats) or the moments of an abstract root-degree law
(DegreeDistribution); a small adapter extracts the common moments. All
formulas use natural log and exp in full precision, no series approximations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .graph import DegreeStats, Graph, GraphInputError, degree_stats
from .ensembles import DegreeDistribution
from .spectra import adjacency_spectrum, sigma

__all__ = [
    "AlonBoppanaRow",
    "BoundReport",
    "DegreeMoments",
    "alon_boppana_report",
    "degree_moments",
    "hoory_bound",
    "sphere_growth_bounds",
    "srw_tail_threshold",
    "tail_mass_constant",
    "tail_mass_lower_bound",
    "tree_spectral_radius_bounds",
    "tree_srw_radius_bounds",
]


class DegreeMoments(NamedTuple):
    mean_d: float
    mean_d2: float
    mean_dlog: float  # E[D log(D - 1)]
    mean_dlogd: float  # E[D log D]
    min_degree: int


def degree_moments(source: DegreeStats | DegreeDistribution) -> DegreeMoments:
    if isinstance(source, DegreeStats):
        if source.min_degree < 2 or source.dlog_mean is None:
            raise GraphInputError("degree moments for bounds require minimum degree >= 2")
        return DegreeMoments(
            source.d_av, source.d2_mean, source.dlog_mean, source.dlogd_mean, source.min_degree
        )
    if isinstance(source, DegreeDistribution):
        if source.min_degree < 2:
            raise GraphInputError("degree moments for bounds require support >= 2")
        return DegreeMoments(
            source.mean_d, source.mean_d2, source.mean_dlog, source.mean_dlogd, source.min_degree
        )
    raise TypeError(f"expected DegreeStats or DegreeDistribution, got {type(source)!r}")


def tree_spectral_radius_bounds(stats: DegreeStats | DegreeDistribution) -> tuple[float, float]:
    """Lower bounds on the spectral radius of a leafless unimodular tree.

    b1 = 2 exp(E[D log sqrt(D-1)] / E[D]) and b2 = 2 sqrt(E[D] - 1); b1 >= b2
    by convexity of x log(x - 1) on x >= 2, with equality only for a
    deterministic degree.
    """
    m = degree_moments(stats)
    b1 = 2.0 * math.exp(m.mean_dlog / (2.0 * m.mean_d))
    b2 = 2.0 * math.sqrt(m.mean_d - 1.0)
    return b1, b2


def tree_srw_radius_bounds(stats: DegreeStats | DegreeDistribution) -> tuple[float, float]:
    """Lower bounds on the simple-random-walk spectral radius of such a tree.

    b1 = 2 exp(E[D log(sqrt(D-1)/D)] / E[D]) and b2 = 2 E[D] sqrt(E[D]-1) / E[D^2].
    """
    m = degree_moments(stats)
    b1 = 2.0 * math.exp((m.mean_dlog / 2.0 - m.mean_dlogd) / m.mean_d)
    b2 = 2.0 * m.mean_d * math.sqrt(m.mean_d - 1.0) / m.mean_d2
    return b1, b2


def hoory_bound(stats: DegreeStats | DegreeDistribution) -> float:
    """2 sqrt(Lambda) with Lambda the degree-geometric-mean product.

    For a graph, Lambda is the per-vertex product prod (deg v - 1)^(deg v / 2m)
    already carried by DegreeStats; for a degree law it is the product over the
    support. Algebraically identical to the first tree-radius bound, but
    evaluated through the product form, which makes the identity a usable
    cross-check of both code paths.
    """
    if isinstance(stats, DegreeStats):
        if stats.hoory_lambda is None:
            raise GraphInputError("hoory bound undefined when a leaf exists")
        return 2.0 * math.sqrt(stats.hoory_lambda)
    if isinstance(stats, DegreeDistribution):
        if stats.min_degree < 2:
            raise GraphInputError("hoory bound requires support >= 2")
        mean = stats.mean_d
        lam = 1.0
        for d, p in zip(stats.support, stats.probabilities):
            lam *= float(d - 1) ** (d * float(p) / mean)
        return 2.0 * math.sqrt(lam)
    raise TypeError(f"expected DegreeStats or DegreeDistribution, got {type(stats)!r}")


def tail_mass_lower_bound(cover_moment_w2k, rho_h: float, a: float, k: int) -> float:
    """Lower bound (E[W_2k(cover)] - a^2k) / rho^2k on the spectral mass above a.

    May be nonpositive, in which case it is vacuous. ``cover_moment_w2k`` is a
    certified finite-k moment of the truncated cover, never an extrapolation.
    """
    if rho_h <= 0:
        raise GraphInputError(f"rho must be positive, got {rho_h}")
    if k < 1:
        raise GraphInputError(f"k must be >= 1, got {k}")
    return (float(cover_moment_w2k) - a ** (2 * k)) / rho_h ** (2 * k)


class TailMassConstant(NamedTuple):
    c: float
    K: int


def tail_mass_constant(
    epsilon: float, rho_sup: float, cover_moments: Sequence[float], rho_t: float
) -> TailMassConstant:
    """Uniform positive constant below the spectral mass above rho_t - epsilon.

    ``cover_moments`` holds E[W_2k(cover)] for k = 1..len; K is the smallest k
    with moment / rho_t^2k >= (1 - delta/2)^2k where delta = epsilon / rho_t,
    and c = ((1 - delta/2)^2K - (1 - delta)^2K) / (rho_sup / rho_t)^2K > 0.
    """
    if not 0 < epsilon < rho_t:
        raise GraphInputError(f"need 0 < epsilon < rho_t, got epsilon={epsilon}, rho_t={rho_t}")
    if rho_sup < rho_t:
        raise GraphInputError(f"need rho_sup >= rho_t, got {rho_sup} < {rho_t}")
    delta = epsilon / rho_t
    for idx, moment_value in enumerate(cover_moments, start=1):
        if float(moment_value) / rho_t ** (2 * idx) >= (1.0 - delta / 2.0) ** (2 * idx):
            big_k = idx
            break
    else:
        raise GraphInputError(
            f"no qualifying K among {len(list(cover_moments))} cover moments; increase k budget"
        )
    c = ((1.0 - delta / 2.0) ** (2 * big_k) - (1.0 - delta) ** (2 * big_k)) / (
        (rho_sup / rho_t) ** (2 * big_k)
    )
    return TailMassConstant(c, big_k)


def srw_tail_threshold(stats: DegreeStats | DegreeDistribution) -> float:
    """2 d_av sqrt(d_av - 1) / E[deg^2]: the threshold below which the Markov
    spectrum of a growing leafless sequence keeps positive mass."""
    m = degree_moments(stats)
    return 2.0 * m.mean_d * math.sqrt(m.mean_d - 1.0) / m.mean_d2


def sphere_growth_bounds(stats: DegreeStats | DegreeDistribution, r: int) -> tuple[float, float]:
    """Lower bounds on the expected sphere size E[|S_r|] of a leafless tree.

    b1 = E[D] exp((r-1) E[D log(D-1)] / E[D]) and b2 = E[D] (E[D] - 1)^(r-1).
    """
    if r < 1:
        raise GraphInputError(f"sphere radius must be >= 1, got {r}")
    m = degree_moments(stats)
    b1 = m.mean_d * math.exp((r - 1) * m.mean_dlog / m.mean_d)
    b2 = m.mean_d * (m.mean_d - 1.0) ** (r - 1)
    return b1, b2


class AlonBoppanaRow(NamedTuple):
    n: int
    sigma_j: float
    degree_bound: float
    margin: float


def alon_boppana_report(graphs: Sequence[Graph], j: int) -> list[AlonBoppanaRow]:
    """Per-graph sigma_j against the 2 sqrt(d_av - 1) benchmark.

    No pass flag: the comparison is a liminf statement, so only the trend is
    reported (margin = sigma_j - bound, possibly negative for small graphs).
    """
    rows = []
    for g in graphs:
        if not g.is_connected():
            raise GraphInputError("alon_boppana_report requires connected graphs")
        stats = degree_stats(g)
        s = sigma(adjacency_spectrum(g).measure, j)
        bound = 2.0 * math.sqrt(max(stats.d_av - 1.0, 0.0))
        rows.append(AlonBoppanaRow(stats.n, s, bound, s - bound))
    return rows


@dataclass(frozen=True)
class BoundReport:
    """One bound comparison with provenance on both sides.

    ``passed`` is only set when both sides are exact or carry a certified
    direction (e.g. truncated-k lower estimates); Monte Carlo comparisons
    leave it None and state consistency within a 3-stderr band instead.
    """

    name: str
    bound: float
    observed: float | None
    bound_provenance: str  # exact | truncated-k | monte-carlo
    observed_provenance: str
    stderr: float | None = None
    note: str = ""

    @property
    def slack(self) -> float | None:
        if self.observed is None:
            return None
        return self.observed - self.bound

    @property
    def passed(self) -> bool | None:
        if self.observed is None:
            return None
        if "monte-carlo" in (self.bound_provenance, self.observed_provenance):
            return None
        return self.observed >= self.bound

    @property
    def consistent_within_error(self) -> bool | None:
        if self.observed is None or self.stderr is None:
            return None
        return self.observed + 3.0 * self.stderr >= self.bound

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "bound": self.bound,
            "observed": self.observed,
            "slack": self.slack,
            "passed": self.passed,
            "consistent_within_error": self.consistent_within_error,
            "bound_provenance": self.bound_provenance,
            "observed_provenance": self.observed_provenance,
            "stderr": self.stderr,
            "note": self.note,
        }
