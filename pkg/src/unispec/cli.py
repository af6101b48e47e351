"""Batch command-line front end: analyze, cover, sample, census, verify, report.

Reports are machine-first JSON with bit-stable field ordering; two runs with
the same resolved configuration produce byte-identical output. ``--pretty``
renders the same data as a human table. Exit codes: 0 success, 1 internal
error or failed verification, 2 validation error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass

from . import bounds as bounds_mod
from . import cover as cover_mod
from . import ensembles, nbw, spectra, walks
from .graph import (
    Graph,
    GraphInputError,
    core_peel,
    degree_stats,
    generate,
    load_graph,
)

__all__ = ["DEFAULT_SEED", "RunConfig", "main", "run"]

DEFAULT_SEED = 0xC0FFEE
SCHEMA_PREFIX = "unispec"


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    input: str | None = None
    gen: str | None = None
    radius: int | None = None
    kmax: int | None = None
    samples: int | None = None
    seed: int = DEFAULT_SEED
    threads: int = 1
    out: str = "-"
    format: str = "json"
    pretty: bool = False
    suite: str | None = None
    stat: str | None = None
    pi: str | None = None
    depth: int | None = None
    k: int | None = None
    r: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _parse_gen_spec(spec: str, seed: int) -> Graph:
    parts = spec.split(":")
    family = parts[0]
    try:
        params = tuple(int(p) for p in parts[1:])
    except ValueError:
        raise GraphInputError(f"non-integer parameter in generator spec {spec!r}") from None
    return generate(family, *params, seed=seed)


def _resolve_graph(cfg: RunConfig) -> Graph:
    if (cfg.input is None) == (cfg.gen is None):
        raise GraphInputError("exactly one of --input or --gen is required")
    if cfg.input is not None:
        try:
            return load_graph(cfg.input)
        except OSError as exc:
            raise GraphInputError(f"cannot read {cfg.input}: {exc.strerror}") from None
    return _parse_gen_spec(cfg.gen, cfg.seed)


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _pretty_lines(payload, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(payload, dict):
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.extend(_pretty_lines(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {value}")
    elif isinstance(payload, list):
        for value in payload:
            if isinstance(value, (dict, list)):
                lines.append(pad + "-")
                lines.extend(_pretty_lines(value, indent + 1))
            else:
                lines.append(f"{pad}- {value}")
    else:
        lines.append(f"{pad}{payload}")
    return lines


def _write_report(payload: dict, cfg: RunConfig, csv_text: str | None = None) -> None:
    if cfg.format == "csv":
        if csv_text is None:
            raise GraphInputError(f"{cfg.subcommand} has no CSV rendering")
        _emit(csv_text, cfg.out)
        return
    if cfg.pretty:
        text = "\n".join(_pretty_lines(payload)) + "\n"
        if cfg.out == "-":
            _emit(text, "-")
        else:
            _emit(_dump_json(payload), cfg.out)
            sys.stdout.write(text)
        return
    _emit(_dump_json(payload), cfg.out)


# ----------------------------------------------------------------------------
# Check suites (shared by verify and analyze)
# ----------------------------------------------------------------------------


def _check(name: str, ok: bool, deviation: float | None = None, note: str = "") -> dict:
    return {"name": name, "pass": bool(ok), "deviation": deviation, "note": note}


def _suite_graph(g: Graph) -> list[dict]:
    stats = degree_stats(g)
    rows = [_check("handshake_deg_sum", stats.deg_sum == 2 * stats.m, 0.0)]
    peeled = core_peel(g)
    again = core_peel(peeled.core)
    rows.append(_check("core_peel_idempotent", again.core == peeled.core, 0.0))
    if stats.hoory_lambda is not None and stats.dlog_mean is not None:
        dev = abs(math.log(stats.hoory_lambda) - stats.dlog_mean / stats.d_av)
        rows.append(_check("hoory_lambda_two_forms", dev <= 1e-12, dev))
    return rows


def _suite_walks(g: Graph, kmax: int) -> list[dict]:
    report = spectra.adjacency_spectrum(g)
    n = g.vertex_count
    worst = 0.0
    for k in range(kmax + 1):
        total = sum(walks.closed_walk_counts(g, x, k).counts[k] for x in range(n))
        mom = spectra.moment(report.measure, k)
        scale = max(1.0, abs(mom))
        worst = max(worst, abs(mom - total / n) / scale)
    rows = [_check("adjacency_moment_walk_equivalence", worst <= 1e-9, worst)]
    if g.min_degree >= 1:
        mreport = spectra.markov_spectrum(g)
        worst_m = 0.0
        for k in range(kmax + 1):
            total = sum(walks.srw_return_probs(g, x, k)[k] for x in range(n))
            mom = spectra.moment(mreport.measure, k)
            worst_m = max(worst_m, abs(mom - total / n))
        rows.append(_check("markov_moment_return_equivalence", worst_m <= 1e-9, worst_m))
    return rows


def _suite_lifting(g: Graph, kmax: int) -> list[dict]:
    bases = range(min(g.vertex_count, 16))
    ok = True
    for base in bases:
        ok &= all(row.ok for row in cover_mod.verify_lifting(g, base, kmax))
    return [_check(f"lifting_w2k_cover_le_base_k{kmax}", ok, 0.0 if ok else 1.0)]


def _suite_nbw(g: Graph) -> list[dict]:
    report = nbw.stationarity_check(g)
    rows = [
        _check("nbw_stationarity", report.stationarity_deviation <= 1e-12,
               report.stationarity_deviation),
        _check("nbw_reversal_invariance", report.reversal_deviation <= 1e-12,
               report.reversal_deviation),
    ]
    stats = degree_stats(g)
    kernel = nbw.nbw_transition(g)
    law = nbw.edge_root_law(g)
    rate = 0.0
    for p, row in zip(law.probabilities, kernel.matrix):
        entropy_row = -sum(x * math.log(x) for x in row if x > 0)
        rate += float(p) * entropy_row
    dev = abs(rate - nbw.nbw_entropy(stats))
    rows.append(_check("nbw_entropy_consistency", dev <= 1e-12, dev))
    return rows


def _suite_mtp(g: Graph) -> list[dict]:
    rows = []
    for name, f in nbw.BUILTIN_TRANSPORTS.items():
        lhs, rhs = nbw.mtp_check(g, f)
        rows.append(_check(f"mtp_exact_{name}", lhs == rhs, float(abs(lhs - rhs))))
    return rows


def _cover_moments(g: Graph, kmax: int) -> list[float]:
    totals = [0] * (kmax + 1)
    for x in range(g.vertex_count):
        ball = cover_mod.universal_cover_ball(g, x, kmax)
        counts = cover_mod.cover_walk_counts(ball, kmax).counts
        for k in range(1, kmax + 1):
            totals[k] += counts[2 * k]
    return [totals[k] / g.vertex_count for k in range(1, kmax + 1)]


def _suite_bounds(g: Graph, kmax: int) -> list[dict]:
    stats = degree_stats(g)
    rows = []
    b1, b2 = bounds_mod.tree_spectral_radius_bounds(stats)
    rows.append(_check("jensen_tree_radius_b1_ge_b2", b1 >= b2 - 1e-12, max(0.0, b2 - b1)))
    dev = abs(bounds_mod.hoory_bound(stats) - b1)
    rows.append(_check("hoory_equals_entropy_bound", dev <= 1e-12, dev))
    measure = spectra.adjacency_spectrum(g).measure
    rho = spectra.sigma(measure, 1)
    moments = _cover_moments(g, kmax)
    rho_est = moments[-1] ** (1.0 / (2 * kmax))
    ok = True
    for k in range(1, kmax + 1):
        for i in range(1, 20):
            a = rho_est * i / 20.0
            lower = bounds_mod.tail_mass_lower_bound(moments[k - 1], rho, a, k)
            ok &= spectra.tail_mass(measure, a) >= lower - 1e-12
    rows.append(_check("cover_tail_mass_bound", ok, 0.0 if ok else 1.0))
    eps = 0.3 * rho_est
    c, big_k = bounds_mod.tail_mass_constant(eps, rho, moments, rho_est)
    mass = spectra.tail_mass(measure, rho_est - eps)
    rows.append(_check("tail_mass_constant_self_consistency", mass >= c > 0.0, max(0.0, c - mass),
                       note=f"K={big_k}"))
    return rows


SUITES = ("graph", "walks", "lifting", "nbw", "mtp", "bounds", "all")


def _run_suites(g: Graph, suite: str, kmax: int) -> list[dict]:
    leafless = g.vertex_count > 0 and g.min_degree >= 2
    connected = g.is_connected()
    if suite in ("nbw", "bounds") and not leafless:
        raise GraphInputError(f"suite {suite!r} requires a leafless graph (min degree >= 2)")
    if suite in ("lifting", "bounds") and not connected:
        raise GraphInputError(f"suite {suite!r} requires a connected graph")
    rows: list[dict] = []
    wanted = SUITES[:-1] if suite == "all" else (suite,)
    for name in wanted:
        if name in ("nbw", "bounds") and not leafless:
            rows.append(_check(f"{name}_suite_skipped_leaf_present", True, None,
                               note="skipped: graph has a leaf"))
            continue
        if name in ("lifting", "bounds") and not connected:
            rows.append(_check(f"{name}_suite_skipped_disconnected", True, None,
                               note="skipped: graph is disconnected"))
            continue
        if name == "graph":
            rows.extend(_suite_graph(g))
        elif name == "walks":
            rows.extend(_suite_walks(g, min(kmax, 6)))
        elif name == "lifting":
            rows.extend(_suite_lifting(g, min(kmax, 4)))
        elif name == "nbw":
            rows.extend(_suite_nbw(g))
        elif name == "mtp":
            rows.extend(_suite_mtp(g))
        elif name == "bounds":
            rows.extend(_suite_bounds(g, min(kmax, 4)))
    return rows


# ----------------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------------


def _cmd_analyze(cfg: RunConfig) -> int:
    g = _resolve_graph(cfg)
    stats = degree_stats(g)
    report_adj = spectra.adjacency_spectrum(g)
    sig = [spectra.sigma(report_adj.measure, j) for j in range(1, 6)]
    grid = [round(sig[0] * i / 10.0, 12) for i in range(10)]
    adjacency = {
        "sigma_1_to_5": sig,
        "tail_mass_grid": [[a, spectra.tail_mass(report_adj.measure, a)] for a in grid],
        "max_residual": report_adj.max_residual,
        "provenance": "exact",
    }
    markov = None
    if g.min_degree >= 1:
        report_markov = spectra.markov_spectrum(g)
        markov = {
            "sigma_1_to_5": [spectra.sigma(report_markov.measure, j) for j in range(1, 6)],
            "tail_mass_grid": [
                [round(i / 10.0, 12), spectra.tail_mass(report_markov.measure, i / 10.0)]
                for i in range(10)
            ],
            "max_residual": report_markov.max_residual,
            "provenance": "exact",
        }
    leafless = stats.min_degree >= 2
    bound_values: dict[str, object] = {
        "alon_boppana_degree_bound": {
            "value": 2.0 * math.sqrt(max(stats.d_av - 1.0, 0.0)),
            "provenance": "exact",
        }
    }
    if leafless:
        b1, b2 = bounds_mod.tree_spectral_radius_bounds(stats)
        s1, s2 = bounds_mod.tree_srw_radius_bounds(stats)
        r = cfg.r if cfg.r is not None else 3
        g1, g2 = bounds_mod.sphere_growth_bounds(stats, r)
        bound_values.update(
            {
                "tree_radius_entropy_bound": {"value": b1, "provenance": "exact"},
                "tree_radius_mean_degree_bound": {"value": b2, "provenance": "exact"},
                "hoory_bound": {"value": bounds_mod.hoory_bound(stats), "provenance": "exact"},
                "srw_radius_entropy_bound": {"value": s1, "provenance": "exact"},
                "srw_radius_moment_bound": {"value": s2, "provenance": "exact"},
                "srw_tail_threshold": {"value": bounds_mod.srw_tail_threshold(stats),
                                       "provenance": "exact"},
                f"sphere_growth_bounds_r{r}": {"value": [g1, g2], "provenance": "exact"},
            }
        )
    else:
        bound_values["note"] = "degree-moment bounds undefined: graph has a leaf"
    checks = _run_suites(g, "all", cfg.kmax if cfg.kmax is not None else 4)
    payload = {
        "schema": f"{SCHEMA_PREFIX}.analyze.v1",
        "config": cfg.to_dict(),
        "graph": {"n": g.vertex_count, "m": g.edge_count, "connected": g.is_connected()},
        "degree_stats": asdict(stats),
        "spectra": {"adjacency": adjacency, "markov": markov},
        "bounds": bound_values,
        "checks": checks,
    }
    _write_report(payload, cfg, csv_text=spectra.eigenvalues_csv(report_adj.measure))
    return 0


def _cmd_cover(cfg: RunConfig) -> int:
    g = _resolve_graph(cfg)
    if cfg.radius is None:
        raise GraphInputError("cover requires --radius")
    kmax = cfg.kmax if cfg.kmax is not None else cfg.radius
    ball = cover_mod.universal_cover_ball(g, 0, cfg.radius)
    table = cover_mod.cover_walk_counts(ball, min(kmax, cfg.radius))
    estimate = cover_mod.rho_cover_estimate(g, min(kmax, cfg.radius))
    payload = {
        "schema": f"{SCHEMA_PREFIX}.cover.v1",
        "config": cfg.to_dict(),
        "graph": {"n": g.vertex_count, "m": g.edge_count},
        "walk_table": {"base": 0, "counts": list(table.counts), "provenance": "exact"},
        "rho_estimate": {
            "values": estimate,
            "provenance": "truncated-k",
            "note": "lower estimate of the cover spectral radius; no extrapolation",
        },
        "ball": {"vertices": ball.tree.vertex_count, "radius": ball.radius},
    }
    csv_text = "".join(f"{k},{c}\n" for k, c in enumerate(table.counts))
    _write_report(payload, cfg, csv_text=csv_text)
    return 0


def _cmd_sample(cfg: RunConfig) -> int:
    if cfg.pi is None:
        raise GraphInputError("sample ugw requires --pi degree:probability pairs")
    pi = ensembles.DegreeDistribution.from_string(cfg.pi)
    stat = cfg.stat or "walks"
    samples = cfg.samples if cfg.samples is not None else 1000
    exact: float | None = None
    if stat == "walks":
        if cfg.k is None:
            raise GraphInputError("--stat walks requires --k")
        est = ensembles.estimate_walk_moment(pi, cfg.k, samples, cfg.seed)
        if pi.is_point_mass():
            exact = float(ensembles.regular_tree_walks(pi.support[0], cfg.k)[cfg.k])
    elif stat == "sphere":
        r = cfg.r if cfg.r is not None else (cfg.depth if cfg.depth is not None else 3)
        est, exact = ensembles.estimate_sphere(pi, r, samples, cfg.seed)
    else:
        raise GraphInputError(f"unknown --stat {stat!r}; expected walks or sphere")
    payload = {
        "schema": f"{SCHEMA_PREFIX}.sample.v1",
        "config": cfg.to_dict(),
        "mean": est.mean,
        "stderr": est.stderr,
        "samples": est.samples,
        "seed": est.seed,
        "exact": exact,
        "provenance": "monte-carlo",
    }
    if stat == "sphere" and pi.min_degree >= 2:
        b1, _ = bounds_mod.sphere_growth_bounds(pi, cfg.r if cfg.r is not None else 3)
        payload["growth_bound"] = bounds_mod.BoundReport(
            name="sphere_growth_lower_bound",
            bound=b1,
            observed=est.mean,
            bound_provenance="exact",
            observed_provenance="monte-carlo",
            stderr=est.stderr,
        ).to_dict()
    _write_report(payload, cfg)
    return 0


def _cmd_census(cfg: RunConfig) -> int:
    g = _resolve_graph(cfg)
    if cfg.radius is None:
        raise GraphInputError("census requires --radius")
    census = ensembles.ball_census(g, cfg.radius)
    classes = sorted(census.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    payload = {
        "schema": f"{SCHEMA_PREFIX}.census.v1",
        "config": cfg.to_dict(),
        "radius": census.radius,
        "total": census.total,
        "exact": census.exact,
        "classes": [{"code": code, "count": count} for code, count in classes],
    }
    csv_text = "".join(f"{code},{count}\n" for code, count in classes)
    _write_report(payload, cfg, csv_text=csv_text)
    return 0


def _cmd_verify(cfg: RunConfig) -> int:
    g = _resolve_graph(cfg)
    suite = cfg.suite or "all"
    if suite not in SUITES:
        raise GraphInputError(f"unknown suite {suite!r}; expected one of {SUITES}")
    rows = _run_suites(g, suite, cfg.kmax if cfg.kmax is not None else 4)
    failed = 0
    for row in rows:
        status = "PASS" if row["pass"] else "FAIL"
        failed += 0 if row["pass"] else 1
        dev = "" if row["deviation"] is None else f" deviation={row['deviation']:.3e}"
        note = f" ({row['note']})" if row["note"] else ""
        sys.stdout.write(f"{status} {row['name']}{dev}{note}\n")
    sys.stdout.write(f"{len(rows) - failed}/{len(rows)} checks passed\n")
    return 0 if failed == 0 else 1


def _cmd_report(cfg: RunConfig) -> int:
    g = _resolve_graph(cfg)
    radius = cfg.radius if cfg.radius is not None else 4
    estimate = cover_mod.rho_cover_estimate(g, radius)
    checks = _run_suites(g, "all", cfg.kmax if cfg.kmax is not None else 4)
    stats = degree_stats(g)
    payload = {
        "schema": f"{SCHEMA_PREFIX}.report.v1",
        "config": cfg.to_dict(),
        "graph": {"n": g.vertex_count, "m": g.edge_count},
        "degree_stats": asdict(stats),
        "rho_cover_estimate": {"values": estimate, "provenance": "truncated-k"},
        "checks": checks,
        "all_checks_pass": all(row["pass"] for row in checks),
    }
    _write_report(payload, cfg)
    return 0


# ----------------------------------------------------------------------------
# Argument parsing
# ----------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unispec",
        description="Spectra, walk counts, universal covers, and NBW statistics of finite graphs.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser, needs_graph: bool = True):
        if needs_graph:
            p.add_argument("--input", help="edge-list file ('u v' per line, '#' comments)")
            p.add_argument("--gen", help="generator spec family:param[:param]")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--threads", type=int, default=1,
                       help="worker count; affects wall time only, never output")
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--pretty", action="store_true", help="render a human table")
        p.add_argument("--kmax", type=int)
        p.add_argument("--radius", type=int)

    p = sub.add_parser("analyze", help="degree stats, spectra, bounds, self-checks")
    common(p)
    p.add_argument("--r", type=int, help="sphere radius for the growth bounds (default 3)")

    p = sub.add_parser("cover", help="truncated universal cover walk table and radius estimate")
    common(p)

    p = sub.add_parser("sample", help="Monte Carlo estimates over random trees")
    p.add_argument("what", choices=("ugw",))
    p.add_argument("--pi", required=True, help='degree law, e.g. "2:0.5,3:0.5"')
    p.add_argument("--depth", type=int)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--stat", choices=("walks", "sphere"), default="walks")
    p.add_argument("--k", type=int, help="walk-length parameter (counts walks of length 2k)")
    p.add_argument("--r", type=int, help="sphere radius")
    common(p, needs_graph=False)

    p = sub.add_parser("census", help="canonical rooted-ball census")
    common(p)

    p = sub.add_parser("verify", help="run a check suite and print pass/fail lines")
    common(p)
    p.add_argument("--suite", choices=SUITES, default="all")

    p = sub.add_parser("report", help="combined analyze + cover + checks report")
    common(p)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    values = {k: v for k, v in vars(args).items() if k in fields}
    cfg = RunConfig(**values)
    for name in ("radius", "kmax", "samples", "threads", "depth", "k", "r"):
        value = getattr(cfg, name)
        if value is not None and value < (0 if name == "radius" else 1):
            raise GraphInputError(f"--{name} must be positive, got {value}")
    return cfg


_COMMANDS = {
    "analyze": _cmd_analyze,
    "cover": _cmd_cover,
    "sample": _cmd_sample,
    "census": _cmd_census,
    "verify": _cmd_verify,
    "report": _cmd_report,
}


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config_from_args(args)
        return _COMMANDS[cfg.subcommand](cfg)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        sys.stderr.write(f"internal error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())
