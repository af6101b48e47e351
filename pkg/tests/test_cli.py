import json
import math

from unispec.cli import run


def run_cli(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_cycle_stdout(capsys):
    code, out, err = run_cli(capsys, "analyze", "--gen", "cycle:100", "--out", "-")
    assert code == 0, err
    report = json.loads(out)
    sig = report["spectra"]["adjacency"]["sigma_1_to_5"]
    # even cycle: -2 is an eigenvalue, so sigma_2 = 2; 2cos(2pi/n) bounds it
    assert abs(sig[1] - 2.0) < 1e-9
    assert sig[1] >= 2 * math.cos(2 * math.pi / 100)
    assert report["config"]["gen"] == "cycle:100"
    assert report["graph"] == {"n": 100, "m": 100, "connected": True}
    assert all(check["pass"] for check in report["checks"])


def test_analyze_deterministic(capsys, tmp_path):
    # identical configs (including --out) give byte-identical reports
    target = tmp_path / "report.json"
    assert run_cli(capsys, "analyze", "--gen", "complete:5", "--out", str(target))[0] == 0
    first = target.read_bytes()
    assert run_cli(capsys, "analyze", "--gen", "complete:5", "--out", str(target))[0] == 0
    assert target.read_bytes() == first
    _, out1, _ = run_cli(capsys, "analyze", "--gen", "random_regular:12:3", "--seed", "5")
    _, out2, _ = run_cli(capsys, "analyze", "--gen", "random_regular:12:3", "--seed", "5")
    assert out1 == out2


def test_analyze_missing_input(capsys):
    code, out, err = run_cli(capsys, "analyze", "--input", "missing.edges")
    assert code == 2
    assert "cannot read" in err


def test_analyze_requires_one_source(capsys):
    code, _, err = run_cli(capsys, "analyze")
    assert code == 2
    code, _, err = run_cli(capsys, "analyze", "--gen", "cycle:5", "--input", "x")
    assert code == 2


def test_analyze_csv_eigenvalues(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--gen", "cycle:4", "--format", "csv")
    assert code == 0
    values = sorted(float(line) for line in out.strip().splitlines())
    assert [round(v, 9) for v in values] == [-2.0, -0.0, 0.0, 2.0]


def test_verify_all_complete4(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "all", "--gen", "complete:4")
    assert code == 0
    assert "FAIL" not in out
    assert "checks passed" in out


def test_verify_nbw_rejects_leafy(capsys):
    code, _, err = run_cli(capsys, "verify", "--suite", "nbw", "--gen", "path:5")
    assert code == 2
    assert "leafless" in err


def test_verify_all_skips_leaf_suites(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "all", "--gen", "path:5")
    assert code == 0
    assert "skipped" in out


def test_verify_disconnected_input(capsys, tmp_path):
    path = tmp_path / "two.edges"
    path.write_text("n 4\n0 1\n2 3\n")
    code, out, _ = run_cli(capsys, "verify", "--suite", "all", "--input", str(path))
    assert code == 0
    assert "disconnected" in out
    code, _, err = run_cli(capsys, "verify", "--suite", "lifting", "--input", str(path))
    assert code == 2
    assert "connected" in err


def test_cover_cycle_walk_table(capsys):
    code, out, _ = run_cli(capsys, "cover", "--gen", "cycle:8", "--radius", "4")
    assert code == 0
    report = json.loads(out)
    counts = report["walk_table"]["counts"]
    assert counts[: 9] == [1, 0, 2, 0, 6, 0, 20, 0, 70]
    values = report["rho_estimate"]["values"]
    assert values == sorted(values)
    assert report["rho_estimate"]["provenance"] == "truncated-k"


def test_cover_csv(capsys):
    code, out, _ = run_cli(capsys, "cover", "--gen", "cycle:8", "--radius", "3",
                           "--format", "csv")
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()]
    assert rows[2] == ["2", "2"]
    assert rows[4] == ["4", "6"]


def test_cover_requires_radius(capsys):
    code, _, err = run_cli(capsys, "cover", "--gen", "cycle:8")
    assert code == 2
    assert "radius" in err


def test_sample_walks_point_mass(capsys):
    code, out, _ = run_cli(
        capsys, "sample", "ugw", "--pi", "3:1", "--samples", "10",
        "--stat", "walks", "--k", "2", "--seed", "42",
    )
    assert code == 0
    report = json.loads(out)
    assert report["mean"] == 15.0
    assert report["stderr"] == 0.0
    assert report["exact"] == 15.0
    assert report["samples"] == 10
    assert report["seed"] == 42


def test_sample_sphere(capsys):
    code, out, _ = run_cli(
        capsys, "sample", "ugw", "--pi", "2:0.5,3:0.5", "--samples", "2000",
        "--stat", "sphere", "--r", "3", "--seed", "7",
    )
    assert code == 0
    report = json.loads(out)
    assert abs(report["exact"] - 6.4) < 1e-12
    assert abs(report["mean"] - 6.4) <= 3 * report["stderr"]


def test_sample_bad_pi(capsys):
    code, _, err = run_cli(capsys, "sample", "ugw", "--pi", "2:0.7,3:0.7",
                           "--stat", "walks", "--k", "1")
    assert code == 2


def test_census_grid(capsys):
    code, out, _ = run_cli(capsys, "census", "--gen", "grid:6", "--radius", "1")
    assert code == 0
    report = json.loads(out)
    assert report["total"] == 36
    assert report["exact"] is True
    assert report["classes"][0]["count"] == 16  # (6-2)^2 interior class


def test_report_combined(capsys):
    code, out, _ = run_cli(capsys, "report", "--gen", "complete:4", "--radius", "3")
    assert code == 0
    report = json.loads(out)
    assert report["all_checks_pass"] is True
    assert len(report["rho_cover_estimate"]["values"]) == 3


def test_unknown_flags_exit_2(capsys):
    assert run_cli(capsys, "analyze", "--nonsense")[0] == 2
    assert run_cli(capsys, "nosuchcommand")[0] == 2


def test_gen_spec_errors(capsys):
    code, _, err = run_cli(capsys, "analyze", "--gen", "cycle:abc")
    assert code == 2
    code, _, err = run_cli(capsys, "analyze", "--gen", "widget:3")
    assert code == 2
    assert "unknown family" in err


def test_pretty_render(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--gen", "cycle:6", "--pretty")
    assert code == 0
    assert "degree_stats" in out
    assert not out.lstrip().startswith("{")


def test_budget_violation_exit_2(capsys, monkeypatch):
    monkeypatch.setenv("UNISPEC_NODE_BUDGET", "10")
    code, _, err = run_cli(capsys, "cover", "--gen", "complete:6", "--radius", "8")
    assert code == 2
    assert "budget" in err
