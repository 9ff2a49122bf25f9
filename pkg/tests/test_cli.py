"""Command-line surface, driven through cli.main(argv)."""

import json
import math

import pytest

from qdho import cli

HEADER = "t,method,trace_drift,purity,mean_n,re_mean_a,im_mean_a,min_eig"


def run(argv, capsys):
    rc = cli.main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


# ---------------------------------------------------------------------------
# simulate

def test_simulate_single_row_per_method(capsys):
    rc, out, _ = run(["simulate", "--steps", "1", "--tmax", "0"], capsys)
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == HEADER
    assert len(lines) == 3  # default methods analytic,expm
    for row in lines[1:]:
        fields = row.split(",")
        assert float(fields[0]) == 0.0
        assert abs(float(fields[3]) - 1.0) <= 1e-9  # pure initial state
        assert abs(float(fields[4]) - 1.0) <= 1e-9  # coherent alpha=1
    assert [r.split(",")[1] for r in lines[1:]] == ["analytic", "expm"]


def test_simulate_mean_n_relaxation(capsys):
    rc, out, _ = run(["simulate", "--dim", "30", "--tmax", "5",
                      "--steps", "50", "--methods", "analytic"], capsys)
    assert rc == 0
    rows = out.strip().split("\n")[1:]
    assert len(rows) == 50
    final = rows[-1].split(",")
    assert float(final[0]) == 5.0
    decay = math.exp(-0.3 * 5.0)
    expected = 1.0 * decay + (0.1 / 0.3) * (1.0 - decay)
    assert abs(float(final[4]) - expected) <= 1e-4


def test_simulate_rejects_mu_not_above_nu(capsys):
    rc, _, err = run(["simulate", "--mu", "0.1", "--nu", "0.4"], capsys)
    assert rc == 2
    assert "mu" in err and "nu" in err
    rc, _, _ = run(["simulate", "--mu", "0.3", "--nu", "0.3"], capsys)
    assert rc == 2


def test_simulate_truncation_exit(capsys):
    # alpha=3 in a 6-level space leaves far too much weight at the cut
    rc, _, err = run(["simulate", "--initial", "coherent:3,0",
                      "--dim", "6"], capsys)
    assert rc == 3
    assert "truncation" in err


def test_simulate_rejects_bad_initial_grammar(capsys):
    for tag in ("banana", "coherent:1", "fock:x", "coherent:1,2,3"):
        rc, _, _ = run(["simulate", "--initial", tag], capsys)
        assert rc == 2, tag


def test_simulate_rejects_fock_index_outside_space(capsys):
    rc, _, _ = run(["simulate", "--initial", "fock:99", "--dim", "12"],
                   capsys)
    assert rc == 2


def test_simulate_rejects_bad_steps_and_dim(capsys):
    assert run(["simulate", "--steps", "0"], capsys)[0] == 2
    assert run(["simulate", "--dim", "1"], capsys)[0] == 2


def test_simulate_rejects_unknown_method(capsys):
    rc, _, err = run(["simulate", "--methods", "analytic,euler"], capsys)
    assert rc == 2
    assert "euler" in err


def test_simulate_squeezed_initial(capsys):
    rc, out, _ = run(["simulate", "--initial", "squeezed:0.2,0",
                      "--dim", "40", "--steps", "1", "--tmax", "1",
                      "--methods", "analytic"], capsys)
    assert rc == 0
    assert len(out.strip().split("\n")) == 2


def test_simulate_deterministic_output(capsys):
    argv = ["simulate", "--steps", "4", "--tmax", "2"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second


def test_simulate_out_file(tmp_path, capsys):
    path = tmp_path / "series.csv"
    rc, out, _ = run(["simulate", "--steps", "1", "--tmax", "0",
                      "--out", str(path)], capsys)
    assert rc == 0
    assert out == ""
    assert path.read_text().startswith(HEADER)


# ---------------------------------------------------------------------------
# config file handling

def test_config_file_with_flag_override(tmp_path, capsys):
    cfgfile = tmp_path / "scenario.json"
    cfgfile.write_text(json.dumps({
        "mu": 0.5, "nu": 0.1, "dim": 12, "initial": "vacuum",
        "t_max": 1.0, "steps": 1, "methods": ["analytic"]}))
    rc, out, _ = run(["simulate", "--config", str(cfgfile),
                      "--mu", "0.6"], capsys)
    assert rc == 0
    # vacuum relaxation <N> pins the effective mu: flag must win
    mean_n = float(out.strip().split("\n")[1].split(",")[4])
    expected = (0.1 / 0.5) * (1.0 - math.exp(-0.5))
    assert abs(mean_n - expected) <= 1e-9


def test_config_unknown_key(tmp_path, capsys):
    cfgfile = tmp_path / "bad.json"
    cfgfile.write_text(json.dumps({"mu": 0.5, "flux": 1}))
    rc, _, err = run(["simulate", "--config", str(cfgfile)], capsys)
    assert rc == 2
    assert "flux" in err


def test_config_malformed_json(tmp_path, capsys):
    cfgfile = tmp_path / "broken.json"
    cfgfile.write_text("{not json")
    assert run(["simulate", "--config", str(cfgfile)], capsys)[0] == 2


def test_config_missing_file(capsys):
    rc, _, _ = run(["simulate", "--config", "/nonexistent/cfg.json"], capsys)
    assert rc == 2


# ---------------------------------------------------------------------------
# compare

def test_compare_analytic_vs_expm(capsys):
    rc, out, _ = run(["compare"], capsys)
    assert rc == 0
    report = json.loads(out)
    assert report["pass"] is True
    assert report["max_distance"] <= 1e-6
    assert report["pairs"][0]["methods"] == ["analytic", "expm"]
    assert len(report["pairs"][0]["distances"]) == 10


def test_compare_analytic_vs_rk4(capsys):
    rc, out, _ = run(["compare", "--methods", "analytic,rk4",
                      "--dt", "1e-3", "--tol", "1e-5"], capsys)
    assert rc == 0
    assert json.loads(out)["pass"] is True


def test_compare_identical_method_twice(capsys):
    rc, out, _ = run(["compare", "--methods", "analytic,analytic"], capsys)
    assert rc == 0
    report = json.loads(out)
    assert report["max_distance"] == 0.0
    assert all(d["frobenius"] == 0.0
               for d in report["pairs"][0]["distances"])


def test_compare_single_method_rejected(capsys):
    assert run(["compare", "--methods", "analytic"], capsys)[0] == 2


def test_compare_breach_still_writes_report(tmp_path, capsys):
    # dt=0.02 keeps the states physical but lands ~1e-7 from analytic,
    # far over the deliberately impossible tolerance
    path = tmp_path / "report.json"
    rc, _, _ = run(["compare", "--methods", "analytic,rk4", "--dt", "0.02",
                    "--tol", "1e-10", "--out", str(path)], capsys)
    assert rc == 1
    report = json.loads(path.read_text())
    assert report["pass"] is False
    assert report["max_distance"] > 1e-10


# ---------------------------------------------------------------------------
# check

def test_check_list_names_without_running(capsys):
    rc, out, _ = run(["check", "--list"], capsys)
    assert rc == 0
    names = out.strip().split("\n")
    assert names == [name for name, _ in cli.CHECKS]
    assert len(names) == 15


@pytest.mark.parametrize("seed", range(10))
def test_check_suite_passes(seed, capsys):
    rc, out, _ = run(["check", "--seed", str(seed)], capsys)
    assert rc == 0, out
    lines = out.strip().split("\n")
    assert len(lines) == len(cli.CHECKS)
    assert all(" pass " in line for line in lines)
    assert "FAIL" not in out


# ---------------------------------------------------------------------------
# classical

def test_classical_csv_and_bound(capsys):
    rc, out, _ = run(["classical", "--omega", "1", "--gamma", "0.1",
                      "--tmax", "10", "--steps", "101"], capsys)
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "t,x_exact,x_approx,abs_diff"
    assert len(lines) == 102
    diffs = [float(row.split(",")[3]) for row in lines[1:]]
    assert max(diffs) <= 0.02


def test_classical_near_zero_damping_is_cosine(capsys):
    rc, out, _ = run(["classical", "--gamma", "1e-12", "--alpha-re", "0.5",
                      "--tmax", "6.283185307179586", "--steps", "5"], capsys)
    assert rc == 0
    for row in out.strip().split("\n")[1:]:
        t, x = (float(v) for v in row.split(",")[:2])
        assert abs(x - math.cos(t)) <= 1e-9


def test_classical_damping_gate(capsys):
    # critical damping sits at gamma = 2*omega; 1.9 is still underdamped
    assert run(["classical", "--gamma", "1.9"], capsys)[0] == 0
    assert run(["classical", "--gamma", "2.0"], capsys)[0] == 2
    assert run(["classical", "--gamma", "2.5"], capsys)[0] == 2
