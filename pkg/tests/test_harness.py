import json

import numpy as np
import pytest

from hypergreedy import cli, harness
from hypergreedy.harness import ExperimentConfig, compare, run_trials


@pytest.fixture
def cfg_file(tmp_path):
    def write(k, zeta):
        p = tmp_path / f"ds_{k}_{len(zeta)}.json"
        p.write_text(json.dumps({"k": k, "zeta": zeta}))
        return p

    return write


def test_config_validation(r33):
    with pytest.raises(ValueError):
        ExperimentConfig(r33, n=99, trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(r33, n=2)
    with pytest.raises(ValueError):
        ExperimentConfig(r33, n=99, mode="lazy")
    with pytest.raises(ValueError):
        ExperimentConfig(r33, n=99, require_simple=True)


def test_single_trial_aggregate(r33):
    agg = run_trials(ExperimentConfig(r33, n=3000, base_seed=7))
    (r,) = agg.results
    assert agg.uncovered_frac == (r.uncovered_frac, 0.0)
    assert agg.matching_size == (float(r.matching_size), 0.0)


def test_deterministic_and_thread_oblivious(r33):
    cfg = ExperimentConfig(r33, n=3000, trials=6, base_seed=3)
    a = run_trials(cfg, threads=1)
    b = run_trials(cfg, threads=3)
    assert a.uncovered_frac == b.uncovered_frac
    assert [r.seed for r in a.results] == list(range(3, 9))
    for x, y in zip(a.results, b.results):
        np.testing.assert_array_equal(x.matching, y.matching)


def test_threads_env(monkeypatch):
    monkeypatch.setenv("HYPERGREEDY_THREADS", "3")
    assert harness.worker_count() == 3


def test_trial_failure_reports_seed(r33, monkeypatch):
    def boom(cfg, seed):
        if seed == 12:
            raise RuntimeError("bad")
        return orig(cfg, seed)

    orig = harness.run_one
    monkeypatch.setattr(harness, "run_one", boom)
    with pytest.raises(harness.TrialFailed) as info:
        run_trials(ExperimentConfig(r33, n=300, trials=4, base_seed=10), threads=1)
    assert info.value.seed == 12


def test_explicit_mode_trials(r33):
    agg = run_trials(ExperimentConfig(r33, n=300, trials=3, mode="explicit"))
    for t in agg.trials:
        assert t.hypergraph is not None and t.result.seed in (0, 1, 2)


def test_compare_monotone_in_tolerance(r33):
    agg = run_trials(ExperimentConfig(r33, n=3000, trials=2))
    strict = compare(agg, r33, 1e-6, 1e-6)
    loose = compare(agg, r33, 0.05, 0.05)
    assert not strict.passed and loose.passed
    assert strict.leftover_theory == pytest.approx(0.25, abs=1e-10)
    assert all(e >= 0 for e in loose.trajectory_sup_error)
    assert loose.leftover_sim_stddev >= 0


def test_theory_cli(tmp_path, cfg_file, capsys):
    out = tmp_path / "theory"
    assert cli.main(["theory", "--config", str(cfg_file(3, [0, 0, 1])), "--grid", "11",
                     "--out", str(out)]) == 0
    rows = (out / "theory_summary.csv").read_text().splitlines()
    assert rows[0] == "k,delta_max,c_end,t_end,leftover"
    assert float(rows[1].split(",")[-1]) == pytest.approx(0.25, abs=1e-10)
    traj = np.genfromtxt(out / "theory_trajectory.csv", delimiter=",", names=True)
    assert traj.dtype.names == ("t", "C", "A", "B", "m", "s", "z_1", "z_2", "z_3")
    assert len(traj) == 11 and traj["C"][0] == 1.0


def test_simulate_cli(tmp_path, cfg_file, capsys):
    out = tmp_path / "sim"
    args = ["simulate", "--config", str(cfg_file(2, [0, 0, 1])), "--n", "40", "--trials", "2",
            "--seed", "5", "--mode", "explicit", "--dump", "--require-simple", "--out", str(out)]
    assert cli.main(args) == 0
    lines = (out / "summary.csv").read_text().splitlines()
    assert lines[0] == "seed,mode,n,matching_size,uncovered,uncovered_frac"
    assert [l.split(",")[0] for l in lines[1:]] == ["5", "6"]
    traj = (out / "trajectory_seed5.csv").read_text().splitlines()
    assert traj[0] == "j,t,Y_1,Y_2,Y_3,M"
    H = harness.cm.Hypergraph.load(out / "hypergraph_seed5.txt")
    assert harness.cm.is_simple(H) and H.num_edges == 60


def test_simulate_cli_errors(tmp_path, cfg_file, capsys):
    cfg = str(cfg_file(3, [0, 1]))
    assert cli.main(["simulate", "--config", cfg, "--n", "4", "--out", str(tmp_path)]) == 2
    assert cli.main(["simulate", "--config", cfg, "--n", "6", "--dump",
                     "--out", str(tmp_path)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"k": 2, "zeta": [0.5, 0.6]}')
    assert cli.main(["theory", "--config", str(bad), "--out", str(tmp_path)]) == 2


def test_compare_cli_exit_code(tmp_path, cfg_file, capsys):
    cfg = str(cfg_file(3, [0, 0, 1]))
    base = ["compare", "--config", cfg, "--n", "3000", "--trials", "2", "--seed", "1"]
    assert cli.main(base + ["--out", str(tmp_path / "a")]) == 0
    report = json.loads((tmp_path / "a" / "report.json").read_text())
    assert report["pass"] is True and len(report["trajectory_sup_error"]) == 3
    assert cli.main(base + ["--tol-leftover", "1e-9", "--out", str(tmp_path / "b")]) == 1


def test_sweep_cli(tmp_path, capsys):
    assert cli.main(["sweep", "--k", "2", "--delta-min", "2", "--delta-max", "5",
                     "--out", str(tmp_path)]) == 0
    rows = [l.split(",") for l in (tmp_path / "sweep.csv").read_text().splitlines()]
    assert rows[0] == ["k", "delta", "c_end", "t_end", "leftover"]
    assert float(rows[2][4]) == 0.125
    assert float(rows[1][4]) == pytest.approx(np.exp(-2), abs=1e-11)
