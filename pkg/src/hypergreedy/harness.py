"""Seeded multi-trial experiments, theory comparison and CSV/JSON output."""

from __future__ import annotations

import csv
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import configmodel as cm
from .degseq import DegreeSequence
from .greedy import SimResult, default_record_every, run_explicit, run_point_process
from .theory import (
    TheorySolution,
    regular_closed_form,
    solve_theory,
    trajectory_at,
)
from .errors import DegenerateCase, HyperGreedyError

log = logging.getLogger(__name__)

TOL_LEFTOVER = 0.01
TOL_TRAJ = 0.02
MODES = ("point", "explicit")


class TrialFailed(HyperGreedyError, RuntimeError):
    def __init__(self, seed, cause):
        super().__init__(f"trial with seed {seed} failed: {cause!r}")
        self.seed = seed
        self.cause = cause


@dataclass(frozen=True)
class ExperimentConfig:
    ds: DegreeSequence
    n: int
    trials: int = 1
    base_seed: int = 0
    mode: str = "point"
    record_every: int | None = None
    output_dir: Path | None = None
    require_simple: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n < self.ds.k:
            raise ValueError(f"n={self.n} must be at least k={self.ds.k}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.require_simple and self.mode != "explicit":
            raise ValueError("require_simple only applies to explicit mode")

    @property
    def seeds(self) -> list[int]:
        return [self.base_seed + i for i in range(self.trials)]

    @property
    def effective_record_every(self) -> int:
        return self.record_every or default_record_every(self.n)


@dataclass
class Trial:
    result: SimResult
    hypergraph: cm.Hypergraph | None = None


@dataclass
class Aggregate:
    """Results of all trials in seed order, with summary statistics."""

    config: ExperimentConfig
    trials: list[Trial]

    @property
    def results(self) -> list[SimResult]:
        return [t.result for t in self.trials]

    def _stats(self, values) -> tuple[float, float]:
        a = np.asarray(values, dtype=float)
        std = float(a.std(ddof=1)) if len(a) > 1 else 0.0
        return float(a.mean()), std

    @property
    def uncovered_frac(self) -> tuple[float, float]:
        """(mean, sample stddev) of the uncovered fraction."""
        return self._stats([r.uncovered_frac for r in self.results])

    @property
    def matching_size(self) -> tuple[float, float]:
        return self._stats([r.matching_size for r in self.results])

    @property
    def matching_size_sem(self) -> float:
        return self.matching_size[1] / np.sqrt(len(self.trials))


def worker_count() -> int:
    env = os.environ.get("HYPERGREEDY_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_one(cfg: ExperimentConfig, seed: int) -> Trial:
    """One greedy run; explicit mode draws the graph and the run from split streams."""
    if cfg.mode == "point":
        return Trial(run_point_process(cfg.ds, cfg.n, seed, cfg.effective_record_every))
    graph_seed, run_seed = np.random.SeedSequence(seed).spawn(2)
    pool = cm.build_pool(cfg.ds, cfg.n)
    if cfg.require_simple:
        H = cm.realize_simple(pool, graph_seed)
    else:
        H = cm.realize_hypergraph(pool, graph_seed)
    res = run_explicit(H, run_seed, cfg.effective_record_every, delta=cfg.ds.delta)
    res.seed = seed
    return Trial(res, H)


def run_trials(cfg: ExperimentConfig, threads: int | None = None) -> Aggregate:
    """Run seeds ``base_seed .. base_seed + trials - 1``; results do not depend on threads."""
    threads = min(threads or worker_count(), cfg.trials)

    def task(seed):
        try:
            return run_one(cfg, seed)
        except Exception as exc:
            raise TrialFailed(seed, exc) from exc

    if threads == 1:
        trials = [task(s) for s in cfg.seeds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            trials = list(ex.map(task, cfg.seeds))
    log.info("ran %d trials (n=%d, mode=%s)", cfg.trials, cfg.n, cfg.mode)
    return Aggregate(cfg, trials)


@dataclass
class ComparisonReport:
    leftover_theory: float
    leftover_sim_mean: float
    leftover_sim_stddev: float
    trajectory_sup_error: list[float]
    tol_leftover: float
    tol_traj: float
    passed: bool
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            **self.meta,
            "leftover_theory": self.leftover_theory,
            "leftover_sim_mean": self.leftover_sim_mean,
            "leftover_sim_stddev": self.leftover_sim_stddev,
            "trajectory_sup_error": self.trajectory_sup_error,
            "tol_leftover": self.tol_leftover,
            "tol_traj": self.tol_traj,
            "pass": self.passed,
        }


class TheoryCurve:
    """Memoized z(t) lookups on the recorded step grid, clamped at t_end."""

    def __init__(self, ds: DegreeSequence, n: int, sol: TheorySolution | None = None):
        self.ds, self.n = ds, n
        self.sol = sol or solve_theory(ds)
        self._cache: dict[int, np.ndarray] = {}

    def z(self, j: int) -> np.ndarray:
        z = self._cache.get(j)
        if z is None:
            t = min(j / self.n, self.sol.t_end)
            z = trajectory_at(self.ds, t, self.sol).z
            self._cache[j] = z
        return z

    def sup_error(self, result: SimResult) -> np.ndarray:
        """Per degree class, max over recorded steps of |Y_i(j)/n - z_i(j/n)|."""
        theo = np.array([self.z(int(j)) for j in result.steps])
        return np.abs(result.Y / result.n - theo).max(axis=0)


def compare(
    agg: Aggregate,
    ds: DegreeSequence,
    tol_leftover: float = TOL_LEFTOVER,
    tol_traj: float = TOL_TRAJ,
) -> ComparisonReport:
    """Compare trial outcomes and trajectories with the fluid-limit solution."""
    if not agg.trials:
        raise ValueError("empty aggregate")
    sol = solve_theory(ds)
    curve = TheoryCurve(ds, agg.config.n, sol)
    sup = np.zeros(ds.delta)
    for r in agg.results:
        sup = np.maximum(sup, curve.sup_error(r))
    mean, std = agg.uncovered_frac
    passed = abs(mean - sol.leftover_fraction) <= tol_leftover and float(sup.max()) <= tol_traj
    meta = {
        "k": ds.k,
        "zeta": list(ds.zeta),
        "n": agg.config.n,
        "trials": agg.config.trials,
        "base_seed": agg.config.base_seed,
        "mode": agg.config.mode,
        "c_end": sol.c_end,
        "t_end": sol.t_end,
    }
    return ComparisonReport(
        leftover_theory=sol.leftover_fraction,
        leftover_sim_mean=mean,
        leftover_sim_stddev=std,
        trajectory_sup_error=[float(x) for x in sup],
        tol_leftover=tol_leftover,
        tol_traj=tol_traj,
        passed=bool(passed),
        meta=meta,
    )


# --- output ----------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path: Path, header: list[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    return path


SUMMARY_HEADER = ["seed", "mode", "n", "matching_size", "uncovered", "uncovered_frac"]


def write_sim_outputs(agg: Aggregate, out: Path, dump: bool = False) -> list[Path]:
    out = Path(out)
    written = [
        write_csv(
            out / "summary.csv",
            SUMMARY_HEADER,
            ([r.summary_row()[h] for h in SUMMARY_HEADER] for r in agg.results),
        )
    ]
    delta = agg.config.ds.delta
    header = ["j", "t"] + [f"Y_{i}" for i in range(1, delta + 1)] + ["M"]
    for trial in agg.trials:
        r = trial.result
        rows = (
            [int(j), float(j) / r.n, *map(int, y), int(m)]
            for j, y, m in zip(r.steps, r.Y, r.M)
        )
        written.append(write_csv(out / f"trajectory_seed{r.seed}.csv", header, rows))
        if dump and trial.hypergraph is not None:
            path = out / f"hypergraph_seed{r.seed}.txt"
            trial.hypergraph.dump(path)
            written.append(path)
    return written


def write_report(report: ComparisonReport, out: Path) -> Path:
    path = Path(out) / "report.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2)
        fh.write("\n")
    return path


def write_theory(ds: DegreeSequence, out: Path, grid: int | None = None) -> list[Path]:
    sol = solve_theory(ds)
    out = Path(out)
    written = [
        write_csv(
            out / "theory_summary.csv",
            ["k", "delta_max", "c_end", "t_end", "leftover"],
            [[ds.k, ds.delta, sol.c_end, sol.t_end, sol.leftover_fraction]],
        )
    ]
    if grid:
        if grid < 2:
            raise ValueError("grid needs at least 2 points")
        header = ["t", "C", "A", "B", "m", "s"] + [f"z_{i}" for i in range(1, ds.delta + 1)]
        rows = []
        for t in np.linspace(0.0, sol.t_end, grid):
            p = trajectory_at(ds, min(float(t), sol.t_end), sol)
            rows.append([p.t, p.C, p.A, p.B, p.m, p.s, *map(float, p.z)])
        written.append(write_csv(out / "theory_trajectory.csv", header, rows))
    return written


def sweep_rows(k: int, delta_min: int, delta_max: int) -> list[list]:
    """``[k, delta, c_end, t_end, leftover]`` for each regular delta in range.

    k = delta = 2 has no closed form and goes through the generic solver.
    """
    from .degseq import regular

    rows = []
    for d in range(delta_min, delta_max + 1):
        try:
            sol = regular_closed_form(k, d)
        except DegenerateCase:
            sol = solve_theory(regular(k, d))
        rows.append([k, d, sol.c_end, sol.t_end, sol.leftover_fraction])
    return rows


def write_sweep(k: int, delta_min: int, delta_max: int, out: Path) -> Path:
    return write_csv(
        Path(out) / "sweep.csv",
        ["k", "delta", "c_end", "t_end", "leftover"],
        sweep_rows(k, delta_min, delta_max),
    )
