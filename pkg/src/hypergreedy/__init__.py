"""Random greedy matching on random hypergraphs with a fixed degree sequence.

Two routes to the same quantity: :mod:`hypergreedy.theory` solves the
fluid-limit equations for the degree-class trajectories and the final
uncovered fraction, and :mod:`hypergreedy.greedy` simulates the algorithm on
the configuration model.
"""

from ._accel import BACKEND
from .configmodel import Hypergraph, PointPool, build_pool, is_simple, realize_hypergraph
from .degseq import DegreeSequence, eval_P, regular, sigma_threshold, validate
from .greedy import SimMode, SimResult, run_explicit, run_point_process, verify_maximal
from .harness import ComparisonReport, ExperimentConfig, compare, run_trials
from .theory import (
    SolutionMethod,
    TheorySolution,
    TrajectoryPoint,
    c_of_t,
    find_c_end,
    h_value,
    ode_integrate,
    q_integral,
    regular_closed_form,
    solve_theory,
    trajectory_at,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ComparisonReport",
    "DegreeSequence",
    "ExperimentConfig",
    "Hypergraph",
    "PointPool",
    "SimMode",
    "SimResult",
    "SolutionMethod",
    "TheorySolution",
    "TrajectoryPoint",
    "build_pool",
    "c_of_t",
    "compare",
    "eval_P",
    "find_c_end",
    "h_value",
    "is_simple",
    "ode_integrate",
    "q_integral",
    "realize_hypergraph",
    "regular",
    "regular_closed_form",
    "run_explicit",
    "run_point_process",
    "run_trials",
    "sigma_threshold",
    "solve_theory",
    "trajectory_at",
    "validate",
    "verify_maximal",
]
