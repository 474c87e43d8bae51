"""Random greedy matching: lazy point process and literal edge-list version."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._accel import USE_NUMBA, to_backend
from .configmodel import Hypergraph, PointPool, build_pool, make_rng
from .degseq import DegreeSequence
from .errors import ModeMismatch

INT = np.int64


class SimMode(str, enum.Enum):
    POINT_PROCESS = "PointProcess"
    EXPLICIT = "Explicit"


@dataclass
class SimResult:
    """Outcome of one greedy run.

    ``steps``, ``Y`` and ``M`` are the recorded trajectory: step index j,
    vertex counts with remaining degree 1..Delta (shape ``(R, Delta)``), and
    the number of remaining edges. ``matching`` has one row of k vertex ids
    per selected edge.
    """

    n: int
    k: int
    delta: int
    matching_size: int
    uncovered: int
    steps: np.ndarray
    Y: np.ndarray
    M: np.ndarray
    matching: np.ndarray
    seed: object
    mode: SimMode

    @property
    def uncovered_frac(self) -> float:
        return self.uncovered / self.n

    @property
    def times(self) -> np.ndarray:
        return self.steps / self.n

    def summary_row(self) -> dict:
        return {
            "seed": self.seed,
            "mode": "point" if self.mode is SimMode.POINT_PROCESS else "explicit",
            "n": self.n,
            "matching_size": self.matching_size,
            "uncovered": self.uncovered,
            "uncovered_frac": repr(self.uncovered_frac),
        }

    def trajectory_table(self) -> np.ndarray:
        """Integer columns ``j, Y_1..Y_Delta, M``."""
        return np.column_stack([self.steps, self.Y, self.M]).astype(INT)


def default_record_every(n: int) -> int:
    return max(1, n // 1000)


def _record_buffers(max_steps: int, record_every: int, width: int):
    nrec = max_steps // record_every + 2
    return (
        np.zeros(nrec, dtype=INT),
        np.zeros(nrec * width, dtype=INT),
        np.zeros(nrec, dtype=INT),
    )


def _call(kernel, args):
    """Run ``kernel`` on backend containers and copy mutated buffers back."""
    conv = [to_backend(a) if isinstance(a, np.ndarray) else a for a in args]
    out = kernel(*conv)
    if not USE_NUMBA:
        for a, c in zip(args, conv):
            if isinstance(a, np.ndarray):
                a[...] = np.asarray(c, dtype=a.dtype).reshape(a.shape)
    return out


def run_pool(pool: PointPool, seed, record_every: int | None = None) -> SimResult:
    """Run the point process on ``pool`` (mutated in place) using ``seed``."""
    if record_every is None:
        record_every = default_record_every(pool.n)
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    k, width = pool.k, pool.delta + 1
    P = pool.live_count
    uniforms = make_rng(seed).random(P)
    max_steps = P // k
    rec_step, rec_counts, rec_m = _record_buffers(max_steps, record_every, width)
    sel = np.zeros(k, dtype=INT)
    matched = np.zeros(max(P, 1), dtype=INT)
    steps, covered, nrec, live = _call(
        kernels.point_process,
        [
            pool.owner, pool.where, pool.vpts, pool.start, pool.degree_of,
            pool.class_counts, P, k, uniforms, record_every,
            sel, matched, rec_step, rec_counts, rec_m,
        ],
    )
    steps, nrec = int(steps), int(nrec)
    pool.live_count = int(live)
    counts = rec_counts[: nrec * width].reshape(nrec, width)
    return SimResult(
        n=pool.n,
        k=k,
        delta=pool.delta,
        matching_size=steps,
        uncovered=pool.n - int(covered),
        steps=rec_step[:nrec].copy(),
        Y=counts[:, 1:].copy(),
        M=rec_m[:nrec].copy(),
        matching=matched[: steps * k].reshape(steps, k).copy(),
        seed=seed,
        mode=SimMode.POINT_PROCESS,
    )


def run_point_process(
    ds: DegreeSequence, n: int, seed, record_every: int | None = None
) -> SimResult:
    """Greedy matching on a lazily revealed configuration-model hypergraph.

    Each selected edge is k uniform live points; every other point of a
    matched vertex is then paired with k - 1 further uniform live points and
    the resulting edge deleted. Runs until fewer than k points remain.
    """
    return run_pool(build_pool(ds, n), seed, record_every)


def incidence(H: Hypergraph) -> tuple[np.ndarray, np.ndarray]:
    """CSR vertex-to-edge incidence, repeating an edge once per occurrence."""
    flat = H.edges.ravel()
    order = np.argsort(flat, kind="stable")
    inc_edges = (order // H.k).astype(INT)
    inc_start = np.zeros(H.n + 1, dtype=INT)
    np.cumsum(np.bincount(flat, minlength=H.n), out=inc_start[1:])
    return inc_start, inc_edges


def run_explicit(
    H: Hypergraph, seed, record_every: int | None = None, delta: int | None = None
) -> SimResult:
    """Select a uniform remaining edge, delete everything meeting it, repeat."""
    if record_every is None:
        record_every = default_record_every(H.n)
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    k, E = H.k, H.num_edges
    deg = H.degrees().astype(INT)
    if delta is None:
        delta = int(deg.max()) if H.n else 0
    width = delta + 1
    counts = np.bincount(deg, minlength=width).astype(INT)
    inc_start, inc_edges = incidence(H)
    uniforms = make_rng(seed).random(max(E, 1))
    rec_step, rec_counts, rec_m = _record_buffers(E, record_every, width)
    matched = np.zeros(max(E, 1), dtype=INT)
    steps, covered, nrec = _call(
        kernels.explicit_greedy,
        [
            np.ascontiguousarray(H.edges.ravel(), dtype=INT), k, E, inc_start,
            inc_edges, deg, counts, uniforms, record_every,
            np.arange(E, dtype=INT), np.arange(E, dtype=INT),
            np.zeros(H.n, dtype=INT), matched, rec_step, rec_counts, rec_m,
        ],
    )
    steps, nrec = int(steps), int(nrec)
    rc = rec_counts[: nrec * width].reshape(nrec, width)
    return SimResult(
        n=H.n,
        k=k,
        delta=delta,
        matching_size=steps,
        uncovered=H.n - int(covered),
        steps=rec_step[:nrec].copy(),
        Y=rc[:, 1:].copy(),
        M=rec_m[:nrec].copy(),
        matching=H.edges[matched[:steps]].copy(),
        seed=seed,
        mode=SimMode.EXPLICIT,
    )


def verify_maximal(H: Hypergraph, result: SimResult) -> bool:
    """True iff every edge of ``H`` meets some edge of the matching."""
    if result.mode is not SimMode.EXPLICIT:
        raise ModeMismatch("maximality needs an explicit hypergraph run")
    covered = np.zeros(H.n, dtype=bool)
    covered[result.matching.ravel()] = True
    if H.num_edges == 0:
        return True
    return bool(covered[H.edges].any(axis=1).all())


def is_disjoint(result: SimResult) -> bool:
    """Matched edges pairwise share no vertex (a repeated vertex within one edge is allowed)."""
    seen = set()
    for edge in result.matching:
        vs = set(edge.tolist())
        if seen & vs:
            return False
        seen |= vs
    return True
