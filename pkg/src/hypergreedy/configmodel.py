"""Configuration model for k-uniform multihypergraphs with a given degree sequence."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .degseq import DegreeSequence
from .errors import DivisibilityError

MAX_SIMPLE_TRIES = 10_000


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator from an int or a :class:`numpy.random.SeedSequence`."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def apportion(ds: DegreeSequence, n: int) -> np.ndarray:
    """Vertex counts per degree 1..Delta summing exactly to ``n``.

    Largest-remainder rounding of ``zeta_i * n``; ties go to the lower degree.
    """
    quota = np.asarray(ds.zeta) * n
    counts = np.floor(quota).astype(np.int64)
    short = n - int(counts.sum())
    if short > 0:
        frac = quota - counts
        order = np.argsort(-frac, kind="stable")
        counts[order[:short]] += 1
    return counts


def total_points(ds: DegreeSequence, n: int) -> int:
    counts = apportion(ds, n)
    return int(np.dot(counts, np.arange(1, ds.delta + 1)))


def nearest_valid_n(ds: DegreeSequence, n: int, search: int = 10_000) -> int | None:
    """Closest vertex count whose point total is divisible by k."""
    for d in range(search + 1):
        for cand in (n - d, n + d):
            if cand >= 1 and total_points(ds, cand) % ds.k == 0:
                return cand
    return None


@dataclass
class PointPool:
    """Live configuration points with O(1) uniform sampling and removal.

    Live points occupy positions ``[0, live_count)`` of ``owner``. The points
    of vertex ``v`` are listed (by position) in
    ``vpts[start[v]:start[v] + degree_of[v]]`` and ``where`` maps a position
    back to its slot there. ``class_counts[i]`` is the number of vertices with
    ``i`` live points, including ``i = 0``.
    """

    n: int
    k: int
    delta: int
    owner: np.ndarray
    where: np.ndarray
    vpts: np.ndarray
    start: np.ndarray
    degree_of: np.ndarray
    class_counts: np.ndarray
    live_count: int
    seed: object = None
    initial_points: int = field(init=False)

    def __post_init__(self):
        self.initial_points = self.live_count

    @property
    def Y(self) -> np.ndarray:
        """Vertex counts for remaining degrees 1..Delta."""
        return self.class_counts[1:]

    @property
    def M(self) -> int:
        return self.live_count // self.k

    @property
    def is_fresh(self) -> bool:
        return self.live_count == self.initial_points

    def remove(self, pos: int) -> int:
        """Remove the live point at ``pos`` and return its owner."""
        if not 0 <= pos < self.live_count:
            raise IndexError(f"position {pos} is not live")
        v = int(self.owner[pos])
        self.live_count = int(
            kernels.pool_remove(
                self.owner, self.where, self.vpts, self.start, self.degree_of,
                self.class_counts, self.live_count, pos,
            )
        )
        return v

    def live_owners(self) -> np.ndarray:
        return self.owner[: self.live_count].copy()

    def check(self) -> None:
        """Assert the internal bookkeeping is consistent."""
        live = self.live_count
        assert live == int(np.dot(np.arange(self.delta + 1), self.class_counts))
        assert np.all(np.bincount(self.owner[:live], minlength=self.n) == self.degree_of)
        assert np.array_equal(
            np.bincount(self.degree_of, minlength=self.delta + 1), self.class_counts
        )
        seen = np.zeros(live, dtype=np.int64)
        for v in range(self.n):
            s = self.start[v]
            for p in self.vpts[s : s + self.degree_of[v]]:
                assert 0 <= p < live and self.owner[p] == v and self.where[p] in range(
                    s, s + self.degree_of[v]
                )
                seen[p] += 1
        assert np.all(seen == 1)

    def copy(self) -> "PointPool":
        return PointPool(
            self.n, self.k, self.delta, self.owner.copy(), self.where.copy(),
            self.vpts.copy(), self.start.copy(), self.degree_of.copy(),
            self.class_counts.copy(), self.live_count, self.seed,
        )


def pool_from_degrees(degrees, k: int, delta: int | None = None, seed=None) -> PointPool:
    """Pool for an explicit per-vertex degree list."""
    deg = np.asarray(degrees, dtype=np.int64)
    if deg.ndim != 1 or np.any(deg < 1):
        raise ValueError("degrees must be a 1-d sequence of positive integers")
    delta = int(deg.max()) if delta is None else delta
    n = len(deg)
    P = int(deg.sum())
    if P % k:
        raise DivisibilityError(f"{P} configuration points is not a multiple of k={k}")
    start = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=start[1:])
    return PointPool(
        n=n,
        k=k,
        delta=delta,
        owner=np.repeat(np.arange(n, dtype=np.int64), deg),
        where=np.arange(P, dtype=np.int64),
        vpts=np.arange(P, dtype=np.int64),
        start=start,
        degree_of=deg.copy(),
        class_counts=np.bincount(deg, minlength=delta + 1).astype(np.int64),
        live_count=P,
        seed=seed,
    )


def build_pool(ds: DegreeSequence, n: int, seed=None) -> PointPool:
    """Fresh pool with ``apportion(ds, n)[i-1]`` vertices of degree ``i``.

    Construction is deterministic (vertex ids are assigned in order of
    increasing degree); ``seed`` is only stored for later use by
    :func:`realize_hypergraph`.
    """
    if n < 1:
        raise ValueError(f"n={n} must be positive")
    counts = apportion(ds, n)
    P = int(np.dot(counts, np.arange(1, ds.delta + 1)))
    if P % ds.k:
        hint = nearest_valid_n(ds, n)
        raise DivisibilityError(
            f"n={n} gives {P} configuration points, not a multiple of k={ds.k}"
            + (f"; nearest valid n is {hint}" if hint is not None else "")
        )
    degrees = np.repeat(np.arange(1, ds.delta + 1, dtype=np.int64), counts)
    return pool_from_degrees(degrees, ds.k, ds.delta, seed)


@dataclass(frozen=True)
class Hypergraph:
    """k-uniform multihypergraph; ``edges`` has shape (num_edges, k)."""

    n: int
    k: int
    edges: np.ndarray

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        """Vertex degrees counted with multiplicity."""
        return np.bincount(self.edges.ravel(), minlength=self.n)

    def dump(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            fh.write(f"# n={self.n} k={self.k}\n")
            for e in self.edges:
                fh.write(" ".join(map(str, e)) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Hypergraph":
        with open(path) as fh:
            header = fh.readline().split()
            meta = dict(tok.split("=") for tok in header[1:])
            n, k = int(meta["n"]), int(meta["k"])
            rows = [list(map(int, line.split())) for line in fh if line.strip()]
        edges = np.array(rows, dtype=np.int64).reshape(-1, k)
        return cls(n, k, edges)


def random_partition(num_points: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random partition of ``range(num_points)`` into blocks of size k."""
    return rng.permutation(num_points).reshape(-1, k)


def realize_hypergraph(pool: PointPool, seed=None) -> Hypergraph:
    """Contract a uniform random k-block partition of the pool's points."""
    if not pool.is_fresh:
        raise ValueError("realize_hypergraph needs a fresh pool")
    rng = make_rng(pool.seed if seed is None else seed)
    blocks = random_partition(pool.live_count, pool.k, rng)
    owners = pool.owner[: pool.live_count]
    return Hypergraph(pool.n, pool.k, owners[blocks])


def is_simple(H: Hypergraph) -> bool:
    """No edge repeats a vertex and no two edges have the same vertex set."""
    if H.num_edges == 0:
        return True
    e = np.sort(H.edges, axis=1)
    if np.any(e[:, 1:] == e[:, :-1]):
        return False
    return len(np.unique(e, axis=0)) == len(e)


def realize_simple(pool: PointPool, seed=None, max_tries: int = MAX_SIMPLE_TRIES) -> Hypergraph:
    """Rejection-sample a simple realization (small n diagnostics only)."""
    rng = make_rng(pool.seed if seed is None else seed)
    for _ in range(max_tries):
        H = realize_hypergraph(pool, rng)
        if is_simple(H):
            return H
    raise RuntimeError(f"no simple realization in {max_tries} tries")
