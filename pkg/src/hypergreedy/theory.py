"""Fluid-limit solution of random greedy matching on fixed-degree hypergraphs.

The degree-class densities z_1..z_Delta follow an ODE that reduces to two
scalar unknowns. With P the degree generating polynomial,

* ``C`` solves ``P(C) = 1 - k t``,
* ``B = Q(C) P'(C)^(k-1)`` where ``Q(x) = int_x^1 (k-1) w P''(w) / P'(w)^k dw``,
* ``A = C - B``, and ``z_i = A^i sum_{l>=i} zeta_l binom(l, i) B^(l-i)``.

The process stops when ``A`` hits zero, i.e. at the unique root ``c_end`` of
``h(x) = x / P'(x)^(k-1) - Q(x)`` in (0, 1). The asymptotic fraction of
uncovered vertices is ``P(c_end)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import kernels
from ._accel import to_backend
from .degseq import DegreeSequence, eval_P
from .errors import ConvergenceFailure, DegenerateCase, DomainError, SingularState

QUAD_ABSTOL = 1e-12
QUAD_RELTOL = 1e-12
ROOT_TOL = 1e-12


class SolutionMethod(str, enum.Enum):
    CLOSED_FORM_REGULAR = "ClosedFormRegular"
    GENERIC_QUADRATURE = "GenericQuadrature"


@dataclass(frozen=True)
class TheorySolution:
    c_end: float
    t_end: float
    leftover_fraction: float
    method: SolutionMethod

    @property
    def matching_fraction(self) -> float:
        """Asymptotic matching size divided by n (same as ``t_end``)."""
        return self.t_end


@dataclass
class TrajectoryPoint:
    """Continuous state at time ``t``; ``km`` is k times the edge density m."""

    t: float
    m: float
    s: float
    z: np.ndarray
    km: float
    A: float | None = None
    B: float | None = None
    C: float | None = None


# --- Q and h ---------------------------------------------------------------


@lru_cache(maxsize=256)
def _derivative_coefs(ds: DegreeSequence):
    return to_backend(ds.coefficients(1)), to_backend(ds.coefficients(2))


def _has_closed_q(ds: DegreeSequence) -> bool:
    return ds.is_regular and (ds.k - 1) * (ds.delta - 1) > 1


def _resolve(ds: DegreeSequence, method: str) -> str:
    if method == "auto":
        return "closed" if _has_closed_q(ds) else "quadrature"
    if method == "closed" and not _has_closed_q(ds):
        raise DegenerateCase(
            "closed-form Q needs a regular sequence with (k-1)(delta-1) > 1"
        )
    if method not in ("closed", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    return method


def q_closed_form(k: int, delta: int, x: float) -> float:
    """Q(x) for the regular sequence P(x) = x^delta, when (k-1)(delta-1) > 1."""
    r = (k - 1) * (delta - 1)
    if r <= 1:
        raise DegenerateCase(f"(k-1)(delta-1) = {r}; closed form needs > 1")
    e = r - 1
    # x^(-e) - 1 computed as expm1 to keep precision near x = 1
    return r / (delta ** (k - 1) * e) * math.expm1(-e * math.log(x))


def q_integral(ds: DegreeSequence, x: float, method: str = "auto") -> float:
    """Q(x) = int_x^1 (k-1) w P''(w) / P'(w)^k dw for 0 < x <= 1.

    ``method`` is ``"auto"`` (closed form for non-degenerate regular
    sequences, else quadrature), ``"closed"`` or ``"quadrature"``.
    """
    if not (0.0 < x <= 1.0):
        raise DomainError(f"Q is defined on (0, 1], got x={x!r}")
    if x == 1.0:
        return 0.0
    if _resolve(ds, method) == "closed":
        return q_closed_form(ds.k, ds.delta, x)
    d1, d2 = _derivative_coefs(ds)
    stack = to_backend(np.zeros(kernels.STACK_SIZE))
    return float(
        kernels.q_quadrature(d1, d2, ds.k, float(x), 1.0, QUAD_ABSTOL, QUAD_RELTOL, stack)
    )


def h_value(ds: DegreeSequence, x: float, method: str = "auto") -> float:
    """h(x) = x / P'(x)^(k-1) - Q(x); strictly increasing on (0, 1]."""
    if not (0.0 < x <= 1.0):
        raise DomainError(f"h is defined on (0, 1], got x={x!r}")
    return x / eval_P(ds, x, 1) ** (ds.k - 1) - q_integral(ds, x, method)


def _bracketed_root(
    f: Callable[[float], float],
    df: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    max_iter: int = 300,
) -> float:
    """Root of an increasing ``f`` with ``f(a) < 0 < f(b)``.

    Newton steps are taken when they land strictly inside the current bracket,
    bisection otherwise. The returned value is the midpoint of a bracket of
    width at most ``tol``.
    """
    x = 0.5 * (a + b)
    for _ in range(max_iter):
        fx = f(x)
        if fx == 0.0:
            return x
        if fx < 0.0:
            a = x
        else:
            b = x
        if b - a <= tol:
            return 0.5 * (a + b)
        xn = x - fx / df(x)
        if not (a < xn < b):
            xn = 0.5 * (a + b)
        elif abs(xn - x) < 0.5 * tol:
            lo, hi = max(a, xn - 0.5 * tol), min(b, xn + 0.5 * tol)
            if f(lo) < 0.0:
                a = lo
            if f(hi) > 0.0:
                b = hi
            if b - a <= tol:
                return 0.5 * (a + b)
            xn = 0.5 * (a + b)
        x = xn
    raise ConvergenceFailure(f"no convergence in [{a}, {b}] after {max_iter} iterations")


def find_c_end(ds: DegreeSequence, method: str = "auto") -> float:
    """The unique zero of h in (0, 1)."""
    lo = 1e-3
    while h_value(ds, lo, method) >= 0.0:
        lo *= 0.5
        if lo < 1e-300:
            raise ConvergenceFailure(
                f"h shows no sign change on (0, 1] for {ds}; the degree sequence "
                "violates the assumptions of the fluid limit"
            )
    k = ds.k
    root = _bracketed_root(
        lambda x: h_value(ds, x, method),
        lambda x: eval_P(ds, x, 1) ** (1 - k),
        lo,
        1.0,
        ROOT_TOL,
    )
    return float(root)


@lru_cache(maxsize=256)
def solve_theory(ds: DegreeSequence, method: str = "auto") -> TheorySolution:
    """Stopping point, matching size and leftover fraction for ``ds``."""
    resolved = _resolve(ds, method)
    c_end = find_c_end(ds, resolved)
    leftover = float(eval_P(ds, c_end, 0))
    label = (
        SolutionMethod.CLOSED_FORM_REGULAR
        if resolved == "closed"
        else SolutionMethod.GENERIC_QUADRATURE
    )
    return TheorySolution(c_end, (1.0 - leftover) / ds.k, leftover, label)


def regular_closed_form(k: int, delta: int) -> TheorySolution:
    """Explicit solution for the k-uniform delta-regular case (k + delta >= 5)."""
    if k < 2 or delta < 2:
        raise DomainError(f"need k, delta >= 2, got k={k}, delta={delta}")
    r = (k - 1) * (delta - 1)
    if r == 1:
        raise DegenerateCase("k = delta = 2 has no closed form; use solve_theory")
    c_end = float(r) ** (-1.0 / (r - 1))
    leftover = float(r) ** (-delta / (r - 1))
    return TheorySolution(c_end, (1.0 - leftover) / k, leftover, SolutionMethod.CLOSED_FORM_REGULAR)


# --- trajectories ----------------------------------------------------------


def c_of_t(ds: DegreeSequence, t: float, sol: TheorySolution | None = None) -> float:
    """The C in [c_end, 1] with P(C) = 1 - k t."""
    sol = sol or solve_theory(ds)
    if not (0.0 <= t <= sol.t_end):
        raise DomainError(f"t={t!r} outside [0, t_end={sol.t_end!r}]")
    if t == 0.0:
        return 1.0
    target = 1.0 - ds.k * t
    if eval_P(ds, sol.c_end, 0) - target >= 0.0:
        return sol.c_end
    root = _bracketed_root(
        lambda c: eval_P(ds, c, 0) - target,
        lambda c: eval_P(ds, c, 1),
        sol.c_end,
        1.0,
        ROOT_TOL,
    )
    return float(root)


def z_from_ab(ds: DegreeSequence, A: float, B: float) -> np.ndarray:
    """Degree-class densities z_1..z_Delta from the reduced coordinates."""
    D = ds.delta
    z = np.empty(D)
    for i in range(1, D + 1):
        acc = 0.0
        for ell in range(i, D + 1):
            acc += ds.zeta[ell - 1] * math.comb(ell, i) * B ** (ell - i)
        z[i - 1] = A**i * acc
    return z


def trajectory_at(
    ds: DegreeSequence, t: float, sol: TheorySolution | None = None, method: str = "auto"
) -> TrajectoryPoint:
    """Full continuous state at time ``t`` in [0, t_end]."""
    sol = sol or solve_theory(ds, method)
    k = ds.k
    C = c_of_t(ds, t, sol)
    p1 = eval_P(ds, C, 1)
    p2 = eval_P(ds, C, 2)
    B = q_integral(ds, C, method) * p1 ** (k - 1)
    A = C - B
    if A < 0.0:
        # only reachable within root tolerance of t_end
        A, B = 0.0, C
    km = A * p1
    return TrajectoryPoint(
        t=t,
        m=km / k,
        s=(k - 1) * A * p2 / p1,
        z=z_from_ab(ds, A, B),
        A=A,
        B=B,
        C=C,
        km=km,
    )


def trajectory(
    ds: DegreeSequence, times, sol: TheorySolution | None = None
) -> list[TrajectoryPoint]:
    sol = sol or solve_theory(ds)
    return [trajectory_at(ds, float(t), sol) for t in times]


# --- direct ODE integration (independent check of the closed form) ---------


def _rhs(z: np.ndarray, k: int, idx: np.ndarray) -> tuple[np.ndarray, float, float]:
    km = float(idx @ z)
    if km < 1e-6:
        raise SingularState(f"k*m = {km:.3g} fell below 1e-6")
    p = idx * z / km
    s = (k - 1) * float((idx - 1.0) @ p)
    p_next = np.append(p[1:], 0.0)
    return -k * (1.0 + s) * p + k * s * p_next, km, s


def ode_integrate(
    ds: DegreeSequence,
    t_stop: float,
    dt: float,
    sample_every: int = 1,
    sol: TheorySolution | None = None,
) -> list[TrajectoryPoint]:
    """Classical RK4 on the raw degree-class system, from z_i(0) = zeta_i.

    Samples are taken every ``sample_every`` steps and at ``t_stop``. The
    returned points leave ``A``, ``B`` and ``C`` unset.
    """
    sol = sol or solve_theory(ds)
    if not (0.0 < t_stop <= sol.t_end - 1e-4):
        raise DomainError(f"t_stop={t_stop!r} must lie in (0, t_end - 1e-4]")
    if not (0.0 < dt <= 1e-3):
        raise DomainError(f"dt={dt!r} must lie in (0, 1e-3]")
    k = ds.k
    idx = np.arange(1, ds.delta + 1, dtype=float)
    z = np.asarray(ds.zeta, dtype=float).copy()
    nsteps = max(1, math.ceil(t_stop / dt - 1e-9))

    def point(t, z):
        _, km, s = _rhs(z, k, idx)
        return TrajectoryPoint(t=t, m=km / k, s=s, z=z.copy(), km=km)

    out = [point(0.0, z)]
    t = 0.0
    for j in range(1, nsteps + 1):
        h = dt if j < nsteps else t_stop - (nsteps - 1) * dt
        k1 = _rhs(z, k, idx)[0]
        k2 = _rhs(z + 0.5 * h * k1, k, idx)[0]
        k3 = _rhs(z + 0.5 * h * k2, k, idx)[0]
        k4 = _rhs(z + h * k3, k, idx)[0]
        z = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t_stop if j == nsteps else j * dt
        if j % sample_every == 0 or j == nsteps:
            out.append(point(t, z))
    return out
