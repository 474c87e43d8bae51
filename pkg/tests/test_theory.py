import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypergreedy import degseq, theory
from hypergreedy.degseq import eval_P
from hypergreedy.errors import ConvergenceFailure, DegenerateCase, DomainError, SingularState
from hypergreedy.theory import (
    SolutionMethod,
    c_of_t,
    find_c_end,
    h_value,
    ode_integrate,
    q_integral,
    regular_closed_form,
    solve_theory,
    trajectory_at,
)

from conftest import MIXED_C_END, MIXED_LEFTOVER, random_degree_sequences

REGULAR_PAIRS = [(k, d) for k in range(2, 7) for d in range(2, 7) if k + d >= 5]


def mixed_q_exact(x):
    # antiderivative of w / (0.5 + w)^2 is log(0.5 + w) + 0.5 / (0.5 + w)
    F = lambda w: math.log(0.5 + w) + 0.5 / (0.5 + w)
    return F(1.0) - F(x)


def bisect(f, a, b, tol=1e-15):
    while b - a > tol:
        m = 0.5 * (a + b)
        if f(m) < 0:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


# --- Q -----------------------------------------------------------------------


class TestQ:
    @pytest.mark.parametrize("ds", random_degree_sequences(20, seed=3))
    def test_zero_at_one(self, ds):
        assert q_integral(ds, 1.0) == 0.0
        assert q_integral(ds, 1.0, "quadrature") == 0.0

    def test_regular_33(self, r33):
        expected = 4 / 27 * 7
        assert q_integral(r33, 0.5) == pytest.approx(expected, abs=1e-14)
        assert q_integral(r33, 0.5, "quadrature") == pytest.approx(expected, abs=1e-11)

    def test_mixed_vs_antiderivative(self, mixed):
        assert q_integral(mixed, 0.27) == pytest.approx(0.35081, abs=1e-5)
        for x in (0.01, 0.27, 0.5, 0.9, 0.999):
            assert q_integral(mixed, x) == pytest.approx(mixed_q_exact(x), abs=1e-12)

    @pytest.mark.parametrize("k, d", REGULAR_PAIRS)
    def test_quadrature_matches_closed_form(self, k, d):
        ds = degseq.regular(k, d)
        c_end = regular_closed_form(k, d).c_end
        for x in np.linspace(c_end, 1.0, 7):
            quad = q_integral(ds, float(x), "quadrature")
            closed = q_integral(ds, float(x), "closed")
            assert quad == pytest.approx(closed, abs=1e-10)

    def test_regular_22_is_log(self):
        ds = degseq.regular(2, 2)
        assert q_integral(ds, 0.3) == pytest.approx(-math.log(0.3) / 2, abs=1e-12)
        with pytest.raises(DegenerateCase):
            q_integral(ds, 0.3, "closed")

    @pytest.mark.parametrize("x", [0.0, -0.1, 1.0000001])
    def test_domain(self, r33, x):
        with pytest.raises(DomainError):
            q_integral(r33, x)
        with pytest.raises(DomainError):
            h_value(r33, x)


# --- h and its root -----------------------------------------------------------


class TestH:
    @pytest.mark.parametrize("ds", random_degree_sequences(10, seed=11))
    def test_h_at_one(self, ds):
        assert h_value(ds, 1.0) == pytest.approx(1 / eval_P(ds, 1.0, 1) ** (ds.k - 1), rel=1e-14)

    def test_regular_22_root(self):
        ds = degseq.regular(2, 2)
        assert abs(h_value(ds, math.exp(-1))) < 1e-11

    def test_regular_33_root(self, r33):
        assert abs(h_value(r33, 0.25 ** (1 / 3))) < 1e-10
        assert abs(h_value(r33, 0.25 ** (1 / 3), "quadrature")) < 1e-10

    @pytest.mark.parametrize("ds", [degseq.regular(3, 3), degseq.validate([0.5, 0.5], 2)]
                             + random_degree_sequences(4, seed=5))
    def test_monotone_on_grid(self, ds):
        xs = np.linspace(0.05, 1.0, 1000)
        hs = np.array([h_value(ds, float(x)) for x in xs])
        assert np.all(np.diff(hs) > 0)

    def test_find_c_end(self, r33, mixed):
        assert find_c_end(r33) == pytest.approx(0.6299605, abs=1e-7)
        assert find_c_end(r33) == pytest.approx(0.25 ** (1 / 3), abs=1e-12)
        assert find_c_end(degseq.regular(2, 2)) == pytest.approx(math.exp(-1), abs=1e-12)
        assert find_c_end(mixed) == pytest.approx(0.270, abs=1e-3)

    def test_mixed_root_vs_independent_oracle(self, mixed):
        oracle = bisect(lambda x: x / (0.5 + x) - mixed_q_exact(x), 1e-6, 1.0)
        assert oracle == pytest.approx(MIXED_C_END, abs=1e-13)
        assert find_c_end(mixed) == pytest.approx(oracle, abs=1e-11)

    def test_convergence_failure(self, r33, monkeypatch):
        monkeypatch.setattr(theory, "h_value", lambda ds, x, method="auto": 1.0)
        with pytest.raises(ConvergenceFailure):
            theory.find_c_end(r33)


# --- solutions ----------------------------------------------------------------


class TestSolve:
    def test_regular_examples(self, r33):
        s = solve_theory(r33)
        assert s.leftover_fraction == pytest.approx(0.25, abs=1e-10)
        assert s.t_end == pytest.approx(0.25, abs=1e-10)
        assert s.method is SolutionMethod.CLOSED_FORM_REGULAR
        s = solve_theory(degseq.regular(2, 3))
        assert s.leftover_fraction == pytest.approx(0.125, abs=1e-10)
        assert s.t_end == pytest.approx(0.4375, abs=1e-10)

    def test_degenerate_regular(self):
        s = solve_theory(degseq.regular(2, 2))
        assert s.method is SolutionMethod.GENERIC_QUADRATURE
        assert s.leftover_fraction == pytest.approx(math.exp(-2), abs=1e-11)

    def test_mixed(self, mixed):
        s = solve_theory(mixed)
        assert s.leftover_fraction == pytest.approx(MIXED_LEFTOVER, abs=1e-11)
        assert s.method is SolutionMethod.GENERIC_QUADRATURE

    @pytest.mark.parametrize("ds", random_degree_sequences(20, seed=21))
    def test_solution_invariants(self, ds):
        s = solve_theory(ds)
        assert 0 < s.c_end < 1
        assert 0 < s.t_end < 1 / ds.k
        assert 0 < s.leftover_fraction < 1
        assert 1 - ds.k * s.t_end == pytest.approx(eval_P(ds, s.c_end, 0), abs=1e-10)

    def test_closed_form_examples(self):
        assert regular_closed_form(3, 3).leftover_fraction == 0.25
        assert regular_closed_form(2, 3).leftover_fraction == 0.125
        s = regular_closed_form(2, 5)
        assert s.leftover_fraction == pytest.approx(0.0992125657480124672, abs=1e-15)
        assert s.c_end ** 5 == pytest.approx(s.leftover_fraction, rel=1e-14)
        with pytest.raises(DegenerateCase):
            regular_closed_form(2, 2)
        with pytest.raises(DomainError):
            regular_closed_form(1, 4)

    @pytest.mark.parametrize("k, d", REGULAR_PAIRS)
    def test_generic_matches_closed(self, k, d):
        gen = solve_theory(degseq.regular(k, d), "quadrature")
        ref = regular_closed_form(k, d)
        assert gen.c_end == pytest.approx(ref.c_end, abs=1e-9)
        assert gen.leftover_fraction == pytest.approx(ref.leftover_fraction, abs=1e-9)


# --- trajectories -------------------------------------------------------------


class TestTrajectory:
    def test_c_of_t(self, r33, mixed):
        for ds in (r33, mixed):
            sol = solve_theory(ds)
            assert c_of_t(ds, 0.0) == 1.0
            assert c_of_t(ds, sol.t_end) == pytest.approx(sol.c_end, abs=1e-12)
        assert c_of_t(r33, 0.1) == pytest.approx(0.887904001742600690, abs=1e-12)
        with pytest.raises(DomainError):
            c_of_t(r33, 0.26)
        with pytest.raises(DomainError):
            c_of_t(r33, -1e-9)

    @pytest.mark.parametrize("ds", random_degree_sequences(5, seed=2))
    def test_initial_state(self, ds):
        p = trajectory_at(ds, 0.0)
        assert (p.A, p.B, p.C) == (1.0, 0.0, 1.0)
        np.testing.assert_allclose(p.z, ds.zeta, atol=1e-15)
        assert p.km == pytest.approx(ds.mean_degree, rel=1e-14)

    @pytest.mark.parametrize("ds", [degseq.regular(3, 3), degseq.validate([0.5, 0.5], 2)]
                             + random_degree_sequences(3, seed=9))
    def test_final_state(self, ds):
        sol = solve_theory(ds)
        p = trajectory_at(ds, sol.t_end)
        assert p.A == pytest.approx(0.0, abs=1e-9)
        assert p.m == pytest.approx(0.0, abs=1e-9)
        np.testing.assert_allclose(p.z, 0.0, atol=1e-9)
        assert eval_P(ds, p.C, 0) == pytest.approx(sol.leftover_fraction, abs=1e-10)

    def test_r33_midpoint(self, r33):
        p = trajectory_at(r33, 0.1)
        C = 0.7 ** (1 / 3)
        assert p.C == pytest.approx(C, abs=1e-12)
        assert p.B == pytest.approx(theory.q_closed_form(3, 3, C) * (3 * C**2) ** 2, abs=1e-12)
        assert p.km == pytest.approx(p.A * 3 * p.C**2, abs=1e-9)
        assert np.dot(np.arange(1, 4), p.z) == pytest.approx(p.km, abs=1e-9)

    @pytest.mark.parametrize("ds", [degseq.regular(3, 3), degseq.regular(2, 2),
                                    degseq.validate([0.5, 0.5], 2)]
                             + random_degree_sequences(4, seed=17))
    def test_invariants_along_path(self, ds):
        sol = solve_theory(ds)
        ts = np.linspace(0, sol.t_end, 60)
        pts = theory.trajectory(ds, ts, sol)
        idx = np.arange(1, ds.delta + 1)
        for p in pts:
            assert p.C == pytest.approx(p.A + p.B, abs=1e-10)
            assert p.A >= 0 and p.B >= 0 and 0 <= p.C <= 1
            assert np.all(p.z >= 0)
            assert p.km == pytest.approx(p.A * eval_P(ds, p.C, 1), abs=1e-9)
            assert float(idx @ p.z) == pytest.approx(p.km, abs=1e-9)
        A = np.array([p.A for p in pts])
        C = np.array([p.C for p in pts])
        assert np.all(np.diff(A) <= 1e-12) and np.all(np.diff(C) <= 1e-12)

    @pytest.mark.parametrize("ds", [degseq.regular(3, 3), degseq.validate([0.5, 0.5], 2)]
                             + random_degree_sequences(2, seed=4))
    def test_km_decreases_at_least_k(self, ds):
        sol = solve_theory(ds)
        h = 1e-6
        for t in np.linspace(0.01, sol.t_end - 0.01, 100):
            km = lambda s: trajectory_at(ds, s, sol).km
            slope = (km(t + h) - km(t - h)) / (2 * h)
            assert slope <= -ds.k + 1e-4


class TestODE:
    def test_initial_sample(self, mixed):
        pts = ode_integrate(mixed, 1e-3, 1e-4)
        np.testing.assert_array_equal(pts[0].z, mixed.zeta)
        assert pts[0].A is None and pts[-1].t == pytest.approx(1e-3)
        np.testing.assert_allclose(pts[1].z, mixed.zeta, atol=1e-3)

    def test_r33_at_02(self, r33):
        pts = ode_integrate(r33, 0.2, 1e-4)
        assert pts[-1].t == pytest.approx(0.2, abs=1e-15)
        assert pts[-1].z[2] == pytest.approx(trajectory_at(r33, 0.2).z[2], abs=1e-6)

    def test_mixed_at_03(self, mixed):
        pts = ode_integrate(mixed, 0.3, 1e-4)
        err = np.abs(pts[-1].z - trajectory_at(mixed, 0.3).z).max()
        assert err <= 1e-6

    @pytest.mark.parametrize("ds", random_degree_sequences(4, seed=31))
    def test_random_sequences_match_closed_form(self, ds):
        sol = solve_theory(ds)
        pts = ode_integrate(ds, sol.t_end - 0.01, 1e-4, sample_every=50, sol=sol)
        err = max(np.abs(p.z - trajectory_at(ds, p.t, sol).z).max() for p in pts)
        assert err <= 1e-5

    def test_domain(self, r33):
        with pytest.raises(DomainError):
            ode_integrate(r33, 0.25, 1e-4)
        with pytest.raises(DomainError):
            ode_integrate(r33, 0.1, 1e-2)

    def test_singular_state(self):
        with pytest.raises(SingularState):
            theory._rhs(np.array([1e-8, 0.0]), 2, np.array([1.0, 2.0]))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 8), st.integers(2, 8))
def test_closed_form_is_fixed_point(k, d):
    if (k - 1) * (d - 1) == 1:
        return
    s = regular_closed_form(k, d)
    C = s.c_end
    r = (k - 1) * (d - 1)
    assert C == pytest.approx(r / (r - 1) * (C - C**r), rel=1e-12)
    assert 1 - k * s.t_end == pytest.approx(s.leftover_fraction, abs=1e-15)
