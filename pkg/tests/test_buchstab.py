"""Tests for the Buchstab table and its bound variants.

Expected values come from three independent sources: the exact 1/u branch,
closed-form arithmetic on [2,3), and adaptive quadrature (scipy) for the
[3,4) branch.  The table itself is never used as its own oracle.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from sieve_verifier import buchstab as B


@pytest.fixture(scope="module")
def table():
    return B.build_table(8.0, 1e-4)


def closed_form_oracle(u: float) -> float:
    """Piecewise ω on [1,4) evaluated via adaptive quadrature, not Simpson."""
    if u < 2.0:
        return 1.0 / u
    if u < 3.0:
        return (1.0 + math.log(u - 1.0)) / u
    tail, err = quad(lambda t: math.log(t - 1.0) / t, 2.0, u - 1.0, epsabs=1e-13)
    assert err < 1e-10
    return ((1.0 + math.log(u - 1.0)) + tail) / u


class TestBuildAndEval:
    def test_exact_branch(self, table):
        assert table.eval(1.5) == pytest.approx(1.0 / 1.5, abs=1e-9)
        assert table.eval(1.0) == pytest.approx(1.0, abs=1e-12)
        assert table.eval(2.0) == pytest.approx(0.5, abs=1e-9)

    def test_second_branch(self, table):
        assert table.eval(2.5) == pytest.approx((1.0 + math.log(1.5)) / 2.5, abs=1e-6)

    def test_third_branch_against_quadrature(self, table):
        assert table.eval(3.5) == pytest.approx(closed_form_oracle(3.5), abs=1e-8)

    def test_tail_band(self, table):
        assert 0.5612 <= table.eval(10.0) <= 0.5617
        tail = table.values[table.grid >= 4.0]
        assert tail.min() >= 0.5612 - 1e-6
        assert tail.max() <= 0.5617 + 1e-6

    def test_beyond_u_max_uses_last_value(self, table):
        assert table.eval(35.0) == table.values[-1]

    def test_domain_error(self, table):
        with pytest.raises(B.BuchstabDomainError):
            table.eval(0.9)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            B.build_table(3.0, 1e-4)
        with pytest.raises(ValueError):
            B.build_table(8.0, 0.5)

    def test_values_immutable(self, table):
        with pytest.raises(ValueError):
            table.values[0] = 0.0

    def test_vector_eval_matches_scalar(self, table):
        u = np.array([1.0, 1.5, 2.5, 3.5, 7.9, 20.0])
        v = table.eval(u)
        assert v == pytest.approx([table.eval(x) for x in u])


class TestBounds:
    def test_tail_constants(self):
        assert B.omega_lower(5.0) == 0.5612
        assert B.omega_upper(5.0) == 0.5617

    def test_shared_branches(self):
        assert B.omega_lower(1.7) == B.omega_upper(1.7) == pytest.approx(1.0 / 1.7)
        val = (1.0 + math.log(1.8)) / 2.8
        assert B.omega_lower(2.8) == pytest.approx(val, abs=1e-12)
        assert B.omega_upper(2.8) == pytest.approx(val, abs=1e-12)

    def test_clamps_never_bind_on_3_4(self):
        u = np.linspace(3.0, 4.0 - 1e-9, 20001)
        assert np.array_equal(B.omega_lower(u), B.omega_lower(u, clamp=False))
        assert np.array_equal(B.omega_upper(u), B.omega_upper(u, clamp=False))
        cf = B.omega_lower(u, clamp=False)
        assert cf.min() > B.OMEGA_FLOOR_3_4
        assert cf.max() < B.OMEGA_CEIL_3_4

    def test_simple_bound(self):
        assert B.omega_simple_upper(1.2) == pytest.approx(1.0 / 1.2)
        assert B.omega_simple_upper(3.0) == 0.5672
        crossover = 1.0 / 0.5672
        assert B.omega_simple_upper(crossover) == pytest.approx(0.5672, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(B.BuchstabDomainError):
            B.omega_lower(0.5)
        with pytest.raises(B.BuchstabDomainError):
            B.omega_simple_upper(0.0)


class TestInvariants:
    def test_bound_sandwich_and_simple_dominance(self, table):
        rng = np.random.default_rng(20240817)
        u = rng.uniform(1.0, table.u_max, 10_000)
        v = table.eval(u)
        assert np.all(B.omega_lower(u) - 1e-6 <= v)
        assert np.all(v <= B.omega_upper(u) + 1e-6)
        assert np.all(v <= B.omega_simple_upper(u) + 1e-6)

    def test_closed_form_agreement_on_1_4(self, table):
        rng = np.random.default_rng(7)
        u = rng.uniform(1.0, 4.0, 10_000)
        assert np.abs(table.eval(u) - B._closed_form(u)).max() <= 1e-6

    def test_lipschitz(self, table):
        slopes = np.abs(np.diff(table.values)) / table.step
        assert slopes.max() <= 2.0

    def test_step_halving_convergence(self, table):
        finer = B.build_table(8.0, 5e-5)
        rng = np.random.default_rng(3)
        pts = rng.uniform(1.0, 8.0, 100)
        assert np.abs(table.eval(pts) - finer.eval(pts)).max() <= 1e-8

    def test_simpson_helper_against_quad(self):
        for w in (2.0, 2.3, 2.7, 2.999):
            ref, _ = quad(lambda t: math.log(t - 1.0) / t, 2.0, w, epsabs=1e-14)
            assert B._log_integral_scalar(w) == pytest.approx(ref, abs=5e-9)
