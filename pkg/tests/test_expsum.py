"""Exponential sums: ring laws, calculus, exact integration, expansion, text."""

from __future__ import annotations

import cmath
from fractions import Fraction

import pytest
from hypothesis import given

from merosolve.errors import NearPoleError, TranscendentalShiftError
from merosolve.expsum import (
    ExpSum,
    ObstructionReport,
    guarded_sample_points,
    integrate,
    integrate_exp,
    numeric_residual_bound_ok,
    residual,
)
from merosolve.field import ONE, ZERO, ExtensionContext, FieldConstant
from merosolve.ratfunc import Poly, RatFunc

from conftest import expsums, polynomial_expsums

Z = RatFunc.z()
RF0 = RatFunc(Poly())


def exp_of(rate, coeff=1) -> ExpSum:
    return ExpSum.exponential(rate, coeff)


class TestRingLaws:
    @given(expsums(), expsums())
    def test_addition_commutes(self, x, y):
        assert x + y == y + x

    @given(expsums(), expsums())
    def test_multiplication_commutes(self, x, y):
        assert x * y == y * x

    @given(expsums(max_terms=2), expsums(max_terms=2), expsums(max_terms=2))
    def test_multiplication_associates(self, x, y, z):
        assert (x * y) * z == x * (y * z)

    @given(expsums(max_terms=2), expsums(max_terms=2), expsums(max_terms=2))
    def test_distributive_law(self, x, y, z):
        assert x * (y + z) == x * y + x * z

    @given(expsums())
    def test_additive_inverse(self, x):
        assert (x - x).is_zero

    @given(expsums())
    def test_canonical_form_is_sorted_and_clean(self, x):
        keys = [r.sort_key() for r in x.rates]
        assert keys == sorted(keys) and len(set(keys)) == len(keys)
        assert all(not c.is_zero for _, c in x.terms)


class TestCalculus:
    @given(expsums(max_terms=2), expsums(max_terms=2))
    def test_derivative_product_rule(self, x, y):
        assert (x * y).derivative() == x.derivative() * y + x * y.derivative()

    @given(expsums(), expsums())
    def test_derivative_additive(self, x, y):
        assert (x + y).derivative() == x.derivative() + y.derivative()

    def test_derivative_of_exponential(self):
        x = exp_of(3, Z)  # z * exp(3z)
        assert x.derivative() == ExpSum([(FieldConstant.of(3), 3 * Z + 1)])

    @given(polynomial_expsums())
    def test_integrate_then_differentiate(self, x):
        anti = integrate(x, ExtensionContext())
        assert isinstance(anti, ExpSum)
        assert anti.derivative() == x


class TestIntegrateExp:
    def test_simple_pole_obstruction(self):
        out = integrate_exp(1 / Z, ONE)
        assert isinstance(out, ObstructionReport)
        assert out.offending_pole == ZERO
        assert out.residue_coefficient == ONE
        assert "logarithmic obstruction" in out.describe()

    def test_rate_zero_simple_pole_obstruction(self):
        out = integrate_exp(1 / (Z - 2), ZERO)
        assert isinstance(out, ObstructionReport)
        assert out.offending_pole == FieldConstant.of(2)

    def test_order_two_pole_integrates(self):
        # int exp(2z)*(2/z - 1/z^2) dz = exp(2z)/z
        out = integrate_exp(2 / Z - 1 / (Z * Z), FieldConstant.of(2))
        assert out == ExpSum([(FieldConstant.of(2), 1 / Z)])
        assert out.derivative() == ExpSum([(FieldConstant.of(2), 2 / Z - 1 / (Z * Z))])

    def test_rate_zero_polynomial_and_high_poles(self):
        # int (3z^2 + 1/z^3) dz = z^3 - 1/(2 z^2)
        out = integrate_exp(3 * Z * Z + 1 / Z ** 3, ZERO)
        expected = Z ** 3 - RatFunc.const(Fraction(1, 2)) / (Z * Z)
        assert out == ExpSum.from_ratfunc(expected)

    def test_order_k_pole_closed_form(self):
        # int c/(z - r)^k dz = -c/(k-1) * (z - r)^(1-k) for k >= 2
        c, r, k = FieldConstant.of(6), FieldConstant.of(1), 4
        out = integrate_exp(RatFunc(Poly.const(c), Poly((-r, ONE)).pow(k)), ZERO)
        expected = RatFunc(Poly.const(-c / (k - 1)), Poly((-r, ONE)).pow(k - 1))
        assert out == ExpSum.from_ratfunc(expected)

    def test_polynomial_times_exponential(self):
        # int z*exp(z) dz = (z - 1)*exp(z)
        out = integrate_exp(Z, ONE)
        assert out == ExpSum([(ONE, Z - 1)])

    def test_cancelling_residues_integrate(self):
        # After parts the accumulated order-1 coefficient can vanish:
        # coeff = 1/z^2 - rate/z with rate = 2 integrates cleanly.
        out = integrate_exp(1 / (Z * Z) - 2 / Z, FieldConstant.of(2))
        assert isinstance(out, ExpSum)
        assert out.derivative() == ExpSum(
            [(FieldConstant.of(2), 1 / (Z * Z) - 2 / Z)]
        )


class TestLaurent:
    @given(expsums(max_terms=2, max_degree=2), expsums(max_terms=2, max_degree=2))
    def test_product_expansion_is_cauchy_product(self, x, y):
        if x.is_zero or y.is_zero:
            return
        n = 6
        ex = x.laurent_at(ZERO, n)
        ey = y.laurent_at(ZERO, n)
        exy = (x * y).laurent_at(ZERO, n)
        assert exy.p == ex.p + ey.p
        for k in range(n + 1):
            conv = sum(
                (ex.coefficients[j] * ey.coefficients[k - j] for j in range(k + 1)),
                ZERO,
            )
            assert exy.coefficients[k] == conv

    def test_zero_sum_convention(self):
        e = ExpSum.zero().laurent_at(ZERO, 4)
        assert e.p == 0
        assert e.coefficients == tuple([ZERO] * 5)

    def test_exponential_series_at_origin(self):
        e = exp_of(1).laurent_at(ZERO, 5)
        assert e.p == 0
        fact = [Fraction(1), Fraction(1), Fraction(1, 2), Fraction(1, 6),
                Fraction(1, 24), Fraction(1, 120)]
        assert [c.a for c in e.coefficients] == fact

    def test_pole_shifts_leading_power(self):
        x = ExpSum([(ONE, 1 / (Z * Z))])
        e = x.laurent_at(ZERO, 3)
        assert e.p == -2
        # exp(z)/z^2 = z^-2 + z^-1 + 1/2 + z/6 + ...
        assert [c.a for c in e.coefficients] == [
            Fraction(1), Fraction(1), Fraction(1, 2), Fraction(1, 6)
        ]

    def test_nonzero_rate_away_from_origin_raises(self):
        x = exp_of(1)
        with pytest.raises(TranscendentalShiftError):
            x.laurent_at(FieldConstant.of(2), 3)

    def test_rate_zero_part_expands_anywhere(self):
        x = ExpSum.from_ratfunc(1 / (Z - 1))
        e = x.laurent_at(FieldConstant.of(1), 3)
        assert e.p == -1 and e.coefficients[0] == ONE


class TestNumeric:
    def test_eval_matches_closed_form(self):
        x = exp_of(1) + exp_of(-1)  # 2*cosh(z)
        z = 0.3 + 0.7j
        assert abs(x.eval_complex(z) - 2 * cmath.cosh(z)) < 1e-12

    def test_eval_ratfunc_coefficient(self):
        x = ExpSum([(ONE, 1 / (Z - 1))])
        z = 2.0 + 0j
        assert abs(x.eval_complex(z) - cmath.exp(z) / (z - 1)) < 1e-12

    def test_near_pole_guard(self):
        x = ExpSum.from_ratfunc(1 / Z)
        with pytest.raises(NearPoleError):
            x.eval_complex(1e-9 + 0j)

    def test_guarded_points_deterministic_and_guarded(self):
        alpha, beta, gamma = RatFunc.const(2), RF0, RF0
        w = exp_of(1) + exp_of(-1) + ExpSum.from_ratfunc(2)
        pts = guarded_sample_points(alpha, beta, gamma, w)
        assert pts == guarded_sample_points(alpha, beta, gamma, w)
        assert len(pts) == 20
        assert all(abs(z) <= 2.0 for z in pts)

    def test_numeric_residual_check(self):
        alpha, beta, gamma = RatFunc.const(2), RF0, RF0
        w = exp_of(1) + exp_of(-1) + ExpSum.from_ratfunc(2)
        assert residual(alpha, beta, gamma, w).is_zero
        pts = guarded_sample_points(alpha, beta, gamma, w)
        assert numeric_residual_bound_ok(alpha, beta, gamma, w, pts)
        # and a wrong candidate fails the same bound
        bad = w + ExpSum.from_ratfunc(1)
        assert not numeric_residual_bound_ok(alpha, beta, gamma, bad, pts)


class TestText:
    def test_zero(self):
        assert ExpSum.zero().to_text() == "0"

    def test_rate_unit_conventions(self):
        x = exp_of(-1) + ExpSum.from_ratfunc(2) + exp_of(1)
        assert x.to_text() == "(1) * exp(-z) + (2) + (1) * exp(z)"

    def test_general_rate(self):
        assert exp_of(2, 3).to_text() == "(3) * exp(2 * z)"
        half = FieldConstant.of(Fraction(-1, 2))
        assert exp_of(half).to_text() == "(1) * exp(-1/2 * z)"

    def test_ratfunc_coefficient_rendering(self):
        x = ExpSum([(ONE, 1 / (Z + 1))])
        assert x.to_text() == "((1)/(z + 1)) * exp(z)"
