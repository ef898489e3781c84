"""Local series engine: leading balances, resonances, exact expansion."""

from __future__ import annotations

import time
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from merosolve.errors import PointInPhiError
from merosolve.expsum import ExpSum
from merosolve.field import ONE, ZERO, ExtensionContext, FieldConstant
from merosolve.ratfunc import Poly, RatFunc
from merosolve.series import (
    RESONANCE_CAP_DEFAULT,
    expand,
    leading_candidates,
    resonance_report,
)

from conftest import small_fractions

Z = RatFunc.z()
RF0 = RatFunc(Poly())


def fc(x) -> FieldConstant:
    return FieldConstant.of(x)


class TestLeadingCandidates:
    def test_all_zero_coefficients_give_nothing(self):
        assert leading_candidates(RF0, RF0, RF0, ZERO) == []

    def test_double_zero_branch(self):
        cands = leading_candidates(RatFunc.const(2), RF0, RF0, ZERO)
        assert len(cands) == 1
        assert cands[0].p == 2 and cands[0].a0 == fc(-1)

    def test_simple_zero_branch_carries_side_condition(self):
        # gamma = 0, beta != 0: p = 1, a0 = -beta(z0), condition alpha + beta' = 0
        cands = leading_candidates(RatFunc.const(-1), Z + 2, RF0, ZERO)
        assert cands == [
            type(cands[0])(1, fc(-2), side_condition_satisfied=True)
        ]
        cands = leading_candidates(RatFunc.const(1), Z + 2, RF0, ZERO)
        assert cands[0].side_condition_satisfied is False

    def test_generic_quadratic_balance(self):
        cands = leading_candidates(RF0, RatFunc.const(-3), RatFunc.const(-4), ZERO)
        assert [(c.p, c.a0) for c in cands] == [(1, fc(4)), (1, fc(-1))]

    def test_double_root_of_leading_equation(self):
        cands = leading_candidates(RF0, RatFunc.const(2), RatFunc.const(1), ZERO)
        assert len(cands) == 1
        assert cands[0].a0 == fc(-1)
        assert cands[0].note == "double root of the leading equation"

    def test_extension_adopted_for_irrational_roots(self):
        ctx = ExtensionContext()
        cands = leading_candidates(RF0, RF0, RatFunc.const(-2), ZERO, ctx)
        assert ctx.q == 2
        root2 = FieldConstant(Fraction(0), Fraction(1), 2)
        assert {c.a0 for c in cands} == {root2, -root2}

    def test_point_in_excluded_set_rejected(self):
        with pytest.raises(PointInPhiError):
            leading_candidates(Z, RF0, RatFunc.const(1), ZERO)
        with pytest.raises(PointInPhiError):
            leading_candidates(1 / Z, RF0, RatFunc.const(1), ZERO)


class TestExpand:
    def test_needs_room_past_the_leading_block(self):
        with pytest.raises(ValueError):
            expand(RatFunc.const(2), RF0, RF0, ZERO, 2, fc(-1), 3)

    def test_rejects_zero_leading_coefficient(self):
        with pytest.raises(ValueError):
            expand(RatFunc.const(2), RF0, RF0, ZERO, 2, ZERO, 6)

    def test_rejects_unbalanced_leading_data(self):
        with pytest.raises(ValueError):
            expand(RatFunc.const(2), RF0, RF0, ZERO, 2, fc(7), 6)

    def test_point_in_phi_rejected(self):
        with pytest.raises(PointInPhiError):
            expand(Z, RF0, RatFunc.const(1), ZERO, 1, ONE, 6)

    def test_double_zero_second_coefficient(self):
        # beta = gamma = 0: w = -alpha(z0)/2 (z-z0)^2 + a1 (z-z0)^3 + ...
        # with a1 = -alpha'(z0)/2; here alpha = z + 1 at z0 = 1.  For this
        # alpha the n = 2 compatibility fails (-3 a1^2 - a1 = -1/4), so the
        # branch halts right after the forced coefficients.
        e = expand(Z + 1, RF0, RF0, ONE, 2, fc(-1), 6)
        assert e.p == 2
        assert e.coefficients == (fc(-1), fc(Fraction(-1, 2)))
        assert e.resonance.r is None
        assert e.halted_at == 2
        assert e.resonance.condition_satisfied is False

    def test_double_zero_branch_can_satisfy_its_compatibility(self):
        # Tune alpha''(z0)/2 = 1/4 so the n = 2 condition holds and the
        # coefficient a2 becomes free: alpha = 2 + (z-1) + (z-1)^2/4.
        alpha = RatFunc.const(2) + (Z - 1) + (Z - 1) * (Z - 1) / 4
        e = expand(alpha, RF0, RF0, ONE, 2, fc(-1), 6)
        assert e.halted_at is None
        assert e.resonance.index == 2
        assert e.resonance.condition_satisfied is True
        assert e.resonance.free_coefficient_index == 2
        assert e.coefficients[2] == ZERO
        assert e.alternate_coefficients is not None
        assert e.alternate_coefficients[2] == ONE

    def test_violated_side_condition_halts_at_one(self):
        # gamma = 0, alpha(z0) + beta'(z0) = 2 != 0: resonance n = 1 fails.
        e = expand(RatFunc.const(1), Z + 1, RF0, ONE, 1, fc(-2), 6)
        assert e.halted_at == 1
        assert e.coefficients == (fc(-2),)
        assert e.resonance.index == 1
        assert e.resonance.condition_satisfied is False

    def test_satisfied_side_condition_frees_first_coefficient(self):
        e = expand(RatFunc.const(-1), Z + 2, RF0, ZERO, 1, fc(-2), 6)
        assert e.halted_at is None
        assert e.resonance.index == 1
        assert e.resonance.condition_satisfied is True
        assert e.resonance.free_coefficient_index == 1
        assert e.coefficients[1] == ZERO
        assert e.alternate_coefficients is not None
        assert e.alternate_coefficients[1] == ONE


# -- resubstitution property -----------------------------------------------------


def _maybe_coeff(draw, kind, c0, c1):
    if kind == 0:
        return RF0
    return RatFunc(Poly((fc(c0), fc(c1))))


@st.composite
def _fixtures(draw):
    nz = small_fractions.filter(lambda f: f != 0)
    out = []
    for _ in range(3):
        kind = draw(st.integers(min_value=0, max_value=2))
        out.append(_maybe_coeff(draw, kind, draw(nz), draw(small_fractions)))
    return tuple(out)


class TestResubstitution:
    @given(_fixtures())
    def test_truncated_series_kills_residual_orders(self, coeffs):
        alpha, beta, gamma = coeffs
        n = 6
        try:
            cands = leading_candidates(alpha, beta, gamma, ZERO, ExtensionContext())
        except PointInPhiError:
            return
        for cand in cands:
            e = expand(alpha, beta, gamma, ZERO, cand.p, cand.a0, n)
            w = RatFunc(Poly([ZERO] * cand.p + [c for c in e.coefficients]))
            wp = w.derivative()
            res = w * wp.derivative() - wp * wp - alpha * w - beta * wp - gamma
            if e.halted_at is None:
                need = n + 2 * cand.p - 1
            else:
                need = e.halted_at + 2 * cand.p - 2
            if res.is_zero:
                continue
            offset, cs = res.taylor_at(ZERO, need + 3)
            vanish = next(
                (offset + i for i, c in enumerate(cs) if not c.is_zero), None
            )
            if e.halted_at is None:
                assert vanish is None or vanish >= need
            else:
                assert vanish == need


# -- the resonance fixture, against a brute-force oracle --------------------------


def _oracle_branch(a0, n_max, free_value=0):
    """Order-matching with sympy: solve each series coefficient directly."""
    import sympy

    t = sympy.Symbol("t")
    beta, gamma = sympy.Integer(-3), sympy.Integer(-4)
    coeffs = [sympy.Rational(a0)]
    resonance_at = None
    condition = None
    for n in range(1, n_max + 1):
        an = sympy.Symbol("an")
        w = sum(c * t ** (1 + k) for k, c in enumerate(coeffs)) + an * t ** (1 + n)
        res = sympy.expand(
            w * sympy.diff(w, t, 2)
            - sympy.diff(w, t) ** 2
            - beta * sympy.diff(w, t)
            - gamma
        )
        eq = res.coeff(t, n)
        lin = sympy.diff(eq, an)
        const = sympy.expand(eq.subs(an, 0))
        if lin == 0:
            resonance_at = n
            condition = bool(const == 0)
            if not condition:
                break
            coeffs.append(sympy.Rational(free_value))
        else:
            coeffs.append(sympy.cancel(-const / lin))
    return coeffs, resonance_at, condition


class TestResonanceFixture:
    ALPHA, BETA, GAMMA = RF0, RatFunc.const(-3), RatFunc.const(-4)

    def test_branch_resonance_values(self):
        report = resonance_report(self.ALPHA, self.BETA, self.GAMMA, ZERO)
        assert [b.candidate.a0 for b in report] == [fc(4), fc(-1)]
        r0, r1 = report
        # r = beta(z0)/a0 + 2 exactly
        assert r0.r == fc(Fraction(5, 4)) and r0.status == "no-resonance"
        assert not r0.r_is_positive_integer
        assert r1.r == fc(5) and r1.status == "evaluated"
        assert r1.r_is_positive_integer
        assert r1.condition_satisfied is True
        assert r1.free_coefficient_index == 5

    def test_expansion_matches_oracle_default_branch(self):
        e = expand(self.ALPHA, self.BETA, self.GAMMA, ZERO, 1, fc(-1), 10)
        coeffs, res_at, cond = _oracle_branch(-1, 10, free_value=0)
        assert res_at == 5 and cond is True
        assert e.resonance.index == 5
        assert e.resonance.condition_satisfied is True
        assert len(e.coefficients) == len(coeffs)
        for mine, theirs in zip(e.coefficients, coeffs):
            assert mine.b == 0 and theirs == mine.a

    def test_alternate_continuation_matches_oracle(self):
        e = expand(self.ALPHA, self.BETA, self.GAMMA, ZERO, 1, fc(-1), 10)
        coeffs, _, _ = _oracle_branch(-1, 10, free_value=1)
        assert e.alternate_coefficients is not None
        assert e.alternate_coefficients[5] == ONE
        assert e.alternate_coefficients[10] == fc(Fraction(-6, 55))
        for mine, theirs in zip(e.alternate_coefficients, coeffs):
            assert mine.b == 0 and theirs == mine.a

    def test_non_resonant_branch_matches_oracle(self):
        import sympy

        e = expand(self.ALPHA, self.BETA, self.GAMMA, ZERO, 1, fc(4), 8)
        t = sympy.Symbol("t")
        w = sum(
            sympy.Rational(c.a) * t ** (1 + k) for k, c in enumerate(e.coefficients)
        )
        res = sympy.expand(
            w * sympy.diff(w, t, 2)
            - sympy.diff(w, t) ** 2
            + 3 * sympy.diff(w, t)
            + 4
        )
        for m in range(0, 9):
            assert res.coeff(t, m) == 0

    def test_runtime_under_a_second_at_order_twenty(self):
        start = time.perf_counter()
        expand(self.ALPHA, self.BETA, self.GAMMA, ZERO, 1, fc(-1), 20)
        expand(self.ALPHA, self.BETA, self.GAMMA, ZERO, 1, fc(4), 20)
        assert time.perf_counter() - start < 1.0


class TestResonanceStatuses:
    def test_not_applicable_on_double_zero_branch(self):
        report = resonance_report(RatFunc.const(2), RF0, RF0, ZERO)
        assert [b.status for b in report] == ["not-applicable"]
        assert report[0].r is None

    def test_cap_exceeded_is_a_reported_outcome(self):
        report = resonance_report(RF0, RatFunc.const(98), RatFunc.const(-99), ZERO)
        by_a0 = {b.candidate.a0: b for b in report}
        deep = by_a0[fc(1)]
        assert deep.status == "cap-exceeded"
        assert deep.r == fc(100) and deep.r_is_positive_integer
        assert deep.condition_satisfied is None
        other = by_a0[fc(-99)]
        assert other.status == "no-resonance"
        assert other.r == fc(Fraction(100, 99))

    def test_cap_is_adjustable(self):
        report = resonance_report(
            RF0, RatFunc.const(98), RatFunc.const(-99), ZERO, cap=128
        )
        by_a0 = {b.candidate.a0: b for b in report}
        assert by_a0[fc(1)].status == "evaluated"
        assert RESONANCE_CAP_DEFAULT == 64


class TestClosedFormAgreement:
    def test_expansion_matches_exact_solution_coefficients(self):
        # w = -(z + 3)^2/2 - 1 solves the fixture alpha=1, beta=0, gamma=2;
        # expand at its zero z0 = -3 + sqrt(-2) and compare exactly.
        alpha, beta, gamma = RatFunc.const(1), RF0, RatFunc.const(2)
        w = ExpSum.from_ratfunc(-(Z + 3) * (Z + 3) / 2 - 1)
        z0 = FieldConstant(Fraction(-3), Fraction(1), -2)
        es = w.laurent_at(z0, 12)
        assert es.p == 1
        e = expand(
            alpha, beta, gamma, z0, 1, es.coefficients[0], 12,
            resonance_value=es.coefficients[2],
        )
        assert len(e.coefficients) == 13
        assert e.coefficients == es.coefficients

    def test_leading_candidates_cover_the_solution(self):
        alpha, beta, gamma = RatFunc.const(1), RF0, RatFunc.const(2)
        z0 = FieldConstant(Fraction(-3), Fraction(1), -2)
        ctx = ExtensionContext(-2)
        cands = leading_candidates(alpha, beta, gamma, z0, ctx)
        root = FieldConstant(Fraction(0), Fraction(1), -2)
        assert {c.a0 for c in cands} == {root, -root}
