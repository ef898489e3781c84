"""Shared test fixtures and hypothesis strategies."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from merosolve.expsum import ExpSum
from merosolve.field import FieldConstant
from merosolve.ratfunc import Poly, RatFunc

PROPERTY_EXAMPLES = 200

settings.register_profile(
    "merosolve",
    max_examples=PROPERTY_EXAMPLES,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("merosolve")


# -- strategies ------------------------------------------------------------------------

small_fractions = st.builds(
    Fraction,
    st.integers(min_value=-9, max_value=9),
    st.integers(min_value=1, max_value=6),
)

rational_constants = st.builds(FieldConstant.of, small_fractions)

# constants in Q(sqrt(5)); b = 0 collapses to a pure rational
extended_constants = st.builds(
    lambda a, b: FieldConstant(a, b, 5), small_fractions, small_fractions
)

nonzero_rational_constants = rational_constants.filter(lambda c: not c.is_zero)
nonzero_extended_constants = extended_constants.filter(lambda c: not c.is_zero)


def polys(max_degree: int = 3, constants=rational_constants):
    return st.lists(constants, min_size=0, max_size=max_degree + 1).map(Poly)


def nonzero_polys(max_degree: int = 3, constants=rational_constants):
    return polys(max_degree, constants).filter(lambda p: not p.is_zero)


def ratfuncs(max_degree: int = 3):
    return st.builds(RatFunc, polys(max_degree), nonzero_polys(max_degree))


small_rates = st.integers(min_value=-2, max_value=2).map(FieldConstant.of)


def expsums(max_terms: int = 3, max_degree: int = 2):
    term = st.tuples(small_rates, ratfuncs(max_degree))
    return st.lists(term, min_size=0, max_size=max_terms).map(ExpSum)


def polynomial_expsums(max_terms: int = 3, max_degree: int = 3):
    """ExpSums whose coefficients are polynomials (no poles)."""
    term = st.tuples(small_rates, polys(max_degree).map(lambda p: RatFunc(p)))
    return st.lists(term, min_size=0, max_size=max_terms).map(ExpSum)
