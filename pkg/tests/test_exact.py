from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from gkwseries.errors import ParseError, PoleError
from gkwseries.exact import (
    BiPoly,
    PolyY,
    RatFunc2,
    gen_binom,
    int_binom,
    poly_binom,
    rf_arith,
    rf_eval_exact,
    rf_eval_float,
    rf_parse,
    rf_partial,
    rf_serialize,
)
from gkwseries.tables import table1, table4

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def bipolys(draw, max_deg=3):
    terms = draw(st.dictionaries(st.tuples(st.integers(0, max_deg), st.integers(0, max_deg)), small, max_size=5))
    return BiPoly(terms)


# linear factors aY + b that avoid Y = 0, which the evaluation tests use
linear = st.tuples(st.integers(1, 9), st.integers(-9, 9).filter(lambda b: b != 0))


@st.composite
def ratfuncs(draw):
    num = draw(bipolys())
    facs = draw(st.lists(linear, max_size=2))
    den = BiPoly.const(draw(small.filter(lambda q: q != 0)))
    for a, b in facs:
        den = den * BiPoly({(0, 1): a, (0, 0): b})
    return RatFunc2(num, den)


@given(ratfuncs(), ratfuncs())
def test_commutativity(a, b):
    assert a + b == b + a
    assert a * b == b * a


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_associativity_distributivity(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(ratfuncs(), ratfuncs())
def test_exact_cancellation(a, b):
    assert (a + b) - b == a
    assert rf_arith(rf_arith(a, b, "add"), b, "sub") == a


@given(ratfuncs())
def test_canonical_idempotent(f):
    again = RatFunc2(f.num, f.den)
    assert again == f
    assert RatFunc2(again.num, again.den) == again
    assert str(again) == str(f)


@given(ratfuncs(), st.integers(1, 9), st.integers(-9, 9).filter(lambda b: b != 0))
def test_common_factor_cancels(f, a, b):
    L = RatFunc2(BiPoly({(0, 1): a, (0, 0): b}))
    assert (f * L) / L == f


@given(ratfuncs())
def test_serialize_round_trip(f):
    assert rf_parse(rf_serialize(f)) == f


def test_serialize_format():
    f = RatFunc2(BiPoly({(0, 1): 2, (0, 0): -2}))
    assert rf_serialize(f) == "NUM\n2 0 1\n-2 0 0\nDEN\n1 0\n"


def test_parse_zero_denominator():
    with pytest.raises(ParseError):
        rf_parse("NUM\n1 0 0\nDEN\n0 0\n")


def test_parse_error_location():
    with pytest.raises(ParseError) as info:
        rf_parse("NUM\n1 0 x\nDEN\n1 0\n")
    assert info.value.line == 2


def test_table_functions_round_trip():
    for f in table1() + table4():
        assert rf_parse(rf_serialize(f)) == f


@given(ratfuncs(), small, st.fractions(min_value=1, max_value=7, max_denominator=5))
def test_eval_exact_matches_float(f, x, y):
    try:
        exact = rf_eval_exact(f, x, y)
    except PoleError:
        return
    with mpmath.workprec(256):
        approx = rf_eval_float(f, _mp(x), _mp(y), 256)
        ref = _mp(exact)
        assert abs(approx - ref) <= mpmath.mpf(2) ** -200 * max(1, abs(ref))


def test_pole_error():
    f = RatFunc2(BiPoly.const(1), BiPoly({(0, 1): 3, (0, 0): -2}))
    with pytest.raises(PoleError):
        rf_eval_exact(f, 0, Fraction(2, 3))


def test_arith_examples():
    psi0 = table1()[0]
    assert psi0 + 0 == psi0
    assert psi0 * psi0 == RatFunc2(BiPoly({(0, 2): 4, (0, 1): -8, (0, 0): 4}))
    assert rf_arith(psi0, 3, "scalar-mul") == 3 * psi0


def test_binomials():
    assert poly_binom(0, 0) == BiPoly.const(1)
    assert poly_binom(-1, 1) == BiPoly({(1, 0): 1, (0, 0): -1})
    assert poly_binom(2, 2) == BiPoly({(2, 0): Fraction(1, 2), (1, 0): Fraction(3, 2), (0, 0): 1})
    assert int_binom(3, 1) == 3 and int_binom(2, 5) == 0 and int_binom(4, 2) == 6
    with pytest.raises(ValueError):
        int_binom(-1, 0)


@given(st.integers(-12, 12), st.integers(0, 8))
def test_gen_binom_is_poly_binom(m, r):
    assert gen_binom(m, r) == poly_binom(0, r).evaluate(m, 0)


def test_partial_examples():
    lam1 = table4()[1]
    assert rf_partial(table4()[0], "Y") == RatFunc2.const(2)
    expected = RatFunc2(BiPoly({(0, 2): 1}), BiPoly({(0, 1): 3, (0, 0): -2}))
    assert rf_partial(lam1, "X") == expected


def _central_difference(f, var, x, y, h):
    if var == "X":
        return (rf_eval_float(f, x + h, y) - rf_eval_float(f, x - h, y)) / (2 * h)
    return (rf_eval_float(f, x, y + h) - rf_eval_float(f, x, y - h)) / (2 * h)


@pytest.mark.parametrize("var", ["X", "Y"])
def test_partial_vs_finite_difference(var):
    with mpmath.workprec(256):
        h = mpmath.mpf(10) ** -8
        for f in table1() + table4():
            for x, y in [(1, 2), (2, 4), (Fraction(3, 2), Fraction(17, 6))]:
                exact = rf_eval_exact(rf_partial(f, var), x, y)
                fd = _central_difference(f, var, _mp(x), _mp(y), h)
                ref = _mp(exact)
                assert abs(fd - ref) <= mpmath.mpf(10) ** -6 * max(1, abs(ref))


def _mp(q):
    q = Fraction(q)
    return mpmath.mpf(q.numerator) / q.denominator


@given(ratfuncs())
def test_second_partial_commutes(f):
    assert rf_partial(rf_partial(f, "X"), "Y") == rf_partial(rf_partial(f, "Y"), "X")


def test_eval_examples():
    psi = table1()
    assert rf_eval_exact(psi[0], 2, 4) == 6
    assert rf_eval_exact(psi[1], 2, 4) == Fraction(13, 5)
    assert rf_eval_exact(psi[2], 1, 2) == 0
    assert rf_eval_float(psi[0], 2, 4) == 6
    assert rf_eval_float(table4()[1], 1, 2) == 1
    with mpmath.workprec(256):
        y = mpmath.mpf(2) ** 1.5
        assert abs(rf_eval_float(table4()[0], 1.5, y) - (2 * y - 2)) < mpmath.mpf(10) ** -70


def test_polyy_factored_expansion():
    den = PolyY.from_factors(Fraction(12), {(-2, 3): 3})
    f = RatFunc2(BiPoly.const(1), den)
    assert f.den.factored().linear_factors()
