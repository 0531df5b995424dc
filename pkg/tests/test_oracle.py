from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from gkwseries.oracle import (
    OperatorMatrix,
    OracleReport,
    gkw_eigenvalues,
    pseudozeta_estimate,
    pseudozeta_sum,
    trace_binomial,
    trace_xi,
    zeta_minus_one,
)
from gkwseries.series import gkw_partial_sum


@given(st.integers(2, 400), st.sampled_from([64, 128, 256]))
def test_zeta_minus_one(k, prec):
    got = zeta_minus_one(k, prec)
    # zeta(k) - 1 cancels about k bits
    with mpmath.workprec(prec + k + 40):
        ref = mpmath.zeta(k) - 1
        assert abs(got - ref) <= mpmath.mpf(2) ** (-prec + 4) * ref


def test_zeta_rejects_small_k():
    with pytest.raises(ValueError):
        zeta_minus_one(1)


@pytest.fixture(scope="module")
def matrix32():
    return OperatorMatrix.build(32, 192)


def test_matrix_column_zero(matrix32):
    with mpmath.workprec(192):
        for k in range(32):
            want = (-1) ** k * (k + 1) * zeta_minus_one(k + 2, 192)
            assert abs(matrix32.entries[k, 0] - want) <= mpmath.mpf(2) ** -180 * abs(want)


def test_eigenvalues_leading(matrix32):
    ev = gkw_eigenvalues(32, 192, 4, matrix=matrix32)
    assert abs(ev[0] - 1) < 1e-10
    assert [1 if v > 0 else -1 for v in ev] == [1, -1, 1, -1]
    S = gkw_partial_sum(2, 20).value
    assert abs(abs(ev[1]) - float(S)) < 1e-8


def test_eigenvalue_arguments():
    with pytest.raises(ValueError):
        gkw_eigenvalues(4)
    with pytest.raises(ValueError):
        gkw_eigenvalues(16, count=0)


def test_traces_agree():
    tx, tb = trace_xi(128, terms=20_000), trace_binomial(128)
    assert abs(tx - tb) < mpmath.mpf(10) ** -30
    assert abs(tx - mpmath.mpf("0.7711255236")) < 1e-10


def test_trace_matches_matrix_eigenvalues():
    T = OperatorMatrix.build(48, 160)
    ev = gkw_eigenvalues(48, 160, 48, matrix=T)
    with mpmath.workprec(160):
        assert abs(mpmath.re(mpmath.fsum(ev)) - T.trace()) < mpmath.mpf(10) ** -30
        assert abs(T.trace() - trace_binomial(160)) < 1e-8


def test_depth_one_is_zeta():
    for s in (2.0, 3.5, 4.0):
        r = pseudozeta_sum(s, 1, 1000)
        z = float(mpmath.zeta(s))
        assert r.total <= z * (1 + 1e-12) and z <= r.upper * (1 + 1e-12)
        assert abs(r.estimate - z) < 1e-12


def _double_loop(s, M):
    a = np.arange(1, M + 1, dtype=np.float64)
    return float(np.sum((np.outer(a, a) + 1.0) ** -s))


@pytest.mark.parametrize("s", [3.0, 4.0])
def test_depth_two_against_double_loop(s):
    r = pseudozeta_sum(s, 2, 10**6, rel_tol=1e-6)
    brute = _double_loop(s, 3000)
    # brute omits entries above 3000, at most ~2 zeta(s) 3000^(1-s)/(s-1)
    missing = 2 * float(mpmath.zeta(s)) * 3000.0 ** (1 - s) / (s - 1)
    assert r.total <= brute + missing
    assert brute <= r.upper
    assert abs(r.estimate - brute) <= 1e-6 * brute + missing


def test_bracket_contains_estimate():
    r = pseudozeta_sum(4.0, 6, 10**6, rel_tol=1e-3)
    assert r.total <= r.estimate <= r.upper
    assert r.tail_bound >= 0


def test_ratio_estimates_settle():
    est = pseudozeta_estimate(4.0, 8, rel_tol=1e-3)
    diffs = [abs(b - a) for a, b in zip(est.ratio_estimates, est.ratio_estimates[1:])]
    assert diffs[-1] < diffs[0]
    assert abs(est.ratio_estimates[-1] - 0.19945881834668) < 5e-4
    # the root estimate is much further off at the same depth
    assert abs(est.root_estimates[-1] - 0.19945881834668) > abs(est.ratio_estimates[-1] - 0.19945881834668)


def test_report_exact_diff_and_csv():
    r = OracleReport("x", Fraction(1, 3), Fraction(1, 3), {"n": 2})
    assert r.diff == 0 and r.passes(0)
    r2 = OracleReport("y", Fraction(10**40 + 1, 10**40), Fraction(1), {})
    assert r2.diff == Fraction(1, 10**40) and not r2.passes(0)
    line = r.csv()
    assert line.count(",") == 4 and line.startswith("x,") and line.endswith(",n=2")
