import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats as sps

from vcceval.errors import ConstantInput, InvalidDf, LengthMismatch, RankDeficient, TooFewSamples
from vcceval.oracle import brute_pearson, quadrature_tail
from vcceval.stats import betainc, f_sf, format_p, ols_regress, pearson, student_t_two_sided_p

X5 = [1, 2, 3, 4, 5]
Y5 = [2, 1, 4, 3, 5]


def test_pearson_reference_pair():
    res = pearson(X5, Y5)
    assert res.r == pytest.approx(0.8, abs=1e-15)
    assert res.n == 5
    t = 0.8 * math.sqrt(3 / (1 - 0.64))
    assert res.p_two_sided == pytest.approx(2 * quadrature_tail("student_t", (3,), t), abs=1e-10)


def test_pearson_perfect():
    assert pearson(X5, [2 * x + 1 for x in X5]) == pytest.approx(pearson(X5, X5))
    assert pearson(X5, [2 * x + 1 for x in X5]).r == 1.0
    assert pearson(X5, [2 * x + 1 for x in X5]).p_two_sided == 0.0
    assert pearson(X5, [-x for x in X5]).r == -1.0


def test_pearson_errors():
    with pytest.raises(ConstantInput) as exc:
        pearson([1, 1, 1], [1, 2, 3])
    assert "x" in str(exc.value)
    with pytest.raises(LengthMismatch):
        pearson([1, 2, 3], [1, 2])
    with pytest.raises(TooFewSamples):
        pearson([1, 2], [2, 1])


def test_t_closed_forms():
    for df in (1, 3, 10, 100):
        assert student_t_two_sided_p(0.0, df) == 1.0
    assert abs(student_t_two_sided_p(1.0, 1) - 0.5) <= 1e-12
    assert abs(student_t_two_sided_p(math.sqrt(2), 2) - (1 - math.sqrt(2) / 2)) <= 1e-12
    with pytest.raises(InvalidDf):
        student_t_two_sided_p(1.0, 0)


def test_quadrature_oracle_closed_forms():
    assert quadrature_tail("student_t", (1,), 1.0) == pytest.approx(0.25, abs=1e-11)
    assert quadrature_tail("student_t", (2,), math.sqrt(2)) == pytest.approx((1 - math.sqrt(2) / 2) / 2, abs=1e-11)


def test_f_sf_values():
    assert f_sf(0.0, 3, 7) == 1.0
    assert abs(f_sf(4.0, 2, 10) - quadrature_tail("f_dist", (2, 10), 4.0)) <= 1e-10
    with pytest.raises(InvalidDf):
        f_sf(1.0, 2, 0.5)


@given(st.floats(0.05, 50), st.floats(0.05, 50), st.floats(0, 1))
def test_betainc_against_scipy(a, b, x):
    assert betainc(a, b, x) == pytest.approx(sps.beta.cdf(x, a, b) if 0 < x < 1 else x, abs=1e-11)


@given(st.floats(-30, 30), st.integers(1, 200))
def test_f_t_identity(t, d2):
    assert abs(f_sf(t * t, 1, d2) - student_t_two_sided_p(t, d2)) <= 1e-10


@given(st.floats(0, 20), st.floats(0, 20), st.integers(1, 60))
def test_t_tail_monotone(t1, t2, df):
    lo, hi = sorted((t1, t2))
    assert student_t_two_sided_p(hi, df) <= student_t_two_sided_p(lo, df) + 1e-15
    assert student_t_two_sided_p(-hi, df) == student_t_two_sided_p(hi, df)


def test_t_tail_vanishes():
    assert student_t_two_sided_p(1e6, 5) < 1e-25


vectors = st.lists(st.floats(-100, 100, allow_nan=False), min_size=3, max_size=30).filter(lambda v: np.ptp(v) > 1e-3)


@given(st.lists(st.floats(-1e-150, 1e-150), min_size=3, max_size=10).filter(lambda v: np.ptp(v) > 0))
def test_pearson_tiny_spread(x):
    r = pearson(x, list(reversed(x))).r
    assert -1.0 <= r <= 1.0


@given(vectors, st.randoms())
def test_pearson_symmetry_and_affine(x, rnd):
    y = [v + rnd.uniform(-50, 50) for v in x]
    r = pearson(x, y).r
    assert pearson(y, x).r == pytest.approx(r, abs=1e-12)
    assert pearson([3 * v + 7 for v in x], y).r == pytest.approx(r, abs=1e-9)
    assert pearson([-v for v in x], y).r == pytest.approx(-r, abs=1e-12)
    assert r == pytest.approx(brute_pearson(x, y), abs=1e-9)


def test_regression_noiseless():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(20, 3))
    y = 1.7 + X @ np.array([0.024, -0.021, 0.5])
    res = ols_regress(X, y)
    assert res.intercept == pytest.approx(1.7, abs=1e-9)
    np.testing.assert_allclose(res.coefficients, [0.024, -0.021, 0.5], atol=1e-9)
    assert res.r_squared == 1.0 and res.adjusted_r_squared == 1.0
    np.testing.assert_allclose(res.residuals, 0.0, atol=1e-12)


def test_single_predictor_r2_is_r_squared():
    res = ols_regress(X5, Y5)
    assert res.r_squared == pytest.approx(0.64, abs=1e-12)
    assert res.significance_f == pytest.approx(pearson(X5, Y5).p_two_sided, abs=1e-12)
    assert res.coef_p_values[0] == pytest.approx(pearson(X5, Y5).p_two_sided, abs=1e-12)


def test_regression_against_scipy():
    rng = np.random.default_rng(3)
    x = rng.normal(size=25)
    y = 2 - 0.5 * x + rng.normal(size=25)
    res = ols_regress(x, y)
    ref = sps.linregress(x, y)
    assert res.coefficients[0] == pytest.approx(ref.slope, abs=1e-12)
    assert res.intercept == pytest.approx(ref.intercept, abs=1e-12)
    assert res.std_errors[0] == pytest.approx(ref.stderr, abs=1e-12)
    assert res.coef_p_values[0] == pytest.approx(ref.pvalue, abs=1e-10)


def test_regression_errors():
    x = np.arange(10.0)
    with pytest.raises(RankDeficient):
        ols_regress(np.column_stack((x, x)), x ** 2)
    with pytest.raises(TooFewSamples):
        ols_regress(np.ones((3, 2)), [1, 2, 3])


def test_regression_without_intercept():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    res = ols_regress(x, 2 * x, include_intercept=False)
    assert res.intercept is None
    assert res.coefficients[0] == pytest.approx(2.0, abs=1e-12)
    assert res.df_resid == 3


@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_residuals_orthogonal(seed, p):
    rng = np.random.default_rng(seed)
    n = p + 2 + int(rng.integers(0, 20))
    X = rng.normal(size=(n, p)) * rng.uniform(0.1, 10, size=p)
    y = rng.normal(size=n) * 5 + X.sum(axis=1)
    res = ols_regress(X, y)
    assert abs(res.residuals.sum()) <= 1e-9
    np.testing.assert_allclose(X.T @ res.residuals, 0.0, atol=1e-9)
    assert 0.0 <= res.r_squared <= 1.0
    assert res.adjusted_r_squared <= res.r_squared + 1e-15
    assert len(res.coefficients) == p


def test_format_p():
    assert format_p(0.003) == "p<0.01"
    assert format_p(0.0102) == "p=0.01"
    assert format_p(0.2) == "p>0.01"
    assert format_p(0.0004, "exact") == "p<0.001"
    assert format_p(0.1234, "exact") == "p=0.123"
