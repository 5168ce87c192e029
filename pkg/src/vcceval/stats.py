"""Pearson correlation, OLS multiple regression, and the t / F tail
probabilities they need.

Tail probabilities go through the regularized incomplete beta function,
evaluated by its continued fraction (modified Lentz, rel. tol 1e-12,
at most 300 iterations).
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import solve_triangular

from . import _kernels
from .errors import (
    ConstantInput,
    ConvergenceError,
    InvalidDf,
    LengthMismatch,
    RankDeficient,
    TooFewSamples,
)

CF_TOL = 1e-12
CF_MAX_ITER = 300
RANK_RTOL = 1e-10


def betainc(a, b, x):
    """Regularized incomplete beta function I_x(a, b)."""
    if not (a > 0 and b > 0):
        raise ValueError("betainc needs a > 0 and b > 0")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return float(x)
    # the continued fraction converges fast for x < (a + 1) / (a + b + 2);
    # otherwise use I_x(a, b) = 1 - I_{1-x}(b, a)
    if x < (a + 1.0) / (a + b + 2.0):
        cf, it = _kernels.betacf(float(a), float(b), float(x), CF_TOL, CF_MAX_ITER)
        flip = False
        pre = _kernels.log_beta_prefactor(a, b, x)
        scale = a
    else:
        cf, it = _kernels.betacf(float(b), float(a), float(1.0 - x), CF_TOL, CF_MAX_ITER)
        flip = True
        pre = _kernels.log_beta_prefactor(b, a, 1.0 - x)
        scale = b
    if it < 0:
        raise ConvergenceError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")
    value = math.exp(pre) * cf / scale
    return 1.0 - value if flip else value


def _check_df(df, name="df"):
    if not (isinstance(df, (int, float, np.integer, np.floating)) and math.isfinite(df) and df >= 1):
        raise InvalidDf(f"{name}={df!r}: degrees of freedom must be finite and >= 1")


def student_t_two_sided_p(t, df):
    """2 * P(T >= |t|) for Student's t with ``df`` degrees of freedom."""
    _check_df(df)
    if math.isnan(t):
        raise ValueError("t is NaN")
    if math.isinf(t):
        return 0.0
    if t == 0.0:
        return 1.0
    return betainc(0.5 * df, 0.5, df / (df + t * t))


def f_sf(f, d1, d2):
    """Upper tail P(X >= f) of the F(d1, d2) distribution."""
    _check_df(d1, "d1")
    _check_df(d2, "d2")
    if math.isnan(f) or f < 0:
        raise ValueError(f"F statistic must be >= 0, got {f}")
    if math.isinf(f):
        return 0.0
    if f == 0.0:
        return 1.0
    return betainc(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * f))


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    p_two_sided: float
    n: int


def pearson(x, y) -> CorrelationResult:
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.size != y.size:
        raise LengthMismatch(f"lengths {x.size} and {y.size} differ")
    n = x.size
    if n < 3:
        raise TooFewSamples(f"pearson needs n >= 3, got {n}")
    dx = x - x.mean()
    dy = y - y.mean()
    sx, sy = np.abs(dx).max(), np.abs(dy).max()
    if sx == 0.0:
        raise ConstantInput("x")
    if sy == 0.0:
        raise ConstantInput("y")
    # rescale so the sums of squares cannot underflow
    dx, dy = dx / sx, dy / sy
    r = float(dx @ dy) / math.sqrt(float(dx @ dx) * float(dy @ dy))
    r = min(1.0, max(-1.0, r))
    if abs(r) == 1.0:
        return CorrelationResult(r, 0.0, n)
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return CorrelationResult(r, student_t_two_sided_p(t, n - 2), n)


@dataclass(frozen=True)
class RegressionResult:
    intercept: Optional[float]
    intercept_p_value: Optional[float]
    coefficients: np.ndarray
    coef_p_values: np.ndarray
    std_errors: np.ndarray
    r_squared: float
    adjusted_r_squared: float
    f_statistic: float
    significance_f: float
    residuals: np.ndarray
    n: int
    df_resid: int


def _coef_p(beta, se, df):
    if se == 0.0:
        return 0.0 if beta != 0.0 else 1.0
    return student_t_two_sided_p(beta / se, df)


def ols_regress(X, y, include_intercept=True) -> RegressionResult:
    """Least squares fit with per-coefficient t tests and the overall F test.

    Solved through a QR factorization of the design matrix, so collinear
    predictors are reported as :class:`RankDeficient` instead of producing
    garbage coefficients.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(y, dtype=np.float64).ravel()
    n, p = X.shape
    if y.size != n:
        raise LengthMismatch(f"X has {n} rows, y has {y.size} entries")
    k = p + 1 if include_intercept else p
    if n <= k:
        raise TooFewSamples(f"need n > {k} observations, got {n}")
    A = np.column_stack((np.ones(n), X)) if include_intercept else X
    Q, R = np.linalg.qr(A)
    diag = np.abs(np.diag(R))
    if diag.max() == 0.0 or np.any(diag <= RANK_RTOL * diag.max()):
        raise RankDeficient("design matrix is not of full column rank")
    beta = solve_triangular(R, Q.T @ y)
    resid = y - A @ beta
    ssr = float(resid @ resid)
    if include_intercept:
        dev = y - y.mean()
        sst = float(dev @ dev)
        df_resid = n - p - 1
        df_total = n - 1
    else:
        sst = float(y @ y)
        df_resid = n - p
        df_total = n
    if sst == 0.0:
        raise ConstantInput("y")
    r2 = min(1.0, max(0.0, 1.0 - ssr / sst))
    adj = 1.0 - (1.0 - r2) * df_total / df_resid
    if r2 == 1.0:
        f_stat, sig_f = math.inf, 0.0
    else:
        f_stat = (r2 / p) / ((1.0 - r2) / df_resid)
        sig_f = f_sf(f_stat, p, df_resid)
    r_inv = solve_triangular(R, np.eye(k))
    se = np.sqrt((ssr / df_resid) * np.sum(r_inv * r_inv, axis=1))
    pvals = np.array([_coef_p(b, s, df_resid) for b, s in zip(beta, se)])
    if include_intercept:
        return RegressionResult(
            float(beta[0]), float(pvals[0]), beta[1:], pvals[1:], se[1:],
            r2, adj, f_stat, sig_f, resid, n, df_resid,
        )
    return RegressionResult(None, None, beta, pvals, se, r2, adj, f_stat, sig_f, resid, n, df_resid)


def format_p(p, style="cut"):
    """Display a p-value.

    ``"cut"`` buckets around 0.01 (``p<0.01`` / ``p=0.01`` / ``p>0.01``);
    ``"exact"`` prints three decimals, with ``p<0.001`` below that.
    """
    if style == "cut":
        if abs(p - 0.01) < 5e-4:
            return "p=0.01"
        return "p<0.01" if p < 0.01 else "p>0.01"
    if style == "exact":
        return "p<0.001" if p < 0.001 else f"p={p:.3f}"
    raise ValueError(f"unknown p-value style {style!r}")
