"""Inner loops: edit-distance alignment and the incomplete-beta continued fraction.

Each kernel has a jitted build (``*_jit``) and a pure Python build (``*_py``).
The public names (``align_counts``, ``align_many``, ``betacf``) point at the
jitted build unless numba is disabled; see :mod:`vcceval._accel`.
"""
import math

import numpy as np

from ._accel import NUMBA_ENABLED, maybe_njit

# --- alignment -------------------------------------------------------------
#
# Minimum edit cost with unit S/D/I weights. Ties between equal-cost alignments
# are broken lexicographically: fewer insertions, then fewer deletions. The
# (total, ins, del) tuple is additive and its lexicographic order is
# translation-invariant, so the usual DP recursion stays exact.


def _align_counts_impl(ref, hyp):
    n = ref.shape[0]
    m = hyp.shape[0]
    tot = np.empty(m + 1, dtype=np.int64)
    ins = np.empty(m + 1, dtype=np.int64)
    dele = np.empty(m + 1, dtype=np.int64)
    for j in range(m + 1):
        tot[j] = j
        ins[j] = j
        dele[j] = 0
    for i in range(1, n + 1):
        # diagonal predecessor (i-1, j-1), kept before overwriting row i-1
        d_tot = tot[0]
        d_ins = ins[0]
        d_del = dele[0]
        tot[0] = i
        ins[0] = 0
        dele[0] = i
        r = ref[i - 1]
        for j in range(1, m + 1):
            sub = 0 if r == hyp[j - 1] else 1
            b_tot = d_tot + sub
            b_ins = d_ins
            b_del = d_del
            # deletion from (i-1, j)
            c_tot = tot[j] + 1
            c_ins = ins[j]
            c_del = dele[j] + 1
            if c_tot < b_tot or (c_tot == b_tot and (c_ins < b_ins or (c_ins == b_ins and c_del < b_del))):
                b_tot = c_tot
                b_ins = c_ins
                b_del = c_del
            # insertion from (i, j-1)
            c_tot = tot[j - 1] + 1
            c_ins = ins[j - 1] + 1
            c_del = dele[j - 1]
            if c_tot < b_tot or (c_tot == b_tot and (c_ins < b_ins or (c_ins == b_ins and c_del < b_del))):
                b_tot = c_tot
                b_ins = c_ins
                b_del = c_del
            d_tot = tot[j]
            d_ins = ins[j]
            d_del = dele[j]
            tot[j] = b_tot
            ins[j] = b_ins
            dele[j] = b_del
    t = tot[m]
    return t - ins[m] - dele[m], dele[m], ins[m]


def _align_many_impl(ref_flat, ref_off, hyp_flat, hyp_off):
    k = ref_off.shape[0] - 1
    out = np.empty((k, 3), dtype=np.int64)
    for u in range(k):
        s, d, i = _align_counts_jit(ref_flat[ref_off[u]:ref_off[u + 1]], hyp_flat[hyp_off[u]:hyp_off[u + 1]])
        out[u, 0] = s
        out[u, 1] = d
        out[u, 2] = i
    return out


def align_counts_py(ref, hyp):
    """List-based twin of the jitted kernel; ``ref``/``hyp`` are int sequences."""
    m = len(hyp)
    row = [(j, j, 0) for j in range(m + 1)]
    for i, r in enumerate(ref, 1):
        prev = row
        row = [(i, 0, i)]
        for j in range(1, m + 1):
            dt, di, dd = prev[j - 1]
            best = (dt + (r != hyp[j - 1]), di, dd)
            pt, pi, pd = prev[j]
            cand = (pt + 1, pi, pd + 1)
            if cand < best:
                best = cand
            lt, li, ld = row[j - 1]
            cand = (lt + 1, li + 1, ld)
            if cand < best:
                best = cand
            row.append(best)
    t, i, d = row[m]
    return t - i - d, d, i


def align_many_py(ref_flat, ref_off, hyp_flat, hyp_off):
    ref_flat = list(ref_flat)
    hyp_flat = list(hyp_flat)
    k = len(ref_off) - 1
    out = np.empty((k, 3), dtype=np.int64)
    for u in range(k):
        out[u] = align_counts_py(ref_flat[ref_off[u]:ref_off[u + 1]], hyp_flat[hyp_off[u]:hyp_off[u + 1]])
    return out


# --- incomplete beta -------------------------------------------------------

def _betacf_impl(a, b, x, eps, max_iter):
    """Continued fraction for I_x(a, b) by modified Lentz; returns (value, iterations).

    ``iterations == -1`` means no convergence within ``max_iter``.
    """
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h, m
    return h, -1


betacf_py = _betacf_impl
_align_counts_jit = maybe_njit(_align_counts_impl)
align_many_jit = maybe_njit(_align_many_impl)
betacf_jit = maybe_njit(_betacf_impl)

if NUMBA_ENABLED:
    align_many = align_many_jit
    betacf = betacf_jit
else:
    align_many = align_many_py
    betacf = betacf_py


def align_counts(ref, hyp):
    """(S, D, I) for two int-coded token sequences."""
    if NUMBA_ENABLED:
        s, d, i = _align_counts_jit(np.asarray(ref, dtype=np.int64), np.asarray(hyp, dtype=np.int64))
        return int(s), int(d), int(i)
    return align_counts_py(list(ref), list(hyp))


def log_beta_prefactor(a, b, x):
    return math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
