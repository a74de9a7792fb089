# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: top-k selection, generalized inverse, pushforward.

Semantics match `_fallback.py` bit-for-bit on valid inputs.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "native"


def topk_stats(values, int k):
    """Top-k winner mask plus k-th and (k+1)-th highest value per row."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t s = v.shape[0]
    cdef Py_ssize_t n = v.shape[1]
    if k < 1 or k >= n:
        raise ValueError("need 1 <= k < n")
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] mask = np.zeros((s, n), dtype=np.uint8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] vk = np.empty(s, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] vk1 = np.empty(s, dtype=np.float64)
    # insertion buffer of the k+1 best (value desc, index asc) per row
    cdef double[64] bval
    cdef Py_ssize_t[64] bidx
    cdef Py_ssize_t r, j, m, pos, t
    cdef double x
    if k + 1 > 64:
        raise ValueError("kernel supports k+1 <= 64")
    for r in range(s):
        m = 0
        for j in range(n):
            x = v[r, j]
            if m == k + 1 and x <= bval[m - 1]:
                continue
            pos = m
            while pos > 0 and x > bval[pos - 1]:
                pos -= 1
            if m < k + 1:
                m += 1
            for t in range(m - 1, pos, -1):
                bval[t] = bval[t - 1]
                bidx[t] = bidx[t - 1]
            if pos < m:
                bval[pos] = x
                bidx[pos] = j
        for t in range(k):
            mask[r, bidx[t]] = 1
        vk[r] = bval[k - 1]
        vk1[r] = bval[k]
    return mask, vk, vk1


def geninv_pl(s_grid, h_vals, y):
    """inf{s : H(s) >= y} for piecewise-linear non-decreasing H on a grid."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sg = np.ascontiguousarray(s_grid, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] hv = np.ascontiguousarray(h_vals, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] yy = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t g = hv.shape[0]
    cdef Py_ssize_t m = yy.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef Py_ssize_t i, lo, hi, mid
    cdef double q, dh, frac
    for i in range(m):
        q = yy[i]
        if q <= hv[0]:
            out[i] = sg[0]
            continue
        if q > hv[g - 1]:
            out[i] = sg[g - 1]
            continue
        lo = 0
        hi = g - 1
        # first index with hv[idx] >= q
        while lo < hi:
            mid = (lo + hi) // 2
            if hv[mid] >= q:
                hi = mid
            else:
                lo = mid + 1
        dh = hv[lo] - hv[lo - 1]
        if dh > 0:
            frac = (q - hv[lo - 1]) / dh
            if frac < 0:
                frac = 0
            elif frac > 1:
                frac = 1
        else:
            frac = 0
        out[i] = sg[lo - 1] + frac * (sg[lo] - sg[lo - 1])
    return out


def pushforward_cdf(pi_vals, cdf_vals, s_grid):
    """G(s) = P(pi(v) <= s) on s_grid, for monotone pi on a fine value grid."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pv = np.ascontiguousarray(pi_vals, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cv = np.ascontiguousarray(cdf_vals, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sg = np.ascontiguousarray(s_grid, dtype=np.float64)
    cdef Py_ssize_t fine = pv.shape[0]
    cdef Py_ssize_t m = sg.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef Py_ssize_t i, lo, hi, mid, j
    cdef double s, dpi, frac
    for i in range(m):
        s = sg[i]
        # j = first index with pv[j] > s  (searchsorted side='right')
        lo = 0
        hi = fine
        while lo < hi:
            mid = (lo + hi) // 2
            if pv[mid] <= s:
                lo = mid + 1
            else:
                hi = mid
        j = lo
        if j == 0:
            out[i] = 0.0
        elif j == fine:
            out[i] = cv[fine - 1]
        else:
            dpi = pv[j] - pv[j - 1]
            if dpi > 0:
                frac = (s - pv[j - 1]) / dpi
                if frac < 0:
                    frac = 0
                elif frac > 1:
                    frac = 1
            else:
                frac = 1
            out[i] = cv[j - 1] + frac * (cv[j] - cv[j - 1])
    return out
