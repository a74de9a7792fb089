"""Pure-numpy implementations of the hot kernels.

Mirrors the compiled extension in `_native.pyx`; selected at import time
when the extension is unavailable (or disabled via AUCTIONLAB_NO_EXT).
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def topk_stats(values, k):
    """Top-k winner mask plus k-th and (k+1)-th highest value per row.

    Ties are broken lexicographically (lower bidder index wins).  `values`
    is an (S, n) array with n > k; returns (mask uint8 (S,n), vk (S,), vk1 (S,)).
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    s, n = values.shape
    order = np.argsort(-values, axis=1, kind="stable")
    mask = np.zeros((s, n), dtype=np.uint8)
    rows = np.arange(s)[:, None]
    mask[rows, order[:, :k]] = 1
    vk = values[rows[:, 0], order[:, k - 1]]
    vk1 = values[rows[:, 0], order[:, k]]
    return mask, vk, vk1


def geninv_pl(s_grid, h_vals, y):
    """Generalized inverse inf{s : H(s) >= y} of a piecewise-linear H.

    H is given by its values `h_vals` (non-decreasing) on the increasing
    grid `s_grid`.  Vectorized over the query array y.  Queries y <= H(s0)
    map to s0; queries above H(end) map to the last grid point.
    """
    s_grid = np.asarray(s_grid, dtype=np.float64)
    h_vals = np.asarray(h_vals, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    idx = np.searchsorted(h_vals, y, side="left")
    idx = np.clip(idx, 0, h_vals.size - 1)
    out = s_grid[idx].astype(np.float64)
    inner = idx > 0
    lo = idx[inner] - 1
    hi = idx[inner]
    dh = h_vals[hi] - h_vals[lo]
    frac = np.zeros_like(dh)
    np.divide(y[inner] - h_vals[lo], dh, out=frac, where=dh > 0)
    out[inner] = s_grid[lo] + np.clip(frac, 0.0, 1.0) * (s_grid[hi] - s_grid[lo])
    out[y <= h_vals[0]] = s_grid[0]
    return out


def pushforward_cdf(pi_vals, cdf_vals, s_grid):
    """CDF of the pushforward of a value law through a monotone map.

    pi_vals: non-decreasing map values on a fine value grid; cdf_vals: the
    value-law CDF on that same grid.  Returns G(s) = P(pi(v) <= s) on
    s_grid, interpolating linearly within the bracketing grid segment.
    """
    pi_vals = np.asarray(pi_vals, dtype=np.float64)
    cdf_vals = np.asarray(cdf_vals, dtype=np.float64)
    s = np.asarray(s_grid, dtype=np.float64)
    j = np.searchsorted(pi_vals, s, side="right")
    out = np.empty(s.shape, dtype=np.float64)
    below = j == 0
    above = j == pi_vals.size
    out[below] = 0.0
    out[above] = cdf_vals[-1]
    mid = ~(below | above)
    lo = j[mid] - 1
    hi = j[mid]
    dpi = pi_vals[hi] - pi_vals[lo]
    frac = np.ones_like(dpi)
    np.divide(s[mid] - pi_vals[lo], dpi, out=frac, where=dpi > 0)
    out[mid] = cdf_vals[lo] + np.clip(frac, 0.0, 1.0) * (cdf_vals[hi] - cdf_vals[lo])
    return out
