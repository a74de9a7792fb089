"""Auction environments and the interim quantities built on them.

An environment holds n bidders, k < n items and per-bidder value priors.
Everything downstream (payment rules, solvers, risk statistics) consumes
the interim allocation x_i(v), the interim expected payment
z_i(v) = v x_i(v) - int_0^v x_i(u) du, and the order-statistic densities.

Interim payment curves are precomputed on a dense grid at construction
(evaluation afterwards is read-only, so instances are safe to share).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import distributions as dists
from .quadrature import cumulative, integrate

CURVE_GRID = 8193  # nodes of the cached x/z tables per bidder


class EnvironmentConfigError(ValueError):
    """Unsupported environment configuration."""


@dataclass(frozen=True)
class InterimCurves:
    """Cached interim allocation/payment tables for one bidder."""

    grid: np.ndarray
    x_vals: np.ndarray
    z_vals: np.ndarray
    bid_vals: np.ndarray
    zbar: float

    def x(self, v):
        return np.interp(v, self.grid, self.x_vals)

    def z(self, v):
        return np.interp(v, self.grid, self.z_vals)

    def wpb_bid(self, v):
        """z/x interpolated from exact node ratios; b = 0 where x = 0."""
        return np.interp(v, self.grid, self.bid_vals)


class AuctionEnvironment:
    """n bidders, k items, independent priors, efficient allocation.

    Asymmetric priors are accepted only for k = 1; multi-unit environments
    must be i.i.d.  An optional reserve price is supported for k = 1 only:
    the allocation is empty whenever the highest value falls below it.
    """

    def __init__(self, n, k, dist_list, reserve=0.0):
        n = int(n)
        k = int(k)
        if n < 2 or not (1 <= k < n):
            raise EnvironmentConfigError("need n >= 2 bidders and 1 <= k < n items")
        if len(dist_list) == 1:
            dist_list = list(dist_list) * n
        if len(dist_list) != n:
            raise EnvironmentConfigError("need one distribution or one per bidder")
        iid = all(d == dist_list[0] for d in dist_list)
        if k > 1 and not iid:
            raise EnvironmentConfigError(
                "multi-unit environments must be i.i.d. (asymmetric priors "
                "are supported for k = 1 only)"
            )
        if reserve < 0:
            raise EnvironmentConfigError("reserve must be >= 0")
        if reserve > 0 and k != 1:
            raise EnvironmentConfigError("reserve prices are supported for k = 1 only")
        self.n = n
        self.k = k
        self.dists = list(dist_list)
        self.reserve = float(reserve)
        self.iid = iid
        self._curves = [self._build_curves(i) for i in range(n)]

    # -- construction ------------------------------------------------------

    def _build_curves(self, i):
        hi = self.dists[i].support_hi
        grid = np.linspace(0.0, hi, CURVE_GRID)
        if 0.0 < self.reserve < hi:
            # keep the allocation jump at the reserve on a grid knot
            grid = np.unique(np.concatenate([grid, [self.reserve]]))
        x_vals = self.interim_allocation(i, grid)
        integral = cumulative(lambda u: self.interim_allocation(i, u), grid)
        z_vals = np.maximum(grid * x_vals - integral, 0.0)
        bid_vals = np.zeros_like(z_vals)
        np.divide(z_vals, x_vals, out=bid_vals, where=x_vals > 0)
        zbar = self._expected_z(i)
        return InterimCurves(grid, x_vals, z_vals, bid_vals, zbar)

    def _expected_z(self, i):
        # E[z_i] = int x_i(v) (v f_i(v) - 1 + F_i(v)) dv  (by parts; this is
        # the expected-virtual-value form and avoids nested quadrature)
        d = self.dists[i]

        def integrand(v):
            return self.interim_allocation(i, v) * (
                v * d.pdf(v) - 1.0 + d.cdf(v)
            )

        return float(integrate(integrand, 0.0, d.support_hi, tol=1e-12))

    # -- interim quantities --------------------------------------------------

    def interim_allocation(self, i, v):
        """Probability that bidder i with value v receives an item."""
        v = np.asarray(v, dtype=float)
        self.dists[i]._check_support(v)
        if self.k == 1:
            out = np.ones_like(v)
            for j, d in enumerate(self.dists):
                if j != i:
                    out = out * d.cdf(v)
            if self.reserve > 0:
                out = np.where(v >= self.reserve, out, 0.0)
        else:
            F = self.dists[i].cdf(v)
            out = np.zeros_like(F)
            for j in range(self.n - self.k, self.n):
                out += (
                    math.comb(self.n - 1, j)
                    * F**j
                    * (1.0 - F) ** (self.n - 1 - j)
                )
        return out

    def interim_payment(self, i, v):
        """Myerson interim payment z_i(v), from the cached quadrature table."""
        scalar = np.isscalar(v)
        out = self._curves[i].z(v)
        return float(out) if scalar else out

    def curves(self, i):
        return self._curves[i]

    def expected_revenue(self):
        """Expected total revenue of any BIC rule implementing the allocation."""
        return float(sum(c.zbar for c in self._curves))

    def order_stat_densities(self, v):
        """(Q, G) factors of the k-th order statistic at value v.

        Q(v) is the probability that a bidder with value v is exactly the
        k-th highest; G(v) is the per-rival density that some other fixed
        set assignment puts the k-th highest at v.  Defined for i.i.d.
        environments with k >= 2.
        """
        if not self.iid or self.k < 2:
            raise EnvironmentConfigError("order-stat densities need i.i.d. and k >= 2")
        d = self.dists[0]
        v = np.asarray(v, dtype=float)
        F = d.cdf(v)
        f = d.pdf(v)
        c = math.comb(self.n - 1, self.k - 1)
        Q = c * (1.0 - F) ** (self.k - 1) * F ** (self.n - self.k)
        G = c * (1.0 - F) ** (self.k - 2) * F ** (self.n - self.k) * f
        return Q, G

    def revenue_upper_bound_check(self):
        """Expected revenue bound against the virtual value at zero.

        For i.i.d. regular environments with 2 <= k < n the efficient
        expected revenue satisfies rbar < -(n - k) * phi(0); the bound is
        vacuous (True) when the density vanishes at zero.
        """
        if not self.iid or self.k < 2:
            raise EnvironmentConfigError("bound check needs i.i.d. and 2 <= k < n")
        phi0 = dists._virtual_value_raw(self.dists[0], np.array(0.0))
        if np.isneginf(phi0):
            return True
        return self.expected_revenue() < -(self.n - self.k) * float(phi0)

    def sample_profiles(self, rng, count):
        """(count, n) matrix of independent value draws."""
        cols = [d.inverse_cdf(rng.random(count)) for d in self.dists]
        return np.column_stack(cols)

    def config(self):
        cfg = {"n": self.n, "k": self.k}
        if self.iid:
            cfg["dists"] = [self.dists[0].config()]
        else:
            cfg["dists"] = [d.config() for d in self.dists]
        if self.reserve:
            cfg["reserve"] = self.reserve
        return cfg

    def __repr__(self):
        fams = [d.family_tag for d in self.dists]
        return f"AuctionEnvironment(n={self.n}, k={self.k}, dists={fams})"


def from_config(cfg):
    """Environment from `{"n":..., "k":..., "dists":[...]}`; unknown keys rejected."""
    if not isinstance(cfg, dict):
        raise EnvironmentConfigError("environment config must be a dict")
    extra = set(cfg) - {"n", "k", "dists", "reserve"}
    if extra:
        raise EnvironmentConfigError(f"unknown config keys: {sorted(extra)}")
    for key in ("n", "k", "dists"):
        if key not in cfg:
            raise EnvironmentConfigError(f"environment config missing {key!r}")
    dist_list = [dists.from_config(d) for d in cfg["dists"]]
    return AuctionEnvironment(cfg["n"], cfg["k"], dist_list, cfg.get("reserve", 0.0))
