"""Bidder value distributions on bounded supports [0, hi].

Three families: uniform on [0, hi], power-law F(v) = (v/hi)**alpha, and
tabulated CDFs with linear interpolation.  All expose cdf/pdf/inverse-cdf
plus the virtual value v - (1 - F(v)) / f(v) that the payment formulas
consume.  Instances are immutable and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class DistributionError(ValueError):
    """Invalid distribution parameters or out-of-support evaluation."""


class SingularDensityError(DistributionError):
    """Virtual value requested where the density vanishes."""


@dataclass(frozen=True, eq=False)
class ValueDistribution:
    """A value prior on [0, support_hi] with full support in the interior.

    family_tag is one of "uniform", "power", "tabulated"; params carries
    the family parameters.  Use the `uniform` / `power_law` / `tabulated`
    constructors rather than instantiating directly.
    """

    support_hi: float
    family_tag: str
    params: tuple = field(default=())

    def __post_init__(self):
        if not (self.support_hi > 0) or not math.isfinite(self.support_hi):
            raise DistributionError("support_hi must be a positive finite real")

    def __eq__(self, other):
        if not isinstance(other, ValueDistribution):
            return NotImplemented
        if (self.support_hi, self.family_tag) != (other.support_hi, other.family_tag):
            return False
        if self.family_tag == "tabulated":
            return all(
                np.array_equal(a, b) for a, b in zip(self.params, other.params)
            )
        return self.params == other.params

    def __hash__(self):
        return hash((self.support_hi, self.family_tag))

    # -- core triple ----------------------------------------------------

    def cdf(self, v):
        v = np.asarray(v, dtype=float)
        self._check_support(v)
        if self.family_tag == "uniform":
            return v / self.support_hi
        if self.family_tag == "power":
            (alpha,) = self.params
            return (v / self.support_hi) ** alpha
        knots_v, knots_f = self.params
        return np.interp(v, knots_v, knots_f)

    def pdf(self, v):
        v = np.asarray(v, dtype=float)
        self._check_support(v)
        if self.family_tag == "uniform":
            return np.full_like(v, 1.0 / self.support_hi)
        if self.family_tag == "power":
            (alpha,) = self.params
            hi = self.support_hi
            with np.errstate(divide="ignore"):
                out = alpha * (v / hi) ** (alpha - 1.0) / hi
            return out
        knots_v, knots_f = self.params
        # piecewise-constant density from CDF finite differences
        slopes = np.diff(knots_f) / np.diff(knots_v)
        idx = np.clip(np.searchsorted(knots_v, v, side="right") - 1, 0, slopes.size - 1)
        return slopes[idx]

    def inverse_cdf(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(u < -1e-12) or np.any(u > 1 + 1e-12):
            raise DistributionError("inverse_cdf argument outside [0, 1]")
        u = np.clip(u, 0.0, 1.0)
        if self.family_tag == "uniform":
            return u * self.support_hi
        if self.family_tag == "power":
            (alpha,) = self.params
            return self.support_hi * u ** (1.0 / alpha)
        knots_v, knots_f = self.params
        return np.interp(u, knots_f, knots_v)

    # -- helpers ---------------------------------------------------------

    def _check_support(self, v):
        if np.any(v < -1e-12) or np.any(v > self.support_hi * (1 + 1e-12)):
            raise DistributionError(
                f"value outside support [0, {self.support_hi}]"
            )

    def mean(self):
        from .quadrature import integrate

        return float(
            integrate(lambda v: 1.0 - self.cdf(v), 0.0, self.support_hi)
        )

    def config(self):
        """JSON-ready config dict (round-trips through `from_config`)."""
        if self.family_tag == "uniform":
            return {"family": "uniform", "hi": self.support_hi}
        if self.family_tag == "power":
            return {"family": "power", "alpha": self.params[0], "hi": self.support_hi}
        knots_v, knots_f = self.params
        return {
            "family": "tabulated",
            "points": [[float(a), float(b)] for a, b in zip(knots_v, knots_f)],
        }


def uniform(hi=1.0):
    return ValueDistribution(float(hi), "uniform")


def power_law(alpha, hi=1.0):
    if alpha <= 0:
        raise DistributionError("power family needs alpha > 0")
    return ValueDistribution(float(hi), "power", (float(alpha),))


def tabulated(points):
    """Tabulated CDF from a monotone list of (v, F) pairs."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise DistributionError("tabulated needs >= 2 (v, F) pairs")
    v, f = pts[:, 0].copy(), pts[:, 1].copy()
    if v[0] != 0.0 or abs(f[0]) > 1e-12 or abs(f[-1] - 1.0) > 1e-12:
        raise DistributionError("tabulated CDF must run from (0, 0) to (hi, 1)")
    if np.any(np.diff(v) <= 0) or np.any(np.diff(f) < 0):
        raise DistributionError("tabulated CDF must be monotone")
    f[0], f[-1] = 0.0, 1.0
    return ValueDistribution(float(v[-1]), "tabulated", (v, f))


def from_config(cfg):
    """Build a distribution from its config syntax; unknown keys rejected."""
    if not isinstance(cfg, dict) or "family" not in cfg:
        raise DistributionError("distribution config must be a dict with 'family'")
    fam = cfg["family"]
    if fam == "uniform":
        _reject_unknown(cfg, {"family", "hi"})
        return uniform(cfg.get("hi", 1.0))
    if fam == "power":
        _reject_unknown(cfg, {"family", "alpha", "hi"})
        if "alpha" not in cfg:
            raise DistributionError("power family requires 'alpha'")
        return power_law(cfg["alpha"], cfg.get("hi", 1.0))
    if fam == "tabulated":
        _reject_unknown(cfg, {"family", "points"})
        if "points" not in cfg:
            raise DistributionError("tabulated family requires 'points'")
        return tabulated(cfg["points"])
    raise DistributionError(f"unknown distribution family {fam!r}")


def _reject_unknown(cfg, allowed):
    extra = set(cfg) - allowed
    if extra:
        raise DistributionError(f"unknown config keys: {sorted(extra)}")


# -- analytic quantities ---------------------------------------------------


def virtual_value(dist, v):
    """phi(v) = v - (1 - F(v)) / f(v).

    Raises SingularDensityError where the density vanishes with CDF mass
    still above v (power alpha > 1 at v = 0, flat tabulated segments).
    """
    arr = np.asarray(v, dtype=float)
    out = _virtual_value_raw(dist, arr)
    if np.any(np.isneginf(out)):
        raise SingularDensityError("density vanishes; virtual value is -inf")
    return float(out) if np.isscalar(v) or arr.ndim == 0 else out


def _virtual_value_raw(dist, v):
    """Virtual value with -inf (rather than an exception) at f = 0."""
    v = np.asarray(v, dtype=float)
    f = np.asarray(dist.pdf(v), dtype=float)
    tail = 1.0 - np.asarray(dist.cdf(v), dtype=float)
    out = np.empty_like(f)
    ok = f > 0
    out[ok] = v[ok] - tail[ok] / f[ok]
    bad = ~ok
    # f = 0 with no tail mass left is the regular upper endpoint limit
    out[bad] = np.where(tail[bad] <= 1e-14, v[bad], -np.inf)
    return out


def check_regular(dist, grid_size=256):
    """Grid scan for (Myerson-)regularity: phi strictly increasing.

    Advisory for tabulated families, whose densities are only piecewise
    constant.  Returns True when phi increases strictly (tolerance 1e-12)
    along a uniform grid of grid_size points.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    grid = np.linspace(0.0, dist.support_hi, grid_size)
    phi = _virtual_value_raw(dist, grid)
    diffs = np.diff(phi)
    return bool(np.all(diffs > 1e-12))


def sample(dist, seed, count):
    """Inverse-CDF sampling; deterministic for a given integer seed."""
    if count < 0:
        raise ValueError("count must be >= 0")
    rng = np.random.default_rng(seed)
    return dist.inverse_cdf(rng.random(count))
