"""BIC payment rules: canonical formats, winner-pays-bid, Eso-Futo.

Each rule maps a value profile to (allocation, payments) under truthful
reporting.  Rules carry a vectorized batch path (the Monte Carlo hot
loop) plus optional declarations of their revenue's order-statistic
structure, which the quadrature engine exploits.

The efficient allocation gives the k items to the k highest values,
breaking ties by lowest bidder index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._kernels import topk_stats
from .environment import AuctionEnvironment, EnvironmentConfigError
from .quadrature import gauss_nodes, integrate


class RuleError(ValueError):
    """Unsupported rule/environment combination."""


@dataclass(frozen=True)
class PaymentRule:
    """A named profile -> (allocation, payments) map plus property flags."""

    name: str
    env: AuctionEnvironment
    batch: Callable[[np.ndarray], tuple]
    ex_post_ir: bool
    nonneg_payments: bool
    losers_pay_zero: bool
    # revenue R as a function of the two highest values (n=3, k=2 i.i.d.)
    revenue_pair: Optional[Callable] = field(default=None, repr=False)
    # revenue R as a function of the j-th highest value: (j, callable)
    revenue_rank: Optional[tuple] = field(default=None, repr=False)

    def apply(self, profile):
        """Allocation and payment vectors for one value profile."""
        v = np.asarray(profile, dtype=float).reshape(1, -1)
        alloc, pay = self.batch(v)
        return alloc[0], pay[0]

    def apply_batch(self, profiles):
        """Vectorized application to an (S, n) profile matrix."""
        return self.batch(np.asarray(profiles, dtype=float))

    def revenue_batch(self, profiles):
        _, pay = self.apply_batch(profiles)
        return pay.sum(axis=1)


def efficient_allocation(env, values):
    """Winner mask plus k-th and (k+1)-th highest values per row."""
    mask, vk, vk1 = topk_stats(values, env.k)
    if env.reserve > 0:
        mask = mask & (values >= env.reserve).astype(np.uint8)
    return mask, vk, vk1


def wpb_bid(env, i, v):
    """Winner-pays-bid amount z_i(v)/x_i(v); 0 at v = 0 by continuity."""
    return env.curves(i).wpb_bid(v)


def make_rule(env, kind):
    """Build one of the catalog rules: second_price, all_pay, wpb,
    uniform_kplus1, or the hand-crafted `custom` rule (n=3, k=2 only)."""
    if kind == "second_price":
        return _second_price(env)
    if kind == "all_pay":
        return _all_pay(env)
    if kind == "wpb":
        return _wpb(env)
    if kind == "uniform_kplus1":
        return _uniform_kplus1(env)
    if kind == "custom":
        from .expost_qp import custom_b1b2_rule

        return custom_b1b2_rule(env)
    raise RuleError(f"unknown rule kind {kind!r}")


def _second_price(env):
    if env.k != 1:
        raise RuleError("second_price is a single-item rule (k = 1)")

    reserve = env.reserve

    def batch(values):
        mask, _, _ = efficient_allocation(env, values)
        _, v1, v2 = topk_stats(values, 1)
        price = np.maximum(v2, reserve)
        pay = mask * price[:, None]
        return mask, pay

    rev = None
    if env.iid and reserve == 0.0:
        rev = (2, lambda y: y)
    return PaymentRule(
        "second_price", env, batch,
        ex_post_ir=True, nonneg_payments=True, losers_pay_zero=True,
        revenue_rank=rev,
    )


def _all_pay(env):
    curves = [env.curves(i) for i in range(env.n)]

    def batch(values):
        mask, _, _ = efficient_allocation(env, values)
        pay = np.column_stack(
            [curves[i].z(values[:, i]) for i in range(env.n)]
        )
        return mask, pay

    return PaymentRule(
        "all_pay", env, batch,
        ex_post_ir=False, nonneg_payments=True, losers_pay_zero=False,
    )


def _wpb(env):
    if env.k > 1 and not env.iid:
        raise RuleError("multi-unit winner-pays-bid requires i.i.d. bidders")
    curves = [env.curves(i) for i in range(env.n)]

    def batch(values):
        mask, _, _ = efficient_allocation(env, values)
        bids = np.column_stack(
            [curves[i].wpb_bid(values[:, i]) for i in range(env.n)]
        )
        return mask, mask * bids

    rev_pair = None
    rev_rank = None
    if env.iid and env.reserve == 0.0:
        b = curves[0].wpb_bid
        if env.k == 1:
            rev_rank = (1, b)
        elif env.n == 3 and env.k == 2:
            rev_pair = lambda y1, y2: b(y1) + b(y2)  # noqa: E731
    return PaymentRule(
        "wpb", env, batch,
        ex_post_ir=True, nonneg_payments=True, losers_pay_zero=True,
        revenue_pair=rev_pair, revenue_rank=rev_rank,
    )


def _uniform_kplus1(env):
    if not env.iid:
        raise RuleError("uniform (k+1)-price requires i.i.d. bidders")
    if env.reserve > 0:
        raise RuleError("uniform (k+1)-price does not support reserves")
    k = env.k

    def batch(values):
        mask, _, vk1 = topk_stats(values, k)
        return mask, mask * vk1[:, None]

    return PaymentRule(
        "uniform_kplus1", env, batch,
        ex_post_ir=True, nonneg_payments=True, losers_pay_zero=True,
        revenue_rank=(k + 1, lambda y: k * y),
    )


def eso_futo_rule(env):
    """Zero-variance rule with possibly negative payments (interim IR).

    P_i(v) = z_i(v_i) + sum_{j != i} (zbar_j - z_j(v_j)) / (n - 1); ex-post
    revenue equals sum_i zbar_i on every profile.
    """
    curves = [env.curves(i) for i in range(env.n)]
    zbars = np.array([c.zbar for c in curves])
    n = env.n

    def batch(values):
        mask, _, _ = efficient_allocation(env, values)
        z = np.column_stack([curves[i].z(values[:, i]) for i in range(n)])
        gap = zbars[None, :] - z
        total_gap = gap.sum(axis=1, keepdims=True)
        pay = z + (total_gap - gap) / (n - 1)
        return mask, pay

    const = float(zbars.sum())
    return PaymentRule(
        "eso_futo", env, batch,
        ex_post_ir=False, nonneg_payments=False, losers_pay_zero=False,
        revenue_rank=(1, lambda y: np.full_like(np.asarray(y, dtype=float), const)),
    )


# -- revenue-equivalence verification ---------------------------------------


@dataclass(frozen=True)
class RetReport:
    """Residuals of E[P_i | v_i] against the Myerson interim payment."""

    max_residual: float
    max_stderr: float
    mode: str
    grid: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)

    def __float__(self):
        return self.max_residual


def verify_ret(env, rule, grid_size=33, mc_samples=20000, seed=0):
    """Max over bidders and a value grid of |E[P_i | v_i] - z_i(v_i)|.

    Conditional expectations are computed by nested quadrature for
    n <= 3 and by Monte Carlo (with the reported stderr) otherwise.
    """
    n = env.n
    residuals = []
    stderrs = []
    grids = []
    mode = "quadrature" if n <= 3 else "monte_carlo"
    for i in range(n):
        hi = env.dists[i].support_hi
        grid = np.linspace(0.0, hi, grid_size)
        z_ref = env.curves(i).z(grid)
        if mode == "quadrature":
            est = np.array([_cond_payment_quad(env, rule, i, v) for v in grid])
            err = np.zeros_like(est)
        else:
            est, err = _cond_payment_mc(env, rule, i, grid, mc_samples, seed)
        residuals.append(np.abs(est - z_ref))
        stderrs.append(err)
        grids.append(grid)
    residuals = np.stack(residuals)
    stderrs = np.stack(stderrs)
    return RetReport(
        max_residual=float(residuals.max()),
        max_stderr=float(stderrs.max()),
        mode=mode,
        grid=np.stack(grids),
        residuals=residuals,
    )


def _cond_payment_quad(env, rule, i, v, tol=1e-10):
    others = [j for j in range(env.n) if j != i]

    if len(others) == 1:
        (j,) = others
        d = env.dists[j]

        def f(u):
            profiles = np.empty((u.size, 2))
            profiles[:, i] = v
            profiles[:, j] = u
            _, pay = rule.apply_batch(profiles)
            return pay[:, i] * d.pdf(u)

        return integrate(f, 0.0, d.support_hi, tol=tol)

    j1, j2 = others
    d1, d2 = env.dists[j1], env.dists[j2]

    def outer(u1_arr):
        out = np.empty_like(u1_arr)
        for idx, u1 in enumerate(u1_arr):
            def inner(u2):
                profiles = np.empty((u2.size, 3))
                profiles[:, i] = v
                profiles[:, j1] = u1
                profiles[:, j2] = u2
                _, pay = rule.apply_batch(profiles)
                return pay[:, i] * d2.pdf(u2)

            out[idx] = integrate(inner, 0.0, d2.support_hi, tol=tol * 0.1)
        return out * d1.pdf(u1_arr)

    return integrate(outer, 0.0, d1.support_hi, tol=tol)


def _cond_payment_mc(env, rule, i, grid, mc_samples, seed):
    rng = np.random.default_rng(np.random.SeedSequence((seed, i)))
    rivals = env.sample_profiles(rng, mc_samples)
    est = np.empty(grid.size)
    err = np.empty(grid.size)
    profiles = rivals.copy()
    for g, v in enumerate(grid):
        profiles[:, i] = v
        _, pay = rule.apply_batch(profiles)
        p = pay[:, i]
        est[g] = p.mean()
        err[g] = p.std(ddof=1) / np.sqrt(mc_samples)
    return est, err


def build_rule(env, name, **params):
    """Rule registry used by the CLI; solver-backed rules accept params."""
    if name in ("second_price", "all_pay", "wpb", "uniform_kplus1"):
        return make_rule(env, name)
    if name == "eso_futo":
        return eso_futo_rule(env)
    if name == "custom_b1b2":
        from .expost_qp import custom_b1b2_rule

        return custom_b1b2_rule(env)
    if name == "pi_rule":
        from .fixed_point import pi_payment_rule, solve_fixed_point

        profile = solve_fixed_point(
            env,
            grid_size=params.get("grid_size", 2048),
            damping=params.get("damping", 0.5),
            tol=params.get("tol", 1e-6),
            max_iter=params.get("max_iter", 500),
        )
        return pi_payment_rule(profile, residual_threshold=params.get(
            "residual_threshold", 1e-3))
    if name == "psi_rule":
        from .zero_variance import compute_psi, zero_variance_rule

        sol = compute_psi(env, grid_size=params.get("grid_size", 4096))
        return zero_variance_rule(sol)
    if name == "qp_rule":
        from .expost_qp import build_qp, qp_rule, solve_qp

        problem = build_qp(env, m=params.get("m", 80))
        sol = solve_qp(
            problem,
            tol=params.get("tol", 1e-8),
            max_iter=params.get("max_iter", 200),
        )
        return qp_rule(problem, sol)
    raise RuleError(f"unknown rule name {name!r}")


RULE_NAMES = (
    "wpb", "second_price", "all_pay", "uniform_kplus1", "eso_futo",
    "custom_b1b2", "pi_rule", "psi_rule", "qp_rule",
)
