"""Deliberately naive checks for the closed-form results.

Nothing here uses the closed-form optimum or the closed-form availability;
the grid search only evaluates profit, the fixed point is found by
bisection, and demand is measured by counting consumers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidParameterError
from .inventory import profit
from .model import (
    ONLINE_CODE,
    Channel,
    ModelParams,
    choose_channel,
    choose_channels,
    demand,
    tie_tolerance,
    utility_bops,
    utility_online,
    utility_store,
)


@dataclass(frozen=True)
class GridSpec:
    q_max: float
    q_steps: int = 400
    mu_steps: int = 400

    def __post_init__(self):
        if not self.q_max > 0:
            raise InvalidParameterError("q_max must be positive")
        if self.q_steps < 2 or self.mu_steps < 2:
            raise InvalidParameterError("grid needs at least 2 steps per axis")

    @classmethod
    def default(cls, params: ModelParams, q_steps: int = 400, mu_steps: int = 400) -> "GridSpec":
        # optimal stock never exceeds c_o, so 2*c_o leaves room to spare
        return cls(2.0 * params.c_o, q_steps, mu_steps)


class GridOptimum(NamedTuple):
    q: float
    mu_bar: float
    profit: float


def grid_slack(params: ModelParams, grid: GridSpec) -> float:
    """Worst profit shortfall a grid point can have against the true optimum."""
    spacing = max(grid.q_max / (grid.q_steps - 1), params.M / (grid.mu_steps - 1))
    return (params.c + params.p) * spacing


def brute_force_optimum(params: ModelParams, grid: GridSpec) -> GridOptimum:
    """Exhaustive argmax of profit over ``[0, q_max] x [0, M]``.

    Ties go to the smallest ``mu_bar``, then the smallest ``q``.
    """
    params.validate()
    qs = np.linspace(0.0, grid.q_max, grid.q_steps)
    mus = np.linspace(0.0, params.M, grid.mu_steps)
    values = profit(params, qs[None, :], mus[:, None])  # rows: mu_bar, cols: q
    flat = int(np.argmax(values))  # first maximum in row-major order
    i, j = divmod(flat, grid.q_steps)
    return GridOptimum(float(qs[j]), float(mus[i]), float(values[i, j]))


def fixed_point_xi(params: ModelParams, q: float, mu_bar: float, tol: float = 1e-12) -> float:
    """Solve ``xi * D(xi) = q`` on ``[0, 1]`` by bisection.

    ``xi * D(xi)`` is non-decreasing, so the bracket never fails. Iteration
    stops once the residual is within ``tol`` and the bracket is no wider
    than ``tol``, or when the bracket cannot shrink further.
    """
    if q < 0:
        raise InvalidParameterError("q must be non-negative")
    if tol <= 0:
        raise InvalidParameterError("tol must be positive")

    def g(xi: float) -> float:
        return xi * demand(params, xi, mu_bar) - q

    if g(1.0) <= 0:
        return 1.0
    if g(0.0) >= 0:
        return 0.0
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        gm = g(mid)
        if gm < 0:
            lo = mid
        else:
            hi = mid
        if abs(gm) <= tol and hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def demand_by_integration(
    params: ModelParams, xi_hat: float, mu_bar: float, steps: int = 100_000
) -> float:
    """Midpoint-rule measure of travel costs in ``[0, 2 c_o]`` that buy from the retailer."""
    if steps < 100:
        raise InvalidParameterError("steps must be at least 100")
    h = 2.0 * params.c_o / steps
    t = (np.arange(steps) + 0.5) * h
    codes = choose_channels(params, xi_hat, t, mu_bar)
    return float(np.count_nonzero(codes != ONLINE_CODE)) * h


def gain_by_integration(
    params: ModelParams, xi_hat: float, steps: int = 1000, t_steps: int = 100_000
) -> float:
    """Extra consumers won by offering pickup, by double midpoint integration.

    Outer integral over ``mu_bar`` in ``[0, c_o]`` with ``steps`` cells; each
    inner demand uses ``t_steps`` cells. Without pickup only consumers with
    ``t <= xi_hat * c_o`` come to the store.
    """
    if steps < 100:
        raise InvalidParameterError("steps must be at least 100")
    h = params.c_o / steps
    baseline = xi_hat * params.c_o
    total = 0.0
    for i in range(steps):
        mu = (i + 0.5) * h
        total += demand_by_integration(params, xi_hat, mu, t_steps) - baseline
    return total * h


_PRECEDENCE = (Channel.BOPS, Channel.STORE, Channel.ONLINE)


def channel_by_argmax(params: ModelParams, xi_hat: float, t: float, mu_bar: float) -> Channel:
    """Utility-maximising channel, found by comparing the three utilities.

    Ties go BOPS, then Store, then Online, with two exceptions: when
    ``mu_bar > c_o`` a tie between BOPS and Store goes to Store, and when
    ``xi_hat == 0`` a tie between Store and Online goes to Online.

    Utilities within :func:`~bops.model.tie_tolerance` of the best count as tied,
    so that a consumer sitting exactly on a cutoff is not decided by the
    last bit of a subtraction.
    """
    utils = {
        Channel.BOPS: utility_bops(params, xi_hat, t, mu_bar),
        Channel.STORE: utility_store(params, xi_hat, t, mu_bar),
        Channel.ONLINE: utility_online(params),
    }
    best = max(utils.values())
    tol = tie_tolerance(params)
    tied = {ch for ch, u in utils.items() if u >= best - tol}
    if mu_bar > params.c_o and Channel.STORE in tied:
        tied.discard(Channel.BOPS)
    if xi_hat == 0.0 and Channel.ONLINE in tied:
        tied.discard(Channel.STORE)
    return next(ch for ch in _PRECEDENCE if ch in tied)


def choices_match_argmax(
    params: ModelParams, xi_hat: float, mu_bar: float, samples: int = 401
) -> bool:
    """Compare :func:`choose_channel` with the utility argmax along a travel-cost grid."""
    c_o = params.c_o
    ts = list(np.linspace(0.0, 2.0 * c_o, samples))
    # include the cutoffs themselves, where ties live
    ts += [c_o, c_o - (1.0 - xi_hat) * mu_bar, xi_hat * c_o]
    for t in ts:
        t = max(float(t), 0.0)
        if choose_channel(params, xi_hat, t, mu_bar).channel is not channel_by_argmax(
            params, xi_hat, t, mu_bar
        ):
            return False
    return True
