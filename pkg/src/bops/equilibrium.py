"""Retailer optimisation: per-wait optimal stock, optimal wait, and equilibrium."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

from . import oracle
from .errors import InvalidAxisError, InvalidParameterError, RegionInadmissibleError
from .inventory import profit, reduction_cost
from .model import ModelParams, demand


class SolutionRegion(enum.Enum):
    BOPS_I = "BOPS I"
    BOPS_II = "BOPS II"
    BOPS_III = "BOPS III"
    STORE_I = "Store I"
    STORE_II = "Store II"

    @property
    def uses_bops(self) -> bool:
        return self in (SolutionRegion.BOPS_I, SolutionRegion.BOPS_II, SolutionRegion.BOPS_III)

    def admissible(self, params: ModelParams) -> bool:
        if self in (SolutionRegion.BOPS_I, SolutionRegion.STORE_I):
            return params.high_margin
        if self is SolutionRegion.STORE_II:
            return not params.high_margin
        return True


class RegionOptimum(NamedTuple):
    region: SolutionRegion
    q: float
    profit: float


@dataclass(frozen=True)
class EquilibriumResult:
    region: SolutionRegion
    q: float
    mu_bar: float
    xi: float
    demand: float
    profit: float


def bops_iii_ceiling(params: ModelParams) -> float:
    """Waits below this leave the retailer better off holding no stock."""
    return params.c / (params.p + params.c) * params.c_o


def bops_i_floor(params: ModelParams) -> float:
    """Waits at or above this make full availability optimal (only meaningful when p >= 2c)."""
    return params.c / (params.p - params.c) * params.c_o


def _bops_ii_q(params: ModelParams, mu_bar: float) -> float:
    p, c, c_o = params.p, params.c, params.c_o
    return ((p * mu_bar / c) ** 2 - (c_o - mu_bar) ** 2) / (4.0 * mu_bar)


def _bops_ii_profit(params: ModelParams, mu_bar: float) -> float:
    p, c, c_o = params.p, params.c, params.c_o
    return c / (4.0 * mu_bar) * ((p - c) / c * mu_bar + c_o) ** 2 - reduction_cost(params, mu_bar)


def bops_ii_stock_probability(params: ModelParams, mu_bar: float) -> float:
    """Availability at the interior optimum, in closed form."""
    p, c, c_o = params.p, params.c, params.c_o
    return ((p + c) / c * mu_bar - c_o) / (2.0 * mu_bar)


def optimal_q_given_mu(params: ModelParams, mu_bar: float) -> RegionOptimum:
    """Profit-maximising inventory for a fixed promised wait.

    Where two regions share an endpoint the lower-indexed one is reported;
    both give the same stock and profit there.
    """
    params.validate()
    if not 0.0 <= mu_bar <= params.M:
        raise InvalidParameterError(f"mu_bar must lie in [0, M={params.M}], got {mu_bar!r}")
    p, c, c_o = params.p, params.c, params.c_o
    cost = reduction_cost(params, mu_bar)

    if mu_bar > c_o:
        if params.high_margin:
            return RegionOptimum(SolutionRegion.STORE_I, c_o, (p - c) * c_o - cost)
        return RegionOptimum(
            SolutionRegion.STORE_II, (p / (2 * c)) ** 2 * c_o, p * p / (4 * c) * c_o - cost
        )

    if params.high_margin and mu_bar >= bops_i_floor(params):
        return RegionOptimum(SolutionRegion.BOPS_I, c_o, (p - c) * c_o - cost)
    if mu_bar >= bops_iii_ceiling(params):
        return RegionOptimum(
            SolutionRegion.BOPS_II, _bops_ii_q(params, mu_bar), _bops_ii_profit(params, mu_bar)
        )
    return RegionOptimum(SolutionRegion.BOPS_III, 0.0, p * (c_o - mu_bar) - cost)


def local_optimal_mu(params: ModelParams, region: SolutionRegion) -> float:
    """Promised wait at the profit-maximising edge of ``region``.

    For BOPS II this is the upper edge of the interval. Profit there beats
    the lower edge only when ``k > (p - c) / 2`` (high margin) or
    ``k > p (3c - p) / 4c`` (low margin); for cheaper wait reduction the
    lower edge, shared with BOPS III, is higher. BOPS III at ``mu_bar = 0``
    beats that lower edge in every case, so the equilibrium is unaffected.
    """
    params.validate()
    if not region.admissible(params):
        cond = "p ≥ 2c" if region in (SolutionRegion.BOPS_I, SolutionRegion.STORE_I) else "c < p < 2c"
        raise RegionInadmissibleError(f"{region.value} requires {cond}")
    if region is SolutionRegion.BOPS_I:
        return params.c_o
    if region is SolutionRegion.BOPS_II:
        return bops_i_floor(params) if params.high_margin else params.c_o
    if region is SolutionRegion.BOPS_III:
        return 0.0
    return params.M


def equilibrium_threshold(params: ModelParams) -> float:
    """Largest wait-reduction cost ``k`` at which full pickup (q = 0, mu_bar = 0) wins."""
    p, c, c_o, M = params.p, params.c, params.c_o, params.M
    if params.high_margin:
        return c_o / M * c
    return (1.0 - p / (4 * c)) * p * c_o / M


def global_equilibrium(params: ModelParams) -> EquilibriumResult:
    """Joint optimum of inventory and promised wait with consistent beliefs.

    Only two outcomes survive: serve everyone by pickup with no stock, or
    give up on wait reduction and stock the store. Ties go to pickup.
    """
    params.validate()
    p, c, c_o, k, M = params.p, params.c, params.c_o, params.k, params.M
    if k <= equilibrium_threshold(params):
        return EquilibriumResult(SolutionRegion.BOPS_III, 0.0, 0.0, 0.0, c_o, p * c_o - k * M)
    if params.high_margin:
        return EquilibriumResult(SolutionRegion.STORE_I, c_o, M, 1.0, c_o, (p - c) * c_o)
    xi = p / (2 * c)
    return EquilibriumResult(SolutionRegion.STORE_II, xi * xi * c_o, M, xi, xi * c_o, p * p / (4 * c) * c_o)


@dataclass(frozen=True)
class VerificationReport:
    consumer_ok: bool
    argmax_ok: bool
    fixed_point_ok: bool
    argmax_gap: float  # grid optimum minus profit at the candidate
    slack: float
    fixed_point_residual: float

    @property
    def passed(self) -> bool:
        return self.consumer_ok and self.argmax_ok and self.fixed_point_ok


FIXED_POINT_TOL = 1e-9


def verify_re_equilibrium(
    params: ModelParams,
    q: float,
    mu_bar: float,
    xi_hat: float,
    grid: oracle.GridSpec | None = None,
) -> VerificationReport:
    """Check a candidate ``(q, mu_bar, xi_hat)`` against the three equilibrium conditions.

    Failures are reported, never raised.
    """
    params.validate()
    grid = grid or oracle.GridSpec.default(params)

    consumer_ok = oracle.choices_match_argmax(params, xi_hat, mu_bar)

    best = oracle.brute_force_optimum(params, grid)
    slack = oracle.grid_slack(params, grid)
    gap = best.profit - profit(params, q, mu_bar)

    d = demand(params, xi_hat, mu_bar)
    if d > 0:
        implied = min(q / d, 1.0)
    else:
        # nobody buys: an empty shelf is consistent, any stock is never exhausted
        implied = 0.0 if q == 0 else 1.0
    residual = abs(xi_hat - implied)
    return VerificationReport(
        consumer_ok=consumer_ok,
        argmax_ok=gap <= slack,
        fixed_point_ok=residual <= FIXED_POINT_TOL,
        argmax_gap=gap,
        slack=slack,
        fixed_point_residual=residual,
    )


def region_of_wait(params: ModelParams, mu_bar: float) -> SolutionRegion:
    """Region of the optimal-stock partition that a given wait falls into."""
    return optimal_q_given_mu(params, mu_bar).region


# --- parameter sweeps -------------------------------------------------------

AXIS_PARAMS = ("p", "c", "c_o", "k", "M", "mu_bar")
INVALID = "invalid"


@dataclass(frozen=True)
class Axis:
    param: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if self.param not in AXIS_PARAMS:
            raise InvalidAxisError(
                f"unsupported axis parameter {self.param!r}; choose from {', '.join(AXIS_PARAMS)}"
            )
        if not isinstance(self.steps, int) or self.steps < 1:
            raise InvalidAxisError(f"steps must be a positive integer, got {self.steps!r}")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InvalidAxisError("axis bounds must be finite")
        if self.steps > 1 and not self.hi > self.lo:
            raise InvalidAxisError("axis needs hi > lo when steps > 1")

    @classmethod
    def parse(cls, spec: str) -> "Axis":
        """Parse ``param:lo:hi:steps``."""
        parts = spec.split(":")
        if len(parts) != 4:
            raise InvalidAxisError(f"axis spec must be param:lo:hi:steps, got {spec!r}")
        try:
            lo, hi, steps = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError:
            raise InvalidAxisError(f"bad number in axis spec {spec!r}") from None
        return cls(parts[0].strip(), lo, hi, steps)

    def values(self) -> list[float]:
        if self.steps == 1:
            return [float(self.lo)]
        step = (self.hi - self.lo) / (self.steps - 1)
        vals = [self.lo + i * step for i in range(self.steps - 1)]
        vals.append(float(self.hi))
        return vals


@dataclass(frozen=True)
class RegionMap:
    x: Axis
    y: Axis
    xs: list[float]
    ys: list[float]
    labels: list[list[str]]  # labels[j][i] is the point (xs[i], ys[j])

    def rows(self):
        for j, y in enumerate(self.ys):
            for i, x in enumerate(self.xs):
                yield x, y, self.labels[j][i]


def _classify(params_base: ModelParams, point: dict[str, float]) -> str:
    mu_bar = point.pop("mu_bar", None)
    if point:
        margin = params_base.v - (params_base.p + params_base.c_o + params_base.M)
        params = params_base.with_values(**point)
        params = params.with_values(v=params.p + params.c_o + params.M + margin)
    else:
        params = params_base
    try:
        params.validate()
        if mu_bar is not None:
            if not 0.0 <= mu_bar <= params.M:
                return INVALID
            return optimal_q_given_mu(params, mu_bar).region.value
        return global_equilibrium(params).region.value
    except InvalidParameterError:
        return INVALID


def region_map(params_base: ModelParams, axis_x: Axis, axis_y: Axis) -> RegionMap:
    """Classify every point of a two-parameter grid.

    With ``mu_bar`` on an axis the wait is held fixed and points are labelled
    by the optimal-stock region; otherwise by the equilibrium region. The
    valuation ``v`` keeps the base scenario's surplus margin as other
    parameters move. Points violating a constraint are labelled ``invalid``.
    """
    if axis_x.param == axis_y.param:
        raise InvalidAxisError("the two axes must sweep different parameters")
    xs, ys = axis_x.values(), axis_y.values()
    labels = [
        [_classify(params_base, {axis_x.param: x, axis_y.param: y}) for x in xs] for y in ys
    ]
    return RegionMap(axis_x, axis_y, xs, ys, labels)
