"""Consumer side of the model: parameters, utilities, channel choice and demand.

Consumers are spread over travel cost ``t`` in ``[0, inf)`` with density one.
Each one picks among buying online, ordering for in-store pickup (BOPS), or
walking into the store, given a belief ``xi_hat`` that the item is in stock
and the retailer's announced worst-case wait ``mu_bar``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidParameterError


@dataclass(frozen=True)
class ModelParams:
    """Exogenous scalars of the model.

    ``v`` defaults to ``p + c_o + M``, the smallest valuation at which every
    channel leaves every buying consumer with non-negative surplus.

    Construction does not validate; call :meth:`validate` (the solvers do).
    The utility formulas are plain algebra and accept any numbers.
    """

    p: float
    c: float
    c_o: float
    k: float
    M: float
    v: float | None = field(default=None)

    def __post_init__(self):
        for name in ("p", "c", "c_o", "k", "M"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.v is None:
            object.__setattr__(self, "v", self.p + self.c_o + self.M)
        else:
            object.__setattr__(self, "v", float(self.v))

    def validate(self) -> "ModelParams":
        """Raise :class:`InvalidParameterError` naming the first violated constraint."""
        for name in ("p", "c", "c_o", "k", "M", "v"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")
        if not self.c > 0:
            raise InvalidParameterError("c must satisfy c > 0")
        if not self.p > self.c:
            raise InvalidParameterError("p must satisfy p > c")
        if not 0 <= self.k < self.p:
            raise InvalidParameterError("k must satisfy 0 ≤ k < p")
        if not self.c_o > 0:
            raise InvalidParameterError("c_o must satisfy c_o > 0")
        if not self.M > self.c_o:
            raise InvalidParameterError("M must satisfy M > c_o")
        # same summation order as the default, so the default always passes
        if not self.v >= self.p + self.c_o + self.M:
            raise InvalidParameterError("v must satisfy v - p ≥ c_o + M")
        return self

    @property
    def high_margin(self) -> bool:
        """True when ``p >= 2c``; the knife edge ``p == 2c`` counts as high."""
        return self.p >= 2 * self.c

    def with_values(self, **changes: float) -> "ModelParams":
        return replace(self, **changes)


class Channel(enum.Enum):
    BOPS = "BOPS"
    STORE = "Store"
    ONLINE = "Online"


class Fallback(enum.Enum):
    """What a store visitor does after finding the shelf empty."""

    ONLINE = "Online"
    BOPS_WAIT = "BopsWait"
    NONE = "None"


@dataclass(frozen=True)
class ChannelChoice:
    channel: Channel
    fallback_after_stockout: Fallback = Fallback.NONE

    def __post_init__(self):
        if self.channel is not Channel.STORE and self.fallback_after_stockout is not Fallback.NONE:
            raise InvalidParameterError("only store visitors have a stockout fallback")


def _check_belief(xi_hat: float) -> None:
    if not 0.0 <= xi_hat <= 1.0:
        raise InvalidParameterError(f"xi_hat must lie in [0, 1], got {xi_hat!r}")


def _check_travel(t: float) -> None:
    if not t >= 0.0:
        raise InvalidParameterError(f"t must be non-negative, got {t!r}")


def _check_wait(params: ModelParams, mu_bar: float) -> None:
    if not 0.0 <= mu_bar <= params.M:
        raise InvalidParameterError(f"mu_bar must lie in [0, M={params.M}], got {mu_bar!r}")


def realized_wait(mu_bar: float, in_stock: bool) -> float:
    """Waiting disutility actually suffered by a BOPS user."""
    return 0.0 if in_stock else mu_bar


def utility_bops(params: ModelParams, xi_hat: float, t: float, mu_bar: float) -> float:
    _check_belief(xi_hat)
    _check_travel(t)
    _check_wait(params, mu_bar)
    return params.v - params.p - t - (1.0 - xi_hat) * mu_bar


def utility_online(params: ModelParams) -> float:
    return params.v - params.p - params.c_o


def utility_bops_after_stockout(params: ModelParams, t: float, mu_bar: float) -> float:
    """Utility of a store visitor who finds a stockout and then orders for pickup."""
    _check_travel(t)
    return params.v - params.p - t - mu_bar


def utility_store(params: ModelParams, xi_hat: float, t: float, mu_bar: float) -> float:
    """Expected utility of walking into the store without ordering ahead.

    On a stockout the visitor takes the better of buying online and
    ordering for pickup, having already paid the trip.
    """
    _check_belief(xi_hat)
    _check_travel(t)
    fallback = max(utility_online(params), utility_bops_after_stockout(params, t, mu_bar))
    return -t + xi_hat * (params.v - params.p) + (1.0 - xi_hat) * fallback


def store_fallback(params: ModelParams, t: float, mu_bar: float) -> Fallback:
    if utility_online(params) >= utility_bops_after_stockout(params, t, mu_bar):
        return Fallback.ONLINE
    return Fallback.BOPS_WAIT


# utilities this close (relative to v) count as a tie, so a consumer
# exactly on a cutoff is not decided by rounding in the last bit
TIE_RTOL = 1e-12


def tie_tolerance(params: ModelParams) -> float:
    return TIE_RTOL * max(1.0, abs(params.v))


def bops_cutoff(params: ModelParams, xi_hat: float, mu_bar: float) -> float:
    """Largest travel cost at which a consumer still buys from the retailer."""
    if mu_bar <= params.c_o:
        return params.c_o - (1.0 - xi_hat) * mu_bar
    return xi_hat * params.c_o


def choose_channel(params: ModelParams, xi_hat: float, t: float, mu_bar: float) -> ChannelChoice:
    """Closed-form channel choice.

    With ``mu_bar <= c_o`` everyone within the cutoff orders ahead; above
    ``c_o`` ordering ahead is never worth it and close consumers walk in
    instead. Indifferent consumers at a cutoff (to within
    :func:`tie_tolerance`) buy from the retailer. A consumer certain of a
    stockout never walks in.
    """
    _check_belief(xi_hat)
    _check_travel(t)
    _check_wait(params, mu_bar)
    cutoff = bops_cutoff(params, xi_hat, mu_bar) + tie_tolerance(params)
    if mu_bar <= params.c_o:
        if t <= cutoff:
            return ChannelChoice(Channel.BOPS)
        return ChannelChoice(Channel.ONLINE)
    if xi_hat > 0.0 and t <= cutoff:
        return ChannelChoice(Channel.STORE, store_fallback(params, t, mu_bar))
    return ChannelChoice(Channel.ONLINE)


# integer codes used by the array form
BOPS_CODE, STORE_CODE, ONLINE_CODE = 0, 1, 2


def choose_channels(params: ModelParams, xi_hat: float, t, mu_bar: float) -> np.ndarray:
    """Array form of :func:`choose_channel` over travel costs ``t``.

    Returns integer codes ``BOPS_CODE``, ``STORE_CODE`` or ``ONLINE_CODE``.
    """
    _check_belief(xi_hat)
    _check_wait(params, mu_bar)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise InvalidParameterError("t must be non-negative")
    within = t <= bops_cutoff(params, xi_hat, mu_bar) + tie_tolerance(params)
    if mu_bar <= params.c_o:
        return np.where(within, BOPS_CODE, ONLINE_CODE)
    if xi_hat == 0.0:
        return np.full(t.shape, ONLINE_CODE)
    return np.where(within, STORE_CODE, ONLINE_CODE)


def demand(params: ModelParams, xi_hat: float, mu_bar: float) -> float:
    """Mass of consumers buying from the retailer (by pickup or in store)."""
    _check_belief(xi_hat)
    _check_wait(params, mu_bar)
    if mu_bar <= params.c_o:
        return params.c_o - (1.0 - xi_hat) * mu_bar
    return xi_hat * params.c_o


def bops_gain(params: ModelParams, xi_hat: float) -> float:
    """Consumers won from online sellers by offering pickup, integrated over ``mu_bar``.

    Without pickup only consumers with ``t <= xi_hat * c_o`` come to the
    store, whatever the wait; the gain is the triangle between that line
    and the pickup cutoff over ``0 <= mu_bar <= c_o``.
    """
    _check_belief(xi_hat)
    return (1.0 - xi_hat) * params.c_o**2 / 2.0
