"""Self-consistent stock availability and the retailer's profit.

Both functions broadcast over numpy arrays of ``q`` and ``mu_bar`` so the
grid-search oracle can evaluate a whole grid in one call; scalar inputs give
a plain ``float`` back.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError
from .model import ModelParams

# values this close to one are treated as full availability
CLAMP_EPS = 1e-12


def _as_result(x: np.ndarray):
    return float(x) if np.ndim(x) == 0 else x


def _check_stock_args(params: ModelParams, q, mu_bar) -> tuple[np.ndarray, np.ndarray]:
    q = np.asarray(q, dtype=float)
    mu_bar = np.asarray(mu_bar, dtype=float)
    if np.any(~(q >= 0)):
        raise InvalidParameterError("q must be non-negative")
    if np.any(~((mu_bar >= 0) & (mu_bar <= params.M))):
        raise InvalidParameterError(f"mu_bar must lie in [0, M={params.M}]")
    return q, mu_bar


def reduction_cost(params: ModelParams, mu_bar):
    """Cost of promising a worst-case wait of ``mu_bar`` instead of ``M``."""
    mu_bar = np.asarray(mu_bar, dtype=float)
    if np.any(~((mu_bar >= 0) & (mu_bar <= params.M))):
        raise InvalidParameterError(f"mu_bar must lie in [0, M={params.M}]")
    return _as_result(params.k * (params.M - mu_bar))


def _bops_branch(c_o, q, mu_bar):
    # Rationalised root of mu*xi**2 + (c_o - mu)*xi - q = 0; finite at mu = 0.
    gap = c_o - mu_bar
    denom = gap + np.sqrt(gap * gap + 4.0 * mu_bar * q)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(denom > 0, 2.0 * q / np.where(denom > 0, denom, 1.0), 0.0)


def _store_branch(c_o, q):
    return np.sqrt(q / c_o)


def stock_probability(params: ModelParams, q, mu_bar):
    """Probability ``xi`` that a consumer finds the item in stock.

    Solves ``xi = min(q / D(xi), 1)`` where demand ``D`` itself depends on
    ``xi``. ``mu_bar = 0`` is handled by continuity and gives ``q / c_o``.
    """
    params.validate()
    q, mu_bar = _check_stock_args(params, q, mu_bar)
    raw = np.where(
        mu_bar <= params.c_o,
        _bops_branch(params.c_o, q, np.minimum(mu_bar, params.c_o)),
        _store_branch(params.c_o, q),
    )
    return _as_result(np.where(raw > 1.0 - CLAMP_EPS, 1.0, raw))


def profit(params: ModelParams, q, mu_bar):
    """Retailer profit for inventory ``q`` and promised wait ``mu_bar``."""
    xi = np.asarray(stock_probability(params, q, mu_bar))
    q = np.asarray(q, dtype=float)
    mu_bar = np.asarray(mu_bar, dtype=float)
    revenue = np.where(
        mu_bar <= params.c_o,
        params.p * (params.c_o - (1.0 - xi) * mu_bar),
        params.p * xi * params.c_o,
    )
    return _as_result(revenue - params.c * q - params.k * (params.M - mu_bar))
