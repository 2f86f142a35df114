"""Buy-online-pick-up-in-store retail model: consumer choice, equilibrium, simulation."""

from .equilibrium import (
    EquilibriumResult,
    SolutionRegion,
    global_equilibrium,
    local_optimal_mu,
    optimal_q_given_mu,
    region_map,
    verify_re_equilibrium,
)
from .errors import (
    BopsError,
    InvalidAxisError,
    InvalidConfigError,
    InvalidParameterError,
    RegionInadmissibleError,
    ScenarioError,
)
from .inventory import profit, reduction_cost, stock_probability
from .model import Channel, ChannelChoice, ModelParams, bops_gain, choose_channel, demand

__version__ = "0.1.0"
