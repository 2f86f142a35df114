"""Random valid parameter sets shared by several test modules."""

import numpy as np

from bops.equilibrium import equilibrium_threshold
from bops.model import ModelParams


def random_params(rng: np.random.Generator, margin: str | None = None) -> ModelParams:
    """Draw a valid parameter set; ``margin`` forces ``"high"`` (p >= 2c) or ``"low"``."""
    p = rng.uniform(1.0, 20.0)
    if margin == "high":
        ratio = rng.uniform(0.1, 0.5)
    elif margin == "low":
        ratio = rng.uniform(0.51, 0.95)
    else:
        ratio = rng.uniform(0.1, 0.95)
    c = p * ratio
    c_o = rng.uniform(0.5, 8.0)
    M = c_o * rng.uniform(1.05, 3.0)
    partial = ModelParams(p=p, c=c, c_o=c_o, k=0.0, M=M)
    # spread k on both sides of the equilibrium switch
    k = min(equilibrium_threshold(partial) * rng.uniform(0.0, 2.5), 0.999 * p)
    return partial.with_values(k=k).validate()
