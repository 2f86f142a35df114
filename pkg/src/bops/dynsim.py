"""Two-store weekly fulfillment simulation.

Each week a store either stocks up (``S``: wait ``M``, stock ``c_o``) or
serves everything by pickup from the partner's leftovers (``B``: wait 0,
no stock). A store switches to ``B`` for a week exactly when its partner
ended the previous week with usable leftovers.

Randomness comes from numpy's Philox counter-based generator keyed by the
replication seed. Each week consumes exactly two raw 64-bit words, store 0
first, whether or not they are needed, so draw ``2 * week + store`` of a
replication never depends on what happened earlier.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigError

U64 = 2**64
STORES = 2


class LeftoverRule(enum.Enum):
    LEFTOVER_FROM_STORE = "leftover-from-store"
    """Only a stocked (S) store can have leftovers."""
    INDEPENDENT_WEEKLY = "independent-weekly"
    """Leftovers appear with probability r regardless of regime."""

    @classmethod
    def parse(cls, name: str) -> "LeftoverRule":
        """Accept ``leftover-from-store``, ``LeftoverFromStore`` and similar spellings."""
        key = name.strip().lower().replace("_", "").replace("-", "")
        for rule in cls:
            if key == rule.value.replace("-", ""):
                return rule
        raise InvalidConfigError(f"unknown rule {name!r}; use one of {[r.value for r in cls]}")


class Regime(enum.Enum):
    S = "S"
    B = "B"


@dataclass(frozen=True)
class SimConfig:
    r: float
    weeks: int = 20
    seed: int = 0
    rule: LeftoverRule = LeftoverRule.LEFTOVER_FROM_STORE
    replications: int = 1

    def __post_init__(self):
        if not (isinstance(self.r, (int, float)) and 0.0 <= self.r <= 1.0):
            raise InvalidConfigError(f"r must lie in [0, 1], got {self.r!r}")
        if not isinstance(self.weeks, int) or self.weeks < 1:
            raise InvalidConfigError(f"weeks must be an integer >= 1, got {self.weeks!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < U64:
            raise InvalidConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not isinstance(self.replications, int) or self.replications < 1:
            raise InvalidConfigError(f"replications must be an integer >= 1, got {self.replications!r}")
        if not isinstance(self.rule, LeftoverRule):
            raise InvalidConfigError(f"rule must be a LeftoverRule, got {self.rule!r}")


@dataclass(frozen=True)
class WeekRecord:
    week: int
    regime: tuple[Regime, Regime]
    leftover: tuple[bool, bool]


@dataclass(frozen=True)
class SimTimeline:
    records: tuple[WeekRecord, ...]
    b_fraction: tuple[float, float]  # over weeks 1..W-1; week 0 is always S

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["week", "store0", "store1"])
        for rec in self.records:
            writer.writerow([rec.week, rec.regime[0].value, rec.regime[1].value])
        return buf.getvalue()


def uniforms(seed: int, weeks: int) -> np.ndarray:
    """Uniform draws in [0, 1), shaped ``(weeks, 2)``, for one replication."""
    gen = np.random.Philox(key=seed % U64)
    raw = gen.random_raw(weeks * STORES)
    # top 53 bits -> double in [0, 1)
    return ((raw >> np.uint64(11)).astype(np.float64) * 2.0**-53).reshape(weeks, STORES)


def _run(r: float, weeks: int, rule: LeftoverRule, draws: np.ndarray):
    regimes = np.zeros((weeks, STORES), dtype=bool)  # True means B
    leftover = np.zeros((weeks, STORES), dtype=bool)
    for w in range(weeks):
        if w > 0:
            # a store goes B when its partner had leftovers last week
            regimes[w] = leftover[w - 1, ::-1]
        hit = draws[w] < r
        if rule is LeftoverRule.LEFTOVER_FROM_STORE:
            hit &= ~regimes[w]
        leftover[w] = hit
    return regimes, leftover


def _b_fraction(regimes: np.ndarray) -> tuple[float, float]:
    later = regimes[1:]
    if len(later) == 0:
        return (0.0, 0.0)
    frac = later.mean(axis=0)
    return (float(frac[0]), float(frac[1]))


def simulate(config: SimConfig) -> SimTimeline:
    """One replication, driven by ``config.seed``."""
    draws = uniforms(config.seed, config.weeks)
    regimes, leftover = _run(config.r, config.weeks, config.rule, draws)
    records = tuple(
        WeekRecord(
            week=w,
            regime=tuple(Regime.B if b else Regime.S for b in regimes[w]),
            leftover=(bool(leftover[w, 0]), bool(leftover[w, 1])),
        )
        for w in range(config.weeks)
    )
    return SimTimeline(records, _b_fraction(regimes))


@dataclass(frozen=True)
class ReplicationStats:
    r: float
    rule: LeftoverRule
    weeks: int
    replications: int
    mean_b_fraction: float
    std_error: float
    per_store_mean: tuple[float, float]

    def confidence_interval(self, z: float = 2.5758293035489004) -> tuple[float, float]:
        """Normal-approximation interval; the default ``z`` gives 99%."""
        return (self.mean_b_fraction - z * self.std_error, self.mean_b_fraction + z * self.std_error)

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "rule": self.rule.value,
            "weeks": self.weeks,
            "replications": self.replications,
            "mean_b_fraction": self.mean_b_fraction,
            "std_error": self.std_error,
        }


def replicate_stats(config: SimConfig) -> ReplicationStats:
    """Mean and standard error of the pooled B-fraction across replications.

    Replication ``i`` uses seed ``config.seed + i`` (mod 2**64). The pooled
    fraction of a replication averages both stores.
    """
    if config.replications < 2:
        raise InvalidConfigError("replicate_stats needs at least 2 replications")
    per_rep = np.empty((config.replications, STORES))
    for i in range(config.replications):
        draws = uniforms((config.seed + i) % U64, config.weeks)
        regimes, _ = _run(config.r, config.weeks, config.rule, draws)
        per_rep[i] = _b_fraction(regimes)
    pooled = per_rep.mean(axis=1)
    # math.fsum keeps the reduction order-independent
    mean = math.fsum(pooled) / len(pooled)
    var = math.fsum((x - mean) ** 2 for x in pooled) / (len(pooled) - 1)
    store_means = tuple(math.fsum(per_rep[:, s]) / len(pooled) for s in range(STORES))
    return ReplicationStats(
        r=config.r,
        rule=config.rule,
        weeks=config.weeks,
        replications=config.replications,
        mean_b_fraction=mean,
        std_error=math.sqrt(var / len(pooled)),
        per_store_mean=store_means,
    )


def r_table(config: SimConfig, rs) -> list[ReplicationStats]:
    """:func:`replicate_stats` at each leftover probability in ``rs``, same seeds throughout."""
    out = []
    for r in rs:
        out.append(replicate_stats(SimConfig(float(r), config.weeks, config.seed, config.rule, config.replications)))
    return out
