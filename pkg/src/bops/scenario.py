"""Scenario files: one ``key = value`` per line, ``#`` starts a comment.

Model keys are ``p c c_o k M v`` (``v`` optional). A scenario may also carry
defaults for the grid search (``q_max q_steps mu_steps``) and for the
simulation (``r weeks seed rule replications``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Mapping

from .errors import ScenarioError
from .model import ModelParams

REQUIRED = ("p", "c", "c_o", "k", "M")
MODEL_KEYS = REQUIRED + ("v",)
OVERRIDE_TYPES: dict[str, type] = {
    "q_max": float,
    "q_steps": int,
    "mu_steps": int,
    "r": float,
    "weeks": int,
    "seed": int,
    "rule": str,
    "replications": int,
}


@dataclass(frozen=True)
class Scenario:
    params: ModelParams
    overrides: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "overrides", MappingProxyType(dict(self.overrides)))

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return self.params == other.params and dict(self.overrides) == dict(other.overrides)

    def get(self, key: str, default=None):
        return self.overrides.get(key, default)


def _convert(key: str, raw: str, lineno: int):
    kind = float if key in MODEL_KEYS else OVERRIDE_TYPES[key]
    if kind is str:
        if not raw:
            raise ScenarioError(f"empty value for {key}", lineno)
        return raw
    try:
        return kind(raw)
    except ValueError:
        what = "an integer" if kind is int else "a number"
        raise ScenarioError(f"{key} must be {what}, got {raw!r}", lineno) from None


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document.

    Raises :class:`ScenarioError` (with a line number where one applies) on
    malformed input and :class:`InvalidParameterError` when the parameters
    break a model constraint.
    """
    values: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"expected 'key = value', got {line!r}", lineno)
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in MODEL_KEYS and key not in OVERRIDE_TYPES:
            raise ScenarioError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ScenarioError(f"duplicate key {key!r}", lineno)
        values[key] = _convert(key, raw, lineno)

    missing = [k for k in REQUIRED if k not in values]
    if missing:
        raise ScenarioError(f"missing required key(s): {', '.join(missing)}")
    params = ModelParams(**{k: values.pop(k) for k in MODEL_KEYS if k in values})
    params.validate()
    return Scenario(params, values)


def _fmt(value) -> str:
    return repr(float(value)) if isinstance(value, float) else str(value)


def render_scenario(scenario: Scenario) -> str:
    """Inverse of :func:`parse_scenario`; ``v`` is always written out."""
    lines = [f"{k} = {_fmt(getattr(scenario.params, k))}" for k in MODEL_KEYS]
    lines += [f"{k} = {_fmt(v)}" for k, v in scenario.overrides.items()]
    return "\n".join(lines) + "\n"
