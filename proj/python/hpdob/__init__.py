"""Discrete-time disturbance observers for a second-order servo."""

import json

from . import _core
from ._core import (
    ConfigError,
    DiscreteModel,
    ObserverGain,
    ServoParams,
    contraction_factor,
    continuous_A,
    delta_estimate,
    discretize,
    matrix_exp_oracle,
    sweep_parameters,
    tune_gain,
    validate,
)


def _text(config):
    if config is None:
        return "{}"
    if isinstance(config, str):
        return config
    return json.dumps(config)


def resolve_config(config=None):
    """Return the fully resolved configuration dict."""
    return json.loads(_core.resolve_config(_text(config)))


def run(config=None):
    """Simulate one scenario.

    Returns a dict with ``trace`` (column name -> numpy array), ``metrics``,
    ``Ts`` and ``diverged``.
    """
    return _core.run(_text(config))


def sweep(config, parameter, values):
    return _core.sweep(_text(config), parameter, list(values))


__all__ = [
    "ConfigError",
    "DiscreteModel",
    "ObserverGain",
    "ServoParams",
    "contraction_factor",
    "continuous_A",
    "delta_estimate",
    "discretize",
    "matrix_exp_oracle",
    "resolve_config",
    "run",
    "sweep",
    "sweep_parameters",
    "tune_gain",
    "validate",
]
