"""Python interface to the bandit combiner library."""

import json

from . import _core
from ._core import (
    ConfigError,
    PutativeBound,
    alphabound_sup,
    check_target_regret_conditions,
    log_term,
    preset_names,
    target_regrets_experiment,
    target_regrets_from_eta,
)

__version__ = _core.__version__

__all__ = [
    "ConfigError",
    "PutativeBound",
    "alphabound_sup",
    "check_target_regret_conditions",
    "config_hash",
    "log_term",
    "preset",
    "preset_names",
    "run",
    "run_to_dir",
    "target_regrets_experiment",
    "target_regrets_from_eta",
]


def preset(name, alpha_mix=0.0):
    """Return a preset experiment config as a dict."""
    return json.loads(_core.preset_json(name, alpha_mix))


def config_hash(config):
    return _core.config_hash(json.dumps(config))


def run(config):
    """Run an experiment config.

    Returns (cum_regret, metadata): cum_regret maps each policy name to a
    (replications, horizon) array of cumulative pseudo-regret.
    """
    out = _core.run_config(json.dumps(config))
    return dict(out["cum_regret"]), json.loads(out["metadata"])


def run_to_dir(config, out_dir):
    """Run a config and write traces, summary and metadata into out_dir."""
    _core.run_to_dir(json.dumps(config), str(out_dir))
