"""Collision-aware topology co-design of moving parts."""

from ._core import (
    ConfigError,
    FeaError,
    initial_collision,
    run,
    run_scenario,
    scenario_config,
    scenario_names,
    spearman,
    uniaxial_tsf,
)

__all__ = [
    "ConfigError",
    "FeaError",
    "initial_collision",
    "run",
    "run_scenario",
    "scenario_config",
    "scenario_names",
    "spearman",
    "uniaxial_tsf",
]
