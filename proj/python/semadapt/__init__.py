"""Latency-aware semantic adaptation simulator and constrained PPO experiments."""

from ._semadapt import (
    Action,
    ConfigError,
    Environment,
    LatencyComponents,
    PredictorMode,
    Primitive,
    available_window,
    cli,
    config_hash,
    default_config,
    dual_update,
    gae,
    nominal_latency,
    run,
    slack_and_debt,
    slot_timing,
    summarize,
    validate_config,
)

__version__ = "0.3.0"
