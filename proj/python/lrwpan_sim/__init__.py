"""Beacon-enabled IEEE 802.15.4 star network simulator."""

from ._core import (
    SYMBOL_RATE,
    ConfigError,
    Counters,
    GtsDescriptor,
    GtsDirection,
    GtsTable,
    InvalidConfig,
    SuperframeConfig,
    airtime,
    collision_rate,
    duty_cycle,
    format_seconds,
    packet_delivery_ratio,
    parse_config,
    run_config,
    simulate,
    superframe_timeline,
    throughput,
)

__all__ = [
    "SYMBOL_RATE",
    "ConfigError",
    "Counters",
    "GtsDescriptor",
    "GtsDirection",
    "GtsTable",
    "InvalidConfig",
    "SuperframeConfig",
    "airtime",
    "collision_rate",
    "duty_cycle",
    "format_seconds",
    "packet_delivery_ratio",
    "parse_config",
    "run_config",
    "simulate",
    "superframe_timeline",
    "throughput",
]
