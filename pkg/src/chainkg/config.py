"""Run configuration: built-in defaults, JSON config file, flag overrides.

Unknown keys anywhere in the file are rejected so typos fail fast.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from chainkg.errors import ConfigError

DEFAULTS: dict = {
    "base_namespace": "http://chainkg.local/",
    "tx": {
        "proceeds_threshold": 0.9,
    },
    "text": {
        "launch_keywords": ["mint", "launch", "live", "drop"],
    },
    "resolution": {
        "match_threshold": 0.8,
        "property_weight": 0.5,
        "deposit_forward_fraction": 0.99,
        "block_cap": 256,
    },
    "risk": {
        "hop_limit": 2,
        "flagged_peers_threshold": 2,
    },
    "ingest": {
        "social_filters": [],
        "attribution_interval": 0.0,
    },
    "enrich": {
        "retry_attempts": 3,
    },
}


@dataclass(frozen=True)
class Config:
    base_namespace: str
    proceeds_threshold: Fraction
    launch_keywords: tuple[str, ...]
    match_threshold: float
    property_weight: float
    deposit_forward_fraction: Fraction
    block_cap: int
    risk_hop_limit: int
    risk_flagged_peers: int
    social_filters: tuple[str, ...]
    attribution_interval: float
    enrich_retry_attempts: int


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> Config:
    """Merge defaults <- config file <- overrides, validating every key."""
    merged = json.loads(json.dumps(DEFAULTS))  # deep copy
    if path is not None:
        try:
            file_data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path}: {exc}") from None
        except OSError as exc:
            raise ConfigError(f"config {path}: {exc}") from None
        _merge(merged, file_data, DEFAULTS, "")
    if overrides:
        _merge(merged, overrides, DEFAULTS, "")
    return _build(merged)


def _merge(target: dict, source: dict, schema: dict, prefix: str) -> None:
    if not isinstance(source, dict):
        raise ConfigError(f"config section {prefix or '<root>'} must be an object")
    for key, value in source.items():
        if key not in schema:
            raise ConfigError(f"unknown config key: {prefix}{key}")
        if isinstance(schema[key], dict):
            _merge(target[key], value, schema[key], f"{prefix}{key}.")
        else:
            target[key] = value


def _fraction(value, key: str) -> Fraction:
    try:
        fraction = Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{key} must be a number") from None
    if not 0 <= fraction <= 1:
        raise ConfigError(f"{key} must lie in [0, 1]")
    return fraction


def _build(data: dict) -> Config:
    weight = float(data["resolution"]["property_weight"])
    if not 0.0 <= weight <= 1.0:
        raise ConfigError("resolution.property_weight must lie in [0, 1]")
    return Config(
        base_namespace=str(data["base_namespace"]),
        proceeds_threshold=_fraction(data["tx"]["proceeds_threshold"], "tx.proceeds_threshold"),
        launch_keywords=tuple(str(k).lower() for k in data["text"]["launch_keywords"]),
        match_threshold=float(data["resolution"]["match_threshold"]),
        property_weight=weight,
        deposit_forward_fraction=_fraction(
            data["resolution"]["deposit_forward_fraction"], "resolution.deposit_forward_fraction"
        ),
        block_cap=int(data["resolution"]["block_cap"]),
        risk_hop_limit=int(data["risk"]["hop_limit"]),
        risk_flagged_peers=int(data["risk"]["flagged_peers_threshold"]),
        social_filters=tuple(str(f) for f in data["ingest"]["social_filters"]),
        attribution_interval=float(data["ingest"]["attribution_interval"]),
        enrich_retry_attempts=int(data["enrich"]["retry_attempts"]),
    )
