"""Scenario files: TOML parsing, validation, presets, and digests.

A scenario file has a ``[system]`` table mirroring the system-geometry
fields, an optional ``[reference]`` table for the reference waveform
bandwidth, and an array of ``[[sources]]`` tables with ranges in meters,
angles in degrees, and powers in dB.  Exactly one source must have kind
``target``.  Unknown keys are rejected with their full path so typos
surface instead of silently using defaults.
"""
from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

if sys.version_info >= (3, 11):  # pragma: no cover - version shim
    import tomllib
else:  # pragma: no cover - version shim
    import tomli as tomllib

from .signal_model import Source, SourceSet, SystemConfig

__all__ = [
    "ConfigError",
    "Scenario",
    "load_scenario",
    "parse_scenario",
    "config_digest",
    "preset_path",
]

_SYSTEM_KEYS = {
    "n_tx", "n_rx", "carrier_hz", "freq_step_hz", "d_tx_m", "d_rx_m",
    "pulse_s", "sample_hz", "n_window", "window_start_m", "lpf_cutoff_hz",
    "band_energy_floor",
}
_REFERENCE_KEYS = {"bandwidth_hz"}
_SOURCE_KEYS = {"kind", "range_m", "angle_deg", "power_db"}


class ConfigError(Exception):
    """Scenario file rejected; the message names the offending field."""


@dataclass(frozen=True)
class Scenario:
    """Parsed scenario: geometry, sources, and reference bandwidth."""

    cfg: SystemConfig
    sources: SourceSet
    reference_bandwidth_hz: float
    raw: Dict[str, Any]


def preset_path(name: str) -> Path:
    """Path of a bundled scenario preset (name without extension)."""
    root = resources.files("fda_waveopt.presets")
    candidate = root / f"{name}.toml"
    if not candidate.is_file():
        raise ConfigError(f"unknown preset '{name}'")
    return Path(str(candidate))


def config_digest(raw: Dict[str, Any]) -> str:
    """Content digest of a parsed scenario, stable under key reordering."""
    blob = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _require_table(raw: Dict[str, Any], name: str) -> Dict[str, Any]:
    table = raw.get(name)
    if not isinstance(table, dict):
        raise ConfigError(f"missing [{name}] table")
    return table


def _check_keys(table: Dict[str, Any], allowed: set, where: str) -> None:
    for key in table:
        if key not in allowed:
            raise ConfigError(f"unknown key '{where}.{key}'")


def _number(table: Dict[str, Any], key: str, where: str,
            integer: bool = False) -> Union[int, float]:
    if key not in table:
        raise ConfigError(f"missing '{where}.{key}'")
    value = table[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{where}.{key}' must be a number")
    if integer:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"'{where}.{key}' must be an integer")
        return int(value)
    return float(value)


def parse_scenario(raw: Dict[str, Any]) -> Scenario:
    """Validate a parsed TOML mapping and build the domain objects."""
    if not isinstance(raw, dict):
        raise ConfigError("scenario root must be a table")
    for key in raw:
        if key not in ("system", "reference", "sources"):
            raise ConfigError(f"unknown top-level table '{key}'")

    system = _require_table(raw, "system")
    _check_keys(system, _SYSTEM_KEYS, "system")
    kwargs = {}
    for key in ("n_tx", "n_rx", "n_window"):
        kwargs[key] = _number(system, key, "system", integer=True)
    for key in ("carrier_hz", "freq_step_hz", "d_tx_m", "d_rx_m", "pulse_s",
                "sample_hz", "window_start_m"):
        kwargs[key] = _number(system, key, "system")
    for key in ("lpf_cutoff_hz", "band_energy_floor"):
        value = system.get(key)
        if isinstance(value, list):
            if not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                       for v in value):
                raise ConfigError(f"'system.{key}' entries must be numbers")
            kwargs[key] = tuple(float(v) for v in value)
        else:
            kwargs[key] = _number(system, key, "system")
    try:
        cfg = SystemConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"invalid [system] table: {exc}") from exc

    reference = raw.get("reference", {})
    if not isinstance(reference, dict):
        raise ConfigError("[reference] must be a table")
    _check_keys(reference, _REFERENCE_KEYS, "reference")
    bandwidth = float(reference.get("bandwidth_hz", 900.0e3))
    if bandwidth <= 0 or bandwidth > min(cfg.lpf_cutoff_hz):
        raise ConfigError("'reference.bandwidth_hz' must lie in (0, min "
                          "low-pass cutoff]")

    entries = raw.get("sources")
    if not isinstance(entries, list) or not entries:
        raise ConfigError("need at least one [[sources]] entry")
    sources = []
    for idx, entry in enumerate(entries):
        where = f"sources[{idx}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{where} must be a table")
        _check_keys(entry, _SOURCE_KEYS, where)
        kind = entry.get("kind")
        if kind not in ("target", "interference"):
            raise ConfigError(f"'{where}.kind' must be 'target' or "
                              "'interference'")
        src = Source(
            range_m=_number(entry, "range_m", where),
            angle_rad=float(np.deg2rad(_number(entry, "angle_deg", where))),
            power_db=_number(entry, "power_db", where),
            kind=kind,
        )
        sources.append(src)
    try:
        source_set = SourceSet.from_list(sources)
    except ValueError as exc:
        raise ConfigError(f"invalid [[sources]]: {exc}") from exc

    return Scenario(cfg=cfg, sources=source_set,
                    reference_bandwidth_hz=bandwidth, raw=raw)


def load_scenario(path_or_preset: Union[str, Path]) -> Scenario:
    """Load a scenario from a file path or a bundled preset name."""
    path = Path(path_or_preset)
    if not path.is_file() and not str(path_or_preset).endswith(".toml"):
        path = preset_path(str(path_or_preset))
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"scenario file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"scenario file does not parse: {exc}") from exc
    return parse_scenario(raw)
