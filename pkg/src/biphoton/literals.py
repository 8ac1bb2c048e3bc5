"""Parsing of state literals, mode literals and experiment files.

State literal forms (mappings, as loaded from JSON or YAML)::

    {"c": [[re, im], [re, im], [re, im]]}
    {"modes": [{"theta": t, "phi": p}, {"theta": t, "phi": p}]}
    {"named": "HV"}

Experiment file sections: ``state``, ``tuning`` (two mode literals),
optional ``source`` and optional ``montecarlo``. Exactly one of ``state``
or ``source`` supplies the input biphoton.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

import yaml

from .braun_twiss import DetectorTuning
from .errors import ConfigError, NormalizationError
from .montecarlo import ExperimentConfig
from .qutrit import (
    BiphotonState,
    PolarizationMode,
    from_modes,
    named_mode,
    split_state_name,
    standard_state,
)
from .source import ArmSetting, BasisState, SourceConfig, emit

# loaded amplitudes may be off unit norm by this much before rejection
LOAD_TOLERANCE = 1e-6


def _check_keys(data: dict, allowed: set[str], where: str):
    for key in data:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in {where}")


def amplitudes_to_state(c: list[complex]) -> BiphotonState:
    if len(c) != 3:
        raise ConfigError(f"expected 3 amplitudes, got {len(c)}")
    norm2 = sum(abs(x) ** 2 for x in c)
    if abs(norm2 - 1) > LOAD_TOLERANCE:
        raise NormalizationError(f"amplitudes have squared norm {norm2:.9g}, expected 1")
    return BiphotonState.normalized(*c)


def parse_mode(value: Any) -> PolarizationMode:
    if isinstance(value, str):
        return named_mode(value)
    if isinstance(value, dict):
        _check_keys(value, {"theta", "phi"}, "mode literal")
        try:
            return PolarizationMode(float(value["theta"]), float(value.get("phi", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad mode literal {value!r}: {exc}") from None
    raise ConfigError(f"bad mode literal {value!r}")


def parse_state(value: Any) -> BiphotonState:
    """State from a literal mapping or a bare name string."""
    if isinstance(value, str):
        return standard_state(value)
    if not isinstance(value, dict) or len(value) != 1:
        raise ConfigError("state literal must have exactly one of 'c', 'modes', 'named'")
    _check_keys(value, {"c", "modes", "named"}, "state literal")
    (kind, body), = value.items()
    if kind == "named":
        return standard_state(str(body))
    if kind == "modes":
        if not isinstance(body, list) or len(body) != 2:
            raise ConfigError("'modes' needs exactly two mode literals")
        return from_modes(parse_mode(body[0]), parse_mode(body[1]))
    try:
        c = [complex(float(re), float(im)) for re, im in body]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"'c' must be three [re, im] pairs: {exc}") from None
    return amplitudes_to_state(c)


def parse_tuning(value: Any) -> DetectorTuning:
    if isinstance(value, str):
        return tuning_from_text(value)
    if not isinstance(value, list) or len(value) != 2:
        raise ConfigError("tuning must be a list of two mode literals")
    return DetectorTuning(parse_mode(value[0]), parse_mode(value[1]))


def _basis_state(value: Any) -> BasisState:
    if isinstance(value, str) and value in BasisState.__members__:
        return BasisState[value]
    # YAML reads 20/11/02 as integers
    text = f"{value:02d}" if isinstance(value, int) else str(value).strip("|<> ").replace(",", "")
    return BasisState(text)


def parse_source(value: Any) -> SourceConfig:
    if not isinstance(value, dict):
        raise ConfigError("source must be a mapping with an 'arms' list")
    _check_keys(value, {"arms"}, "source")
    arms = []
    for arm in value.get("arms", []):
        _check_keys(arm, {"pump_amplitude", "phase", "basis_state"}, "source arm")
        try:
            arms.append(ArmSetting(float(arm["pump_amplitude"]), float(arm.get("phase", 0.0)),
                                   _basis_state(arm["basis_state"])))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad source arm {arm!r}: {exc}") from None
    return SourceConfig(tuple(arms))


def state_from_text(text: str) -> BiphotonState:
    """Command-line state: a name (``HV``, ``D,Db``), ``modes X Y`` or a YAML/JSON literal."""
    text = text.strip()
    if text.startswith("{"):
        return parse_state(yaml.safe_load(text))
    if text.startswith("modes"):
        parts = text.split()[1:]
        if len(parts) != 2:
            raise ConfigError("'modes' needs two mode names, e.g. 'modes H D'")
        return from_modes(named_mode(parts[0]), named_mode(parts[1]))
    return standard_state(text)


def state_from_angles(text: str) -> BiphotonState:
    """``theta1,phi1,theta2,phi2`` in radians."""
    try:
        t1, p1, t2, p2 = (float(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"expected theta1,phi1,theta2,phi2, got {text!r}") from None
    return from_modes(PolarizationMode(t1, p1), PolarizationMode(t2, p2))


def state_from_amplitudes(text: str) -> BiphotonState:
    """``re,im;re,im;re,im``."""
    try:
        c = [complex(*(float(x) for x in part.split(","))) for part in text.split(";")]
    except (TypeError, ValueError):
        raise ConfigError(f"expected re,im;re,im;re,im, got {text!r}") from None
    return amplitudes_to_state(c)


def tuning_from_text(text: str) -> DetectorTuning:
    a, b = split_state_name(text)
    return DetectorTuning(named_mode(a), named_mode(b))


def load_experiment(path: str | Path) -> tuple[BiphotonState, DetectorTuning, ExperimentConfig]:
    """Read an experiment file (YAML or JSON)."""
    try:
        data = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read experiment file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("experiment file must be a mapping")
    _check_keys(data, {"state", "tuning", "source", "montecarlo"}, "experiment file")
    if ("state" in data) == ("source" in data):
        raise ConfigError("experiment file needs exactly one of 'state' or 'source'")
    if "tuning" not in data:
        raise ConfigError("experiment file is missing 'tuning'")
    state = parse_state(data["state"]) if "state" in data else emit(parse_source(data["source"]))
    tuning = parse_tuning(data["tuning"])
    mc = data.get("montecarlo") or {}
    if not isinstance(mc, dict):
        raise ConfigError("'montecarlo' must be a mapping")
    return state, tuning, ExperimentConfig.from_dict(mc)

