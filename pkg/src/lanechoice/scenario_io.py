"""Scenario-file ingestion: schema-validated JSON documents describing a
problem instance. The schema ships with the package as
``scenario.schema.json``."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Dict, Union

import jsonschema

from .model import (
    BPRDelay,
    CommuterDemand,
    HeadwayRatio,
    OccupancyProfile,
    Scenario,
    TollVector,
    UniformToll,
    VehicleClass,
)


class ScenarioFormatError(ValueError):
    """A scenario document failed schema or invariant validation."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        prefix = f"at {location}: " if location else ""
        super().__init__(f"invalid scenario: {prefix}{message}")


def _load_schema() -> Dict[str, Any]:
    text = resources.files("lanechoice").joinpath("scenario.schema.json").read_text("utf-8")
    return json.loads(text)


_SCHEMA = _load_schema()
_VALIDATOR = jsonschema.Draft202012Validator(_SCHEMA)

_CLASS_KEYS = {
    "hv_lo": VehicleClass.HV_LO,
    "hv_ho": VehicleClass.HV_HO,
    "av_lo": VehicleClass.AV_LO,
    "av_ho": VehicleClass.AV_HO,
}


def _reject_constant(token: str):
    raise ScenarioFormatError(f"non-finite number {token!r} is not allowed")


def scenario_from_dict(obj: Dict[str, Any]) -> Scenario:
    """Validate a parsed scenario document and build the domain objects."""
    errors = sorted(_VALIDATOR.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        location = ".".join(str(part) for part in err.absolute_path)
        raise ScenarioFormatError(err.message, location)
    try:
        demand = CommuterDemand({_CLASS_KEYS[k]: v for k, v in obj["demands"].items()})
        occupancy = OccupancyProfile(n_lo=obj["occupancy"]["n_lo"], n_ho=obj["occupancy"]["n_ho"])
        headway = HeadwayRatio(mu=obj["mu"])
        delays = tuple(
            BPRDelay(theta=d["theta"], gamma=d["gamma"], beta=d["beta"], capacity=d["capacity"])
            for d in obj["delays"]
        )
        raw_toll = obj["toll"]
        if isinstance(raw_toll, dict):
            toll = TollVector({_CLASS_KEYS[k]: v for k, v in raw_toll.items()})
        else:
            toll = UniformToll(float(raw_toll))
        misbehavior = {_CLASS_KEYS[k]: v for k, v in obj.get("misbehavior", {}).items()}
        return Scenario(
            demand=demand,
            occupancy=occupancy,
            headway=headway,
            delays=delays,
            toll=toll,
            misbehavior=misbehavior,
        )
    except ValueError as exc:
        raise ScenarioFormatError(str(exc)) from exc


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Read and validate a scenario JSON file."""
    path = Path(path)
    try:
        text = path.read_text("utf-8")
    except OSError as exc:
        raise ScenarioFormatError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"not valid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}")
    if not isinstance(obj, dict):
        raise ScenarioFormatError("the top-level JSON value must be an object")
    return scenario_from_dict(obj)
