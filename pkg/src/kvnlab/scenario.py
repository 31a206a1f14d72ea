"""Scenario files: schema, validation, and defaults.

A scenario is a JSON object naming a suite and a potential, with optional
overrides for sweep exponents, initial conditions, similarity parameters,
grid settings, tolerances, seed, and output directory. Unknown keys are
rejected at every level so typos fail loudly before any computation runs.
"""

from __future__ import annotations

import json

import jsonschema

from .errors import ScenarioError

SUITES = (
    "dynamics",
    "charges",
    "lms-classical",
    "lms-virasoro",
    "opalg",
    "quantum-leak",
    "bohr",
    "newton-equiv",
    "all",
)

_NONZERO_NUMBER = {"type": "number", "not": {"enum": [0, 0.0]}}

SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "kvnlab scenario",
    "type": "object",
    "additionalProperties": False,
    "required": ["suite", "potential"],
    "properties": {
        "suite": {"enum": list(SUITES)},
        "potential": {
            "type": "object",
            "additionalProperties": False,
            "required": ["g", "n"],
            "properties": {"g": _NONZERO_NUMBER, "n": _NONZERO_NUMBER},
        },
        "exponents": {
            "type": "array",
            "items": _NONZERO_NUMBER,
            "minItems": 1,
        },
        "initial_conditions": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "array",
                "items": {"type": "number"},
                "minItems": 4,
                "maxItems": 4,
            },
        },
        "lms": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "alpha": {"type": "number", "exclusiveMinimum": 0},
                "beta": {"type": "number"},
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "count": {"type": "integer", "minimum": 2},
                "extent": {"type": "number", "exclusiveMinimum": 0},
                "hbar": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "charge_drift": {"type": "number", "exclusiveMinimum": 0},
                "tower_drift": {"type": "number", "exclusiveMinimum": 0},
                "solution_map": {"type": "number", "exclusiveMinimum": 0},
                "action_exponent": {"type": "number", "exclusiveMinimum": 0},
                "schmidt_separable": {"type": "number", "exclusiveMinimum": 0},
                "schmidt_mixed": {"type": "number", "exclusiveMinimum": 0},
                "bohr_levels": {"type": "number", "exclusiveMinimum": 0},
                "trajectory_match": {"type": "number", "exclusiveMinimum": 0},
                "spectrum_scaling": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "seed": {"type": "integer", "minimum": 0},
        "out_dir": {"type": "string", "minLength": 1},
    },
}

DEFAULT_LMS_ALPHA = 1.3
DEFAULT_GRID = {"count": 128, "extent": 8.0, "hbar": 0.5}
DEFAULT_TOLERANCES = {
    "charge_drift": 1e-7,
    "tower_drift": 1e-6,
    "solution_map": 1e-6,
    "action_exponent": 1e-4,
    "schmidt_separable": 1e-8,
    "schmidt_mixed": 1e-3,
    "bohr_levels": 1e-8,
    "trajectory_match": 1e-7,
    "spectrum_scaling": 1e-3,
}
DEFAULT_SEED = 0


def validate_scenario(obj) -> dict:
    """Check a parsed scenario against the schema; ScenarioError on failure."""
    try:
        jsonschema.validate(obj, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ScenarioError(f"scenario invalid: {exc.message}") from exc
    return obj


def load_scenario(path: str) -> dict:
    """Read and validate a scenario file."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario {path!r} is not valid JSON: {exc}") from exc
    return validate_scenario(obj)


def scenario_with_defaults(obj: dict) -> dict:
    """Return a copy with the optional sections filled in."""
    out = dict(obj)
    lms = dict(out.get("lms", {}))
    if "alpha" not in lms and "beta" not in lms:
        lms["alpha"] = DEFAULT_LMS_ALPHA
    out["lms"] = lms
    out["grid"] = {**DEFAULT_GRID, **out.get("grid", {})}
    out["tolerances"] = {**DEFAULT_TOLERANCES, **out.get("tolerances", {})}
    out.setdefault("seed", DEFAULT_SEED)
    return out


def schema_text() -> str:
    return json.dumps(SCHEMA, indent=2, sort_keys=True)
