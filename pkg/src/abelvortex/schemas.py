"""JSON schemas for CLI inputs and outputs."""

import jsonschema

from .errors import InvalidInputError

_rational = {"anyOf": [{"type": "number"},
                       {"type": "string", "pattern": r"^\s*-?\d+\s*(/\s*\d+\s*)?$"}]}
_int_matrix = {"type": "array", "minItems": 1,
               "items": {"type": "array", "minItems": 1, "items": {"type": "integer"}}}
_int_vector = {"type": "array", "items": {"type": "integer"}}
_nullable_number = {"type": ["number", "null"]}
_rational_str = {"type": "string", "pattern": r"^-?\d+/\d+$"}

POLYTOPE = {
    "type": "object",
    "required": ["normals", "offsets"],
    "properties": {
        "normals": _int_matrix,
        "offsets": {"type": "array", "minItems": 1, "items": _rational},
    },
}

POLYTOPE_INPUT = {
    "oneOf": [
        {"type": "object", "required": ["polytope"], "properties": {"polytope": POLYTOPE}},
        POLYTOPE,
    ],
}

TARGET = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["Cn", "CPn", "toric"]},
        "C": _int_matrix,
        "t": {"type": "array", "items": _rational},
        "t_pi": {"type": "array", "items": _rational},
        "t_real": {"type": "array", "items": {"type": "number"}},
        "polytope": POLYTOPE,
    },
    "allOf": [
        {"if": {"properties": {"kind": {"const": "toric"}}},
         "then": {"required": ["polytope"]},
         "else": {"required": ["C"],
                  "oneOf": [{"required": ["t"]}, {"required": ["t_pi"]},
                            {"required": ["t_real"]}]}},
    ],
}

BASE = {
    "type": "object",
    "required": ["volume", "a"],
    "properties": {
        "volume": {"type": "number", "exclusiveMinimum": 0},
        "a": {"type": "number", "exclusiveMinimum": 0},
        "alpha": _int_vector,
        "pairing_deg": {"type": "array", "items": {"type": "number"}},
        "pairing_self": {"type": "array", "items": {"type": "number"}},
        "genus": {"type": "integer", "minimum": 0},
    },
    "oneOf": [{"required": ["alpha"]}, {"required": ["pairing_deg", "pairing_self"]}],
}

CLASSIFY_INPUT = {
    "type": "object",
    "required": ["target", "base"],
    "properties": {
        "target": TARGET,
        "base": BASE,
        "cap": {"type": "integer", "minimum": 0},
        "eps": {"type": "number", "exclusiveMinimum": 0},
    },
}

_points = {"type": "array",
           "items": {"type": "array", "minItems": 2, "maxItems": 3,
                     "items": {"type": "number"}}}

SOLVE_INPUT = {
    "type": "object",
    "required": ["model", "a", "torus", "grid"],
    "properties": {
        "model": {"enum": ["C", "CP1"]},
        "t": {"type": "number"},
        "t_real": {"type": "number"},
        "t_pi": _rational,
        "a": {"type": "number", "exclusiveMinimum": 0},
        "torus": {"type": "object", "required": ["Lx", "Ly"],
                  "properties": {"Lx": {"type": "number", "exclusiveMinimum": 0},
                                 "Ly": {"type": "number", "exclusiveMinimum": 0}}},
        "grid": {"type": "array", "minItems": 2, "maxItems": 2,
                 "items": {"type": "integer", "minimum": 16, "multipleOf": 2}},
        "vortices": _points,
        "antivortices": _points,
        "newton": {"type": "object",
                   "properties": {"tol": {"type": "number", "exclusiveMinimum": 0},
                                  "max_iter": {"type": "integer", "minimum": 0}}},
    },
    "oneOf": [{"required": ["t"]}, {"required": ["t_real"]}, {"required": ["t_pi"]}],
}

# ------------------------------------------------------------------ outputs

POLYTOPE_OUTPUT = {
    "type": "object",
    "required": ["delzant", "vertices", "volume", "barycentre", "patterns"],
    "properties": {
        "delzant": {"type": "boolean"},
        "vertices": {"type": "array", "items": {"type": "array", "items": _rational_str}},
        "volume": _rational_str,
        "barycentre": {"type": "array", "items": _rational_str},
        "patterns": {"type": "array", "items": _int_vector},
        "failing_vertices": _int_vector,
    },
}

DELZANT_OUTPUT = {
    "type": "object",
    "required": ["beta", "kernel", "surjective", "patterns"],
    "properties": {
        "beta": _int_matrix,
        "kernel": {"type": "array", "items": _int_vector},
        "surjective": {"type": "boolean"},
        "patterns": {"type": "array", "items": _int_vector},
    },
}

CLASSIFY_OUTPUT = {
    "type": "object",
    "required": ["c", "c_pi_units", "verdict", "face", "components"],
    "properties": {
        "c": {"type": "array", "items": {"type": "number"}},
        "c_pi_units": {"type": "array", "items": {"oneOf": [_rational_str, {"type": "number"}]}},
        "verdict": {"enum": ["interior", "boundary", "exterior"]},
        "face": {"type": "object", "required": ["status", "tight_set", "face_dim"]},
        "components": {
            "type": "array",
            "items": {"type": "object",
                      "required": ["degrees", "dim", "energy", "constraints"],
                      "properties": {"degrees": _int_vector,
                                     "dim": {"type": "integer", "minimum": 0},
                                     "energy": _nullable_number,
                                     "constraints": {"type": "array", "items": _int_vector}}},
        },
    },
}

SOLVE_OUTPUT = {
    "type": "object",
    "required": ["converged"],
    "properties": {
        "converged": {"type": "boolean"},
        "iterations": {"type": "integer", "minimum": 0},
        "residual": {"type": "number"},
        "moment_mean_error": _nullable_number,
        "energy": _nullable_number,
        "predicted_energy": _nullable_number,
        "reason": {"type": "string"},
        "residual_history": {"type": "array", "items": {"type": "number"}},
    },
    "if": {"required": ["reason"]},
    "else": {"required": ["iterations", "residual", "moment_mean_error", "energy",
                          "predicted_energy"]},
}


def validate(instance, schema, what: str = "input", error=InvalidInputError) -> None:
    try:
        jsonschema.validate(instance, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(map(str, exc.absolute_path)) or "<root>"
        raise error(f"{what} fails schema at {where}: {exc.message}") from exc
