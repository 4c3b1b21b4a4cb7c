"""JSON Schema for the line-delimited records written by ``qss run`` and ``qss error-rate``."""

_RATE = {"type": "number", "minimum": 0, "maximum": 1}
_CI = {"type": "array", "items": _RATE, "minItems": 2, "maxItems": 2}
_COUNT = {"type": "integer", "minimum": 0}

ANNOUNCEMENT = {
    "type": "object",
    "required": ["record", "trial", "seq", "speaker", "step", "kind", "payload"],
    "properties": {
        "record": {"const": "announcement"},
        "trial": _COUNT,
        "seq": _COUNT,
        "speaker": {"type": "string"},
        "step": {"type": "string"},
        "kind": {"type": "string"},
        "payload": {"type": "object"},
    },
    "additionalProperties": False,
}

TRIAL = {
    "type": "object",
    "required": ["record", "trial", "seed", "status", "transit_error_rate", "auth_error_rate",
                 "recovered_bits", "message_recovered", "warnings"],
    "properties": {
        "record": {"const": "trial"},
        "trial": _COUNT,
        "seed": _COUNT,
        "status": {"enum": ["completed", "aborted_transit_check", "aborted_authentication"]},
        "transit_error_rate": _RATE,
        "auth_error_rate": _RATE,
        "recovered_bits": {"type": "string", "pattern": "^[01]*$"},
        "message_recovered": {"type": "boolean"},
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

AGGREGATE = {
    "type": "object",
    "required": ["record", "trials", "seed", "parties", "variant", "adversary", "n_pairs", "k", "j",
                 "threshold", "completed", "aborted_transit_check", "aborted_authentication",
                 "messages_recovered", "detection_rate", "detection_ci", "mean_transit_error_rate",
                 "mean_auth_error_rate"],
    "properties": {
        "record": {"const": "aggregate"},
        "trials": {"type": "integer", "minimum": 1},
        "seed": _COUNT,
        "parties": {"type": "integer", "minimum": 3},
        "variant": {"type": "boolean"},
        "adversary": {"enum": ["none", "intercept-resend", "insider"]},
        "n_pairs": {"type": "integer", "minimum": 1},
        "k": {"type": "integer", "minimum": 1},
        "j": _COUNT,
        "threshold": _RATE,
        "completed": _COUNT,
        "aborted_transit_check": _COUNT,
        "aborted_authentication": _COUNT,
        "messages_recovered": _COUNT,
        "detection_rate": _RATE,
        "detection_ci": _CI,
        "mean_transit_error_rate": _RATE,
        "mean_auth_error_rate": _RATE,
    },
    "additionalProperties": False,
}

ERROR_RATE = {
    "type": "object",
    "required": ["record", "adversary", "pairs", "errors", "error_rate", "ci", "seed", "parties",
                 "single_basis", "four_op_set"],
    "properties": {
        "record": {"const": "error_rate"},
        "adversary": {"enum": ["none", "intercept-resend", "insider"]},
        "pairs": {"type": "integer", "minimum": 1},
        "errors": _COUNT,
        "error_rate": _RATE,
        "ci": _CI,
        "seed": _COUNT,
        "parties": {"type": "integer", "minimum": 3},
        "single_basis": {"type": "boolean"},
        "four_op_set": {"type": "boolean"},
    },
    "additionalProperties": False,
}

RECORD_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "qss output record",
    "oneOf": [ANNOUNCEMENT, TRIAL, AGGREGATE, ERROR_RATE],
}
