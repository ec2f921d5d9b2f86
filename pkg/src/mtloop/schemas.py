"""Published JSON Schemas for the HTTP API payloads.

Responses carry a ``v`` format version. The test suite validates live
responses against these schemas; clients may fetch them from the repo.
"""

RESPONSE_VERSION = 1

_DICT_ENTRY = {
    "type": "object",
    "required": ["headword", "language", "gloss"],
    "properties": {
        "headword": {"type": "string", "minLength": 1},
        "language": {"type": "string", "enum": ["chr", "en"]},
        "gloss": {"type": "string"},
        "notes": {"type": "string"},
    },
}

_HARD_ALIGNMENT = {
    "type": "object",
    "required": ["kind", "links"],
    "properties": {
        "kind": {"const": "hard"},
        "links": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "integer", "minimum": 0},
                "minItems": 2,
                "maxItems": 2,
            },
        },
    },
}

_SOFT_ALIGNMENT = {
    "type": "object",
    "required": ["kind", "matrix"],
    "properties": {
        "kind": {"const": "soft"},
        "matrix": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "number", "minimum": 0, "maximum": 1},
            },
        },
    },
}

TRANSLATE_RESPONSE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": [
        "v",
        "translation_id",
        "output_text",
        "stars",
        "stars_raw",
        "src_tokens",
        "tgt_tokens",
        "alignment",
        "dict_src",
        "dict_tgt",
    ],
    "properties": {
        "v": {"const": RESPONSE_VERSION},
        "translation_id": {"type": "string", "minLength": 1},
        "output_text": {"type": "string"},
        "stars": {"type": "number", "minimum": 0, "maximum": 5},
        "stars_raw": {"type": "number", "minimum": 0, "maximum": 5},
        "src_tokens": {"type": "array", "items": {"type": "string"}},
        "tgt_tokens": {"type": "array", "items": {"type": "string"}},
        "alignment": {"oneOf": [_HARD_ALIGNMENT, _SOFT_ALIGNMENT]},
        "dict_src": {"type": "array", "items": {"type": "array", "items": _DICT_ENTRY, "maxItems": 15}},
        "dict_tgt": {"type": "array", "items": {"type": "array", "items": _DICT_ENTRY, "maxItems": 15}},
    },
}

EXAMPLES_RESPONSE = {
    "type": "object",
    "required": ["v", "items"],
    "properties": {
        "v": {"const": RESPONSE_VERSION},
        "items": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "language", "text", "status"],
                "properties": {
                    "id": {"type": "string"},
                    "language": {"type": "string", "enum": ["chr", "en"]},
                    "text": {"type": "string"},
                    "status": {"type": "string", "enum": ["unlabeled", "labeled"]},
                },
            },
        },
    },
}

FEEDBACK_RESPONSE = {
    "type": "object",
    "required": ["v", "id"],
    "properties": {
        "v": {"const": RESPONSE_VERSION},
        "id": {"type": "string", "minLength": 1},
    },
}

_STATS_CELL = {
    "type": "object",
    "required": ["count", "avg_quality", "pearson"],
    "properties": {
        "count": {"type": "integer", "minimum": 0},
        "avg_quality": {"type": ["number", "null"]},
        "pearson": {"type": ["number", "null"], "minimum": -1, "maximum": 1},
    },
}

STATS_RESPONSE = {
    "type": "object",
    "required": ["v", "cells"],
    "properties": {
        "v": {"const": RESPONSE_VERSION},
        "cells": {
            "type": "object",
            "required": ["smt:chr-en", "smt:en-chr", "nmt:chr-en", "nmt:en-chr"],
            "additionalProperties": _STATS_CELL,
        },
    },
}

HEALTH_RESPONSE = {
    "type": "object",
    "required": ["v", "status", "model_versions", "data_dir_writable"],
    "properties": {
        "v": {"const": RESPONSE_VERSION},
        "status": {"type": "string", "enum": ["ok", "degraded"]},
        "model_versions": {"type": "object", "additionalProperties": {"type": "string"}},
        "data_dir_writable": {"type": "boolean"},
        "gaps": {"type": "array", "items": {"type": "string"}},
    },
}
