"""Versioned JSON round-trip for trained models."""

import json

import numpy as np

from ..errors import DataError
from .linear import LinearModel
from .neural import NeuralNet
from .pls import PlsModel

SCHEMA_VERSION = 1

_KINDS = {LinearModel: "lm", PlsModel: "pls", NeuralNet: "nn"}


def model_to_dict(model) -> dict:
    kind = _KINDS.get(type(model))
    if kind is None:
        raise DataError(f"cannot serialize {type(model).__name__}")
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind}
    for field, value in vars(model).items():
        doc[field] = value.tolist() if isinstance(value, np.ndarray) else value
    return doc


def model_from_dict(doc: dict):
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DataError(f"unsupported schema_version {doc.get('schema_version')!r}")
    kind = doc.get("kind")
    fields = {k: v for k, v in doc.items() if k not in ("schema_version", "kind")}
    if kind == "lm":
        fields["coefficients"] = np.asarray(fields["coefficients"], dtype=np.float64)
        return LinearModel(**fields)
    if kind == "pls":
        for key in ("x_mean", "weight_matrix", "regression_vector"):
            fields[key] = np.asarray(fields[key], dtype=np.float64)
        return PlsModel(**fields)
    if kind == "nn":
        for key in ("w_hidden", "b_hidden", "w_out", "x_mean", "x_scale"):
            fields[key] = np.asarray(fields[key], dtype=np.float64)
        return NeuralNet(**fields)
    raise DataError(f"unknown model kind {kind!r}")


def model_to_json(model) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True)


def model_from_json(text: str):
    return model_from_dict(json.loads(text))
