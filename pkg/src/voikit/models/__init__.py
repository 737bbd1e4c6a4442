"""Forecasting models with one fit/predict contract.

Three families share the same shapes: `*_fit(x, y, ...) -> model` and
`predict(model, x) -> predictions`. Linear and PLS models are exact affine
maps; the network applies its stored standardization around the forward pass.
"""

import numpy as np

from ..errors import DataError
from .linear import LinearModel, ols_fit
from .neural import NetGradient, NeuralNet, TrainConfig, nn_fit, nn_gradient, nn_loss, nn_predict
from .pls import PlsModel, simpls_fit
from .serialize import model_from_dict, model_from_json, model_to_dict, model_to_json

__all__ = [
    "LinearModel",
    "NetGradient",
    "NeuralNet",
    "PlsModel",
    "TrainConfig",
    "model_from_dict",
    "model_from_json",
    "model_to_dict",
    "model_to_json",
    "nn_fit",
    "nn_gradient",
    "nn_loss",
    "nn_predict",
    "ols_fit",
    "predict",
    "simpls_fit",
]


def _affine_predict(x, intercept, coefficients):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[1] != coefficients.shape[0]:
        raise DataError(f"expected {coefficients.shape[0]} columns, got {x.shape[1]}")
    return x @ coefficients + intercept


def predict(model, x) -> np.ndarray:
    if isinstance(model, LinearModel):
        return _affine_predict(x, model.intercept, model.coefficients)
    if isinstance(model, PlsModel):
        return _affine_predict(x, model.intercept, model.regression_vector)
    if isinstance(model, NeuralNet):
        return nn_predict(model, x)
    raise DataError(f"cannot predict with {type(model).__name__}")
