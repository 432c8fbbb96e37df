"""Variational Chernoff bounds for binary pairwise models."""

import json

from ._varchernoff import (
    ApproxConfig,
    Error,
    Event,
    InputError,
    Model,
    NumericError,
    ScaleExceeded,
    UnsupportedError,
    binomial_log_upper_tail,
    brute_phi,
    chain_count_log_prob,
    event_log_prob,
    phi_bound,
    tree_phi,
)
from . import _varchernoff as _ext


def bound_event(model, event, direction="upper", phi_upper="trbp", phi_lower="mf", config=None):
    """Bound log p(X in event); returns a dict with value, probability and diagnostics."""
    return json.loads(_ext.bound_event(model, event, direction, phi_upper, phi_lower, config))


def lambda_bound(model, event, phi_upper="trbp", phi_lower="mf", path="auto", max_iterations=None, config=None):
    return json.loads(_ext.lambda_bound(model, event, phi_upper, phi_lower, path, max_iterations, config))


def tightness_check(model, event, tol=1e-3):
    return json.loads(_ext.tightness_check(model, event, tol))


def table_csv(**kwargs):
    return _ext.table_csv(**kwargs)


def figure1(n=30, p=0.5, delta=0.5, theta_pair=-1.0, points=200, lambda_max=3.0):
    return json.loads(_ext.figure1(n, p, delta, theta_pair, points, lambda_max))


def model_from_dict(d):
    return Model.from_json(json.dumps(d))


def event_from_dict(d, n):
    return Event.from_json(json.dumps(d), n)


__all__ = [
    "ApproxConfig", "Error", "Event", "InputError", "Model", "NumericError", "ScaleExceeded",
    "UnsupportedError", "binomial_log_upper_tail", "bound_event", "brute_phi", "chain_count_log_prob",
    "event_from_dict", "event_log_prob", "figure1", "lambda_bound", "model_from_dict", "phi_bound",
    "table_csv", "tightness_check", "tree_phi",
]
