"""Compound figure classification and separation."""

import json

from ._core import (
    Error,
    decide,
    extract_cfc_features,
    feature_dimensionality,
    imageclef_score,
    load_gray,
    loss_threshold,
    nlm_aggregate,
    nlm_true_positives,
    peak_threshold,
    run_cli,
)
from . import _core


def default_params(preset="optimal"):
    """Separation parameters as a dict ("optimal" or "initial")."""
    return json.loads(_core.default_params_json(preset))


def separate(image, routing="band", params=None):
    """Subfigure boxes (x, y, w, h) of a 2-D intensity array in [0, 1]."""
    return _core.separate(image, routing, json.dumps(params or {}))


def synth_figure(spec=None, index=0):
    """(image, rects, is_compound) for figure `index` of a synthetic spec dict."""
    return _core.synth_figure(json.dumps(spec or {}), index)


__all__ = [
    "Error",
    "decide",
    "default_params",
    "extract_cfc_features",
    "feature_dimensionality",
    "imageclef_score",
    "load_gray",
    "loss_threshold",
    "nlm_aggregate",
    "nlm_true_positives",
    "peak_threshold",
    "run_cli",
    "separate",
    "synth_figure",
]
