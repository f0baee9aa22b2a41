"""Toolkit for eliciting classification metrics from pairwise preferences."""

from . import (
    binary,
    blackbox,
    errors,
    fair,
    geometry,
    harness,
    multiclass,
    oracle,
    quadratic,
    search,
    types,
)

__version__ = "0.1.0"
