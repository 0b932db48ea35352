"""Python access to the pdestruct library.

Functions that produce structured results return plain dicts parsed from the
library's JSON reports.
"""

import json

from . import _core
from ._core import (
    DegenerateInputError,
    DomainError,
    Error,
    HypothesisViolation,
    LookupError,
    NumericalError,
    UnsupportedError,
    ValidationError,
    catalog_names,
    evaluate,
    lambda_1d,
    residual_first_order,
)

__all__ = [
    "DegenerateInputError",
    "DomainError",
    "Error",
    "HypothesisViolation",
    "LookupError",
    "NumericalError",
    "UnsupportedError",
    "ValidationError",
    "catalog_names",
    "decompose_dn",
    "decompose_wave",
    "evaluate",
    "extract_profile",
    "lambda_1d",
    "oscillation",
    "residual_first_order",
    "run",
]


def extract_profile(fn, k=1.0, **kw):
    return json.loads(_core.extract_profile(fn, k, **kw))


def decompose_dn(fn, n, **kw):
    return json.loads(_core.decompose_dn(fn, n, **kw))


def decompose_wave(fn, **kw):
    return json.loads(_core.decompose_wave(fn, **kw))


def oscillation(fn, x, y, **kw):
    return json.loads(_core.oscillation(fn, x, y, **kw))


def run(config):
    """Run a CLI command from a config dict; returns (exit_code, report)."""
    code, report = _core.run(json.dumps(config))
    return code, json.loads(report)
