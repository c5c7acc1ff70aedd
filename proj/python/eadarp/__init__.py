"""Electric autonomous dial-a-ride solver."""

import json as _json

from ._core import (
    Instance,
    InfeasibleInstance,
    Node,
    ParseError,
    Problem,
    generate_instance,
    load_instance,
    min_excess_lp,
    parse_instance,
    validate_instance,
    with_gamma,
)
from ._core import run_instance as _run_instance


def run_instance(instance, **kwargs):
    """Multi-seed campaign on one instance; returns the report row as a dict."""
    return _json.loads(_run_instance(instance, **kwargs))[0]


__all__ = [
    "Instance",
    "InfeasibleInstance",
    "Node",
    "ParseError",
    "Problem",
    "generate_instance",
    "load_instance",
    "min_excess_lp",
    "parse_instance",
    "run_instance",
    "validate_instance",
    "with_gamma",
]
