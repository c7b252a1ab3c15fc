"""Evaluate and compare compressed neural-network models from offline
artifacts: model descriptors, prediction logs, and measurement traces.

The heavy lifting happens in the C++ core; this layer turns its canonical
JSON documents into plain dictionaries.
"""

import json as _json

from ._core import (
    Error,
    IoError,
    MetricError,
    ParseError,
    __version__,
    chats_from_ops,
    compute_ratios,
    integrate_power,
    mean_average_precision,
    ocs_value,
    rank_text,
    render_bar,
    render_radar,
    top_k_accuracy,
)
from ._core import analyze_json as _analyze_json
from ._core import compare_json as _compare_json

__all__ = [
    "Error",
    "IoError",
    "MetricError",
    "ParseError",
    "__version__",
    "analyze",
    "chats_from_ops",
    "compare",
    "compute_ratios",
    "integrate_power",
    "mean_average_precision",
    "ocs_value",
    "rank_text",
    "render_bar",
    "render_radar",
    "top_k_accuracy",
]


def analyze(**kwargs):
    """Evaluate one model into a metric report (a dict).

    Keyword arguments mirror the CLI flags: model, predictions, ground_truth,
    labels, power, resources, baseline_resources, latency (file paths),
    inferences, topk, cores, iou_profile, integration, window, timestamp,
    name, ops_basis, bitwidth_exponent.
    """
    return _json.loads(_analyze_json(**kwargs))


def compare(reports, **kwargs):
    """Compare candidate reports against a baseline (first path).

    Returns the comparison document as a dict; candidates come back ranked
    best first. Keyword arguments: zeta, bindings, timestamp, radar_top.
    """
    return _json.loads(_compare_json(reports, **kwargs))
