"""Deterministic JSON reports."""

import json
import math

import numpy as np

from ._io import atomic_write_text

TOOL_VERSION = "0.1.0"


def _clean(obj):
    """Plain JSON values; floats become tagged strings for fixed formatting."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _Float(float(obj))
    if isinstance(obj, complex):
        return [_Float(obj.real), _Float(obj.imag)]
    return obj


class _Float(float):
    pass


def _format_float(x):
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = "%.17g" % x
    if "e" not in text and "." not in text and "n" not in text:
        text += ".0"
    return text


def _dump(obj):
    if isinstance(obj, _Float):
        return _format_float(obj)
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ",".join(json.dumps(k) + ":" + _dump(v) for k, v in items) + "}"
    if isinstance(obj, list):
        return "[" + ",".join(_dump(v) for v in obj) + "]"
    return json.dumps(obj)


def dumps(obj):
    """Compact JSON with sorted keys and 17-significant-digit floats."""
    return _dump(_clean(obj))


def build_report(subcommand, config, results, passed):
    return {"tool_version": TOOL_VERSION, "subcommand": subcommand, "config": config,
            "results": results, "pass": bool(passed)}


def write_report(report, path):
    atomic_write_text(path, dumps(report) + "\n")
