"""JSON report writing.

Reports are ``{schema_version, config, verdicts, witnesses, metadata}`` with
sorted keys and every float written with 17 significant digits, so equal
inputs give byte-identical files. Only ``metadata`` (timestamp, versions)
varies between runs.
"""

import json
import math
import platform
import re
from datetime import datetime, timezone

import numpy as np

SCHEMA_VERSION = 1

_FLOAT = "\u0000F"
_FLOAT_RE = re.compile('"' + _FLOAT + r'([^"]*)"')


def _prepare(obj):
    if isinstance(obj, dict):
        return {str(k): _prepare(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_prepare(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return _FLOAT + format(x, ".17g")
    if isinstance(obj, np.ndarray):
        return _prepare(obj.tolist())
    if isinstance(obj, complex):
        return [_prepare(obj.real), _prepare(obj.imag)]
    return obj


def dumps(obj):
    """Serialize with sorted keys and 17-significant-digit floats."""
    text = json.dumps(_prepare(obj), sort_keys=True, indent=2)
    return _FLOAT_RE.sub(lambda m: m.group(1), text.replace("\\u0000F", _FLOAT))


def metadata():
    from . import __version__

    return {
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "package_version": __version__,
        "numpy": np.__version__,
        "python": platform.python_version(),
    }


def build_report(config, verdicts, witnesses):
    return {
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "verdicts": verdicts,
        "witnesses": witnesses,
        "metadata": metadata(),
    }


def strip_metadata(report):
    """Copy of a parsed report without the run-specific ``metadata`` block."""
    return {k: v for k, v in report.items() if k != "metadata"}
