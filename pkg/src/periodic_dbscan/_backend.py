"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the numpy
fallback. ``PERIODIC_DBSCAN_BACKEND=python`` forces the fallback.
"""

import os

from . import _fallback
from .exceptions import ParameterError

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = ("auto", "compiled", "python")


def available():
    return ["compiled", "python"] if _compiled is not None else ["python"]


def default_name():
    if os.environ.get("PERIODIC_DBSCAN_BACKEND", "").lower() == "python":
        return "python"
    return "compiled" if _compiled is not None else "python"


def get(name=None):
    name = (name or "auto").lower()
    if name not in BACKENDS:
        raise ParameterError(f"unknown backend {name!r}, expected one of {BACKENDS}")
    if name == "auto":
        name = default_name()
    if name == "compiled":
        if _compiled is None:
            raise ParameterError("compiled backend requested but the extension is not built")
        return _compiled
    return _fallback
