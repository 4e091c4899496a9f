"""Stepping kernel backends.

The compiled extension is preferred when it is importable; the numpy/scipy
fallback implements the identical contract. Set BUBBLEFLOW_PURE_PYTHON=1 to
force the fallback (used by the parity tests and the backend benchmark).
"""

import os

from . import pybackend

if os.environ.get("BUBBLEFLOW_PURE_PYTHON"):
    _default = pybackend
else:
    try:
        from . import _corekernels as _default
    except ImportError:
        _default = pybackend


def default_backend():
    return _default


def available_backends():
    out = {"python": pybackend}
    try:
        from . import _corekernels
        out["cython"] = _corekernels
    except ImportError:
        pass
    return out


BACKEND_NAME = _default.NAME
