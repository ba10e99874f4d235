"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when importable; otherwise the
pure-Python ``_pykernels`` module. Set ``EXPSMOOTH_PURE_PYTHON=1`` to force
the fallback.
"""
import os

from . import _pykernels

if os.environ.get("EXPSMOOTH_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "python" if _impl is _pykernels else "cython"

fold_v1 = _impl.fold_v1
fold_v2 = _impl.fold_v2
fold_v2c = _impl.fold_v2c
fold_reference = _impl.fold_reference


def backends():
    """Map of every importable backend name to its module."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
