"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
module is used.  Setting ``SUBMODCODES_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("SUBMODCODES_PURE_PYTHON") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "compiled"

half_distance = _impl.half_distance
max_clique = _impl.max_clique


def backends():
    """Available backends by name."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
        out["compiled"] = _kernels
    except ImportError:
        pass
    return out
