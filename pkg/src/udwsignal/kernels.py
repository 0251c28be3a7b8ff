"""Backend selection for the hot kernels.

The compiled extension is used when it imports; ``UDW_BACKEND=python``
forces the numpy fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

backend = _pykernels
name = "python"

if os.environ.get("UDW_BACKEND", "").lower() != "python":
    try:
        from . import _ckernels

        backend = _ckernels
        name = "cython"
    except ImportError:
        pass


def available() -> dict:
    """Backends that can be imported in this environment."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
