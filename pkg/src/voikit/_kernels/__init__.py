"""Kernel backend selection.

The compiled extension is preferred when built; the numpy implementations
are the fallback. Set VOIKIT_PURE_PYTHON=1 to force the fallback (used by
the benchmark and the cross-backend tests).
"""

import os

from . import numpy_backend

if os.environ.get("VOIKIT_PURE_PYTHON", "") not in ("", "0"):
    _impl = numpy_backend
    BACKEND = "numpy"
else:
    try:
        from . import _core as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = numpy_backend
        BACKEND = "numpy"

train_mlp = _impl.train_mlp
lloyd = _impl.lloyd

__all__ = ["BACKEND", "lloyd", "numpy_backend", "train_mlp"]
