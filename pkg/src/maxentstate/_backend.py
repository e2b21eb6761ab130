"""Pick the kernel implementation once, at import.

The compiled extension is used when it was built; setting
``MAXENT_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _pykernels

if os.environ.get("MAXENT_PURE_PYTHON", "") not in ("", "0"):
    kernels = _pykernels
else:
    try:
        from . import _ckernels as kernels
    except ImportError:  # extension not built
        kernels = _pykernels

BACKEND = kernels.BACKEND
