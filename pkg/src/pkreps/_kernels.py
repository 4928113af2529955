"""Select the kernel backend at import time.

The compiled ``_core`` extension is used when it imports; otherwise the numpy
implementations in ``_fallback`` are used. Set ``PKREPS_PURE_PYTHON=1`` to
force the fallback.
"""
import os

if os.environ.get("PKREPS_PURE_PYTHON") == "1":
    from . import _fallback as kernels
else:
    try:
        from . import _core as kernels
    except ImportError:
        from . import _fallback as kernels

BACKEND = kernels.NAME
