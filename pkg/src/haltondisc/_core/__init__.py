"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback.  Set ``HALTONDISC_BACKEND=python`` to force the fallback.
"""

import os

from . import _pykernels as python_kernels

try:
    from . import _ckernels as compiled_kernels
except ImportError:  # extension not built
    compiled_kernels = None

if compiled_kernels is not None and os.environ.get("HALTONDISC_BACKEND", "").lower() != "python":
    kernels = compiled_kernels
else:
    kernels = python_kernels

BACKEND = kernels.BACKEND

__all__ = ["kernels", "python_kernels", "compiled_kernels", "BACKEND"]
