"""Kernel selection: compiled extension when importable, else pure Python.

Set ``LATTICEKNOTS_PURE=1`` to force the pure-Python kernels.
"""

import os

from . import _pykernel as python_kernel

compiled_kernel = None
if not os.environ.get("LATTICEKNOTS_PURE"):
    try:
        from . import _ckernel as compiled_kernel
    except ImportError:
        compiled_kernel = None

kernel = compiled_kernel if compiled_kernel is not None else python_kernel
