"""Kernel backend selection.

The compiled Cython extension is preferred; the pure-numpy fallback is used
when the extension was not built or when CASSIKIT_FORCE_PYTHON is set in the
environment. Both expose the same four kernel functions.
"""

import os

from . import _kernels_py

if os.environ.get("CASSIKIT_FORCE_PYTHON"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.BACKEND
