"""Pick the compiled kernels when available, else the numpy fallback.

Set ``RBMTAIL_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
kernels = _kernels_py

if os.environ.get("RBMTAIL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as kernels  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        pass
