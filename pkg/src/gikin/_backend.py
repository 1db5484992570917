"""Kernel backend selection.

Prefers the compiled extension, falls back to the pure-numpy twin. Set
GIKIN_PURE_PYTHON=1 to force the fallback (used by the benchmark and the
equivalence tests).
"""

import os

if os.environ.get("GIKIN_PURE_PYTHON"):
    from gikin import _kernels_py as kernels
else:
    try:
        from gikin import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from gikin import _kernels_py as kernels  # type: ignore[no-redef]

BACKEND = kernels.BACKEND_NAME
