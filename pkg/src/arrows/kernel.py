"""Search-kernel backend selection.

Prefers the compiled kernel when it was built; falls back to the pure-Python
twin otherwise.  Set ``ARROWS_PURE_PYTHON=1`` to force the fallback (the
benchmark and the backend-equivalence tests use this).
"""

from __future__ import annotations

import os

if os.environ.get("ARROWS_PURE_PYTHON"):
    from ._kernel_py import BACKEND, NaiveKernel
else:
    try:
        from ._kernel_c import BACKEND, NaiveKernel  # type: ignore[no-redef]
    except ImportError:
        from ._kernel_py import BACKEND, NaiveKernel  # type: ignore[no-redef]

__all__ = ["NaiveKernel", "BACKEND"]
