"""Selects the simplex pivot kernel at import: compiled if available, numpy otherwise.

Set FDSC_PURE_PYTHON=1 to force the pure-Python kernel (used by the benchmark
and by tests that exercise both code paths).
"""

import os

from . import _simplex_py

OPTIMAL = _simplex_py.OPTIMAL
UNBOUNDED = _simplex_py.UNBOUNDED
MAXITER = _simplex_py.MAXITER

if os.environ.get("FDSC_PURE_PYTHON", "").strip() in ("1", "true", "yes"):
    pivot_loop = _simplex_py.pivot_loop
    BACKEND = "python"
else:
    try:
        from . import _simplex_core

        pivot_loop = _simplex_core.pivot_loop
        BACKEND = "compiled"
    except ImportError:
        pivot_loop = _simplex_py.pivot_loop
        BACKEND = "python"


def available_backends():
    """Name -> pivot_loop for every importable kernel."""
    out = {"python": _simplex_py.pivot_loop}
    try:
        from . import _simplex_core

        out["compiled"] = _simplex_core.pivot_loop
    except ImportError:
        pass
    return out
