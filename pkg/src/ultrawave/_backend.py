"""Select the compiled kernels when built, else the numpy fallback.

Set ``ULTRAWAVE_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from . import _fallback

if os.environ.get("ULTRAWAVE_BACKEND", "").lower() == "python":
    kernels = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        kernels = _fallback
        BACKEND = "python"


def available_backends() -> dict:
    out = {"python": _fallback}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        out["compiled"] = _kernels
    except ImportError:
        pass
    return out


def max_workers() -> int:
    env = os.environ.get("ULTRAWAVE_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def parallel_map(fn, items):
    """Ordered map over independent cells; results never depend on scheduling."""
    items = list(items)
    workers = min(max_workers(), len(items))
    if workers <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
