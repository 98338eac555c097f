"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the pure
Python mirror is used. Set ``CELLPLAN_PURE=1`` to force the fallback (the
benchmark suite does this to compare the two). Both backends produce
bit-identical results; only speed differs.
"""

import os

from . import _purepy

if os.environ.get("CELLPLAN_PURE", "") not in ("", "0"):
    kernel = _purepy
else:
    try:
        from . import _core as kernel  # type: ignore[no-redef]
    except ImportError:
        kernel = _purepy

BACKEND = kernel.BACKEND


def get_backend(name: str | None = None):
    """Return a kernel module by name ('compiled', 'pure') or the default."""
    if name is None:
        return kernel
    if name == "pure":
        return _purepy
    if name == "compiled":
        from . import _core

        return _core
    raise ValueError(f"unknown kernel backend {name!r}")
