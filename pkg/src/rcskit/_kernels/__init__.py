"""Kernel backend selection: compiled extension if available, else pure Python.

Set RCSKIT_KERNELS=pure (or =compiled) to force a backend; default is the
compiled extension when the build produced one.
"""

from __future__ import annotations

import os
import warnings

from . import _pure

try:
    from . import _core
except ImportError:  # pragma: no cover - depends on the build environment
    _core = None

_BACKENDS = {"pure": _pure}
if _core is not None:
    _BACKENDS["compiled"] = _core

active = _BACKENDS.get("compiled", _pure)

_requested = os.environ.get("RCSKIT_KERNELS", "").strip().lower()
if _requested and _requested != "auto":
    if _requested in _BACKENDS:
        active = _BACKENDS[_requested]
    else:
        warnings.warn(
            f"RCSKIT_KERNELS={_requested!r} unavailable; using {active.BACKEND_NAME}"
        )


def available() -> tuple[str, ...]:
    """Names of the importable backends."""
    return tuple(sorted(_BACKENDS))


def get_backend(name: str | None = None):
    """Return a backend module by name, or the active one."""
    if name is None:
        return active
    return _BACKENDS[name]


def use(name: str):
    """Switch the active backend; returns the previous one (for tests/benchmarks)."""
    global active
    previous = active
    active = _BACKENDS[name]
    return previous
