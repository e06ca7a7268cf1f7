"""Kernel selection.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over.  :func:`use` switches explicitly (tests and the benchmark
run both).  Callers must go through :func:`kernels` on every call rather
than caching the module, so a switch takes effect immediately.
"""

from __future__ import annotations

import logging

from . import _kernels_py

log = logging.getLogger(__name__)

try:
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None
    log.debug("compiled kernels unavailable, using pure Python")

_active = _compiled if _compiled is not None else _kernels_py


def available() -> list[str]:
    return [m.NAME for m in (_compiled, _kernels_py) if m is not None]


def kernels():
    return _active


def name() -> str:
    return _active.NAME


def use(backend: str) -> str:
    """Select ``"cython"``, ``"python"`` or ``"auto"``; returns the previous name."""
    global _active
    previous = _active.NAME
    if backend == "python":
        _active = _kernels_py
    elif backend in ("cython", "auto"):
        if _compiled is None:
            if backend == "cython":
                raise RuntimeError("compiled kernels are not built")
            _active = _kernels_py
        else:
            _active = _compiled
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return previous


def for_modulus(p: int):
    """Kernel module able to handle modulus ``p`` (0 forces pure Python)."""
    return _active if p > 0 else _kernels_py
