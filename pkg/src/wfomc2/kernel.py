"""Backend selection for the DP kernel.

The compiled extension is used when it imports; setting the environment
variable ``WFOMC2_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
from __future__ import annotations

import os
from contextlib import contextmanager

from . import _kernel_py

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _kernel_py}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

if os.environ.get("WFOMC2_PURE_PYTHON", "") not in ("", "0") or _compiled is None:
    _active = "python"
else:
    _active = "compiled"


def available_backends() -> list:
    return sorted(_BACKENDS)


def active_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"kernel backend {name!r} is not available "
                         f"(have: {', '.join(available_backends())})")
    _active = name


@contextmanager
def use_backend(name: str):
    previous = _active
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def step(*args):
    return _BACKENDS[_active].step(*args)


def close_cyclic(*args):
    return _BACKENDS[_active].close_cyclic(*args)
