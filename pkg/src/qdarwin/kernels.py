"""Kernel backend selection.

The compiled extension is used when it imports; otherwise (or when
``QDARWIN_PURE_PYTHON=1`` is set) the batched numpy fallback is used.
"""

from __future__ import annotations

import os

from . import _kernels_py as python_backend

compiled_backend = None
if os.environ.get("QDARWIN_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled_backend  # type: ignore[attr-defined,no-redef]
    except ImportError:  # extension not built
        compiled_backend = None

_active = compiled_backend or python_backend


def backend_name() -> str:
    return _active.BACKEND


def use_backend(name: str) -> None:
    """Switch backends at runtime ("cython" or "python")."""
    global _active
    if name == "python":
        _active = python_backend
    elif name == "cython":
        if compiled_backend is None:
            raise RuntimeError("compiled kernels are not available; build the extension first")
        _active = compiled_backend
    else:
        raise ValueError(f"unknown backend {name!r}")


def conditional_entropy(blocks, axes):
    return _active.conditional_entropy(blocks, axes)


def eta_terms(blocks, axes):
    return _active.eta_terms(blocks, axes)
