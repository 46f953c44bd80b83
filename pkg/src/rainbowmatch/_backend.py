"""Kernel backend selection: the compiled core when importable, else pure Python."""
from __future__ import annotations

from types import ModuleType

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_active: ModuleType = _compiled or _kernels_py


def kernels() -> ModuleType:
    return _active


def available() -> list[str]:
    return ["python"] + (["compiled"] if _compiled is not None else [])


def name() -> str:
    return _active.BACKEND


def use(backend: str) -> None:
    """Switch backend at runtime: ``"compiled"`` or ``"python"``."""
    global _active
    if backend == "python":
        _active = _kernels_py
    elif backend == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        _active = _compiled
    else:
        raise ValueError(f"unknown backend {backend!r}")


def module(backend: str) -> ModuleType:
    if backend == "python":
        return _kernels_py
    if _compiled is None:
        raise ImportError("compiled kernels are not built")
    return _compiled
