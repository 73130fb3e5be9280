"""Kernel selection: compiled term multiplication with pure-Python fallback.

The compiled extension is preferred when it imported successfully and the
variable space packs into 63 bits; otherwise the pure kernel runs.  Set
CNCERT_KERNEL=pure to force the fallback (the benchmark uses set_backend to
compare both in one process).
"""

import os

from . import _termops_py

try:
    from . import _termops_c
except ImportError:
    _termops_c = None

_FORCED_PURE = os.environ.get("CNCERT_KERNEL") == "pure"
_active_c = None if _FORCED_PURE else _termops_c

KERNEL_BACKEND = "compiled" if _active_c is not None else "pure"


def available_backends() -> tuple[str, ...]:
    return ("pure", "compiled") if _termops_c is not None else ("pure",)


def set_backend(name: str) -> None:
    """Switch the active kernel ("pure" or "compiled").  For benchmarks/tests."""
    global _active_c, KERNEL_BACKEND
    if name == "pure":
        _active_c = None
    elif name == "compiled":
        if _termops_c is None:
            raise RuntimeError("compiled kernel is not built")
        _active_c = _termops_c
    else:
        raise ValueError(f"unknown kernel backend {name!r}")
    KERNEL_BACKEND = name


def mul_terms(items_a, items_b, sig, cache) -> dict:
    if _active_c is not None and sig[0] <= 63:
        return _active_c.mul_terms(items_a, items_b, sig, cache)
    return _termops_py.mul_terms(items_a, items_b, sig, cache)


combine_exponents = _termops_py.combine_exponents
