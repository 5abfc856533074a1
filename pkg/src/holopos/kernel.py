"""Backend selection for the term kernel.

The GMP-backed extension is used when it was built; otherwise the
pure-Python module is.  Setting ``HOLOPOS_KERNEL=python`` forces the
fallback (the test suite runs both).
"""
import os

BACKEND = "python"

if os.environ.get("HOLOPOS_KERNEL", "").lower() != "python":
    try:
        from ._kernel import block, eval_int_poly, next_term, ratio_in, scan
        BACKEND = "compiled"
    except ImportError:
        pass

if BACKEND == "python":
    from ._kernel_py import block, eval_int_poly, next_term, ratio_in, scan


def load(name):
    """Return the kernel module called ``name`` (``"python"`` or ``"compiled"``)."""
    if name == "python":
        from . import _kernel_py as mod
    elif name == "compiled":
        from . import _kernel as mod
    else:
        raise ValueError(f"unknown kernel {name!r}")
    return mod


__all__ = ["BACKEND", "block", "eval_int_poly", "load", "next_term", "ratio_in", "scan"]
