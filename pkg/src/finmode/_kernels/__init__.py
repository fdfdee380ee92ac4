"""Hot loops of the Galerkin right-hand side.

The compiled extension is used when it was built; otherwise (or when
``FINMODE_PURE_PYTHON=1``) the NumPy fallback is selected at import.
"""
import os

from . import _pykernels

BACKEND = "python"
if os.environ.get("FINMODE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

nonlinear_term = _impl.nonlinear_term
apply_linear = _impl.apply_linear

__all__ = ["BACKEND", "nonlinear_term", "apply_linear", "_pykernels"]
