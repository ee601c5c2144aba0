"""Backend selection for the power-set enumeration kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy versions in ``_pure`` are used. Set ``XPROB_PURE_PYTHON=1`` to force
the fallback.
"""
import os

from . import _pure

if os.environ.get("XPROB_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pure
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _pure
        BACKEND = "python"

subset_sums = _impl.subset_sums
max_abs_subset_sum = _impl.max_abs_subset_sum
ec3_violations = _impl.ec3_violations
disjoint_violations = _impl.disjoint_violations

__all__ = [
    "BACKEND",
    "subset_sums",
    "max_abs_subset_sum",
    "ec3_violations",
    "disjoint_violations",
]
