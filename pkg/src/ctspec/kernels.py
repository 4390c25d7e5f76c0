"""Backend selection for the hot kernels.

Prefers the compiled extension; falls back to the pure-NumPy
implementation when the extension is unavailable or when the
environment variable ``CTSPEC_PURE_PYTHON`` is set to a non-empty
value.  Both backends expose the same functions and agree numerically;
``benchmarks/bench_kernels.py`` compares their speed.
"""

import os

if os.environ.get("CTSPEC_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

laguerre_array = _impl.laguerre_array
ell_array = _impl.ell_array
ell_sq_weighted_sum = _impl.ell_sq_weighted_sum


def backend_name():
    """Return "compiled" or "python" depending on the active backend."""
    return _impl.BACKEND
